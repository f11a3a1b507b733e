#include <gtest/gtest.h>

#include <cmath>

#include "primavg/improving.hpp"

namespace primavg {
namespace {

DiscreteSignal full_indicator(const IntegerInterval& interval) {
  std::vector<std::int64_t> pts;
  for (std::int64_t x = interval.a; x <= interval.b; ++x) pts.push_back(x);
  return DiscreteSignal::indicator(interval, pts);
}

TEST(ImprovingRatio, FullSetIsAtMostOne) {
  for (const std::int64_t n : {16, 64, 256, 1000}) {
    const IntegerInterval interval{0, n - 1};
    const auto f = full_indicator(dilate_interval(interval, 2));
    for (const double p : {1.25, 1.5, 1.9}) {
      const double r = improving_ratio(f, interval, p);
      EXPECT_LE(r, 1.0 + 1e-12) << n << " " << p;
      EXPECT_GT(r, 0.5) << n << " " << p;
    }
  }
}

TEST(ImprovingRatio, SinglePointIsFinite) {
  const IntegerInterval interval{0, 127};
  const auto doubled = dilate_interval(interval, 2);
  for (std::int64_t y = doubled.a; y <= doubled.b; y += 17) {
    const double r = improving_ratio(DiscreteSignal::indicator(doubled, {y}), interval, 1.5);
    EXPECT_TRUE(std::isfinite(r));
    EXPECT_GE(r, 0.0);
  }
}

TEST(ImprovingRatio, TranslationInvariant) {
  const IntegerInterval interval{0, 99};
  const auto doubled = dilate_interval(interval, 2);
  std::vector<std::int64_t> pts{-50, -49, -10, 0, 3, 7, 40, 41, 42};
  const double base = improving_ratio(DiscreteSignal::indicator(doubled, pts), interval, 1.5);
  for (const std::int64_t shift : {-1000, 7, 123456}) {
    const IntegerInterval moved{interval.a + shift, interval.b + shift};
    std::vector<std::int64_t> moved_pts;
    for (const auto p : pts) moved_pts.push_back(p + shift);
    const double r = improving_ratio(DiscreteSignal::indicator(dilate_interval(moved, 2), moved_pts), moved, 1.5);
    EXPECT_NEAR(r, base, 1e-12 * base);
  }
}

TEST(ImprovingRatio, RejectsBadInputs) {
  const IntegerInterval interval{0, 31};
  const auto doubled = dilate_interval(interval, 2);
  EXPECT_THROW(improving_ratio(DiscreteSignal::zeros(doubled), interval, 1.5), invalid_input_error);
  EXPECT_THROW(improving_ratio(DiscreteSignal::indicator({-40, 40}, {-40}), interval, 1.5), invalid_input_error);
  EXPECT_THROW(improving_ratio(full_indicator(doubled), interval, 1.0), invalid_input_error);
}

TEST(ImprovingSearch, ZeroTrialsGiveEmptyReport) {
  ImprovingSearchConfig cfg;
  cfg.trials = 0;
  const auto report = adversarial_improving_search(cfg);
  EXPECT_TRUE(report.trials.empty());
  EXPECT_EQ(report.best_trial, -1);
  EXPECT_EQ(report.max_ratio, 0.0);
}

TEST(ImprovingSearch, RejectsTinyScales) {
  ImprovingSearchConfig cfg;
  cfg.scale = 4;
  EXPECT_THROW(adversarial_improving_search(cfg), invalid_input_error);
}

TEST(ImprovingSearch, ReportedRatioMatchesWitness) {
  ImprovingSearchConfig cfg;
  cfg.scale = 64;
  cfg.trials = 6;
  cfg.seed = 11;
  const auto report = adversarial_improving_search(cfg);
  ASSERT_EQ(report.trials.size(), 6u);
  const IntegerInterval interval{0, 63};
  const auto f = DiscreteSignal::indicator(dilate_interval(interval, 2), report.witness);
  EXPECT_DOUBLE_EQ(improving_ratio(f, interval, cfg.p), report.max_ratio);
  for (const auto& t : report.trials) {
    EXPECT_LE(t.ratio, report.max_ratio);
    EXPECT_GT(t.initial_density, 0.05);
    EXPECT_LE(t.initial_density, 1.0);
  }
}

TEST(ImprovingSearch, DeterministicAcrossThreadCounts) {
  ImprovingSearchConfig cfg;
  cfg.scale = 128;
  cfg.trials = 8;
  cfg.seed = 99;
  const auto one = adversarial_improving_search(cfg);
  cfg.threads = 4;
  const auto four = adversarial_improving_search(cfg);
  ASSERT_EQ(one.trials.size(), four.trials.size());
  for (std::size_t i = 0; i < one.trials.size(); ++i) {
    EXPECT_EQ(one.trials[i].ratio, four.trials[i].ratio);
    EXPECT_EQ(one.trials[i].accepted, four.trials[i].accepted);
  }
  EXPECT_EQ(one.witness, four.witness);
  cfg.seed = 100;
  EXPECT_NE(adversarial_improving_search(cfg).trials[0].ratio, one.trials[0].ratio);
}

}  // namespace
}  // namespace primavg
