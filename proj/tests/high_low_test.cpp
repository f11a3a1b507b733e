#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "primavg/high_low.hpp"
#include "primavg/util.hpp"

namespace primavg {
namespace {

DiscreteSignal bernoulli_set(std::uint64_t seed, std::int64_t n, double density) {
  auto rng = stream_for(seed, 0);
  std::vector<std::int64_t> pts;
  for (std::int64_t x = -n; x < n; ++x) {
    if (uniform01(rng) < density) pts.push_back(x);
  }
  return DiscreteSignal::indicator({-n, n - 1}, pts);
}

TEST(HighLow, PartsReconstructTheAverage) {
  const std::int64_t n = 512;
  const auto f = bernoulli_set(1, n, 0.3);
  const auto split = high_low_split(f, n, 8, 1.5);
  const auto direct = prime_average(f, n);
  double err = 0.0;
  for (std::int64_t x = split.report.e.a; x <= split.report.e.b; ++x) {
    err = std::max(err, std::abs(split.high.at(x) + split.low.at(x) - direct.at(x)));
  }
  EXPECT_LT(err, 1e-9);
  EXPECT_EQ(split.report.e, (IntegerInterval{0, n - 1}));
}

TEST(HighLow, HighPartShrinksAsJGrows) {
  const std::int64_t n = 1 << 16;
  const auto f = bernoulli_set(5, n, 0.5);
  double previous = INFINITY;
  for (const std::int64_t j : {4, 8, 16}) {
    const auto report = high_low_split(f, n, j, 1.5).report;
    EXPECT_LE(report.high_l2, previous) << j;
    previous = report.high_l2;
    EXPECT_TRUE(report.cutoff_in_range);
  }
}

TEST(HighLow, LowPartGrowsSlowlyInJ) {
  const std::int64_t n = 1 << 14;
  const double p = 1.5;
  const auto f = bernoulli_set(3, n, 0.02);
  std::vector<double> js, lows;
  for (const std::int64_t j : {2, 4, 8, 16}) {
    const auto report = high_low_split(f, n, j, p).report;
    js.push_back(static_cast<double>(j));
    lows.push_back(report.low_sup / std::pow(report.f_density, 1.0 / p));
  }
  EXPECT_LE(loglog_slope(js, lows), 1.0 / dual_exponent(p) + 0.15);
}

TEST(HighLow, WarnsWhenCutoffExceedsLogBound) {
  const std::int64_t n = 256;
  const auto f = bernoulli_set(2, n, 0.5);
  const auto report = high_low_split(f, n, 40, 1.9).report;
  EXPECT_FALSE(report.cutoff_in_range);
  EXPECT_EQ(report.warnings.size(), 1u);
}

TEST(BalanceJ, ReferenceValues) {
  EXPECT_EQ(balance_J(1.0, 1.0, 1.5), 1);
  EXPECT_EQ(balance_J(1.0, 1.0 / 64, 1.5), 8);
  EXPECT_EQ(balance_J(1.0 / 16, 1.0 / 16, 4.0 / 3.0), 8);
  EXPECT_EQ(balance_J(1.0, 1.0 / 64, 1.5, std::int64_t{4}), 2);  // (ln 4)^3 = 2.66
  EXPECT_THROW(balance_J(0.0, 0.5, 1.5), invalid_input_error);
  EXPECT_THROW(balance_J(0.5, 0.5, 2.0), invalid_input_error);
}

TEST(BalanceJ, MonotoneInDensities) {
  std::int64_t previous = 0;
  for (double g = 1.0; g > 1e-9; g /= 3) {
    const auto j = balance_J(0.5, g, 1.5);
    EXPECT_GE(j, previous);
    previous = j;
  }
  previous = 0;
  for (double f = 1.0; f > 1e-9; f /= 3) {
    const auto j = balance_J(f, 0.25, 1.5);
    EXPECT_GE(j, previous);
    previous = j;
  }
}

}  // namespace
}  // namespace primavg
