#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "primavg/averages.hpp"

namespace primavg {
namespace {

DiscreteSignal random_signal(std::mt19937_64& rng, IntegerInterval support, bool nonnegative = false) {
  std::uniform_real_distribution<double> u(nonnegative ? 0.0 : -1.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(support.length()));
  for (auto& x : v) x = u(rng);
  return {support, v};
}

TEST(PrimeAverage, DeltaExpandsIntoPrimeWeights) {
  const auto out = prime_average(DiscreteSignal::delta(0), 10);
  const double theta = chebyshev_theta(10);
  for (std::int64_t x = -5; x <= 20; ++x) {
    const bool prime = x == 3 || x == 5 || x == 7;
    EXPECT_NEAR(out.at(x), prime ? std::log(static_cast<double>(x)) / theta : 0.0, 1e-15) << x;
  }
}

TEST(PrimeAverage, ConstantsAreFixedOnTheInterior) {
  const std::int64_t n = 500;
  const IntegerInterval support{-3000, 3000};
  const auto ones = DiscreteSignal(support, std::vector<double>(static_cast<std::size_t>(support.length()), 1.0));
  for (const auto mode : {AverageMode::direct, AverageMode::fft}) {
    const auto out = prime_average(ones, n, mode);
    for (std::int64_t x = support.a + n; x <= support.b; ++x) ASSERT_NEAR(out.at(x), 1.0, 1e-12);
  }
}

TEST(PrimeAverage, DirectAndFftAgree) {
  std::mt19937_64 rng(3);
  for (const std::int64_t n : {3, 17, 256, 1500, 1 << 14}) {
    const auto f = random_signal(rng, {-700, 1300});
    const auto direct = prime_average(f, n, AverageMode::direct);
    const auto fft = prime_average(f, n, AverageMode::fft);
    EXPECT_EQ(direct.support(), fft.support());
    EXPECT_LT(sup_difference(direct, fft), 1e-10) << n;
  }
}

TEST(PrimeAverage, PositivityPreserving) {
  std::mt19937_64 rng(5);
  const auto f = random_signal(rng, {0, 999}, true);
  const auto out = prime_average(f, 300);
  for (const double v : out.values()) EXPECT_GE(v, 0.0);
}

TEST(PrimeAverage, RejectsScalesWithoutOddPrimes) {
  EXPECT_THROW(prime_average(DiscreteSignal::delta(0), 2), invalid_input_error);
  EXPECT_THROW(PrimeWeights(2), invalid_input_error);
  EXPECT_NO_THROW(prime_average(DiscreteSignal::delta(0), 3));
}

TEST(MaximalAverage, DeltaAtThree) {
  const auto out = maximal_average(DiscreteSignal::delta(0), 8);
  EXPECT_NEAR(out.at(3), 1.0, 1e-15);
  EXPECT_THROW(maximal_average(DiscreteSignal::delta(0), 1), invalid_input_error);
}

TEST(MaximalAverage, DominatesEachScale) {
  std::mt19937_64 rng(9);
  const auto f = random_signal(rng, {0, 400}, false);
  const int n_max = 9;
  const auto star = maximal_average(f, n_max);
  for (int n = 2; n <= n_max; ++n) {
    const auto avg = prime_average(f, std::int64_t{1} << n);
    for (std::int64_t x = avg.support().a; x <= avg.support().b; ++x) {
      ASSERT_GE(star.at(x) + 1e-15, std::abs(avg.at(x)));
    }
  }
}

TEST(MaximalAverage, IndicatorStaysBelowOne) {
  std::vector<std::int64_t> pts;
  for (std::int64_t x = 0; x < 300; ++x) pts.push_back(x);
  const auto star = maximal_average(DiscreteSignal::indicator({0, 299}, pts), 10);
  for (const double v : star.values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0 + 1e-12);
  }
}

TEST(AverageMultiplier, FftMatchesDirectExponentialSum) {
  const PrimeWeights w(1000);
  const std::int64_t m = 8192;
  const auto grid = average_multiplier(w, m);
  EXPECT_NEAR(std::abs(grid[0] - 1.0), 0.0, 1e-14);
  for (std::int64_t j = 0; j < m; j += 37) {
    const auto direct = average_multiplier_direct(w, static_cast<double>(j) / static_cast<double>(m));
    ASSERT_LT(std::abs(direct - grid[static_cast<std::size_t>(j)]), 1e-11) << j;
  }
  EXPECT_THROW(average_multiplier(w, 1000), invalid_input_error);
  EXPECT_THROW(average_multiplier(w, 512), invalid_input_error);
}

}  // namespace
}  // namespace primavg
