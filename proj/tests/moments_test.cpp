#include <gtest/gtest.h>

#include <cmath>

#include "primavg/moments.hpp"

namespace primavg {
namespace {

TEST(RamanujanMoment, QOneIsExactlyOne) {
  for (const std::int64_t m : {1, 2, 17, 1000}) {
    for (const int k : {1, 2, 3}) EXPECT_EQ(ramanujan_moment(1, m, k), 1.0) << m << " " << k;
  }
}

TEST(RamanujanMoment, QTwoHasMeanOne) {
  // 1 + (-1)^x over (-M, M): the 2M-1 terms alternate 2, 0 with x = 0 giving 2
  const std::int64_t m = 100000;
  EXPECT_NEAR(ramanujan_moment(2, m, 1), 1.0, 2.0 / static_cast<double>(m));
  EXPECT_NEAR(ramanujan_moment(2, m, 2), std::sqrt(2.0), 1e-4);
}

TEST(RamanujanMoment, SmallAtQ64) {
  const std::int64_t q = 64;
  EXPECT_LT(ramanujan_moment(q, 64 * q * q, 2), std::pow(64.0, 0.3));
}

TEST(RamanujanMoment, MatchesDefinitionalSums) {
  const RamanujanEvaluator oracle = [](std::int64_t q, std::int64_t n) { return ramanujan_sum_oracle(q, n); };
  for (const std::int64_t q : {3, 10, 31, 64}) {
    for (const int k : {1, 2, 4}) {
      const std::int64_t m = 700;
      const double fast = ramanujan_moment(q, m, k);
      const double slow = ramanujan_moment_with(q, m, k, oracle);
      EXPECT_NEAR(fast, slow, 1e-9 * slow) << q << " " << k;
    }
  }
}

TEST(RamanujanMoment, RegimeFlag) {
  EXPECT_TRUE(moment_in_regime(10, 101, 2));
  EXPECT_FALSE(moment_in_regime(10, 100, 2));
}

TEST(RamanujanMoment, RejectsBadArguments) {
  EXPECT_THROW(ramanujan_moment(0, 10, 2), invalid_input_error);
  EXPECT_THROW(ramanujan_moment(3, 0, 2), invalid_input_error);
  EXPECT_THROW(ramanujan_moment(3, 10, 0), invalid_input_error);
}

TEST(MomentGrowth, SlopeOfPowerLaw) {
  const std::vector<std::int64_t> qs{2, 4, 8, 16};
  std::vector<double> ms;
  for (const auto q : qs) ms.push_back(3.0 * std::pow(static_cast<double>(q), 0.25));
  EXPECT_NEAR(moment_growth_exponent(qs, ms), 0.25, 1e-12);
  EXPECT_THROW(moment_growth_exponent({2, 4}, {1.0, 1.0}), invalid_input_error);
}

TEST(MomentSweep, ThreadCountDoesNotChangeResults) {
  const std::vector<std::int64_t> qs{4, 8, 16};
  const auto a = moment_sweep(qs, 2, 16, 1);
  const auto b = moment_sweep(qs, 2, 16, 3);
  ASSERT_EQ(a.points.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.points[i].moment, b.points[i].moment);
    EXPECT_EQ(a.points[i].m, 16 * qs[i] * qs[i]);
    EXPECT_TRUE(a.points[i].in_regime);
  }
  EXPECT_EQ(a.slope, b.slope);
  EXPECT_THROW(moment_sweep({4, 4, 8}, 2, 16), invalid_input_error);
}

}  // namespace
}  // namespace primavg
