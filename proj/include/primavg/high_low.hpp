#pragma once

// High/Low decomposition A_N f = H + L with L = sum_{q<=J} L_{q,N} * f, and
// the choice of J that balances the two estimates.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "primavg/errors.hpp"
#include "primavg/multipliers.hpp"
#include "primavg/signal.hpp"

namespace primavg {

struct HighLowReport {
  std::int64_t scale = 0;
  std::int64_t cutoff = 0;  // J
  double p = 0.0;
  IntegerInterval e;
  double f_density = 0.0;  // <f>_{2E,1}
  double high_l2 = 0.0;    // <H>_{E,2}
  double low_sup = 0.0;    // <L>_{E,inf}
  std::int64_t grid_size = 0;
  // false when J exceeds (log N)^{p'}
  bool cutoff_in_range = true;
  std::vector<std::string> warnings;
};

struct HighLowSplit {
  DiscreteSignal high;
  DiscreteSignal low;
  HighLowReport report;
};

// The interval E of length N whose doubled interval 2E starts where f does.
inline IntegerInterval natural_interval(const DiscreteSignal& f, std::int64_t n) {
  const std::int64_t start = f.support().a + n;
  return {start, start + n - 1};
}

inline double cutoff_upper_bound(std::int64_t n, double p) {
  return std::pow(std::log(static_cast<double>(n)), dual_exponent(p));
}

/// H and L on the support of A_N f; the report measures them on E.
inline HighLowSplit high_low_split(const DiscreteSignal& f, std::int64_t n, std::int64_t j, double p,
                                   std::optional<IntegerInterval> e = std::nullopt) {
  if (n < 3) throw invalid_input_error("high_low_split: N must be >= 3");
  if (j < 1) throw invalid_input_error("high_low_split: J must be >= 1");
  if (!(p > 1.0)) throw invalid_input_error("high_low_split: p must be > 1");
  const IntegerInterval interval = e.value_or(natural_interval(f, n));
  auto parts = approximate_average(f, n, j);

  HighLowReport report;
  report.scale = n;
  report.cutoff = j;
  report.p = p;
  report.e = interval;
  report.grid_size = parts.grid_size;
  report.f_density = local_norm(f, dilate_interval(interval, 2), 1.0);
  report.high_l2 = local_norm(parts.residual_part, interval, 2.0);
  report.low_sup = local_norm(parts.low_part, interval, INFINITY);
  if (static_cast<double>(j) > cutoff_upper_bound(n, p)) {
    report.cutoff_in_range = false;
    report.warnings.push_back("J = " + std::to_string(j) + " exceeds (log N)^{p'} = " +
                              std::to_string(cutoff_upper_bound(n, p)));
  }
  return {std::move(parts.residual_part), std::move(parts.low_part), std::move(report)};
}

/// J balancing the High and Low estimates: the power of two nearest (in log
/// scale) to f_avg^{1/2-1/p} g_avg^{-1/2}, at least 1 and, given N, at most
/// the largest power of two <= (log N)^{p'}.
inline std::int64_t balance_J(double f_avg, double g_avg, double p, std::optional<std::int64_t> n = std::nullopt) {
  if (!(f_avg > 0.0 && f_avg <= 1.0) || !(g_avg > 0.0 && g_avg <= 1.0)) {
    throw invalid_input_error("balance_J: densities must lie in (0, 1]");
  }
  if (!(p > 1.0 && p < 2.0)) throw invalid_input_error("balance_J: p must lie in (1, 2)");
  const double raw = std::pow(f_avg, 0.5 - 1.0 / p) * std::pow(g_avg, -0.5);
  // log2 is exact for powers of two; round() then breaks ties upward
  long exponent = std::clamp(std::lround(std::log2(raw)), 0L, 62L);
  if (n) {
    const double bound = cutoff_upper_bound(*n, p);
    const long cap = bound >= 1.0 ? static_cast<long>(std::floor(std::log2(bound))) : 0L;
    exponent = std::min(exponent, cap);
  }
  return std::int64_t{1} << exponent;
}

}  // namespace primavg
