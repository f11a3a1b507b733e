#pragma once

// Moments of the partial sums S_Q(x) = sum_{q<=Q} c_q(x)/phi(q) over |x| < M.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "primavg/errors.hpp"
#include "primavg/number_theory.hpp"
#include "primavg/util.hpp"

namespace primavg {

// (q, n) -> c_q(n)
using RamanujanEvaluator = std::function<std::int64_t(std::int64_t q, std::int64_t n)>;

namespace detail {

// Rows c_q(r)/phi(q), r = 0..q-1, for q = 1..Q.
inline std::vector<std::vector<double>> normalized_ramanujan_tables(std::int64_t big_q, const RamanujanEvaluator& c) {
  const ArithmeticTables tables(big_q);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(big_q) + 1);
  for (std::int64_t q = 1; q <= big_q; ++q) {
    auto& row = out[static_cast<std::size_t>(q)];
    row.resize(static_cast<std::size_t>(q));
    const double phi = static_cast<double>(tables.phi(q));
    for (std::int64_t r = 0; r < q; ++r) row[static_cast<std::size_t>(r)] = static_cast<double>(c(q, r)) / phi;
  }
  return out;
}

inline double abs_power(double v, int k) {
  const double a = std::abs(v);
  double r = a;
  for (int i = 1; i < k; ++i) r *= a;
  return r;
}

}  // namespace detail

// True when M > Q^k, the regime in which the moment bound is asserted.
inline bool moment_in_regime(std::int64_t big_q, std::int64_t m, int k) {
  return static_cast<double>(m) > std::pow(static_cast<double>(big_q), k);
}

/// [(2M-1)^-1 sum_{|x|<M} |S_Q(x)|^k]^{1/k}, i.e. the k-th power mean over the
/// 2M-1 integers in (-M, M). Uses c_q(-x) = c_q(x) to visit x >= 0 only.
inline double ramanujan_moment(std::int64_t big_q, std::int64_t m, int k) {
  if (big_q < 1) throw invalid_input_error("ramanujan_moment: Q must be >= 1");
  if (m < 1) throw invalid_input_error("ramanujan_moment: M must be >= 1");
  if (k < 1) throw invalid_input_error("ramanujan_moment: k must be >= 1");
  require_budget(static_cast<std::size_t>(big_q) * static_cast<std::size_t>(big_q) * sizeof(double), "ramanujan_moment");
  const auto tables = detail::normalized_ramanujan_tables(
      big_q, [](std::int64_t q, std::int64_t n) { return ramanujan_sum(q, n); });
  std::vector<std::int64_t> residue(static_cast<std::size_t>(big_q) + 1, 0);
  double total = 0.0;
  for (std::int64_t x = 0; x < m; ++x) {
    double s = 0.0;
    for (std::int64_t q = 1; q <= big_q; ++q) {
      auto& r = residue[static_cast<std::size_t>(q)];
      s += tables[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)];
      if (++r == q) r = 0;
    }
    total += (x == 0 ? 1.0 : 2.0) * detail::abs_power(s, k);
  }
  return std::pow(total / static_cast<double>(2 * m - 1), 1.0 / k);
}

/// Same quantity, every term summed over all of (-M, M) using the supplied
/// Ramanujan evaluator. Slow; meant for cross-checks.
inline double ramanujan_moment_with(std::int64_t big_q, std::int64_t m, int k, const RamanujanEvaluator& c) {
  const auto tables = detail::normalized_ramanujan_tables(big_q, c);
  double total = 0.0;
  for (std::int64_t x = -(m - 1); x <= m - 1; ++x) {
    double s = 0.0;
    for (std::int64_t q = 1; q <= big_q; ++q) {
      s += tables[static_cast<std::size_t>(q)][static_cast<std::size_t>(((x % q) + q) % q)];
    }
    total += detail::abs_power(s, k);
  }
  return std::pow(total / static_cast<double>(2 * m - 1), 1.0 / k);
}

struct MomentPoint {
  std::int64_t big_q = 0;
  std::int64_t m = 0;
  double moment = 0.0;
  bool in_regime = true;
};

struct MomentSweep {
  int k = 2;
  std::int64_t m_factor = 64;
  std::vector<MomentPoint> points;
  double slope = 0.0;
};

/// Least-squares slope of log(moment) against log(Q).
inline double moment_growth_exponent(const std::vector<std::int64_t>& qs, const std::vector<double>& moments) {
  if (qs.size() < 3 || qs.size() != moments.size()) {
    throw invalid_input_error("moment_growth_exponent: need at least 3 (Q, moment) pairs");
  }
  std::vector<double> x(qs.begin(), qs.end());
  return loglog_slope(x, moments);
}

/// Moments at M = m_factor * Q^k for each Q, plus the fitted growth exponent.
inline MomentSweep moment_sweep(const std::vector<std::int64_t>& qs, int k, std::int64_t m_factor, unsigned threads = 1) {
  if (qs.size() < 3) throw invalid_input_error("moment_sweep: need at least 3 values of Q");
  for (std::size_t i = 1; i < qs.size(); ++i) {
    if (qs[i] <= qs[i - 1]) throw invalid_input_error("moment_sweep: Q values must be strictly ascending");
  }
  MomentSweep sweep;
  sweep.k = k;
  sweep.m_factor = m_factor;
  sweep.points.resize(qs.size());
  parallel_for(qs.size(), threads, [&](std::size_t i) {
    const double m_real = static_cast<double>(m_factor) * std::pow(static_cast<double>(qs[i]), k);
    if (m_real > 1e12) throw resource_error("moment_sweep: M = c Q^k exceeds 1e12");
    const auto m = static_cast<std::int64_t>(m_real);
    sweep.points[i] = {qs[i], m, ramanujan_moment(qs[i], m, k), moment_in_regime(qs[i], m, k)};
  });
  std::vector<double> moments;
  for (const auto& pt : sweep.points) moments.push_back(pt.moment);
  sweep.slope = moment_growth_exponent(qs, moments);
  return sweep;
}

}  // namespace primavg
