#pragma once

// Admissible stopping times, stopped averages A_tau f and sparse collections
// of dyadic intervals, with independent checkers for each.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "primavg/averages.hpp"
#include "primavg/errors.hpp"
#include "primavg/number_theory.hpp"
#include "primavg/signal.hpp"

namespace primavg {

// Density threshold in both the admissibility condition and the sparse recursion.
inline constexpr double density_threshold = 100.0;

/// Running sums of a signal over a fixed window; sums outside the window are 0.
class PrefixSums {
 public:
  PrefixSums(const DiscreteSignal& f, const IntegerInterval& window) : window_(window) {
    cumulative_.assign(static_cast<std::size_t>(window.length()) + 1, 0.0);
    for (std::int64_t x = window.a; x <= window.b; ++x) {
      const auto i = static_cast<std::size_t>(x - window.a);
      cumulative_[i + 1] = cumulative_[i] + f.at(x);
    }
  }

  double sum(const IntegerInterval& interval) const {
    const std::int64_t lo = std::max(interval.a, window_.a);
    const std::int64_t hi = std::min(interval.b, window_.b);
    if (hi < lo) return 0.0;
    return cumulative_[static_cast<std::size_t>(hi - window_.a + 1)] - cumulative_[static_cast<std::size_t>(lo - window_.a)];
  }

  double average(const IntegerInterval& interval) const { return sum(interval) / static_cast<double>(interval.length()); }

 private:
  IntegerInterval window_;
  std::vector<double> cumulative_;
};

// log2 |E|, requiring |E| = 2^n0 with n0 >= 2.
inline int dyadic_order(const IntegerInterval& e) {
  const std::int64_t len = e.length();
  if (!is_power_of_two(len) || len < 4) throw invalid_input_error("dyadic interval: |E| must be 2^n0 with n0 >= 2");
  return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(len))) - 1;
}

// All dyadic subintervals of E of length 2^level.
inline std::vector<IntegerInterval> dyadic_level(const IntegerInterval& e, int level) {
  const std::int64_t len = std::int64_t{1} << level;
  std::vector<IntegerInterval> out;
  for (std::int64_t a = e.a; a + len - 1 <= e.b; a += len) out.emplace_back(a, a + len - 1);
  return out;
}

/// tau : E -> {2^n : 1 <= n <= n0}.
struct StoppingTime {
  IntegerInterval base;
  int n0 = 0;
  std::vector<std::int64_t> values;

  std::int64_t at(std::int64_t x) const { return values[static_cast<std::size_t>(x - base.a)]; }
  std::int64_t min_on(const IntegerInterval& interval) const {
    std::int64_t m = std::int64_t{1} << n0;
    for (std::int64_t x = interval.a; x <= interval.b; ++x) m = std::min(m, at(x));
    return m;
  }
};

// <f>_{3I,1} > 100 <f>_{2E,1}, where base_sum and base_len describe 2E.
inline bool is_dense(const PrefixSums& sums, const IntegerInterval& interval, double base_sum, std::int64_t base_len) {
  // cross-multiplied to stay exact for integer data
  const auto tripled = dilate_interval(interval, 3);
  return sums.sum(tripled) * static_cast<double>(base_len) >
         density_threshold * base_sum * static_cast<double>(tripled.length());
}

/// Describes the first dyadic I of E on which f is dense but inf_I tau <= |I|,
/// or nullopt when tau satisfies the admissibility condition on every dyadic I.
/// The check is independent of how tau was built.
inline std::optional<std::string> admissibility_violation(const DiscreteSignal& f, const StoppingTime& tau) {
  const auto& e = tau.base;
  const int n0 = dyadic_order(e);
  const auto doubled = dilate_interval(e, 2);
  const PrefixSums sums(f, dilate_interval(e, 3));
  const double base_sum = sums.sum(doubled);
  for (std::int64_t x = e.a; x <= e.b; ++x) {
    const std::int64_t v = tau.at(x);
    if (!is_power_of_two(v) || v < 2 || v > e.length()) {
      return "tau(" + std::to_string(x) + ") = " + std::to_string(v) + " is not in {2, ..., 2^n0}";
    }
  }
  for (int level = 0; level <= n0; ++level) {
    for (const auto& interval : dyadic_level(e, level)) {
      if (!is_dense(sums, interval, base_sum, doubled.length())) continue;
      if (tau.min_on(interval) <= interval.length()) {
        return "dense interval [" + std::to_string(interval.a) + ", " + std::to_string(interval.b) +
               "] has inf tau = " + std::to_string(tau.min_on(interval)) + " <= |I|";
      }
    }
  }
  return std::nullopt;
}

enum class TauPolicy {
  // Every point takes the top value 2^n0.
  largest,
  // Each point takes the allowed scale maximizing A_{2^n} f(x); ties go to the
  // larger scale. This linearizes the maximal function above the floors.
  maximizing,
};

/// Stopping time respecting the floors forced by dense dyadic intervals, then
/// verified exhaustively. Throws internal_error if verification fails.
inline StoppingTime admissible_tau(const DiscreteSignal& f, const IntegerInterval& e,
                                   TauPolicy policy = TauPolicy::largest) {
  const int n0 = dyadic_order(e);
  const auto doubled = dilate_interval(e, 2);
  const PrefixSums sums(f, dilate_interval(e, 3));
  const double base_sum = sums.sum(doubled);
  const auto len = static_cast<std::size_t>(e.length());

  // tau(x) must be >= floors[x]
  std::vector<std::int64_t> floors(len, 2);
  for (int level = 0; level < n0; ++level) {
    for (const auto& interval : dyadic_level(e, level)) {
      if (!is_dense(sums, interval, base_sum, doubled.length())) continue;
      for (std::int64_t x = interval.a; x <= interval.b; ++x) {
        auto& fl = floors[static_cast<std::size_t>(x - e.a)];
        fl = std::max(fl, 2 * interval.length());
      }
    }
  }

  StoppingTime tau{e, n0, std::vector<std::int64_t>(len, e.length())};
  if (policy == TauPolicy::maximizing) {
    const auto primes = sieve_primes(e.length());
    std::vector<double> best(len, -1.0);
    for (int n = 1; n <= n0; ++n) {
      const std::int64_t scale = std::int64_t{1} << n;
      std::optional<DiscreteSignal> average;
      if (scale >= 3) average = prime_average(f.restricted(doubled), PrimeWeights(scale, primes), AverageMode::direct);
      for (std::size_t i = 0; i < len; ++i) {
        if (scale < floors[i]) continue;
        const std::int64_t x = e.a + static_cast<std::int64_t>(i);
        const double value = average ? std::abs(average->at(x)) : 0.0;
        if (value >= best[i]) {
          best[i] = value;
          tau.values[i] = scale;
        }
      }
    }
  }
  if (auto violation = admissibility_violation(f, tau)) {
    throw internal_error("admissible_tau: constructed tau is not admissible: " + *violation);
  }
  return tau;
}

/// A_tau f(x) = A_{tau(x)} f(x) on E; A_2 is the empty average 0.
inline DiscreteSignal stopped_average(const DiscreteSignal& f, const StoppingTime& tau) {
  const auto& e = tau.base;
  const auto primes = sieve_primes(e.length());
  std::map<std::int64_t, PrimeWeights> weights;
  auto out = DiscreteSignal::zeros(e);
  for (std::int64_t x = e.a; x <= e.b; ++x) {
    const std::int64_t scale = tau.at(x);
    if (scale < 3) continue;
    auto it = weights.find(scale);
    if (it == weights.end()) it = weights.emplace(scale, PrimeWeights(scale, primes)).first;
    const auto& w = it->second;
    double sum = 0.0;
    for (std::size_t k = 0; k < w.primes.size(); ++k) sum += w.weights[k] * f.at(x - w.primes[k]);
    out.set(x, sum);
  }
  return out;
}

/// Intervals with witness sets; witnesses[i] is a union of disjoint pieces of intervals[i].
struct SparseCollection {
  std::vector<IntegerInterval> intervals;
  std::vector<std::vector<IntegerInterval>> witnesses;

  std::size_t size() const { return intervals.size(); }

  std::int64_t witness_size(std::size_t i) const {
    std::int64_t total = 0;
    for (const auto& piece : witnesses[i]) total += piece.length();
    return total;
  }

  void add(IntegerInterval interval, std::vector<IntegerInterval> witness) {
    intervals.push_back(interval);
    witnesses.push_back(std::move(witness));
  }
};

struct SparsityCheck {
  bool ok = true;
  std::string diagnostic;

  explicit operator bool() const { return ok; }
};

/// True iff every witness lies in its interval, witnesses are pairwise
/// disjoint, and |E_I| > |I|/10 strictly.
inline SparsityCheck verify_sparsity(const SparseCollection& s) {
  if (s.intervals.size() != s.witnesses.size()) return {false, "interval and witness counts differ"};
  struct Piece {
    IntegerInterval span;
    std::size_t owner;
  };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& interval = s.intervals[i];
    for (const auto& piece : s.witnesses[i]) {
      if (!interval.contains(piece)) {
        return {false, "witness piece of interval " + std::to_string(i) + " leaves the interval"};
      }
      pieces.push_back({piece, i});
    }
    if (10 * s.witness_size(i) <= interval.length()) {
      return {false, "interval " + std::to_string(i) + " has |E_I| = " + std::to_string(s.witness_size(i)) +
                         " <= |I|/10 with |I| = " + std::to_string(interval.length())};
    }
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& l, const Piece& r) { return l.span.a < r.span.a; });
  // reach: the piece extending furthest right so far
  std::optional<Piece> reach;
  for (const auto& piece : pieces) {
    if (reach && piece.span.a <= reach->span.b) {
      const auto x = piece.span.a;
      if (reach->owner == piece.owner) {
        return {false, "interval " + std::to_string(piece.owner) + " has overlapping witness pieces at " + std::to_string(x)};
      }
      return {false, "intervals " + std::to_string(reach->owner) + " and " + std::to_string(piece.owner) +
                         " share witness point " + std::to_string(x)};
    }
    if (!reach || piece.span.b > reach->span.b) reach = piece;
  }
  return {};
}

/// Dyadic stopping-interval recursion from E. Each interval I keeps the
/// maximal dyadic J inside it with <f>_{2J,1} > 100 <f>_{2I,1} or
/// <g>_{J,1} > 100 <g>_{I,1} as children, and E_I = I minus those children.
inline SparseCollection sparse_collection(const DiscreteSignal& f, const DiscreteSignal& g, const IntegerInterval& e) {
  dyadic_order(e);
  const PrefixSums f_sums(f, dilate_interval(e, 2));
  const PrefixSums g_sums(g, e);
  SparseCollection out;
  std::vector<IntegerInterval> pending{e};
  while (!pending.empty()) {
    const auto current = pending.back();
    pending.pop_back();
    const auto current_doubled = dilate_interval(current, 2);
    const double f_base = f_sums.sum(current_doubled);
    const double g_base = g_sums.sum(current);
    const auto len_i = static_cast<double>(current.length());

    std::vector<IntegerInterval> children;
    std::vector<IntegerInterval> stack;
    auto push_halves = [&stack](const IntegerInterval& j) {
      const std::int64_t half = j.length() / 2;
      stack.emplace_back(j.a + half, j.b);
      stack.emplace_back(j.a, j.a + half - 1);
    };
    if (current.length() > 1) push_halves(current);
    while (!stack.empty()) {
      const auto j = stack.back();
      stack.pop_back();
      const auto len_j = static_cast<double>(j.length());
      // sum_J / |J| > 100 sum_I / |I|, cross-multiplied; |2J| / |2I| = |J| / |I|
      const bool f_trigger = f_sums.sum(dilate_interval(j, 2)) * len_i > density_threshold * f_base * len_j;
      const bool g_trigger = g_sums.sum(j) * len_i > density_threshold * g_base * len_j;
      if (f_trigger || g_trigger) {
        children.push_back(j);
      } else if (j.length() > 1) {
        push_halves(j);
      }
    }
    std::sort(children.begin(), children.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
    std::vector<IntegerInterval> witness;
    std::int64_t start = current.a;
    for (const auto& child : children) {
      if (child.a > start) witness.emplace_back(start, child.a - 1);
      start = child.b + 1;
    }
    if (start <= current.b) witness.emplace_back(start, current.b);
    out.add(current, std::move(witness));
    if (10 * out.witness_size(out.size() - 1) <= current.length()) {
      throw internal_error("sparse_collection: witness of [" + std::to_string(current.a) + ", " +
                           std::to_string(current.b) + "] is not larger than |I|/10");
    }
    for (auto it = children.rbegin(); it != children.rend(); ++it) pending.push_back(*it);
  }
  if (auto check = verify_sparsity(out); !check) throw internal_error("sparse_collection: " + check.diagnostic);
  return out;
}

/// sum_{I in S} <f>_{2I,r} <g>_{I,s} |I|.
inline double sparse_form_value(const SparseCollection& s, const DiscreteSignal& f, const DiscreteSignal& g,
                                double r, double s_exp) {
  if (!(r >= 1.0) || !(s_exp >= 1.0)) throw invalid_input_error("sparse_form_value: r, s must be >= 1");
  double total = 0.0;
  for (const auto& interval : s.intervals) {
    total += local_norm(f, dilate_interval(interval, 2), r) * local_norm(g, interval, s_exp) *
             static_cast<double>(interval.length());
  }
  return total;
}

}  // namespace primavg
