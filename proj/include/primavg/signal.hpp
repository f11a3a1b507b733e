#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "primavg/errors.hpp"

namespace primavg {

/// Inclusive integer interval [a, b] with a <= b.
struct IntegerInterval {
  std::int64_t a = 0;
  std::int64_t b = 0;

  IntegerInterval() = default;
  IntegerInterval(std::int64_t lo, std::int64_t hi) : a(lo), b(hi) {
    if (hi < lo) {
      throw invalid_input_error("IntegerInterval: empty interval [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
    }
  }

  std::int64_t length() const { return b - a + 1; }
  bool contains(std::int64_t x) const { return a <= x && x <= b; }
  bool contains(const IntegerInterval& other) const { return a <= other.a && other.b <= b; }
  // Twice the center, so that it stays integral.
  std::int64_t doubled_center() const { return a + b; }

  friend bool operator==(const IntegerInterval&, const IntegerInterval&) = default;
};

// 2I = [2a-b-1, b] extends I to the left; 3I = [2a-b-1, 2b-a+1] is centered on I.
inline IntegerInterval dilate_interval(const IntegerInterval& interval, int factor) {
  const auto [a, b] = std::pair{interval.a, interval.b};
  switch (factor) {
    case 2:
      return {2 * a - b - 1, b};
    case 3:
      return {2 * a - b - 1, 2 * b - a + 1};
    default:
      throw invalid_input_error("dilate_interval: factor must be 2 or 3");
  }
}

/// A finitely supported real function on the integers. Values outside the
/// support are zero.
class DiscreteSignal {
 public:
  DiscreteSignal() : support_(0, 0), values_(1, 0.0) {}

  DiscreteSignal(IntegerInterval support, std::vector<double> values)
      : support_(support), values_(std::move(values)) {
    if (static_cast<std::int64_t>(values_.size()) != support_.length()) {
      throw invalid_input_error("DiscreteSignal: support length " +
                                std::to_string(support_.length()) + " does not match " +
                                std::to_string(values_.size()) + " values");
    }
    for (const double v : values_) {
      if (!std::isfinite(v)) throw invalid_input_error("DiscreteSignal: non-finite value");
    }
  }

  static DiscreteSignal zeros(IntegerInterval support) {
    return {support, std::vector<double>(static_cast<std::size_t>(support.length()), 0.0)};
  }

  static DiscreteSignal indicator(IntegerInterval support, const std::vector<std::int64_t>& points) {
    auto out = zeros(support);
    for (const auto x : points) out.set(x, 1.0);
    return out;
  }

  static DiscreteSignal delta(std::int64_t x0) { return {{x0, x0}, {1.0}}; }

  const IntegerInterval& support() const { return support_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::size_t size() const { return values_.size(); }

  double at(std::int64_t x) const {
    return support_.contains(x) ? values_[static_cast<std::size_t>(x - support_.a)] : 0.0;
  }

  void set(std::int64_t x, double v) {
    if (!support_.contains(x)) throw invalid_input_error("DiscreteSignal::set outside support");
    values_[static_cast<std::size_t>(x - support_.a)] = v;
  }

  bool is_indicator() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0 || v == 1.0; });
  }

  /// Copy restricted (or zero-extended) to `window`.
  DiscreteSignal restricted(const IntegerInterval& window) const {
    auto out = zeros(window);
    const std::int64_t lo = std::max(window.a, support_.a);
    const std::int64_t hi = std::min(window.b, support_.b);
    for (std::int64_t x = lo; x <= hi; ++x) out.set(x, at(x));
    return out;
  }

  double sup_abs() const {
    double m = 0.0;
    for (const double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  IntegerInterval support_;
  std::vector<double> values_;
};

// Sup of |f - g| over the union of supports.
inline double sup_difference(const DiscreteSignal& f, const DiscreteSignal& g) {
  const std::int64_t lo = std::min(f.support().a, g.support().a);
  const std::int64_t hi = std::max(f.support().b, g.support().b);
  double m = 0.0;
  for (std::int64_t x = lo; x <= hi; ++x) m = std::max(m, std::abs(f.at(x) - g.at(x)));
  return m;
}

/// Normalized l^p norm (|I|^-1 sum_{x in I} |f(x)|^p)^(1/p). p = infinity
/// gives the sup over I.
inline double local_norm(const DiscreteSignal& f, const IntegerInterval& interval, double p) {
  if (!(p >= 1.0)) throw invalid_input_error("local_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::int64_t x = interval.a; x <= interval.b; ++x) m = std::max(m, std::abs(f.at(x)));
    return m;
  }
  double sum = 0.0;
  for (std::int64_t x = interval.a; x <= interval.b; ++x) sum += std::pow(std::abs(f.at(x)), p);
  return std::pow(sum / static_cast<double>(interval.length()), 1.0 / p);
}

inline double dual_exponent(double p) { return p / (p - 1.0); }

// Pairing sum_x f(x) g(x).
inline double inner_product(const DiscreteSignal& f, const DiscreteSignal& g) {
  const std::int64_t lo = std::max(f.support().a, g.support().a);
  const std::int64_t hi = std::min(f.support().b, g.support().b);
  double sum = 0.0;
  for (std::int64_t x = lo; x <= hi; ++x) sum += f.at(x) * g.at(x);
  return sum;
}

}  // namespace primavg
