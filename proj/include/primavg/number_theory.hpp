#pragma once

// Arithmetic functions over the odd primes: sieve, Chebyshev theta,
// Moebius, totient and Ramanujan sums.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "primavg/errors.hpp"

namespace primavg {

// Odd primes <= n, ascending. 2 is never included.
inline std::vector<std::int64_t> sieve_primes(std::int64_t n) {
  std::vector<std::int64_t> primes;
  if (n < 3) return primes;
  require_budget(static_cast<std::size_t>(n / 2 + 1), "sieve_primes");
  // composite[i] describes the odd number 2i+1
  std::vector<bool> composite(static_cast<std::size_t>(n / 2 + 1), false);
  for (std::int64_t i = 1; 2 * i + 1 <= n; ++i) {
    if (composite[i]) continue;
    const std::int64_t p = 2 * i + 1;
    primes.push_back(p);
    for (std::int64_t m = p * p; m <= n; m += 2 * p) composite[m / 2] = true;
  }
  return primes;
}

// Sum of ln p over the odd primes p <= n.
inline double chebyshev_theta(std::int64_t n) {
  double sum = 0.0;
  for (const auto p : sieve_primes(n)) sum += std::log(static_cast<double>(p));
  return sum;
}

/// Smallest-prime-factor, Moebius and totient tables on [1, limit], built by a
/// single linear sieve. Index 0 is unused in every table.
class ArithmeticTables {
 public:
  explicit ArithmeticTables(std::int64_t limit) : limit_(limit) {
    if (limit < 1) throw invalid_input_error("ArithmeticTables: limit must be >= 1");
    const auto size = static_cast<std::size_t>(limit) + 1;
    require_budget(size * (sizeof(std::int64_t) * 2 + sizeof(std::int8_t)),
                   "ArithmeticTables");
    spf_.assign(size, 0);
    phi_.assign(size, 0);
    mu_.assign(size, 0);
    phi_[1] = 1;
    mu_[1] = 1;
    std::vector<std::int64_t> all_primes;
    for (std::int64_t i = 2; i <= limit; ++i) {
      if (spf_[i] == 0) {
        spf_[i] = i;
        phi_[i] = i - 1;
        mu_[i] = -1;
        all_primes.push_back(i);
      }
      for (const auto p : all_primes) {
        const std::int64_t m = p * i;
        if (p > spf_[i] || m > limit) break;
        spf_[m] = p;
        if (p == spf_[i]) {
          phi_[m] = phi_[i] * p;
          mu_[m] = 0;
        } else {
          phi_[m] = phi_[i] * (p - 1);
          mu_[m] = static_cast<std::int8_t>(-mu_[i]);
        }
      }
    }
    for (const auto p : all_primes) {
      if (p != 2) primes_.push_back(p);
    }
  }

  std::int64_t limit() const { return limit_; }
  const std::vector<std::int64_t>& primes() const { return primes_; }
  std::int64_t spf(std::int64_t n) const { return spf_.at(checked(n, 2)); }
  int mu(std::int64_t q) const { return mu_.at(checked(q, 1)); }
  std::int64_t phi(std::int64_t q) const { return phi_.at(checked(q, 1)); }

  /// c_q(n) from the closed form mu(q/g) phi(q) / phi(q/g), g = gcd(q, n).
  std::int64_t ramanujan(std::int64_t q, std::int64_t n) const {
    const std::int64_t g = std::gcd(q, n);  // gcd(q, 0) = q
    const std::int64_t r = q / g;
    return mu(r) * (phi(q) / phi(r));
  }

 private:
  std::size_t checked(std::int64_t n, std::int64_t lo) const {
    if (n < lo || n > limit_) {
      throw invalid_input_error("ArithmeticTables: index " + std::to_string(n) +
                                " outside [" + std::to_string(lo) + ", " +
                                std::to_string(limit_) + "]");
    }
    return static_cast<std::size_t>(n);
  }

  std::int64_t limit_;
  std::vector<std::int64_t> primes_;
  std::vector<std::int64_t> spf_;
  std::vector<std::int64_t> phi_;
  std::vector<std::int8_t> mu_;
};

inline ArithmeticTables arithmetic_tables(std::int64_t limit) { return ArithmeticTables(limit); }

namespace detail {

struct Factorization {
  int mu = 1;
  std::int64_t phi = 1;
};

inline Factorization factor_by_trial_division(std::int64_t n) {
  Factorization out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    std::int64_t pk = 1;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      pk *= p;
      ++e;
    }
    out.phi *= pk / p * (p - 1);
    out.mu = e > 1 ? 0 : -out.mu;
  }
  if (n > 1) {
    out.phi *= n - 1;
    out.mu = -out.mu;
  }
  return out;
}

}  // namespace detail

// Table-free c_q(n); factors q and q/gcd(q,n) by trial division.
inline std::int64_t ramanujan_sum(std::int64_t q, std::int64_t n) {
  if (q < 1) throw invalid_input_error("ramanujan_sum: q must be >= 1");
  const std::int64_t g = std::gcd(q, n);
  const auto full = detail::factor_by_trial_division(q);
  const auto reduced = detail::factor_by_trial_division(q / g);
  return reduced.mu * (full.phi / reduced.phi);
}

/// Literal exponential sum over the units a mod q. Used as a test oracle for
/// the closed form. Throws numeric_error if the imaginary part fails to cancel.
inline std::int64_t ramanujan_sum_oracle(std::int64_t q, std::int64_t n) {
  if (q < 1) throw invalid_input_error("ramanujan_sum_oracle: q must be >= 1");
  if (q == 1) return 1;
  std::complex<double> sum{0.0, 0.0};
  const std::int64_t n_mod = ((n % q) + q) % q;
  for (std::int64_t a = 1; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    const std::int64_t r = (a * n_mod) % q;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(q);
    sum += std::complex<double>(std::cos(angle), std::sin(angle));
  }
  if (std::abs(sum.imag()) >= 1e-9) {
    throw numeric_error("ramanujan_sum_oracle: imaginary residue " + std::to_string(sum.imag()));
  }
  return static_cast<std::int64_t>(std::llround(sum.real()));
}

}  // namespace primavg
