#pragma once

// Logarithmically weighted averages along the odd primes,
//   A_N f(x) = theta(N)^-1 sum_{p <= N} (ln p) f(x - p),
// and the dyadic maximal function A* f = sup_n |A_{2^n} f|.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "primavg/cutoff.hpp"
#include "primavg/errors.hpp"
#include "primavg/fft.hpp"
#include "primavg/number_theory.hpp"
#include "primavg/signal.hpp"

namespace primavg {

/// Normalized weights ln p / theta(N) of the odd primes p <= N.
struct PrimeWeights {
  std::int64_t scale = 0;
  std::vector<std::int64_t> primes;
  std::vector<double> weights;
  double theta = 0.0;

  explicit PrimeWeights(std::int64_t n, const std::vector<std::int64_t>& all_primes) : scale(n) {
    for (const auto p : all_primes) {
      if (p > n) break;
      primes.push_back(p);
      weights.push_back(std::log(static_cast<double>(p)));
      theta += weights.back();
    }
    if (primes.empty()) {
      throw invalid_input_error("PrimeWeights: N = " + std::to_string(n) +
                                " has no odd prime, theta(N) = 0");
    }
    for (auto& w : weights) w /= theta;
  }

  explicit PrimeWeights(std::int64_t n) : PrimeWeights(n, sieve_primes(n)) {}
};

enum class AverageMode { direct, fft };

namespace detail {

inline DiscreteSignal prime_average_direct(const DiscreteSignal& f, const PrimeWeights& w) {
  const auto& s = f.support();
  auto out = DiscreteSignal::zeros({s.a + 3, s.b + w.scale});
  auto values = out.values();
  const auto input = f.values();
  for (std::size_t k = 0; k < w.primes.size(); ++k) {
    // f(y) lands at x = y + p
    const auto offset = static_cast<std::size_t>(w.primes[k] - 3);
    const double weight = w.weights[k];
    for (std::size_t i = 0; i < input.size(); ++i) values[i + offset] += weight * input[i];
  }
  return out;
}

inline DiscreteSignal prime_average_fft(const DiscreteSignal& f, const PrimeWeights& w) {
  const auto& s = f.support();
  const IntegerInterval window{s.a + 3, s.b + w.scale};
  const std::int64_t m = next_power_of_two(window.length() + 3);
  require_grid(m, "prime_average");
  complex_vector fx(static_cast<std::size_t>(m), 0.0);
  complex_vector kx(static_cast<std::size_t>(m), 0.0);
  const auto input = f.values();
  for (std::size_t i = 0; i < input.size(); ++i) fx[i] = input[i];  // offset by s.a
  for (std::size_t k = 0; k < w.primes.size(); ++k) kx[static_cast<std::size_t>(w.primes[k])] = w.weights[k];
  auto fh = forward_dft(std::move(fx));
  const auto kh = forward_dft(std::move(kx));
  for (std::size_t j = 0; j < fh.size(); ++j) fh[j] *= kh[j];
  const auto conv = inverse_dft(std::move(fh));
  auto out = DiscreteSignal::zeros(window);
  auto values = out.values();
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = conv[i + 3].real();
  return out;
}

}  // namespace detail

/// A_N f on the support [a+3, b+N] of the output, where [a, b] supports f.
inline DiscreteSignal prime_average(const DiscreteSignal& f, const PrimeWeights& weights,
                                    AverageMode mode = AverageMode::direct) {
  return mode == AverageMode::direct ? detail::prime_average_direct(f, weights)
                                     : detail::prime_average_fft(f, weights);
}

inline DiscreteSignal prime_average(const DiscreteSignal& f, std::int64_t n,
                                    AverageMode mode = AverageMode::direct) {
  if (n < 3) throw invalid_input_error("prime_average: N must be >= 3");
  return prime_average(f, PrimeWeights(n), mode);
}

/// sup over N = 2^n, 2 <= n <= n_max, of |A_N f|, on [a+3, b+2^n_max].
inline DiscreteSignal maximal_average(const DiscreteSignal& f, int n_max) {
  if (n_max < 2) throw invalid_input_error("maximal_average: n_max must be >= 2");
  const std::int64_t top = std::int64_t{1} << n_max;
  const auto primes = sieve_primes(top);
  const auto& s = f.support();
  auto out = DiscreteSignal::zeros({s.a + 3, s.b + top});
  auto values = out.values();
  for (int n = 2; n <= n_max; ++n) {
    const PrimeWeights w(std::int64_t{1} << n, primes);
    const double work = static_cast<double>(w.primes.size()) * static_cast<double>(f.size());
    const auto mode = work > 4e6 ? AverageMode::fft : AverageMode::direct;
    const auto avg = prime_average(f, w, mode);
    const auto av = avg.values();
    // avg starts at s.a + 3 like out
    for (std::size_t i = 0; i < av.size(); ++i) values[i] = std::max(values[i], std::abs(av[i]));
  }
  return out;
}

/// Samples of the multiplier of A_N at xi = j/M, via one FFT of the weights.
inline complex_vector average_multiplier(const PrimeWeights& w, std::int64_t m) {
  require_grid(m, "average_multiplier");
  if (m <= w.scale) throw invalid_input_error("average_multiplier: grid must exceed N");
  complex_vector kx(static_cast<std::size_t>(m), 0.0);
  for (std::size_t k = 0; k < w.primes.size(); ++k) kx[static_cast<std::size_t>(w.primes[k])] = w.weights[k];
  return forward_dft(std::move(kx));
}

// sum_p (ln p / theta) e(p xi), summed prime by prime.
inline std::complex<double> average_multiplier_direct(const PrimeWeights& w, double xi) {
  std::complex<double> sum{0.0, 0.0};
  const double x = periodize(xi);
  for (std::size_t k = 0; k < w.primes.size(); ++k) {
    const double angle = 2.0 * std::numbers::pi * periodize(static_cast<double>(w.primes[k]) * x);
    sum += w.weights[k] * std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return sum;
}

}  // namespace primavg
