#pragma once

// The smooth frequency cutoff eta and the Fourier transform of the plain
// average gamma_N, both as functions on the torus.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include "primavg/errors.hpp"

namespace primavg {

// Representative of xi mod 1 in [-1/2, 1/2).
inline double periodize(double xi) { return xi - std::floor(xi + 0.5); }

/// Fourier transform of gamma_N = N^-1 sum_{n=1}^N delta_n at xi.
///
/// Closed form e((N+1)xi/2) sin(pi N xi) / (N sin(pi xi)). Within 1e-12 of an
/// integer the quotient is replaced by its Taylor expansion, which is exact to
/// double precision there.
inline std::complex<double> gamma_hat(std::int64_t n, double xi) {
  if (n < 1) throw invalid_input_error("gamma_hat: N must be >= 1");
  const double x = periodize(xi);
  const double nn = static_cast<double>(n);
  const double phase = std::numbers::pi * (nn + 1.0) * x;
  const std::complex<double> rotation{std::cos(phase), std::sin(phase)};
  double dirichlet;
  if (std::abs(x) < 1e-12) {
    const double t = std::numbers::pi * x;
    dirichlet = 1.0 - t * t * (nn * nn - 1.0) / 6.0;
  } else {
    dirichlet = std::sin(std::numbers::pi * nn * x) / (nn * std::sin(std::numbers::pi * x));
  }
  return rotation * dirichlet;
}

// N^-1 sum_{n=1}^N e(n xi), summed term by term.
inline std::complex<double> gamma_hat_direct(std::int64_t n, double xi) {
  std::complex<double> sum{0.0, 0.0};
  const double x = periodize(xi);
  for (std::int64_t k = 1; k <= n; ++k) {
    const double angle = 2.0 * std::numbers::pi * periodize(static_cast<double>(k) * x);
    sum += std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return sum / static_cast<double>(n);
}

/// Scale of the cutoff eta_s(xi) = eta(8^s xi).
struct CutoffSpec {
  int scale = 0;

  // eta == 1 on |xi| <= inner, eta == 0 on |xi| >= outer.
  static constexpr double inner = 0.125;
  static constexpr double outer = 0.25;

  double dilation() const { return std::pow(8.0, scale); }
  // Half-width of the support of eta_s.
  double support_radius() const { return outer / dilation(); }
};

namespace detail {

inline double smooth_step_half(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// C-infinity step: 0 for t <= 0, 1 for t >= 1.
inline double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double up = smooth_step_half(t);
  return up / (up + smooth_step_half(1.0 - t));
}

}  // namespace detail

/// The fixed even bump on the real line: 1 on [-1/8, 1/8], 0 off (-1/4, 1/4),
/// with exp(-1/t) transitions.
inline double eta(double xi) {
  const double a = std::abs(xi);
  if (a <= CutoffSpec::inner) return 1.0;
  if (a >= CutoffSpec::outer) return 0.0;
  return detail::smooth_step((CutoffSpec::outer - a) / (CutoffSpec::outer - CutoffSpec::inner));
}

// eta_s on the torus: eta(8^s xi) with xi reduced to [-1/2, 1/2).
inline double cutoff_eta(const CutoffSpec& spec, double xi) { return eta(spec.dilation() * periodize(xi)); }

}  // namespace primavg
