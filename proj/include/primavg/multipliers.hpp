#pragma once

// Ramanujan-sum approximations to the multiplier of A_N.
//
// The building blocks are
//   L^_{1,N}(xi) = gamma^_N(xi) eta_1(xi),
//   L^_{q,N}(xi) = mu(q)/phi(q) sum_{a in A_q} gamma^_N(xi - a/q) eta_s(xi - a/q),
// with 2^s <= q < 2^{s+1}. In space, L_{q,N}(x) = mu(q)/phi(q) c_q(-x) (gamma_N * eta_s-check)(x).
// Everything lives on the M-point torus grid; eta_s-check is the inverse DFT
// of the periodized eta_s samples.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "primavg/averages.hpp"
#include "primavg/cutoff.hpp"
#include "primavg/errors.hpp"
#include "primavg/fft.hpp"
#include "primavg/number_theory.hpp"
#include "primavg/signal.hpp"

namespace primavg {

/// Fourier multiplier sampled at xi = j/M, j = 0..M-1.
struct MultiplierGrid {
  std::int64_t grid_size = 0;
  complex_vector samples;

  explicit MultiplierGrid(std::int64_t m) : grid_size(m), samples(static_cast<std::size_t>(m), 0.0) {}

  double sup_abs() const {
    double s = 0.0;
    for (const auto& v : samples) s = std::max(s, std::abs(v));
    return s;
  }
};

/// Real samples on x in [-M/2, M/2).
struct KernelSamples {
  std::int64_t grid_size = 0;
  std::vector<double> values;

  std::int64_t min_x() const { return -grid_size / 2; }
  std::int64_t max_x() const { return grid_size / 2 - 1; }
  double at(std::int64_t x) const { return values[static_cast<std::size_t>(x - min_x())]; }
  double& at(std::int64_t x) { return values[static_cast<std::size_t>(x - min_x())]; }
};

// s with 2^s <= q < 2^{s+1}; q = 1 uses eta_1.
inline int cutoff_scale_for(std::int64_t q) {
  if (q < 1) throw invalid_input_error("cutoff_scale_for: q must be >= 1");
  if (q == 1) return 1;
  return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(q))) - 1;
}

inline bool grid_resolves(int s, std::int64_t m) {
  // 8^s <= M/4
  return 3 * s + 2 <= static_cast<int>(std::bit_width(static_cast<std::uint64_t>(m))) - 1;
}

inline void require_resolution(int s, std::int64_t m, const char* what) {
  if (!grid_resolves(s, m)) {
    throw invalid_input_error(std::string(what) + ": grid of size " + std::to_string(m) +
                              " cannot resolve eta_s with s = " + std::to_string(s) +
                              " (needs 8^s <= M/4)");
  }
}

/// Default working grid: the power of two >= 8N.
inline std::int64_t default_grid(std::int64_t n) { return next_power_of_two(8 * n); }

/// Grid fine enough that the spatial and frequency forms of L_{q,N} agree to
/// about 1e-9: at least 8N and at least 512 * 8^s points.
inline std::int64_t resolved_grid(std::int64_t n, int s) {
  return std::max(default_grid(n), std::int64_t{512} << (3 * s));
}

/// Samples of gamma_N * eta_s-check on [-M/2, M/2).
inline KernelSamples smoothed_kernel(std::int64_t n, int s, std::int64_t m) {
  if (n < 1) throw invalid_input_error("smoothed_kernel: N must be >= 1");
  require_grid(m, "smoothed_kernel");
  if (m < 8 * n) throw invalid_input_error("smoothed_kernel: need M >= 8N");
  require_resolution(s, m, "smoothed_kernel");
  const CutoffSpec spec{s};
  complex_vector spectrum(static_cast<std::size_t>(m));
  for (std::int64_t j = 0; j < m; ++j) {
    const double xi = static_cast<double>(j) / static_cast<double>(m);
    spectrum[static_cast<std::size_t>(j)] = gamma_hat(n, xi) * cutoff_eta(spec, xi);
  }
  const auto values = inverse_dft(std::move(spectrum));
  KernelSamples out{m, std::vector<double>(static_cast<std::size_t>(m))};
  for (std::int64_t x = out.min_x(); x <= out.max_x(); ++x) out.at(x) = values[wrap_index(x, m)].real();
  return out;
}

/// Units a mod q; for q = 1 this is {0}, the single frequency of L_{1,N}.
inline std::vector<std::int64_t> unit_residues(std::int64_t q) {
  if (q == 1) return {0};
  std::vector<std::int64_t> out;
  for (std::int64_t a = 1; a < q; ++a) {
    if (std::gcd(a, q) == 1) out.push_back(a);
  }
  return out;
}

namespace detail {

// Adds scale * sum_a gamma^_N(xi - a/q) eta_s(xi - a/q) into grid, visiting only
// grid points inside the support of each translated cutoff.
inline void accumulate_frequency_form(MultiplierGrid& grid, std::int64_t q, std::int64_t n, double scale) {
  const std::int64_t m = grid.grid_size;
  const CutoffSpec spec{cutoff_scale_for(q)};
  const double radius = spec.support_radius();
  for (const auto a : unit_residues(q)) {
    // xi - a/q = (j q - a M) / (q M), exactly representable for our sizes
    const double center = static_cast<double>(a) * static_cast<double>(m) / static_cast<double>(q);
    const auto lo = static_cast<std::int64_t>(std::floor(center - radius * static_cast<double>(m))) - 1;
    const auto hi = static_cast<std::int64_t>(std::ceil(center + radius * static_cast<double>(m))) + 1;
    for (std::int64_t j = lo; j <= hi; ++j) {
      const double offset = static_cast<double>(j * q - a * m) / static_cast<double>(q * m);
      const double cut = eta(spec.dilation() * offset);
      if (cut == 0.0) continue;
      grid.samples[wrap_index(j, m)] += scale * cut * gamma_hat(n, offset);
    }
  }
}

}  // namespace detail

/// Frequency form of L_{q,N} at xi = j/M.
inline MultiplierGrid ramanujan_multiplier_frequency(std::int64_t q, std::int64_t n, std::int64_t m,
                                                     const ArithmeticTables& tables) {
  require_grid(m, "ramanujan_multiplier");
  if (m < 8 * n) throw invalid_input_error("ramanujan_multiplier: need M >= 8N");
  require_resolution(cutoff_scale_for(q), m, "ramanujan_multiplier");
  MultiplierGrid grid(m);
  const int mu = tables.mu(q);
  if (mu != 0) detail::accumulate_frequency_form(grid, q, n, mu / static_cast<double>(tables.phi(q)));
  return grid;
}

/// Spatial form of L_{q,N} on [-M/2, M/2).
inline KernelSamples ramanujan_multiplier_spatial(std::int64_t q, std::int64_t n, std::int64_t m,
                                                  const ArithmeticTables& tables) {
  const int s = cutoff_scale_for(q);
  const int mu = tables.mu(q);
  if (mu == 0) {
    require_grid(m, "ramanujan_multiplier");
    require_resolution(s, m, "ramanujan_multiplier");
    return {m, std::vector<double>(static_cast<std::size_t>(m), 0.0)};
  }
  auto kernel = smoothed_kernel(n, s, m);
  const double scale = mu / static_cast<double>(tables.phi(q));
  std::vector<double> ramanujan(static_cast<std::size_t>(q));
  for (std::int64_t r = 0; r < q; ++r) ramanujan[static_cast<std::size_t>(r)] = static_cast<double>(tables.ramanujan(q, -r));
  for (std::int64_t x = kernel.min_x(); x <= kernel.max_x(); ++x) {
    kernel.at(x) *= scale * ramanujan[wrap_index(x, q)];
  }
  return kernel;
}

/// sum_{q <= K} L^_{q,N} on the M-point grid.
inline MultiplierGrid low_frequency_multiplier(std::int64_t k, std::int64_t n, std::int64_t m,
                                               const ArithmeticTables& tables) {
  require_grid(m, "low_frequency_multiplier");
  MultiplierGrid grid(m);
  for (std::int64_t q = 1; q <= k; ++q) {
    const int mu = tables.mu(q);
    if (mu == 0) continue;
    require_resolution(cutoff_scale_for(q), m, "low_frequency_multiplier");
    detail::accumulate_frequency_form(grid, q, n, mu / static_cast<double>(tables.phi(q)));
  }
  return grid;
}

/// Split of A_N f into the Ramanujan part sum_{q<=K} L_{q,N} * f and the rest.
struct ApproximateAverage {
  DiscreteSignal low_part;
  DiscreteSignal residual_part;
  std::int64_t grid_size = 0;
};

/// Grid for convolving f with the multipliers up to K: large enough for the
/// cutoffs, for 8N, and for the linear support of A_N f.
inline std::int64_t approximation_grid(const DiscreteSignal& f, std::int64_t n, std::int64_t k) {
  std::int64_t m = next_power_of_two(std::max(8 * n, static_cast<std::int64_t>(f.size()) + n + 4));
  const int s_max = k >= 1 ? cutoff_scale_for(std::max<std::int64_t>(k, 1)) : 0;
  while (!grid_resolves(s_max, m)) m *= 2;
  return m;
}

/// Both parts are returned on the support [a+1, b+N] of A_N f; the
/// convolution is cyclic on Z_M.
inline ApproximateAverage approximate_average(const DiscreteSignal& f, std::int64_t n, std::int64_t k,
                                              std::int64_t m = 0) {
  if (n < 3) throw invalid_input_error("approximate_average: N must be >= 3");
  if (k < 0) throw invalid_input_error("approximate_average: K must be >= 0");
  if (m == 0) m = approximation_grid(f, n, k);
  require_grid(m, "approximate_average");
  if (m < static_cast<std::int64_t>(f.size()) + n + 1) {
    throw invalid_input_error("approximate_average: grid too small for the support of A_N f");
  }
  const auto& s = f.support();
  const IntegerInterval window{s.a + 1, s.b + n};
  const ArithmeticTables tables(std::max<std::int64_t>(k, 1));
  const PrimeWeights weights(n);

  complex_vector fx(static_cast<std::size_t>(m), 0.0);
  const auto input = f.values();
  for (std::size_t i = 0; i < input.size(); ++i) fx[wrap_index(s.a + static_cast<std::int64_t>(i), m)] = input[i];
  const auto fh = forward_dft(std::move(fx));
  const auto average = average_multiplier(weights, m);
  const auto low = low_frequency_multiplier(k, n, m, tables);

  complex_vector low_h(fh.size()), full_h(fh.size());
  for (std::size_t j = 0; j < fh.size(); ++j) {
    low_h[j] = fh[j] * low.samples[j];
    full_h[j] = fh[j] * average[j];
  }
  const auto low_x = inverse_dft(std::move(low_h));
  const auto full_x = inverse_dft(std::move(full_h));

  auto low_part = DiscreteSignal::zeros(window);
  auto residual = DiscreteSignal::zeros(window);
  for (std::int64_t x = window.a; x <= window.b; ++x) {
    const auto idx = wrap_index(x, m);
    low_part.set(x, low_x[idx].real());
    residual.set(x, full_x[idx].real() - low_x[idx].real());
  }
  return {std::move(low_part), std::move(residual), m};
}

struct KernelDecay {
  std::int64_t scale = 0;
  int cutoff_scale = 0;
  std::int64_t grid_size = 0;
  double sup = 0.0;
  // shell_max[k] = max |kernel(y)| over |y| in (2^k N, 2^{k+1} N]; entries 0, 1 unused
  std::vector<double> shell_max;
  // max of N sup and N 2^{2k} shell_max[k] over the measured shells
  double constant = 0.0;
};

/// Sup and dyadic shell maxima of gamma_N * eta_s-check for shells 2 <= k <= max_shell.
inline KernelDecay kernel_decay(std::int64_t n, int s, int max_shell = 4) {
  if (max_shell < 2) throw invalid_input_error("kernel_decay: max_shell must be >= 2");
  // the outermost shell ends at 2^{max_shell+1} N and must sit inside [-M/2, M/2)
  const std::int64_t m = std::max(resolved_grid(n, s), next_power_of_two(n << (max_shell + 3)));
  const auto kernel = smoothed_kernel(n, s, m);
  KernelDecay out;
  out.scale = n;
  out.cutoff_scale = s;
  out.grid_size = m;
  for (const double v : kernel.values) out.sup = std::max(out.sup, std::abs(v));
  const double nd = static_cast<double>(n);
  out.constant = nd * out.sup;
  out.shell_max.assign(static_cast<std::size_t>(max_shell) + 1, 0.0);
  for (int k = 2; k <= max_shell; ++k) {
    double sup = 0.0;
    for (std::int64_t y = (n << k) + 1; y <= (n << (k + 1)); ++y) {
      sup = std::max({sup, std::abs(kernel.at(y)), std::abs(kernel.at(-y))});
    }
    out.shell_max[static_cast<std::size_t>(k)] = sup;
    out.constant = std::max(out.constant, nd * std::ldexp(sup, 2 * k));
  }
  return out;
}

/// max_j |A^_N(j/M) - sum_{q<=K} L^_{q,N}(j/M)|.
inline double residual_sup_norm(std::int64_t n, std::int64_t k, std::int64_t m = 0) {
  if (n < 3) throw invalid_input_error("residual_sup_norm: N must be >= 3");
  if (k < 0) throw invalid_input_error("residual_sup_norm: K must be >= 0");
  if (m == 0) m = default_grid(n);
  require_grid(m, "residual_sup_norm");
  if (m < 8 * n) throw invalid_input_error("residual_sup_norm: need M >= 8N");
  const PrimeWeights weights(n);
  const ArithmeticTables tables(std::max<std::int64_t>(k, 1));
  const auto average = average_multiplier(weights, m);
  const auto low = low_frequency_multiplier(k, n, m, tables);
  double sup = 0.0;
  for (std::size_t j = 0; j < average.size(); ++j) sup = std::max(sup, std::abs(average[j] - low.samples[j]));
  return sup;
}

}  // namespace primavg
