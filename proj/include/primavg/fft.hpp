#pragma once

// Thin FFTW wrapper using the sign convention sigma^(xi) = sum_x sigma(x) e(x xi)
// on the cyclic group Z_M, with inverse f(x) = M^-1 sum_j F(j/M) e(-x j/M).

#include <fftw3.h>

#include <bit>
#include <complex>
#include <cstdint>
#include <mutex>
#include <span>
#include <vector>

#include "primavg/errors.hpp"

namespace primavg {

using complex_vector = std::vector<std::complex<double>>;

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place transform; FFTW_BACKWARD is the e(+x xi) direction.
inline void fftw_in_place(complex_vector& data, int sign) {
  const int n = static_cast<int>(data.size());
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(n, ptr, ptr, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace detail

inline bool is_power_of_two(std::int64_t m) { return m > 0 && std::has_single_bit(static_cast<std::uint64_t>(m)); }

inline std::int64_t next_power_of_two(std::int64_t m) {
  return static_cast<std::int64_t>(std::bit_ceil(static_cast<std::uint64_t>(m < 1 ? 1 : m)));
}

inline void require_grid(std::int64_t m, const char* what) {
  if (!is_power_of_two(m)) throw invalid_input_error(std::string(what) + ": grid size must be a power of two");
  require_budget(static_cast<std::size_t>(m) * sizeof(std::complex<double>) * 4, what);
}

/// Samples sigma^(j/M), j = 0..M-1, of a function given by its values at x mod M.
inline complex_vector forward_dft(complex_vector values) {
  detail::fftw_in_place(values, FFTW_BACKWARD);
  return values;
}

inline complex_vector forward_dft(std::span<const double> values) {
  return forward_dft(complex_vector(values.begin(), values.end()));
}

/// Values at x = 0..M-1 (read mod M) of the function with Fourier samples F(j/M).
inline complex_vector inverse_dft(complex_vector samples) {
  detail::fftw_in_place(samples, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(samples.size());
  for (auto& v : samples) v *= scale;
  return samples;
}

// Index of x in an M-periodic array.
inline std::size_t wrap_index(std::int64_t x, std::int64_t m) {
  return static_cast<std::size_t>(((x % m) + m) % m);
}

}  // namespace primavg
