#pragma once

// Scale-free l^p-improving ratios <A_N 1_F>_{I,p'} / <1_F>_{2I,p} and a seeded
// hill-climbing search for sets F that make the ratio large.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "primavg/averages.hpp"
#include "primavg/errors.hpp"
#include "primavg/signal.hpp"
#include "primavg/util.hpp"

namespace primavg {

/// Ratio <A_N f>_{I,p'} / <f>_{2I,p} with N = |I|.
inline double improving_ratio(const DiscreteSignal& f, const IntegerInterval& interval, double p) {
  if (!(p > 1.0)) throw invalid_input_error("improving_ratio: p must be > 1");
  const std::int64_t n = interval.length();
  if (n < 3) throw invalid_input_error("improving_ratio: |I| must be >= 3");
  const auto doubled = dilate_interval(interval, 2);
  for (std::int64_t x = f.support().a; x <= f.support().b; ++x) {
    if (f.at(x) != 0.0 && !doubled.contains(x)) {
      throw invalid_input_error("improving_ratio: f is not supported in 2I");
    }
  }
  const double denominator = local_norm(f, doubled, p);
  if (denominator == 0.0) throw invalid_input_error("improving_ratio: f vanishes identically");
  const auto f2 = f.restricted(doubled);
  const double work = static_cast<double>(f2.size()) * static_cast<double>(n) / std::log(static_cast<double>(n));
  const auto average = prime_average(f2, n, work > 4e6 ? AverageMode::fft : AverageMode::direct);
  return local_norm(average, interval, dual_exponent(p)) / denominator;
}

struct ImprovingSearchConfig {
  std::int64_t scale = 256;
  double p = 1.5;
  std::int64_t trials = 200;
  std::uint64_t seed = 0;
  // Toggle proposals per trial: min(sweeps * |2I|, max_proposals).
  std::int64_t sweeps = 2;
  std::int64_t max_proposals = std::int64_t{1} << 17;
  unsigned threads = 1;
};

struct ImprovingTrial {
  double initial_density = 0.0;
  double ratio = 0.0;
  std::int64_t accepted = 0;
  std::int64_t set_size = 0;
};

struct ImprovingSearchReport {
  ImprovingSearchConfig config;
  std::vector<ImprovingTrial> trials;
  double max_ratio = 0.0;
  std::int64_t best_trial = -1;
  // Points of the best set F, ascending; I = [0, N-1], 2I = [-N, N-1].
  std::vector<std::int64_t> witness;
};

namespace detail {

// x^e with an exact multiplication path for small integer e.
class PowerFn {
 public:
  explicit PowerFn(double e) : e_(e), integral_(e == std::floor(e) && e >= 1 && e <= 8), ie_(static_cast<int>(e)) {}
  double operator()(double x) const {
    if (!integral_) return std::pow(x, e_);
    double r = x;
    for (int i = 1; i < ie_; ++i) r *= x;
    return r;
  }

 private:
  double e_;
  bool integral_;
  int ie_;
};

struct TrialOutcome {
  ImprovingTrial summary;
  std::vector<std::int64_t> points;
};

inline TrialOutcome run_improving_trial(const ImprovingSearchConfig& cfg, const PrimeWeights& w,
                                        std::uint64_t trial_index) {
  const std::int64_t n = cfg.scale;
  const std::int64_t width = 2 * n;  // 2I = [-n, n-1], index y + n
  const double p_dual = dual_exponent(cfg.p);
  const PowerFn power(p_dual);
  auto rng = stream_for(cfg.seed, trial_index);

  const double density = 0.05 + 0.95 * (1.0 - uniform01(rng));  // (0.05, 1]
  // Bernoulli points inside a random window [lo, hi) of 2I
  std::int64_t lo = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(width)));
  std::int64_t hi = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(width)));
  if (lo > hi) std::swap(lo, hi);
  ++hi;
  std::vector<char> in_set(static_cast<std::size_t>(width), 0);
  std::int64_t count = 0;
  for (std::int64_t idx = lo; idx < hi; ++idx) {
    const char bit = uniform01(rng) < density ? 1 : 0;
    in_set[static_cast<std::size_t>(idx)] = bit;
    count += bit;
  }
  if (count == 0) {
    in_set[static_cast<std::size_t>(lo)] = 1;
    count = 1;
  }

  // totals[x] = theta * A_N 1_F(x) for x in I = [0, n-1]; unnormalized log weights
  std::vector<double> logs(w.primes.size());
  for (std::size_t k = 0; k < logs.size(); ++k) logs[k] = w.weights[k] * w.theta;
  std::vector<double> totals(static_cast<std::size_t>(n), 0.0);
  for (std::int64_t idx = 0; idx < width; ++idx) {
    if (!in_set[static_cast<std::size_t>(idx)]) continue;
    const std::int64_t y = idx - n;
    for (std::size_t k = 0; k < w.primes.size(); ++k) {
      const std::int64_t x = y + w.primes[k];
      if (x >= 0 && x < n) totals[static_cast<std::size_t>(x)] += logs[k];
    }
  }
  double power_sum = 0.0;
  for (const double t : totals) power_sum += power(t);

  const double nd = static_cast<double>(n);
  const double wd = static_cast<double>(width);
  auto ratio_of = [&](double psum, std::int64_t size) {
    return std::pow(std::max(psum, 0.0) / nd, 1.0 / p_dual) / w.theta / std::pow(static_cast<double>(size) / wd, 1.0 / cfg.p);
  };
  double current = ratio_of(power_sum, count);

  std::vector<std::int64_t> order(static_cast<std::size_t>(width));
  std::iota(order.begin(), order.end(), 0);
  const std::int64_t proposals = std::min(cfg.sweeps * width, cfg.max_proposals);
  std::int64_t accepted = 0;
  std::int64_t cursor = width;
  std::int64_t accepted_at_pass = -1;
  for (std::int64_t step = 0; step < proposals; ++step) {
    if (cursor == width) {
      // a full pass without an accepted toggle is a local maximum
      if (accepted == accepted_at_pass) break;
      accepted_at_pass = accepted;
      std::shuffle(order.begin(), order.end(), rng);
      cursor = 0;
    }
    const std::int64_t idx = order[static_cast<std::size_t>(cursor++)];
    const bool removing = in_set[static_cast<std::size_t>(idx)] != 0;
    if (removing && count == 1) continue;
    const std::int64_t y = idx - n;
    const double sign = removing ? -1.0 : 1.0;
    // primes p with 0 <= y + p < n
    const auto first = static_cast<std::size_t>(std::lower_bound(w.primes.begin(), w.primes.end(), -y) - w.primes.begin());
    const auto last = static_cast<std::size_t>(std::lower_bound(w.primes.begin(), w.primes.end(), n - y) - w.primes.begin());
    double delta = 0.0;
    for (std::size_t k = first; k < last; ++k) {
      const double t = totals[static_cast<std::size_t>(y + w.primes[k])];
      delta += power(std::max(t + sign * logs[k], 0.0)) - power(t);
    }
    const std::int64_t new_count = count + (removing ? -1 : 1);
    const double candidate = ratio_of(power_sum + delta, new_count);
    if (candidate > current) {
      for (std::size_t k = first; k < last; ++k) {
        auto& t = totals[static_cast<std::size_t>(y + w.primes[k])];
        t = std::max(t + sign * logs[k], 0.0);
      }
      in_set[static_cast<std::size_t>(idx)] = removing ? 0 : 1;
      power_sum += delta;
      count = new_count;
      current = candidate;
      ++accepted;
    }
  }

  TrialOutcome out;
  for (std::int64_t idx = 0; idx < width; ++idx) {
    if (in_set[static_cast<std::size_t>(idx)]) out.points.push_back(idx - n);
  }
  // Fresh evaluation so the reported ratio carries no incremental drift.
  const IntegerInterval interval{0, n - 1};
  const auto f = DiscreteSignal::indicator(dilate_interval(interval, 2), out.points);
  out.summary = {density, improving_ratio(f, interval, cfg.p), accepted, count};
  return out;
}

}  // namespace detail

/// Random-restart hill climbing over indicator sets F in 2I, I = [0, N-1].
/// Each trial starts from a Bernoulli set of random density, then toggles
/// single points in shuffled sweeps and keeps any toggle that raises the ratio.
/// Results do not depend on the thread count.
inline ImprovingSearchReport adversarial_improving_search(const ImprovingSearchConfig& cfg) {
  if (cfg.scale < 8) throw invalid_input_error("adversarial_improving_search: N must be >= 8");
  if (!(cfg.p > 1.0)) throw invalid_input_error("adversarial_improving_search: p must be > 1");
  if (cfg.trials < 0) throw invalid_input_error("adversarial_improving_search: trials must be >= 0");
  ImprovingSearchReport report;
  report.config = cfg;
  if (cfg.trials == 0) return report;
  const PrimeWeights weights(cfg.scale);
  std::vector<detail::TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
  parallel_for(outcomes.size(), cfg.threads, [&](std::size_t i) {
    outcomes[i] = detail::run_improving_trial(cfg, weights, static_cast<std::uint64_t>(i));
  });
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    report.trials.push_back(outcomes[i].summary);
    if (outcomes[i].summary.ratio > report.max_ratio) {
      report.max_ratio = outcomes[i].summary.ratio;
      report.best_trial = static_cast<std::int64_t>(i);
    }
  }
  report.witness = std::move(outcomes[static_cast<std::size_t>(report.best_trial)].points);
  return report;
}

}  // namespace primavg
