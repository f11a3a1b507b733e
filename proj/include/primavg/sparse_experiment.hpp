#pragma once

// Seeded random fixtures for the sparse bound (A* f, g) <= C sparse_form(f, g)
// and the stopping-time machinery around it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "primavg/averages.hpp"
#include "primavg/errors.hpp"
#include "primavg/high_low.hpp"
#include "primavg/multipliers.hpp"
#include "primavg/signal.hpp"
#include "primavg/sparse.hpp"
#include "primavg/util.hpp"

namespace primavg {

enum class FixtureFamily {
  // f on 2E and g on E independent Bernoulli sets, densities uniform in
  // [density_lo, density_hi]
  bernoulli,
  // f as above; g a thin Bernoulli background (density in [0.0005, 0.002])
  // with 1 to 3 full dyadic blocks of length 8 planted at random. For
  // |E| >= 2^12 the blocks are dense enough to become stopping intervals.
  clustered,
};

inline const char* to_string(FixtureFamily family) {
  return family == FixtureFamily::bernoulli ? "bernoulli" : "clustered";
}

struct SparseExperimentConfig {
  int order = 12;  // |E| = 2^order
  std::int64_t fixtures = 100;
  std::uint64_t seed = 0;
  double p = 1.5;
  FixtureFamily family = FixtureFamily::bernoulli;
  double density_lo = 0.25;
  double density_hi = 0.75;
  // D in the threshold tau(x) >= D J^{1/p'}
  double threshold_constant = 4.0;
  unsigned threads = 1;
};

struct SparseFixtureResult {
  double f_density = 0.0;  // <f>_{2E,1}
  double g_density = 0.0;  // <g>_{E,1}
  std::int64_t collection_size = 0;
  bool tau_admissible = false;
  bool collection_sparse = false;
  std::string diagnostic;
  double pairing = 0.0;      // (A* f, g) over E
  double sparse_form = 0.0;  // r = s = p
  double constant = 0.0;     // pairing / sparse_form
  // sup_E A_tau f / ((sup log2 tau + 1) <f>_{2E,1}), tau from the maximizing policy
  double bad_constant = 0.0;
  std::int64_t balance_cutoff = 0;   // J from the two densities
  double threshold_fraction = 0.0;   // share of E with tau >= D J^{1/p'}
  // points of E where 8^s > tau(x)/4 for the cutoff scale s of q = J
  std::int64_t scale_conflicts = 0;
};

struct SparseExperimentReport {
  SparseExperimentConfig config;
  std::vector<SparseFixtureResult> fixtures;
  bool all_admissible = true;
  bool all_sparse = true;
  double constant_min = 0.0;
  double constant_max = 0.0;
  double bad_constant_max = 0.0;
};

namespace detail {

inline SparseFixtureResult run_sparse_fixture(const SparseExperimentConfig& cfg, std::uint64_t index) {
  const std::int64_t len = std::int64_t{1} << cfg.order;
  const IntegerInterval e{0, len - 1};
  const auto doubled = dilate_interval(e, 2);
  auto rng = stream_for(cfg.seed, index);
  const double span = cfg.density_hi - cfg.density_lo;
  const double f_rate = cfg.density_lo + span * uniform01(rng);

  std::vector<std::int64_t> f_points, g_points;
  for (std::int64_t x = doubled.a; x <= doubled.b; ++x) {
    if (uniform01(rng) < f_rate) f_points.push_back(x);
  }
  if (cfg.family == FixtureFamily::bernoulli) {
    const double g_rate = cfg.density_lo + span * uniform01(rng);
    for (std::int64_t x = e.a; x <= e.b; ++x) {
      if (uniform01(rng) < g_rate) g_points.push_back(x);
    }
  } else {
    const double g_rate = 0.0005 + 0.0015 * uniform01(rng);
    for (std::int64_t x = e.a; x <= e.b; ++x) {
      if (uniform01(rng) < g_rate) g_points.push_back(x);
    }
    const auto blocks = 1 + uniform_below(rng, 3);
    for (std::uint64_t b = 0; b < blocks; ++b) {
      const auto start = e.a + 8 * static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(len / 8)));
      for (std::int64_t x = start; x < start + 8; ++x) g_points.push_back(x);
    }
    std::sort(g_points.begin(), g_points.end());
    g_points.erase(std::unique(g_points.begin(), g_points.end()), g_points.end());
  }
  const auto f = DiscreteSignal::indicator(doubled, f_points);
  const auto g = DiscreteSignal::indicator(e, g_points);

  SparseFixtureResult out;
  out.f_density = local_norm(f, doubled, 1.0);
  out.g_density = local_norm(g, e, 1.0);

  const auto tau = admissible_tau(f, e, TauPolicy::maximizing);
  const auto violation = admissibility_violation(f, tau);
  out.tau_admissible = !violation;
  if (violation) out.diagnostic = *violation;

  const auto collection = sparse_collection(f, g, e);
  const auto check = verify_sparsity(collection);
  out.collection_sparse = check.ok;
  if (!check.ok) out.diagnostic += check.diagnostic;
  out.collection_size = static_cast<std::int64_t>(collection.size());

  const auto maximal = maximal_average(f, cfg.order);
  for (std::int64_t x = e.a; x <= e.b; ++x) out.pairing += maximal.at(x) * g.at(x);
  out.sparse_form = sparse_form_value(collection, f, g, cfg.p, cfg.p);
  out.constant = out.sparse_form > 0.0 ? out.pairing / out.sparse_form : 0.0;

  const auto stopped = stopped_average(f, tau);
  std::int64_t top = 2;
  for (const auto v : tau.values) top = std::max(top, v);
  const double log_tau = std::log2(static_cast<double>(top)) + 1.0;
  out.bad_constant = out.f_density > 0.0 ? stopped.sup_abs() / (log_tau * out.f_density) : 0.0;

  if (out.f_density > 0.0 && out.g_density > 0.0) {
    out.balance_cutoff = balance_J(out.f_density, out.g_density, cfg.p, len);
    const double threshold =
        cfg.threshold_constant * std::pow(static_cast<double>(out.balance_cutoff), 1.0 / dual_exponent(cfg.p));
    std::int64_t above = 0;
    for (const auto v : tau.values) above += static_cast<double>(v) >= threshold ? 1 : 0;
    out.threshold_fraction = static_cast<double>(above) / static_cast<double>(len);
    const std::int64_t needed = std::int64_t{4} << (3 * cutoff_scale_for(out.balance_cutoff));
    for (const auto v : tau.values) out.scale_conflicts += v < needed ? 1 : 0;
  }
  return out;
}

}  // namespace detail

/// Runs cfg.fixtures independent fixtures; fixture i draws from stream (seed, i).
inline SparseExperimentReport sparse_bound_experiment(const SparseExperimentConfig& cfg) {
  if (cfg.order < 2 || cfg.order > 20) throw invalid_input_error("sparse_bound_experiment: order must lie in [2, 20]");
  if (cfg.fixtures < 0) throw invalid_input_error("sparse_bound_experiment: fixtures must be >= 0");
  if (!(cfg.p > 1.0 && cfg.p < 2.0)) throw invalid_input_error("sparse_bound_experiment: p must lie in (1, 2)");
  if (!(cfg.density_lo > 0.0 && cfg.density_lo <= cfg.density_hi && cfg.density_hi <= 1.0)) {
    throw invalid_input_error("sparse_bound_experiment: need 0 < density_lo <= density_hi <= 1");
  }
  SparseExperimentReport report;
  report.config = cfg;
  report.fixtures.resize(static_cast<std::size_t>(cfg.fixtures));
  parallel_for(report.fixtures.size(), cfg.threads, [&](std::size_t i) {
    report.fixtures[i] = detail::run_sparse_fixture(cfg, static_cast<std::uint64_t>(i));
  });
  bool first = true;
  for (const auto& r : report.fixtures) {
    report.all_admissible = report.all_admissible && r.tau_admissible;
    report.all_sparse = report.all_sparse && r.collection_sparse;
    report.bad_constant_max = std::max(report.bad_constant_max, r.bad_constant);
    if (r.sparse_form <= 0.0) continue;
    report.constant_min = first ? r.constant : std::min(report.constant_min, r.constant);
    report.constant_max = first ? r.constant : std::max(report.constant_max, r.constant);
    first = false;
  }
  return report;
}

}  // namespace primavg
