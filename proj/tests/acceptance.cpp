// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "primavg/averages.hpp"
#include "primavg/high_low.hpp"
#include "primavg/improving.hpp"
#include "primavg/moments.hpp"
#include "primavg/multipliers.hpp"
#include "primavg/number_theory.hpp"
#include "primavg/sparse_experiment.hpp"
#include "primavg/util.hpp"

namespace {

using namespace primavg;

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs >= limit_seconds) {
    out.ok = false;
    out.detail += fmt("; runtime %.1f s over the %.0f s limit", secs, limit_seconds);
  }
  if (!out.ok) ++failures;
  std::printf("%s %2d %s: %s (%.1f s)\n", out.ok ? "PASS" : "FAIL", id, title, out.detail.c_str(), secs);
  std::fflush(stdout);
}

Outcome ramanujan_oracle() {
  const ArithmeticTables tables(200);
  std::int64_t cases = 0, bad = 0;
  for (std::int64_t q = 1; q <= 200; ++q) {
    for (std::int64_t n = -1000; n <= 1000; ++n) {
      const std::int64_t oracle = ramanujan_sum_oracle(q, n);
      if (tables.ramanujan(q, n) != oracle || ramanujan_sum(q, n) != oracle) {
        if (bad == 0) std::printf("  first mismatch at q=%lld n=%lld\n", static_cast<long long>(q), static_cast<long long>(n));
        ++bad;
      }
      ++cases;
    }
  }
  return {bad == 0, fmt("%lld cases, %lld mismatches", static_cast<long long>(cases), static_cast<long long>(bad))};
}

Outcome ramanujan_at_zero() {
  const ArithmeticTables tables(10000);
  std::int64_t bad = 0;
  for (std::int64_t q = 1; q <= 10000; ++q) {
    if (tables.ramanujan(q, 0) != tables.phi(q) || ramanujan_sum(q, 0) != tables.phi(q)) ++bad;
  }
  return {bad == 0, fmt("q <= 10000, %lld mismatches", static_cast<long long>(bad))};
}

Outcome prime_number_theorem() {
  const double theta = chebyshev_theta(1000000);
  const double dev = std::abs(theta / 1e6 - 1.0);
  return {dev < 0.01, fmt("theta(1e6) = %.6f, |theta/N - 1| = %.3e", theta, dev)};
}

Outcome multiplier_identity() {
  const ArithmeticTables tables(32);
  double worst = 0.0;
  std::int64_t nonzero_moebius_zero = 0, checked = 0;
  for (const std::int64_t n : {256, 1024}) {
    for (std::int64_t q = 1; q <= 32; ++q) {
      const int s = cutoff_scale_for(q);
      // q <= 31 needs at most 2^21 points; q = 32 has mu = 0
      const std::int64_t m = std::min(resolved_grid(n, s), std::int64_t{1} << 21);
      const auto freq = ramanujan_multiplier_frequency(q, n, m, tables);
      const auto spatial = ramanujan_multiplier_spatial(q, n, m, tables);
      complex_vector periodic(static_cast<std::size_t>(m));
      for (std::int64_t x = spatial.min_x(); x <= spatial.max_x(); ++x) periodic[wrap_index(x, m)] = spatial.at(x);
      const auto transformed = forward_dft(std::move(periodic));
      double err = 0.0;
      for (std::size_t j = 0; j < transformed.size(); ++j) err = std::max(err, std::abs(transformed[j] - freq.samples[j]));
      worst = std::max(worst, err);
      if (tables.mu(q) == 0) {
        const bool zero = freq.sup_abs() == 0.0 &&
                          std::all_of(spatial.values.begin(), spatial.values.end(), [](double v) { return v == 0.0; });
        if (!zero) ++nonzero_moebius_zero;
      }
      ++checked;
    }
  }
  return {worst < 1e-8 && nonzero_moebius_zero == 0,
          fmt("%lld (q, N) pairs, sup error %.3e, %lld nonzero multipliers with mu(q) = 0",
              static_cast<long long>(checked), worst, static_cast<long long>(nonzero_moebius_zero))};
}

Outcome residual_decay() {
  const std::int64_t n = 1 << 18;
  const std::vector<double> ks{4, 16, 64};
  std::vector<double> r;
  for (const double k : ks) r.push_back(residual_sup_norm(n, static_cast<std::int64_t>(k)));
  const bool decreasing = r[0] > r[1] && r[1] > r[2];
  const double slope = loglog_slope(ks, r);
  return {decreasing && slope <= -0.3,
          fmt("N = 2^18: %.6g, %.6g, %.6g for K = 4, 16, 64; fitted exponent %.4f", r[0], r[1], r[2], slope)};
}

Outcome moment_growth() {
  const auto sweep = moment_sweep({16, 32, 64, 128}, 2, 64, 0);
  const double q1 = ramanujan_moment(1, 4096, 2);
  std::string values;
  for (const auto& p : sweep.points) values += fmt("%.5g ", p.moment);
  return {sweep.slope < 0.3 && q1 == 1.0,
          fmt("moments %sslope %.4f, Q=1 moment %.17g", values.c_str(), sweep.slope, q1)};
}

std::string serialize(const ImprovingSearchReport& r) {
  std::string s = fmt("%.17g %lld|", r.max_ratio, static_cast<long long>(r.best_trial));
  for (const auto& t : r.trials) {
    s += fmt("%.17g %.17g %lld %lld;", t.initial_density, t.ratio, static_cast<long long>(t.accepted),
             static_cast<long long>(t.set_size));
  }
  for (const auto x : r.witness) s += std::to_string(x) + ",";
  return s;
}

Outcome improving_scale_free() {
  std::vector<double> ns, ratios;
  std::vector<std::string> first_runs;
  std::string values;
  for (int e = 8; e <= 14; ++e) {
    ImprovingSearchConfig cfg;
    cfg.scale = std::int64_t{1} << e;
    cfg.p = 1.5;
    cfg.trials = 200;
    cfg.seed = 20240601;
    cfg.threads = 0;
    const auto rep = adversarial_improving_search(cfg);
    ns.push_back(static_cast<double>(cfg.scale));
    ratios.push_back(rep.max_ratio);
    first_runs.push_back(serialize(rep));
    values += fmt("%.4f ", rep.max_ratio);
  }
  const double slope = loglog_slope(ns, ratios);
  // rerun the scales up to 2^12 on one thread and compare the serialized reports
  bool reproducible = true;
  for (int e = 8; e <= 12; ++e) {
    ImprovingSearchConfig cfg;
    cfg.scale = std::int64_t{1} << e;
    cfg.p = 1.5;
    cfg.trials = 200;
    cfg.seed = 20240601;
    cfg.threads = 1;
    reproducible = reproducible && serialize(adversarial_improving_search(cfg)) == first_runs[static_cast<std::size_t>(e - 8)];
  }
  return {std::abs(slope) < 0.1 && reproducible,
          fmt("max ratios %sfor N = 2^8..2^14, slope %.4f, rerun %s", values.c_str(), slope,
              reproducible ? "identical" : "DIFFERS")};
}

Outcome high_low() {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto rng = stream_for(777, i);
    const std::int64_t n = 16 + static_cast<std::int64_t>(uniform_below(rng, 2033));
    const std::int64_t j = 1 + static_cast<std::int64_t>(uniform_below(rng, 16));
    const double density = 0.05 + 0.9 * uniform01(rng);
    std::vector<std::int64_t> pts;
    for (std::int64_t x = -n; x < n; ++x) {
      if (uniform01(rng) < density) pts.push_back(x);
    }
    const auto f = DiscreteSignal::indicator({-n, n - 1}, pts);
    const auto split = high_low_split(f, n, j, 1.5);
    const auto direct = prime_average(f, n);
    for (std::int64_t x = direct.support().a; x <= direct.support().b; ++x) {
      worst = std::max(worst, std::abs(split.high.at(x) + split.low.at(x) - direct.at(x)));
    }
  }
  const std::int64_t n = 1 << 16;
  auto rng = stream_for(778, 0);
  std::vector<std::int64_t> pts;
  for (std::int64_t x = -n; x < n; ++x) {
    if (uniform01(rng) < 0.5) pts.push_back(x);
  }
  const auto f = DiscreteSignal::indicator({-n, n - 1}, pts);
  std::vector<double> highs;
  for (const std::int64_t j : {4, 8, 16}) highs.push_back(high_low_split(f, n, j, 1.5).report.high_l2);
  const bool monotone = highs[1] <= highs[0] && highs[2] <= highs[1];
  return {worst < 1e-9 && monotone,
          fmt("100 fixtures, sup |H + L - A_N f| = %.3e; <H>_{E,2} = %.6g, %.6g, %.6g at N = 2^16, J = 4, 8, 16", worst,
              highs[0], highs[1], highs[2])};
}

Outcome sparse_machinery() {
  SparseExperimentConfig cfg;
  cfg.order = 12;
  cfg.fixtures = 100;
  cfg.seed = 4242;
  cfg.threads = 0;
  const auto main = sparse_bound_experiment(cfg);
  cfg.family = FixtureFamily::clustered;
  const auto clustered = sparse_bound_experiment(cfg);
  std::int64_t largest = 0;
  for (const auto& f : clustered.fixtures) largest = std::max(largest, f.collection_size);
  const double spread = main.constant_max / main.constant_min;
  const bool ok = main.all_admissible && main.all_sparse && clustered.all_admissible && clustered.all_sparse &&
                  main.constant_min > 0.0 && spread < 2.0;
  return {ok, fmt("bernoulli: C_emp in [%.4f, %.4f], spread %.3f; clustered (up to %lld intervals): all checks %s, "
                  "C_emp in [%.4f, %.4f]",
                  main.constant_min, main.constant_max, spread, static_cast<long long>(largest),
                  clustered.all_admissible && clustered.all_sparse ? "pass" : "FAIL", clustered.constant_min,
                  clustered.constant_max)};
}

Outcome kernel_decay_bounds() {
  double worst = 0.0;
  std::string where;
  for (int e = 8; e <= 12; ++e) {
    for (int s = 0; s <= 3; ++s) {
      const auto d = kernel_decay(std::int64_t{1} << e, s);
      if (d.constant > worst) {
        worst = d.constant;
        where = fmt("N = 2^%d, s = %d", e, s);
      }
    }
  }
  return {worst <= 10.0, fmt("global constant %.4f (attained at %s), shells k = 2..4", worst, where.c_str())};
}

}  // namespace

int main() {
  criterion(1, "Ramanujan oracle equivalence", 30, ramanujan_oracle);
  criterion(2, "c_q(0) = phi(q)", 0, ramanujan_at_zero);
  criterion(3, "prime number theorem sanity", 10, prime_number_theorem);
  criterion(4, "multiplier spatial/frequency identity", 0, multiplier_identity);
  criterion(5, "residual decay", 300, residual_decay);
  criterion(6, "Ramanujan moment growth", 120, moment_growth);
  criterion(7, "scale-free improving ratio", 300, improving_scale_free);
  criterion(8, "High/Low reconstruction and trend", 0, high_low);
  criterion(9, "sparse machinery", 300, sparse_machinery);
  criterion(10, "kernel decay", 0, kernel_decay_bounds);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
