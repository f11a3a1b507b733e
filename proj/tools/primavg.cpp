// primavg: experiment driver. One subcommand per experiment family; every
// report carries the full run configuration and is byte-identical on rerun.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "primavg/averages.hpp"
#include "primavg/errors.hpp"
#include "primavg/high_low.hpp"
#include "primavg/improving.hpp"
#include "primavg/moments.hpp"
#include "primavg/multipliers.hpp"
#include "primavg/number_theory.hpp"
#include "primavg/sparse_experiment.hpp"
#include "primavg/util.hpp"
#include "primavg/version.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace primavg;

constexpr int exit_usage = 2;
constexpr int exit_resource = 3;
constexpr int exit_internal = 4;

std::string format12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

using Cell = std::variant<std::int64_t, double, bool, std::string>;

json to_json(const Cell& c) {
  return std::visit([](const auto& v) -> json { return v; }, c);
}

std::string to_csv(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format12(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else {
          return std::to_string(v);
        }
      },
      c);
}

// JSON writer with floats printed as %.12g; non-finite floats become null.
void write_json(std::ostream& os, const json& j, int indent, int depth) {
  const auto pad = [&](int d) {
    if (indent > 0) os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v)) {
      os << format12(v);
    } else {
      os << "null";
    }
  } else if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << '{';
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) os << ',';
      first = false;
      pad(depth + 1);
      os << json(k).dump() << (indent > 0 ? ": " : ":");
      write_json(os, v, indent, depth + 1);
    }
    pad(depth);
    os << '}';
  } else if (j.is_array()) {
    if (j.empty()) {
      os << "[]";
      return;
    }
    os << '[';
    bool first = true;
    for (const auto& v : j) {
      if (!first) os << ',';
      first = false;
      pad(depth + 1);
      write_json(os, v, indent, depth + 1);
    }
    pad(depth);
    os << ']';
  } else {
    os << j.dump();
  }
}

std::string compact(const json& j) {
  std::ostringstream os;
  write_json(os, j, 0, 0);
  return os.str();
}

struct Report {
  json config;
  json summary = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  json extra = json::object();  // JSON-only payload (lists too wide for CSV)
};

struct Common {
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

json base_config(const std::string& subcommand, const Common& common) {
  json c;
  c["subcommand"] = subcommand;
  c["format"] = common.format;
  c["out"] = common.out;
  c["seed"] = common.seed;
  c["threads"] = common.threads;
  c["memory_budget"] = memory_budget();
  return c;
}

std::string render(const Report& r, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    json doc;
    doc["tool"] = "primavg";
    doc["version"] = version;
    doc["config"] = r.config;
    doc["summary"] = r.summary;
    json rows = json::array();
    for (const auto& row : r.rows) {
      json obj;
      for (std::size_t i = 0; i < r.columns.size(); ++i) obj[r.columns[i]] = to_json(row[i]);
      rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    for (const auto& [k, v] : r.extra.items()) doc[k] = v;
    write_json(os, doc, 2, 0);
    os << '\n';
  } else {
    os << "# primavg " << version << '\n';
    os << "# config " << compact(r.config) << '\n';
    os << "# summary " << compact(r.summary) << '\n';
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
    os << '\n';
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << to_csv(row[i]);
      os << '\n';
    }
  }
  return os.str();
}

// "c*q^e" or "c*q" or "c" (constant M)
struct MRule {
  double factor = 64.0;
  int exponent = 2;
};

MRule parse_m_rule(const std::string& text) {
  static const std::regex pattern(R"(\s*([0-9]+(?:\.[0-9]*)?)\s*(?:\*\s*[qQ]\s*(?:\^\s*([0-9]+))?)?\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) {
    throw invalid_input_error("--m-rule must look like 64*q^2, got '" + text + "'");
  }
  MRule rule;
  rule.factor = std::stod(m[1].str());
  const bool has_q = text.find_first_of("qQ") != std::string::npos;
  rule.exponent = !has_q ? 0 : (m[2].matched ? std::stoi(m[2].str()) : 1);
  if (!(rule.factor > 0.0)) throw invalid_input_error("--m-rule factor must be positive");
  return rule;
}

Report run_sieve(std::int64_t n) {
  if (n < 1) throw invalid_input_error("--n must be >= 1");
  const auto primes = sieve_primes(n);
  Report r;
  r.columns = {"prime", "log_prime", "theta"};
  double theta = 0.0;
  json list = json::array();
  for (const auto p : primes) {
    const double l = std::log(static_cast<double>(p));
    theta += l;
    r.rows.push_back({p, l, theta});
    list.push_back(p);
  }
  r.summary["n"] = n;
  r.summary["prime_count"] = static_cast<std::int64_t>(primes.size());
  r.summary["theta"] = chebyshev_theta(n);
  r.summary["theta_over_n"] = chebyshev_theta(n) / static_cast<double>(n);
  r.extra["primes"] = std::move(list);
  return r;
}

Report run_ramanujan(std::int64_t q_max, std::int64_t n_max, bool check) {
  if (q_max < 1) throw invalid_input_error("--q-max must be >= 1");
  if (n_max < 0) throw invalid_input_error("--n-max must be >= 0");
  const ArithmeticTables tables(q_max);
  Report r;
  r.columns = {"q", "n", "value"};
  if (check) r.columns.insert(r.columns.end(), {"oracle", "match"});
  std::int64_t mismatches = 0;
  for (std::int64_t q = 1; q <= q_max; ++q) {
    for (std::int64_t n = -n_max; n <= n_max; ++n) {
      const std::int64_t v = tables.ramanujan(q, n);
      if (check) {
        const std::int64_t o = ramanujan_sum_oracle(q, n);
        if (o != v) ++mismatches;
        r.rows.push_back({q, n, v, o, o == v});
      } else {
        r.rows.push_back({q, n, v});
      }
    }
  }
  r.summary["cases"] = static_cast<std::int64_t>(r.rows.size());
  r.summary["checked"] = check;
  r.summary["mismatches"] = mismatches;
  return r;
}

Report run_moments(int k, const std::vector<std::int64_t>& qs, const MRule& rule, unsigned threads) {
  if (k < 1) throw invalid_input_error("--k must be >= 1");
  if (qs.size() < 3) throw invalid_input_error("--q needs at least 3 values");
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (qs[i] < 1) throw invalid_input_error("--q values must be >= 1");
    if (i > 0 && qs[i] <= qs[i - 1]) throw invalid_input_error("--q values must be strictly ascending");
  }
  std::vector<MomentPoint> points(qs.size());
  parallel_for(qs.size(), threads, [&](std::size_t i) {
    const double m_real = rule.factor * std::pow(static_cast<double>(qs[i]), rule.exponent);
    if (m_real > 1e12) throw resource_error("moments: M = " + format12(m_real) + " exceeds 1e12");
    const auto m = static_cast<std::int64_t>(m_real);
    if (m < 1) throw invalid_input_error("moments: the M rule gives M < 1");
    points[i] = {qs[i], m, ramanujan_moment(qs[i], m, k), moment_in_regime(qs[i], m, k)};
  });
  Report r;
  r.columns = {"q", "m", "moment", "in_regime"};
  std::vector<double> moments;
  json warnings = json::array();
  for (const auto& p : points) {
    r.rows.push_back({p.big_q, p.m, p.moment, p.in_regime});
    moments.push_back(p.moment);
    if (!p.in_regime) warnings.push_back("Q = " + std::to_string(p.big_q) + ": M <= Q^k");
  }
  r.summary["slope"] = moment_growth_exponent(qs, moments);
  r.summary["warnings"] = std::move(warnings);
  return r;
}

Report run_approx_error(std::int64_t n, const std::vector<std::int64_t>& ks, std::int64_t grid, unsigned threads) {
  if (ks.empty()) throw invalid_input_error("--k needs at least one value");
  std::vector<double> sup(ks.size());
  parallel_for(ks.size(), threads, [&](std::size_t i) { sup[i] = residual_sup_norm(n, ks[i], grid); });
  Report r;
  r.columns = {"k", "residual_sup"};
  std::vector<double> kx, ky;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    r.rows.push_back({ks[i], sup[i]});
    if (ks[i] > 0) {
      kx.push_back(static_cast<double>(ks[i]));
      ky.push_back(sup[i]);
    }
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < sup.size(); ++i) decreasing = decreasing && sup[i] < sup[i - 1];
  r.summary["n"] = n;
  r.summary["grid_size"] = grid == 0 ? default_grid(n) : grid;
  r.summary["strictly_decreasing"] = decreasing;
  if (kx.size() >= 2) {
    r.summary["decay_exponent"] = loglog_slope(kx, ky);
  } else {
    r.summary["decay_exponent"] = nullptr;
  }
  return r;
}

Report run_improving(const std::vector<std::int64_t>& scales, const ImprovingSearchConfig& base) {
  if (scales.empty()) throw invalid_input_error("--n needs at least one value");
  Report r;
  r.columns = {"n", "max_ratio", "best_trial", "witness_size", "mean_ratio", "mean_accepted"};
  std::vector<double> xs, ys;
  json witnesses = json::array();
  for (const auto n : scales) {
    auto cfg = base;
    cfg.scale = n;
    const auto rep = adversarial_improving_search(cfg);
    double mean = 0.0, accepted = 0.0;
    for (const auto& t : rep.trials) {
      mean += t.ratio;
      accepted += static_cast<double>(t.accepted);
    }
    if (!rep.trials.empty()) {
      mean /= static_cast<double>(rep.trials.size());
      accepted /= static_cast<double>(rep.trials.size());
    }
    r.rows.push_back({n, rep.max_ratio, rep.best_trial, static_cast<std::int64_t>(rep.witness.size()), mean, accepted});
    witnesses.push_back({{"n", n}, {"points", rep.witness}});
    if (rep.max_ratio > 0.0) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(rep.max_ratio);
    }
  }
  if (xs.size() >= 2) {
    r.summary["slope"] = loglog_slope(xs, ys);
  } else {
    r.summary["slope"] = nullptr;
  }
  r.extra["witnesses"] = std::move(witnesses);
  return r;
}

Report run_highlow(std::int64_t n, const std::vector<std::int64_t>& js, double p, double density,
                   std::uint64_t seed, unsigned threads) {
  if (js.empty()) throw invalid_input_error("--j needs at least one value");
  if (!(density > 0.0 && density <= 1.0)) throw invalid_input_error("--density must lie in (0, 1]");
  if (n < 3) throw invalid_input_error("--n must be >= 3");
  auto rng = stream_for(seed, 0);
  std::vector<std::int64_t> points;
  for (std::int64_t x = -n; x < n; ++x) {
    if (uniform01(rng) < density) points.push_back(x);
  }
  const auto f = DiscreteSignal::indicator({-n, n - 1}, points);
  const auto average = prime_average(f, n, AverageMode::fft);
  std::vector<HighLowReport> reports(js.size());
  std::vector<double> errors(js.size());
  parallel_for(js.size(), threads, [&](std::size_t i) {
    const auto split = high_low_split(f, n, js[i], p);
    double err = 0.0;
    for (std::int64_t x = split.report.e.a; x <= split.report.e.b; ++x) {
      err = std::max(err, std::abs(split.high.at(x) + split.low.at(x) - average.at(x)));
    }
    reports[i] = split.report;
    errors[i] = err;
  });
  Report r;
  r.columns = {"j", "high_l2", "low_sup", "low_normalized", "f_density", "reconstruction_error", "cutoff_in_range"};
  std::vector<double> jx, hy, ly;
  json warnings = json::array();
  for (std::size_t i = 0; i < js.size(); ++i) {
    const auto& rep = reports[i];
    const double normalized = rep.f_density > 0.0 ? rep.low_sup / std::pow(rep.f_density, 1.0 / p) : 0.0;
    r.rows.push_back({js[i], rep.high_l2, rep.low_sup, normalized, rep.f_density, errors[i], rep.cutoff_in_range});
    for (const auto& w : rep.warnings) warnings.push_back(w);
    jx.push_back(static_cast<double>(js[i]));
    hy.push_back(rep.high_l2);
    ly.push_back(normalized);
  }
  const bool fit = js.size() >= 2 && std::all_of(hy.begin(), hy.end(), [](double v) { return v > 0; }) &&
                   std::all_of(ly.begin(), ly.end(), [](double v) { return v > 0; });
  r.summary["high_exponent"] = fit ? json(loglog_slope(jx, hy)) : json(nullptr);
  r.summary["low_exponent"] = fit ? json(loglog_slope(jx, ly)) : json(nullptr);
  r.summary["warnings"] = std::move(warnings);
  return r;
}

Report run_sparse(const SparseExperimentConfig& cfg) {
  const auto rep = sparse_bound_experiment(cfg);
  Report r;
  r.columns = {"fixture",      "f_density",   "g_density", "collection_size", "tau_admissible",
               "sparse",       "pairing",     "sparse_form", "constant",      "bad_constant",
               "balance_j",    "threshold_fraction", "scale_conflicts"};
  for (std::size_t i = 0; i < rep.fixtures.size(); ++i) {
    const auto& f = rep.fixtures[i];
    r.rows.push_back({static_cast<std::int64_t>(i), f.f_density, f.g_density, f.collection_size, f.tau_admissible,
                      f.collection_sparse, f.pairing, f.sparse_form, f.constant, f.bad_constant, f.balance_cutoff,
                      f.threshold_fraction, f.scale_conflicts});
  }
  r.summary["all_admissible"] = rep.all_admissible;
  r.summary["all_sparse"] = rep.all_sparse;
  r.summary["constant_min"] = rep.constant_min;
  r.summary["constant_max"] = rep.constant_max;
  r.summary["constant_spread"] = rep.constant_min > 0.0 ? json(rep.constant_max / rep.constant_min) : json(nullptr);
  r.summary["bad_constant_max"] = rep.bad_constant_max;
  return r;
}

int run(int argc, char** argv) {
  CLI::App app{"Prime averages: experiments and checks"};
  app.set_version_flag("--version", version);
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--out", common.out, "write the report here instead of stdout");
  app.add_option("--seed", common.seed, "RNG seed")->capture_default_str();
  app.add_option("--threads", common.threads, "worker threads, 0 = all cores")->capture_default_str();

  std::int64_t sieve_n = 100;
  auto* sieve = app.add_subcommand("sieve", "odd primes up to N and theta");
  sieve->add_option("--n", sieve_n, "upper limit")->capture_default_str();

  std::int64_t q_max = 30, n_max = 30;
  bool check = false;
  auto* ram = app.add_subcommand("ramanujan", "Ramanujan sums c_q(n)");
  ram->add_option("--q-max", q_max)->capture_default_str();
  ram->add_option("--n-max", n_max, "n ranges over [-n_max, n_max]")->capture_default_str();
  ram->add_flag("--check", check, "compare against the exponential-sum definition");

  int moment_k = 2;
  std::vector<std::int64_t> moment_qs{16, 32, 64, 128};
  std::string m_rule = "64*q^2";
  auto* moments = app.add_subcommand("moments", "moments of sum_{q<=Q} c_q(x)/phi(q)");
  moments->add_option("--k", moment_k)->capture_default_str();
  moments->add_option("--q", moment_qs)->delimiter(',')->default_str("16,32,64,128");
  moments->add_option("--m-rule", m_rule, "M as a function of q, e.g. 64*q^2")->capture_default_str();

  std::int64_t approx_n = 1 << 18, approx_grid = 0;
  std::vector<std::int64_t> approx_ks{4, 16, 64};
  auto* approx = app.add_subcommand("approx-error", "sup norm of the multiplier residual");
  approx->add_option("--n", approx_n)->capture_default_str();
  approx->add_option("--k", approx_ks)->delimiter(',')->default_str("4,16,64");
  approx->add_option("--grid", approx_grid, "FFT grid size, 0 = smallest power of two >= 8N")->capture_default_str();

  ImprovingSearchConfig icfg;
  std::vector<std::int64_t> improving_ns{256, 512, 1024, 2048, 4096, 8192, 16384};
  auto* improving = app.add_subcommand("improving", "adversarial search for the improving ratio");
  improving->add_option("--n", improving_ns)->delimiter(',')->default_str("256,512,1024,2048,4096,8192,16384");
  improving->add_option("--p", icfg.p)->capture_default_str();
  improving->add_option("--trials", icfg.trials)->capture_default_str();
  improving->add_option("--sweeps", icfg.sweeps, "toggle passes over 2I per trial")->capture_default_str();
  improving->add_option("--max-proposals", icfg.max_proposals)->capture_default_str();

  std::int64_t hl_n = 1 << 16;
  std::vector<std::int64_t> hl_js{4, 8, 16};
  double hl_p = 1.5, hl_density = 0.5;
  auto* highlow = app.add_subcommand("highlow", "High/Low split of A_N 1_F for a random F");
  highlow->add_option("--n", hl_n)->capture_default_str();
  highlow->add_option("--j", hl_js)->delimiter(',')->default_str("4,8,16");
  highlow->add_option("--p", hl_p)->capture_default_str();
  highlow->add_option("--density", hl_density, "density of the random set F")->capture_default_str();

  SparseExperimentConfig scfg;
  std::string family = "bernoulli";
  auto* sparse = app.add_subcommand("sparse", "stopping times, sparse collections and the sparse constant");
  sparse->add_option("--n0", scfg.order, "|E| = 2^n0")->capture_default_str();
  sparse->add_option("--fixtures", scfg.fixtures)->capture_default_str();
  sparse->add_option("--p", scfg.p)->capture_default_str();
  sparse->add_option("--family", family)->check(CLI::IsMember({"bernoulli", "clustered"}))->capture_default_str();
  sparse->add_option("--density-lo", scfg.density_lo)->capture_default_str();
  sparse->add_option("--density-hi", scfg.density_hi)->capture_default_str();
  sparse->add_option("--threshold-constant", scfg.threshold_constant)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  Report report;
  auto* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  json cfg = base_config(name, common);
  if (chosen == sieve) {
    cfg["n"] = sieve_n;
    report = run_sieve(sieve_n);
  } else if (chosen == ram) {
    cfg["q_max"] = q_max;
    cfg["n_max"] = n_max;
    cfg["check"] = check;
    report = run_ramanujan(q_max, n_max, check);
  } else if (chosen == moments) {
    const auto rule = parse_m_rule(m_rule);
    cfg["k"] = moment_k;
    cfg["q"] = moment_qs;
    cfg["m_rule"] = m_rule;
    cfg["m_factor"] = rule.factor;
    cfg["m_exponent"] = rule.exponent;
    report = run_moments(moment_k, moment_qs, rule, common.threads);
  } else if (chosen == approx) {
    cfg["n"] = approx_n;
    cfg["k"] = approx_ks;
    cfg["grid"] = approx_grid;
    report = run_approx_error(approx_n, approx_ks, approx_grid, common.threads);
  } else if (chosen == improving) {
    icfg.seed = common.seed;
    icfg.threads = common.threads;
    cfg["n"] = improving_ns;
    cfg["p"] = icfg.p;
    cfg["trials"] = icfg.trials;
    cfg["sweeps"] = icfg.sweeps;
    cfg["max_proposals"] = icfg.max_proposals;
    report = run_improving(improving_ns, icfg);
  } else if (chosen == highlow) {
    cfg["n"] = hl_n;
    cfg["j"] = hl_js;
    cfg["p"] = hl_p;
    cfg["density"] = hl_density;
    report = run_highlow(hl_n, hl_js, hl_p, hl_density, common.seed, common.threads);
  } else {
    scfg.seed = common.seed;
    scfg.threads = common.threads;
    scfg.family = family == "clustered" ? FixtureFamily::clustered : FixtureFamily::bernoulli;
    cfg["n0"] = scfg.order;
    cfg["fixtures"] = scfg.fixtures;
    cfg["p"] = scfg.p;
    cfg["family"] = family;
    cfg["density_lo"] = scfg.density_lo;
    cfg["density_hi"] = scfg.density_hi;
    cfg["threshold_constant"] = scfg.threshold_constant;
    report = run_sparse(scfg);
  }
  report.config = std::move(cfg);

  const std::string body = render(report, common.format);
  if (common.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream file(common.out, std::ios::binary);
    if (!file) throw invalid_input_error("cannot open --out " + common.out);
    file << body;
    if (!file) throw resource_error("failed writing " + common.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const invalid_input_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const resource_error& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return exit_resource;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource error: out of memory\n";
    return exit_resource;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return exit_internal;
  }
}
