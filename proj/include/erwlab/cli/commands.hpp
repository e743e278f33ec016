#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "erwlab/cli/config.hpp"
#include "erwlab/coeffs.hpp"
#include "erwlab/distances.hpp"
#include "erwlab/distribution.hpp"
#include "erwlab/errors.hpp"
#include "erwlab/lattice.hpp"
#include "erwlab/lil.hpp"
#include "erwlab/moments.hpp"
#include "erwlab/rates.hpp"
#include "erwlab/sampling.hpp"
#include "erwlab/step_law.hpp"
#include "erwlab/superdiffusive.hpp"
#include "erwlab/walk.hpp"

namespace erwlab::cli {

using nlohmann::json;

// Text of one run: the main file and, for reports, a companion in the other
// format (JSON summary / CSV table).
struct Output {
  std::string main;
  std::string main_ext;  // "csv" or "json"
  std::optional<std::string> companion;
  std::string companion_ext;
};

inline WalkParams walk_params(const RunConfig& c) { return WalkParams(c.p, c.q, parse_step_law(c.steps)); }

inline json params_json(const WalkParams& w) {
  return json{{"p", w.p()}, {"q", w.q()}, {"steps", w.steps().describe()}};
}

inline std::string format_for(const RunConfig& c, const char* fallback) {
  const std::string f = c.format.empty() ? fallback : c.format;
  if (f != "csv" && f != "json") throw ConfigError("format must be csv or json, got '" + f + "'");
  return f;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Report commands: JSON summary plus CSV table; --format picks the main file.
inline Output report_output(const RunConfig& c, const json& summary, const std::string& table) {
  const std::string f = format_for(c, "json");
  if (f == "json") return Output{dump(summary), "json", table, "csv"};
  return Output{table, "csv", dump(summary), "json"};
}

// ---- simulate -------------------------------------------------------------

inline Output cmd_simulate(const RunConfig& c) {
  const WalkParams w = walk_params(c);
  if (c.simulator != "literal" && c.simulator != "collapsed")
    throw ConfigError("simulator must be literal or collapsed, got '" + c.simulator + "'");
  const SimulatorTag tag = c.simulator == "literal" ? SimulatorTag::literal : SimulatorTag::collapsed;
  if (c.n < 1) throw ConfigError("n must be >= 1");
  std::vector<std::int64_t> cps;
  if (c.checkpoints == "dense")
    cps = dense_checkpoints(c.n);
  else if (c.checkpoints == "geometric")
    cps = geometric_checkpoints(c.n, c.per_doubling > 0 ? c.per_doubling : 2);
  else
    throw ConfigError("checkpoints must be geometric or dense, got '" + c.checkpoints + "'");
  const Trajectory tr = simulate(tag, w, c.n, c.seed, cps);

  if (format_for(c, "csv") == "csv") {
    std::string s = "n,T,S,H\n";
    for (const auto& cp : tr.checkpoints) s += fmt(cp.n) + "," + fmt(cp.t) + "," + fmt(cp.s) + "," + fmt(cp.h) + "\n";
    return Output{s, "csv", std::nullopt, ""};
  }
  json rows = json::array();
  for (const auto& cp : tr.checkpoints) rows.push_back({{"n", cp.n}, {"T", cp.t}, {"S", cp.s}, {"H", cp.h}});
  json j{{"params", params_json(w)}, {"seed", c.seed}, {"simulator", simulator_name(tag)}, {"checkpoints", rows}};
  return Output{dump(j), "json", std::nullopt, ""};
}

// ---- exact ----------------------------------------------------------------

// Rows of a CSV table rendered as CSV or as a JSON array of objects.
inline Output table_output(const RunConfig& c, const std::vector<std::string>& header,
                           const std::vector<std::vector<std::string>>& rows) {
  if (format_for(c, "csv") == "csv") {
    std::string s;
    for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
    s += "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
      s += "\n";
    }
    return Output{s, "csv", std::nullopt, ""};
  }
  json arr = json::array();
  for (const auto& r : rows) {
    json o = json::object();
    for (std::size_t i = 0; i < r.size(); ++i) o[header[i]] = json::parse(r[i]);
    arr.push_back(o);
  }
  return Output{dump(arr), "json", std::nullopt, ""};
}

inline Output cmd_exact(const RunConfig& c) {
  if (c.n < 1) throw ConfigError("n must be >= 1");
  std::vector<std::vector<std::string>> rows;
  if (c.target == "coeffs") {
    const Coeffs co(c.p, c.n);
    for (std::int64_t k = 1; k <= c.n; ++k) rows.push_back({fmt(k), fmt(co.gamma(k)), fmt(co.a(k)), fmt(co.v(k))});
    return table_output(c, {"n", "gamma", "a", "v"}, rows);
  }
  if (c.target == "dist") {
    const LatticeDist law = dp_distribution(c.p, c.q, c.n);
    for (std::size_t j = law.size(); j-- > 0;) rows.push_back({fmt(law.point(j)), fmt(law.masses()[j])});
    return table_output(c, {"t", "prob"}, rows);
  }
  if (c.target == "moments") {
    const MomentTable t = moment_recursions(c.p, c.q, c.n);
    const Coeffs co(c.p, c.n);
    for (std::int64_t k = 1; k <= c.n; ++k) {
      const auto i = static_cast<std::size_t>(k);
      if (!(t.var_m[i] <= co.v(k) * (1.0 + 1e-12)))
        throw NumericalError("moments: Var M_n exceeds v_n at n = " + std::to_string(k));
      rows.push_back({fmt(k), fmt(t.m1[i]), fmt(t.m2[i]), fmt(t.m3[i]), fmt(t.var_m[i])});
    }
    return table_output(c, {"n", "m1", "m2", "m3", "varM"}, rows);
  }
  throw ConfigError("exact target must be coeffs, dist or moments, got '" + c.target + "'");
}

// ---- distance -------------------------------------------------------------

inline Output cmd_distance(const RunConfig& c) {
  const WalkParams w = walk_params(c);
  const Metric metric = parse_metric(c.metric);
  const RateMode mode = parse_rate_mode(c.mode);
  if (metric == Metric::wasserstein) erwlab::detail::require_order(c.r);
  if (c.n < 1) throw ConfigError("n must be >= 1");
  std::optional<DiscreteDist> d;
  if (mode == RateMode::exact) {
    if (w.steps().kind() != StepKind::constant) throw ConfigError("exact mode needs constant steps (sigma^2 = 0)");
    d = exact_statistic_dist(c.p, c.q, c.n, Coeffs(c.p, c.n));
  } else {
    const SampleSet s = sample_statistic(w, c.n, c.m, c.seed, Normalization::clt_centered, c.threads);
    d = DiscreteDist::from_sample(s.values);
  }
  const DistanceReport rep = distance_to_normal(*d, metric, c.r, c.alpha);

  json j{{"metric", metric_name(metric)},
         {"value", rep.value},
         {"n", c.n},
         {"m", mode == RateMode::mc ? json(c.m) : json(nullptr)},
         {"params", params_json(w)},
         {"mode", rate_mode_name(mode)}};
  if (metric == Metric::wasserstein) j["r"] = c.r;
  if (rep.band) {
    j["band"] = {{"half_width", dkw_band(static_cast<double>(c.m), c.alpha)},
                 {"lo", rep.band->lo},
                 {"hi", rep.band->hi},
                 {"alpha", c.alpha}};
  } else {
    j["band"] = nullptr;
  }
  if (metric == Metric::zeta2) j["mean_shift"] = rep.mean_shift;
  if (mode == RateMode::mc) j["seed"] = c.seed;

  const std::string f = format_for(c, "json");
  if (f == "json") return Output{dump(j), "json", std::nullopt, ""};
  std::string s = "metric,value,band_lo,band_hi,n,m,mode,mean_shift\n";
  s += std::string(metric_name(metric)) + "," + fmt(rep.value) + "," + (rep.band ? fmt(rep.band->lo) : "") + "," +
       (rep.band ? fmt(rep.band->hi) : "") + "," + fmt(c.n) + "," + (mode == RateMode::mc ? fmt(c.m) : "") + "," +
       rate_mode_name(mode) + "," + (metric == Metric::zeta2 ? fmt(rep.mean_shift) : "") + "\n";
  return Output{s, "csv", std::nullopt, ""};
}

// ---- rates ----------------------------------------------------------------

inline RateConfig rate_config(const RunConfig& c) {
  RateConfig rc;
  rc.metric = parse_metric(c.metric);
  rc.r = c.r;
  rc.rho = c.rho;
  rc.mode = parse_rate_mode(c.mode);
  rc.m = c.m;
  rc.seed = c.seed;
  rc.alpha = c.alpha;
  rc.threads = c.threads;
  return rc;
}

inline json rate_json(const RateReport& r) {
  json grid = json::array();
  for (const auto& g : r.grid) grid.push_back({{"n", g.n}, {"distance", g.distance}, {"band", g.band}, {"used", g.used}});
  return json{{"metric", metric_name(r.metric)},
              {"r", r.r},
              {"params", {{"p", r.p}, {"q", r.q}, {"steps", r.steps}}},
              {"mode", rate_mode_name(r.mode)},
              {"m", r.mode == RateMode::mc ? json(r.m) : json(nullptr)},
              {"seed", r.seed},
              {"grid", grid},
              {"fitted_slope", r.fit.slope},
              {"slope_se", r.fit.slope_se},
              {"intercept", r.fit.intercept},
              {"fit_points", r.fit.points},
              {"theory_exponent", r.theory.exponent},
              {"theory_logarithmic", r.theory.logarithmic},
              {"theory_rate_terms", r.theory.terms}};
}

inline std::string rate_csv(const RateReport& r) {
  std::string s = "n,distance,band,used\n";
  for (const auto& g : r.grid) s += fmt(g.n) + "," + fmt(g.distance) + "," + fmt(g.band) + "," + (g.used ? "1" : "0") + "\n";
  return s;
}

inline Output cmd_rates(const RunConfig& c) {
  const RateReport r = rate_fit(walk_params(c), parse_grid(c.grid), rate_config(c));
  return report_output(c, rate_json(r), rate_csv(r));
}

// ---- lil ------------------------------------------------------------------

inline LilConfig lil_config(const RunConfig& c) {
  LilConfig lc;
  lc.n_max = c.n;
  lc.n_traj = c.n_traj;
  lc.burn_in = c.burn_in;
  lc.slack = c.slack;
  if (c.per_doubling > 0) lc.per_doubling = c.per_doubling;
  lc.seed = c.seed;
  lc.threads = c.threads;
  return lc;
}

inline json lil_json(const LilReport& r) {
  json trajs = json::array();
  for (const auto& t : r.trajectories)
    trajs.push_back({{"index", t.index},
                     {"seed", t.seed},
                     {"max_stat", t.max_stat},
                     {"argmax_n", t.argmax_n},
                     {"final_stat", t.final_stat},
                     {"exceeds", t.exceeds}});
  return json{{"params", {{"p", r.p}, {"q", r.q}, {"steps", r.steps}}},
              {"regime", regime_name(r.regime)},
              {"n_max", r.config.n_max},
              {"n_traj", r.config.n_traj},
              {"burn_in", r.config.burn_in},
              {"slack", r.config.slack},
              {"per_doubling", r.config.per_doubling},
              {"seed", r.config.seed},
              {"bound", r.bound},
              {"threshold", r.threshold},
              {"n_exceed", r.n_exceed},
              {"fraction_exceed", r.fraction_exceed},
              {"max_of_max", r.max_of_max},
              {"median_of_max", r.median_of_max},
              {"max_final", r.max_final},
              {"median_final", r.median_final},
              {"trajectories", trajs}};
}

inline std::string lil_csv(const LilReport& r) {
  std::string s = "index,seed,max_stat,argmax_n,final_stat,exceeds\n";
  for (const auto& t : r.trajectories)
    s += fmt(t.index) + "," + std::to_string(t.seed) + "," + fmt(t.max_stat) + "," + fmt(t.argmax_n) + "," +
         fmt(t.final_stat) + "," + (t.exceeds ? "1" : "0") + "\n";
  return s;
}

inline Output cmd_lil(const RunConfig& c) {
  const LilReport r = lil_scan(walk_params(c), lil_config(c));
  return report_output(c, lil_json(r), lil_csv(r));
}

// ---- superdiffusive -------------------------------------------------------

inline SuperdiffusiveConfig superdiffusive_config(const RunConfig& c) {
  SuperdiffusiveConfig sc;
  sc.n = c.n;
  sc.m = c.m;
  sc.alpha = c.alpha;
  sc.seed = c.seed;
  sc.threads = c.threads;
  return sc;
}

inline json superdiffusive_json(const SuperdiffusiveReport& r) {
  json inc = json::array();
  for (const auto& i : r.increments) inc.push_back({{"k", i.k}, {"median_abs_increment", i.median_abs}});
  return json{{"params", {{"p", r.p}, {"q", r.q}, {"steps", r.steps}}},
              {"n", r.config.n},
              {"m", r.config.m},
              {"seed", r.config.seed},
              {"mean", r.mean},
              {"sd", r.sd},
              {"skewness", r.skewness},
              {"excess_kurtosis", r.excess_kurtosis},
              {"kurtosis_z", r.kurtosis_z},
              {"ks_to_normal", r.ks_to_normal},
              {"dkw_band", r.dkw},
              {"noise_threshold", 3.0 * r.dkw},
              {"degenerate", r.degenerate},
              {"non_normal", r.non_normal},
              {"martingale_increments", inc},
              {"increments_decreasing", r.increments_decreasing}};
}

inline std::string superdiffusive_csv(const SuperdiffusiveReport& r) {
  std::string s = "replica,L\n";
  for (std::size_t i = 0; i < r.sample.size(); ++i) s += std::to_string(i) + "," + fmt(r.sample[i]) + "\n";
  return s;
}

inline Output cmd_superdiffusive(const RunConfig& c) {
  const SuperdiffusiveReport r = superdiffusive_diagnostic(walk_params(c), superdiffusive_config(c));
  return report_output(c, superdiffusive_json(r), superdiffusive_csv(r));
}

// ---- dispatch and output --------------------------------------------------

inline Output run_command(const RunConfig& c) {
  if (c.subcommand == "simulate") return cmd_simulate(c);
  if (c.subcommand == "exact") return cmd_exact(c);
  if (c.subcommand == "distance") return cmd_distance(c);
  if (c.subcommand == "rates") return cmd_rates(c);
  if (c.subcommand == "lil") return cmd_lil(c);
  if (c.subcommand == "superdiffusive") return cmd_superdiffusive(c);
  throw ConfigError("unknown subcommand '" + c.subcommand + "'");
}

// `out` with its .csv/.json extension swapped for `ext`, or `ext` appended.
inline std::string companion_path(const std::string& out, const std::string& ext) {
  const auto dot = out.rfind('.');
  const auto slash = out.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    const std::string cur = out.substr(dot + 1);
    if (cur == "csv" || cur == "json") return out.substr(0, dot + 1) + ext;
  }
  return out + "." + ext;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw ConfigError("write to '" + path + "' failed");
}

// Main text goes to --out (stdout when empty or "-"); the companion is
// written next to it and skipped on stdout.
inline void write_output(const RunConfig& c, const Output& o) {
  if (c.out.empty() || c.out == "-") {
    std::cout << o.main;
    std::cout.flush();
    return;
  }
  write_file(c.out, o.main);
  if (o.companion) write_file(companion_path(c.out, o.companion_ext), *o.companion);
}

}  // namespace erwlab::cli
