#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "erwlab/coeffs.hpp"
#include "erwlab/errors.hpp"
#include "erwlab/parallel.hpp"
#include "erwlab/rng.hpp"
#include "erwlab/walk.hpp"

namespace erwlab {

struct LilConfig {
  std::int64_t n_max = 1000000;
  std::int64_t n_traj = 100;
  std::int64_t burn_in = 1000;
  double slack = 1.1;
  int per_doubling = 8;  // checkpoint density
  std::uint64_t seed = 1;
  int threads = 0;
};

struct LilTrajectory {
  std::int64_t index = 0;
  std::uint64_t seed = 0;
  double max_stat = 0.0;
  std::int64_t argmax_n = 0;
  double final_stat = 0.0;
  bool exceeds = false;
};

struct LilReport {
  double p = 0.5;
  double q = 0.5;
  std::string steps;
  Regime regime = Regime::diffusive;
  LilConfig config;
  double bound = 0.0;      // limsup bound on the scan statistic
  double threshold = 0.0;  // slack * bound
  std::vector<LilTrajectory> trajectories;
  std::int64_t n_exceed = 0;
  double fraction_exceed = 0.0;
  double max_of_max = 0.0;
  double median_of_max = 0.0;
  double max_final = 0.0;
  double median_final = 0.0;
};

// Scan statistic: the regime statistic of lil_value divided by sqrt 2, so that
//   diffusive  |S_n| / sqrt(2 n log log n),   bound 1/sqrt(3 - 4p) + sigma
//   critical   |S_n| / sqrt(2 n log n log log log n),   limsup exactly 1.
inline double lil_bound(const WalkParams& params) {
  switch (params.regime()) {
    case Regime::diffusive:
      return 1.0 / std::sqrt(3.0 - 4.0 * params.p()) + params.steps().sd();
    case Regime::critical:
      return 1.0;
    case Regime::superdiffusive:
      break;
  }
  throw ConfigError(std::string("lil scan needs p <= 3/4, but p = ") + std::to_string(params.p()) +
                    " is superdiffusive (regime guard)");
}

namespace detail {

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

}  // namespace detail

// Summary fields from the trajectory list; depends only on its multiset.
inline void summarize_lil(LilReport& rep) {
  if (rep.trajectories.empty()) throw ConfigError("lil summary of an empty trajectory set");
  std::vector<double> maxes, finals;
  rep.n_exceed = 0;
  for (const auto& t : rep.trajectories) {
    maxes.push_back(t.max_stat);
    finals.push_back(t.final_stat);
    rep.n_exceed += t.exceeds ? 1 : 0;
  }
  rep.fraction_exceed = static_cast<double>(rep.n_exceed) / static_cast<double>(rep.trajectories.size());
  rep.max_of_max = *std::max_element(maxes.begin(), maxes.end());
  rep.max_final = *std::max_element(finals.begin(), finals.end());
  rep.median_of_max = detail::median_of(maxes);
  rep.median_final = detail::median_of(finals);
}

// Per-trajectory maximum of the scan statistic over checkpoints n >= burn_in.
// Trajectory i runs under derive_seed(seed, i). The summary depends only on
// the multiset of trajectories.
inline LilReport lil_scan(const WalkParams& params, const LilConfig& cfg) {
  LilReport rep;
  rep.bound = lil_bound(params);
  if (cfg.n_traj < 1) throw ConfigError("lil scan needs n_traj >= 1");
  if (!(cfg.slack > 0.0)) throw ConfigError("lil scan needs slack > 0");
  const std::int64_t burn_in = std::max(cfg.burn_in, kLilBurnIn);
  if (cfg.n_max < burn_in) throw ConfigError("lil scan needs n_max >= burn-in");
  rep.p = params.p();
  rep.q = params.q();
  rep.steps = params.steps().describe();
  rep.regime = params.regime();
  rep.config = cfg;
  rep.threshold = cfg.slack * rep.bound;

  std::vector<std::int64_t> cps;
  for (std::int64_t n : geometric_checkpoints(cfg.n_max, cfg.per_doubling))
    if (n >= burn_in) cps.push_back(n);
  if (cps.front() != burn_in) cps.insert(cps.begin(), burn_in);

  rep.trajectories.resize(static_cast<std::size_t>(cfg.n_traj));
  parallel_for(cfg.n_traj, resolve_threads(cfg.threads), [&](std::int64_t i) {
    LilTrajectory t;
    t.index = i;
    t.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
    const Trajectory tr = simulate_collapsed(params, cfg.n_max, t.seed, cps);
    for (const auto& [n, v] : lil_path_statistic(tr, rep.regime)) {
      const double s = v / std::sqrt(2.0);
      if (s > t.max_stat) t.max_stat = s, t.argmax_n = n;
      if (n == cfg.n_max) t.final_stat = s;
    }
    t.exceeds = t.max_stat > rep.threshold;
    rep.trajectories[static_cast<std::size_t>(i)] = t;
  });

  summarize_lil(rep);
  return rep;
}

}  // namespace erwlab
