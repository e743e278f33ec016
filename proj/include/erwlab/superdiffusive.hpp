#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "erwlab/coeffs.hpp"
#include "erwlab/distances.hpp"
#include "erwlab/distribution.hpp"
#include "erwlab/errors.hpp"
#include "erwlab/lil.hpp"
#include "erwlab/parallel.hpp"
#include "erwlab/rng.hpp"
#include "erwlab/walk.hpp"

namespace erwlab {

struct SuperdiffusiveConfig {
  std::int64_t n = 100000;
  std::int64_t m = 10000;
  double alpha = 0.01;
  std::uint64_t seed = 1;
  int threads = 0;
};

struct MartingaleIncrement {
  std::int64_t k = 0;
  double median_abs = 0.0;  // median over replicas of |M_{2k} - M_k|
};

struct SuperdiffusiveReport {
  double p = 1.0;
  double q = 0.5;
  std::string steps;
  SuperdiffusiveConfig config;
  std::vector<double> sample;  // S_n / n^{2p-1}, one per replica
  double mean = 0.0;
  double sd = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double kurtosis_z = 0.0;     // excess kurtosis / sqrt(24 / m)
  double ks_to_normal = 0.0;   // KS distance to N(mean, sd^2)
  double dkw = 0.0;            // dkw_band(m, alpha)
  bool degenerate = false;     // sd = 0: KS is reported as 0.5
  bool non_normal = false;     // ks_to_normal > 3 dkw
  std::vector<MartingaleIncrement> increments;
  bool increments_decreasing = false;
};

// Sampled proxy of the limit L = lim S_n / n^{2p-1} with normality
// diagnostics, and the medians of |M_{2k} - M_k| for k = n/4, n/2 where
// M_k = a_k T_k - (2q - 1). Replica i runs under derive_seed(seed, i).
inline SuperdiffusiveReport superdiffusive_diagnostic(const WalkParams& params, const SuperdiffusiveConfig& cfg) {
  if (params.regime() != Regime::superdiffusive)
    throw ConfigError(std::string("superdiffusive diagnostic needs p > 3/4, but p = ") + std::to_string(params.p()) +
                      " is " + regime_name(params.regime()) + " (regime guard)");
  if (cfg.n < 4) throw ConfigError("superdiffusive diagnostic needs n >= 4");
  if (cfg.m < 2) throw ConfigError("superdiffusive diagnostic needs m >= 2");

  SuperdiffusiveReport rep;
  rep.p = params.p();
  rep.q = params.q();
  rep.steps = params.steps().describe();
  rep.config = cfg;

  const std::int64_t k1 = cfg.n / 4;
  const std::int64_t ks[] = {k1, 2 * k1, 4 * k1};
  const std::int64_t cps[] = {k1, 2 * k1, 4 * k1, cfg.n};
  const Coeffs coeffs(params.p(), cfg.n);
  const double bias = 2.0 * params.q() - 1.0;
  const double scale = std::pow(static_cast<double>(cfg.n), 2.0 * params.p() - 1.0);
  const auto mart = [&](const Trajectory& tr, std::int64_t k) {
    return coeffs.a(k) * static_cast<double>(tr.at(k).t) - bias;
  };

  const auto m = static_cast<std::size_t>(cfg.m);
  rep.sample.resize(m);
  std::vector<double> inc0(m), inc1(m);
  parallel_for(cfg.m, resolve_threads(cfg.threads), [&](std::int64_t i) {
    const auto k = static_cast<std::size_t>(i);
    const Trajectory tr = simulate_collapsed(params, cfg.n, derive_seed(cfg.seed, k), cps);
    rep.sample[k] = tr.last().s / scale;
    inc0[k] = std::abs(mart(tr, ks[1]) - mart(tr, ks[0]));
    inc1[k] = std::abs(mart(tr, ks[2]) - mart(tr, ks[1]));
  });
  rep.increments = {{ks[0], detail::median_of(inc0)}, {ks[1], detail::median_of(inc1)}};
  rep.increments_decreasing = rep.increments[1].median_abs < rep.increments[0].median_abs;

  const DiscreteDist d = DiscreteDist::from_sample(rep.sample);
  rep.mean = d.mean();
  const double var = d.variance();
  rep.sd = std::sqrt(var);
  rep.dkw = dkw_band(static_cast<double>(cfg.m), cfg.alpha);
  if (d.size() == 1 || !(rep.sd > 0.0)) {
    rep.sd = 0.0;
    rep.degenerate = true;
    rep.ks_to_normal = 0.5;
    return rep;
  }
  CompensatedSum c3, c4;
  for (double x : rep.sample) {
    const double z = (x - rep.mean) / rep.sd;
    c3.add(z * z * z);
    c4.add(z * z * z * z);
  }
  rep.skewness = c3.value() / static_cast<double>(cfg.m);
  rep.excess_kurtosis = c4.value() / static_cast<double>(cfg.m) - 3.0;
  rep.kurtosis_z = rep.excess_kurtosis / std::sqrt(24.0 / static_cast<double>(cfg.m));
  rep.ks_to_normal = kolmogorov(d.affine(1.0 / rep.sd, -rep.mean / rep.sd), StandardNormal{}, cfg.alpha).value;
  rep.non_normal = rep.ks_to_normal > 3.0 * rep.dkw;
  return rep;
}

}  // namespace erwlab
