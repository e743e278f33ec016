#pragma once

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "erwlab/coeffs.hpp"
#include "erwlab/distances.hpp"
#include "erwlab/distribution.hpp"
#include "erwlab/errors.hpp"
#include "erwlab/lattice.hpp"
#include "erwlab/parallel.hpp"
#include "erwlab/regression.hpp"
#include "erwlab/rng.hpp"
#include "erwlab/sampling.hpp"
#include "erwlab/walk.hpp"

namespace erwlab {

struct TheoryRate {
  double exponent = 0.0;     // distance decays like n^{-exponent}
  bool logarithmic = false;  // p = 3/4: 1/log n decay, exponent reported as 0
  std::string terms;         // the bound, e.g. "n^{-1/2} + v_n^{-1}"
};

namespace detail {

inline std::string fmt_exp(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace detail

// Decay exponent of the bound on the distance of the normalized position to
// N(0, 1), under v_n ~ n^{3-4p}. `r` is the order for wasserstein; zeta1 and
// zeta2 fix it to 1 and 2. `rho` is the moment order of the step law and is
// needed only when sigma^2 > 0.
inline TheoryRate theory_exponent(double p, Metric metric, double r, std::optional<double> rho, bool sigma2_zero) {
  require_memory_parameter(p);
  if (p > 0.75) throw ConfigError("no CLT rate for p > 3/4 (superdiffusive regime)");
  if (metric == Metric::zeta1) r = 1.0;
  if (metric == Metric::zeta2) r = 2.0;
  if (metric == Metric::kolmogorov) r = 1.0;
  detail::require_order(r);
  if (!sigma2_zero) {
    if (!rho) throw ConfigError("theory_exponent: rho is required when sigma^2 > 0");
    const double rho_max = metric == Metric::wasserstein && r > 1.0 ? r : 1.0;
    if (!(*rho > 0.0 && *rho <= rho_max))
      throw ConfigError("theory_exponent: rho must lie in (0, " + detail::fmt_exp(rho_max) + "]");
  }
  const bool wr_high = metric == Metric::wasserstein && r > 1.0;
  const double v_exp = 3.0 - 4.0 * p;
  TheoryRate out;
  double n_exp;
  std::string n_term;
  if (metric == Metric::kolmogorov) {
    n_exp = sigma2_zero ? 0.5 : *rho / 2.0;
  } else if (wr_high) {
    n_exp = sigma2_zero ? 0.5 : *rho / (2.0 * r);
  } else {
    n_exp = (sigma2_zero ? r : std::min(r, *rho)) / 2.0;
  }
  n_term = "n^{-" + detail::fmt_exp(n_exp) + "}";
  const std::string v_term = wr_high ? "v_n^{-1/" + detail::fmt_exp(r) + "}" : "v_n^{-1}";
  out.terms = n_term + " + " + v_term;
  if (p == 0.75) {
    out.logarithmic = true;
    out.exponent = 0.0;
    out.terms += " (v_n ~ log n)";
    return out;
  }
  out.exponent = std::min(n_exp, wr_high ? v_exp / r : v_exp);
  return out;
}

enum class RateMode { exact, mc };

inline const char* rate_mode_name(RateMode m) { return m == RateMode::exact ? "exact" : "mc"; }

inline RateMode parse_rate_mode(const std::string& s) {
  if (s == "exact") return RateMode::exact;
  if (s == "mc") return RateMode::mc;
  throw ConfigError("unknown mode '" + s + "' (expected exact or mc)");
}

inline constexpr double kDistanceFloor = 1e-12;

struct RatePoint {
  std::int64_t n = 0;
  double distance = 0.0;
  double band = 0.0;  // DKW half-width in mc mode, 0 for exact laws
  bool used = false;  // entered the fit
};

struct RateReport {
  Metric metric = Metric::kolmogorov;
  double r = 1.0;
  double p = 0.5;
  double q = 0.5;
  std::string steps;
  RateMode mode = RateMode::exact;
  std::int64_t m = 0;
  std::uint64_t seed = 0;
  std::vector<RatePoint> grid;
  LinearFit fit;
  TheoryRate theory;
};

// OLS of log distance on log n over the points flagged `used`.
inline LinearFit fit_rate(std::span<const RatePoint> grid) {
  std::vector<double> x, y;
  for (const auto& g : grid)
    if (g.used) x.push_back(std::log(static_cast<double>(g.n))), y.push_back(std::log(g.distance));
  if (x.size() < 4)
    throw NumericalError("degenerate fit: " + std::to_string(x.size()) + " usable grid points, need at least 4");
  LinearFit f = ols_fit(x, y);
  if (!std::isfinite(f.slope)) throw NumericalError("degenerate fit: non-finite slope");
  return f;
}

inline DistanceReport distance_to_normal(const DiscreteDist& d, Metric metric, double r, double alpha = 0.01) {
  switch (metric) {
    case Metric::kolmogorov:
      return kolmogorov(d, StandardNormal{}, alpha);
    case Metric::wasserstein:
      return wasserstein_r(d, StandardNormal{}, r);
    case Metric::zeta1:
      return zeta1(d, StandardNormal{});
    case Metric::zeta2:
      return zeta2(d, StandardNormal{});
  }
  throw ConfigError("unknown metric");
}

struct RateConfig {
  Metric metric = Metric::kolmogorov;
  double r = 1.0;
  std::optional<double> rho;
  RateMode mode = RateMode::exact;
  std::int64_t m = 10000;
  std::uint64_t seed = 1;
  double alpha = 0.01;
  int threads = 0;
};

// Moment order used for the bound: the given rho, else the largest admissible
// one (r for W_r with r > 1, else 1) when the step law has that many moments.
// Unset for constant steps.
inline std::optional<double> resolve_rho(const StepLaw& steps, Metric metric, double r, std::optional<double> rho) {
  if (steps.kind() == StepKind::constant) return rho;
  const double cap = metric == Metric::wasserstein && r > 1.0 ? r : 1.0;
  const auto lim = steps.rho_limit();
  if (!rho) {
    if (lim && *lim <= cap)
      throw ConfigError("step law has E Z^{2+rho} finite only for rho < " + detail::fmt_exp(*lim) +
                        "; pass rho explicitly");
    rho = cap;
  } else if (lim && *rho >= *lim) {
    throw ConfigError("rho = " + detail::fmt_exp(*rho) + " is beyond the finite-moment limit of the step law");
  }
  return rho;
}

// Distance of the CLT statistic to N(0, 1) along a grid of n and the log-log
// slope. Exact mode uses the lattice law (constant steps only); mc mode draws
// m replicas per grid point, grid point i under derive_seed(seed, i).
inline RateReport rate_fit(const WalkParams& params, std::span<const std::int64_t> n_grid, const RateConfig& cfg) {
  if (n_grid.size() < 4) throw ConfigError("rate fit needs at least 4 grid points");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw ConfigError("grid points must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ConfigError("grid must be strictly increasing");
  }
  const bool sigma2_zero = params.steps().kind() == StepKind::constant;
  const std::optional<double> rho = resolve_rho(params.steps(), cfg.metric, cfg.r, cfg.rho);

  RateReport rep;
  rep.metric = cfg.metric;
  rep.r = cfg.metric == Metric::zeta1 ? 1.0 : cfg.metric == Metric::zeta2 ? 2.0 : cfg.r;
  rep.p = params.p();
  rep.q = params.q();
  rep.steps = params.steps().describe();
  rep.mode = cfg.mode;
  rep.seed = cfg.seed;
  rep.theory = theory_exponent(params.p(), cfg.metric, rep.r, rho, sigma2_zero);
  rep.grid.resize(n_grid.size());

  const unsigned threads = resolve_threads(cfg.threads);
  if (cfg.mode == RateMode::exact) {
    if (!sigma2_zero) throw ConfigError("exact mode needs constant steps (sigma^2 = 0)");
    if (n_grid.back() > kDpBudget)
      throw BudgetError("exact mode: n = " + std::to_string(n_grid.back()) + " exceeds the DP budget " +
                        std::to_string(kDpBudget));
    const std::vector<LatticeDist> laws = dp_snapshots(params.p(), params.q(), n_grid);
    const Coeffs coeffs(params.p(), n_grid.back());
    parallel_for(static_cast<std::int64_t>(n_grid.size()), threads, [&](std::int64_t i) {
      const auto k = static_cast<std::size_t>(i);
      const DiscreteDist d = exact_statistic_dist(laws[k], params.q(), coeffs);
      const double dist = distance_to_normal(d, cfg.metric, rep.r, cfg.alpha).value;
      rep.grid[k] = RatePoint{n_grid[k], dist, 0.0, dist > kDistanceFloor};
    });
  } else {
    if (cfg.m < 1) throw ConfigError("mc mode needs m >= 1");
    rep.m = cfg.m;
    const double band = dkw_band(static_cast<double>(cfg.m), cfg.alpha);
    // Replicas are parallel inside each grid point.
    for (std::size_t k = 0; k < n_grid.size(); ++k) {
      const SampleSet s = sample_statistic(params, n_grid[k], cfg.m, derive_seed(cfg.seed, k),
                                           Normalization::clt_centered, static_cast<int>(threads));
      const DiscreteDist d = DiscreteDist::from_sample(s.values);
      const double dist = distance_to_normal(d, cfg.metric, rep.r, cfg.alpha).value;
      rep.grid[k] = RatePoint{n_grid[k], dist, band, dist > kDistanceFloor && dist > 3.0 * band};
    }
  }
  rep.fit = fit_rate(rep.grid);
  return rep;
}

}  // namespace erwlab
