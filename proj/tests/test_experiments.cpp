#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "erwlab/erwlab.hpp"

using namespace erwlab;

namespace {

std::vector<std::int64_t> pow2_grid(int lo, int hi) {
  std::vector<std::int64_t> g;
  for (int k = lo; k <= hi; ++k) g.push_back(std::int64_t{1} << k);
  return g;
}

RateConfig exact_cfg(Metric m, double r = 1.0) {
  RateConfig c;
  c.metric = m;
  c.r = r;
  c.mode = RateMode::exact;
  return c;
}

}  // namespace

// ---- theory exponents --------------------------------------------------------

TEST(TheoryExponent, Examples) {
  EXPECT_DOUBLE_EQ(theory_exponent(0.5, Metric::kolmogorov, 1.0, std::nullopt, true).exponent, 0.5);
  EXPECT_NEAR(theory_exponent(0.7, Metric::kolmogorov, 1.0, std::nullopt, true).exponent, 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(theory_exponent(0.5, Metric::wasserstein, 2.0, 2.0, false).exponent, 0.5);
  EXPECT_EQ(theory_exponent(0.5, Metric::kolmogorov, 1.0, std::nullopt, true).terms, "n^{-0.5} + v_n^{-1}");
  EXPECT_EQ(theory_exponent(0.5, Metric::wasserstein, 2.0, 2.0, false).terms, "n^{-0.5} + v_n^{-1/2}");
}

TEST(TheoryExponent, PerMetricFormulas) {
  const double p = 0.3, v = 3.0 - 4.0 * p;
  EXPECT_DOUBLE_EQ(theory_exponent(p, Metric::zeta1, 7.0, std::nullopt, true).exponent, 0.5);
  EXPECT_DOUBLE_EQ(theory_exponent(p, Metric::zeta2, 7.0, std::nullopt, true).exponent, 1.0);
  EXPECT_DOUBLE_EQ(theory_exponent(p, Metric::zeta2, 2.0, 0.4, false).exponent, 0.2);
  EXPECT_DOUBLE_EQ(theory_exponent(p, Metric::kolmogorov, 1.0, 0.6, false).exponent, 0.3);
  EXPECT_DOUBLE_EQ(theory_exponent(p, Metric::wasserstein, 0.5, std::nullopt, true).exponent, 0.25);
  EXPECT_DOUBLE_EQ(theory_exponent(p, Metric::wasserstein, 1.5, std::nullopt, true).exponent, 0.5);
  EXPECT_DOUBLE_EQ(theory_exponent(p, Metric::wasserstein, 1.5, 1.2, false).exponent, 0.4);
  EXPECT_DOUBLE_EQ(theory_exponent(0.7, Metric::wasserstein, 2.0, std::nullopt, true).exponent, (3.0 - 2.8) / 2.0);
  EXPECT_DOUBLE_EQ(theory_exponent(0.7, Metric::zeta2, 2.0, std::nullopt, true).exponent, 3.0 - 2.8);
  EXPECT_GT(v, 1.0);
}

TEST(TheoryExponent, BreakpointAtFiveEighths) {
  const auto k = [](double p) { return theory_exponent(p, Metric::kolmogorov, 1.0, std::nullopt, true).exponent; };
  EXPECT_DOUBLE_EQ(k(0.625), 0.5);
  EXPECT_DOUBLE_EQ(k(std::nextafter(0.625, 0.0)), 0.5);
  EXPECT_LT(k(std::nextafter(0.625, 1.0)), 0.5);
  EXPECT_NEAR(k(std::nextafter(0.625, 1.0)), 0.5, 1e-14);
  // Continuity on both open pieces.
  for (double p = 0.01; p < 0.749; p += 0.001) {
    if (std::abs(p - 0.625) < 0.002) continue;
    EXPECT_NEAR(k(p), k(p + 1e-9), 5e-9) << p;
  }
  for (double p = 0.63; p < 0.75; p += 0.01) EXPECT_NEAR(k(p), 3.0 - 4.0 * p, 1e-12);
}

TEST(TheoryExponent, CriticalAndErrors) {
  const TheoryRate t = theory_exponent(0.75, Metric::kolmogorov, 1.0, std::nullopt, true);
  EXPECT_TRUE(t.logarithmic);
  EXPECT_EQ(t.exponent, 0.0);
  EXPECT_THROW(theory_exponent(0.8, Metric::kolmogorov, 1.0, std::nullopt, true), ConfigError);
  EXPECT_THROW(theory_exponent(0.5, Metric::kolmogorov, 1.0, std::nullopt, false), ConfigError);
  EXPECT_THROW(theory_exponent(0.5, Metric::kolmogorov, 1.0, 1.5, false), ConfigError);
  EXPECT_THROW(theory_exponent(0.5, Metric::wasserstein, 1.5, 1.8, false), ConfigError);
  EXPECT_THROW(theory_exponent(0.5, Metric::wasserstein, 2.5, std::nullopt, true), ConfigError);
  EXPECT_THROW(theory_exponent(0.0, Metric::kolmogorov, 1.0, std::nullopt, true), ConfigError);
}

// ---- fits --------------------------------------------------------------------

TEST(RateFit, SyntheticPowerLaw) {
  std::vector<RatePoint> g;
  for (std::int64_t n : pow2_grid(6, 14)) g.push_back({n, 3.7 / std::sqrt(static_cast<double>(n)), 0.0, true});
  const LinearFit f = fit_rate(g);
  EXPECT_NEAR(f.slope, -0.5, 1e-13);
  EXPECT_NEAR(f.intercept, std::log(3.7), 1e-12);
  EXPECT_EQ(f.points, 9u);
  g[0].distance = 1.0;
  g[0].used = false;
  EXPECT_NEAR(fit_rate(g).slope, -0.5, 1e-13);
  for (std::size_t i = 0; i < 6; ++i) g[i].used = false;
  EXPECT_THROW(fit_rate(g), NumericalError);
}

TEST(RateFit, GridValidation) {
  const WalkParams w(0.5, 0.5);
  const std::vector<std::int64_t> short_grid = {8, 16, 32};
  const std::vector<std::int64_t> unsorted = {8, 32, 16, 64};
  const std::vector<std::int64_t> big = {64, 128, 256, kDpBudget + 1};
  EXPECT_THROW(rate_fit(w, short_grid, exact_cfg(Metric::kolmogorov)), ConfigError);
  EXPECT_THROW(rate_fit(w, unsorted, exact_cfg(Metric::kolmogorov)), ConfigError);
  EXPECT_THROW(rate_fit(w, big, exact_cfg(Metric::kolmogorov)), BudgetError);
  const WalkParams e(0.5, 0.5, StepLaw::exponential());
  EXPECT_THROW(rate_fit(e, pow2_grid(6, 9), exact_cfg(Metric::kolmogorov)), ConfigError);
  EXPECT_THROW(rate_fit(WalkParams(0.8, 0.5), pow2_grid(6, 9), exact_cfg(Metric::kolmogorov)), ConfigError);
}

TEST(RateFit, RhoDefaulting) {
  // Pareto shape 2.5 has E Z^{2 + rho} finite only for rho < 0.5.
  const StepLaw heavy = StepLaw::pareto(2.5);
  EXPECT_THROW(resolve_rho(heavy, Metric::kolmogorov, 1.0, std::nullopt), ConfigError);
  EXPECT_THROW(resolve_rho(heavy, Metric::kolmogorov, 1.0, 0.6), ConfigError);
  EXPECT_EQ(resolve_rho(heavy, Metric::kolmogorov, 1.0, 0.4), 0.4);
  EXPECT_EQ(resolve_rho(StepLaw::exponential(), Metric::kolmogorov, 1.0, std::nullopt), 1.0);
  EXPECT_EQ(resolve_rho(StepLaw::exponential(), Metric::wasserstein, 1.5, std::nullopt), 1.5);
  EXPECT_EQ(resolve_rho(StepLaw::exponential(), Metric::zeta2, 2.0, std::nullopt), 1.0);
  // Shape 3.2: rho < 1.2, enough for the default 1 but not for W_2's default 2.
  EXPECT_EQ(resolve_rho(StepLaw::pareto(3.2), Metric::kolmogorov, 1.0, std::nullopt), 1.0);
  EXPECT_THROW(resolve_rho(StepLaw::pareto(3.2), Metric::wasserstein, 2.0, std::nullopt), ConfigError);
  EXPECT_FALSE(resolve_rho(StepLaw::constant(), Metric::kolmogorov, 1.0, std::nullopt).has_value());
  RateConfig c;
  c.mode = RateMode::mc;
  c.m = 200;
  EXPECT_THROW(rate_fit(WalkParams(0.5, 0.5, heavy), pow2_grid(4, 7), c), ConfigError);
}

TEST(RateFit, KolmogorovExamples) {
  const auto grid = pow2_grid(6, 14);
  const RateReport half = rate_fit(WalkParams(0.5, 0.5), grid, exact_cfg(Metric::kolmogorov));
  EXPECT_GE(half.fit.slope, -0.6);
  EXPECT_LE(half.fit.slope, -0.4);
  EXPECT_DOUBLE_EQ(half.theory.exponent, 0.5);
  EXPECT_EQ(half.grid.size(), 9u);
  for (const RatePoint& pt : half.grid) EXPECT_TRUE(pt.used);
  // One-sided: the distance decays at least as fast as the bound.
  const RateReport mem = rate_fit(WalkParams(0.7, 0.5), grid, exact_cfg(Metric::kolmogorov));
  EXPECT_LE(mem.fit.slope, -0.12);
  EXPECT_NEAR(mem.theory.exponent, 0.2, 1e-15);
}

TEST(RateFit, ExactDistancesMatchDirectComputation) {
  const auto grid = pow2_grid(5, 9);
  const RateReport r = rate_fit(WalkParams(0.6, 0.3), grid, exact_cfg(Metric::zeta1));
  const Coeffs c(0.6, 512);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const DiscreteDist d = exact_statistic_dist(0.6, 0.3, grid[i], c);
    EXPECT_EQ(r.grid[i].distance, zeta1(d, StandardNormal{}).value);
    EXPECT_EQ(r.grid[i].band, 0.0);
  }
}

// Property: for every metric and p < 3/4 the exact-mode slope is negative and
// no slower than the bound, up to 0.1.
TEST(RateFit, SlopeNoSlowerThanBound) {
  const auto grid = pow2_grid(6, 12);
  struct Case {
    Metric m;
    double r;
  };
  const Case cases[] = {{Metric::kolmogorov, 1.0}, {Metric::zeta1, 1.0},       {Metric::zeta2, 2.0},
                        {Metric::wasserstein, 0.5}, {Metric::wasserstein, 1.5}, {Metric::wasserstein, 2.0}};
  for (double p : {0.2, 0.5, 0.6, 0.7}) {
    for (const Case& cs : cases) {
      const RateReport r = rate_fit(WalkParams(p, 0.5), grid, exact_cfg(cs.m, cs.r));
      EXPECT_LT(r.fit.slope, 0.0) << p << " " << metric_name(cs.m) << " " << cs.r;
      EXPECT_LE(r.fit.slope, -r.theory.exponent + 0.1) << p << " " << metric_name(cs.m) << " " << cs.r;
    }
  }
}

TEST(RateFit, CriticalIsLogarithmic) {
  const auto grid = pow2_grid(6, 13);
  const RateReport r = rate_fit(WalkParams(0.75, 0.5), grid, exact_cfg(Metric::kolmogorov));
  EXPECT_TRUE(r.theory.logarithmic);
  // distance * log n stays bounded by its first value and the distance decreases.
  const auto scaled = [&](std::size_t i) { return r.grid[i].distance * std::log(static_cast<double>(r.grid[i].n)); };
  for (std::size_t i = 1; i < r.grid.size(); ++i) {
    EXPECT_LT(r.grid[i].distance, r.grid[i - 1].distance);
    EXPECT_LE(scaled(i), scaled(0));
  }
}

TEST(RateFit, MonteCarloNoiseFloor) {
  RateConfig c;
  c.mode = RateMode::mc;
  c.m = 50;
  const WalkParams w(0.5, 0.5, StepLaw::exponential());
  // Band 3 * dkw(50) > 0.6: every point sits under the floor.
  EXPECT_THROW(rate_fit(w, pow2_grid(8, 11), c), NumericalError);
  c.m = 4000;
  const RateReport r = rate_fit(WalkParams(0.5, 0.5), std::vector<std::int64_t>{1, 2, 3, 4, 5}, c);
  for (const RatePoint& pt : r.grid) {
    EXPECT_DOUBLE_EQ(pt.band, dkw_band(4000, 0.01));
    EXPECT_EQ(pt.used, pt.distance > 3 * pt.band);
  }
}

TEST(RateFit, MonteCarloDeterministicAcrossThreads) {
  RateConfig c;
  c.mode = RateMode::mc;
  c.m = 3000;
  c.metric = Metric::wasserstein;
  c.r = 1.5;
  c.threads = 1;
  const WalkParams w(0.4, 0.6);
  const std::vector<std::int64_t> grid = {1, 2, 3, 4};
  const RateReport a = rate_fit(w, grid, c);
  c.threads = 4;
  const RateReport b = rate_fit(w, grid, c);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(a.grid[i].distance, b.grid[i].distance);
}

// ---- lil scan ------------------------------------------------------------------

TEST(Lil, Bounds) {
  EXPECT_DOUBLE_EQ(lil_bound(WalkParams(0.5, 0.5)), 1.0);
  EXPECT_DOUBLE_EQ(lil_bound(WalkParams(0.25, 0.5)), 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(lil_bound(WalkParams(0.5, 0.5, StepLaw::two_point_with_sd(2.0, 0.9))), 3.0);
  EXPECT_DOUBLE_EQ(lil_bound(WalkParams(0.75, 0.5)), 1.0);
  try {
    lil_bound(WalkParams(0.8, 0.5));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("regime guard"), std::string::npos);
  }
}

TEST(Lil, ScanSummaryAndPermutationInvariance) {
  LilConfig cfg;
  cfg.n_max = 20000;
  cfg.n_traj = 24;
  cfg.burn_in = 100;
  cfg.seed = 5;
  const LilReport r = lil_scan(WalkParams(0.5, 0.5), cfg);
  ASSERT_EQ(r.trajectories.size(), 24u);
  std::int64_t ex = 0;
  for (const auto& t : r.trajectories) {
    EXPECT_GE(t.argmax_n, 100);
    EXPECT_LE(t.argmax_n, 20000);
    EXPECT_GE(t.max_stat, t.final_stat);
    EXPECT_EQ(t.exceeds, t.max_stat > 1.1);
    ex += t.exceeds;
  }
  EXPECT_EQ(r.n_exceed, ex);
  LilReport shuffled = r;
  std::mt19937 g(3);
  for (int k = 0; k < 5; ++k) {
    std::shuffle(shuffled.trajectories.begin(), shuffled.trajectories.end(), g);
    summarize_lil(shuffled);
    EXPECT_EQ(shuffled.max_of_max, r.max_of_max);
    EXPECT_EQ(shuffled.median_of_max, r.median_of_max);
    EXPECT_EQ(shuffled.median_final, r.median_final);
    EXPECT_EQ(shuffled.max_final, r.max_final);
    EXPECT_EQ(shuffled.n_exceed, r.n_exceed);
  }
}

TEST(Lil, TrajectoryReproducibleFromSeed) {
  LilConfig cfg;
  cfg.n_max = 5000;
  cfg.n_traj = 4;
  cfg.burn_in = 50;
  const WalkParams w(0.3, 0.5, StepLaw::exponential());
  const LilReport r = lil_scan(w, cfg);
  const auto& t = r.trajectories[2];
  EXPECT_EQ(t.seed, derive_seed(cfg.seed, 2));
  const std::int64_t at[] = {t.argmax_n};
  const Trajectory tr = simulate_collapsed(w, t.argmax_n, t.seed, at);
  const double n = static_cast<double>(t.argmax_n);
  EXPECT_NEAR(t.max_stat, std::abs(tr.last().s) / std::sqrt(2.0 * n * std::log(std::log(n))), 1e-12);
}

TEST(Lil, Guards) {
  LilConfig cfg;
  cfg.n_max = 5000;
  cfg.n_traj = 2;
  EXPECT_THROW(lil_scan(WalkParams(0.8, 0.5), cfg), ConfigError);
  cfg.n_traj = 0;
  EXPECT_THROW(lil_scan(WalkParams(0.5, 0.5), cfg), ConfigError);
  cfg.n_traj = 2;
  cfg.burn_in = 10000;
  EXPECT_THROW(lil_scan(WalkParams(0.5, 0.5), cfg), ConfigError);
}

// ---- superdiffusive --------------------------------------------------------------

TEST(Superdiffusive, RegimeGuardIsTotal) {
  SuperdiffusiveConfig cfg;
  cfg.n = 64;
  cfg.m = 10;
  for (double p = 0.01; p <= 0.75; p += 0.0149) EXPECT_THROW(superdiffusive_diagnostic(WalkParams(p, 0.5), cfg), ConfigError);
  EXPECT_THROW(superdiffusive_diagnostic(WalkParams(0.75, 0.5), cfg), ConfigError);
}

TEST(Superdiffusive, DeterministicCorner) {
  SuperdiffusiveConfig cfg;
  cfg.n = 1000;
  cfg.m = 50;
  const SuperdiffusiveReport r = superdiffusive_diagnostic(WalkParams(1.0, 1.0), cfg);
  for (double x : r.sample) EXPECT_EQ(x, 1.0);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.ks_to_normal, 0.5);
  EXPECT_EQ(r.sd, 0.0);
}

TEST(Superdiffusive, SmallRunFields) {
  SuperdiffusiveConfig cfg;
  cfg.n = 4096;
  cfg.m = 2000;
  const SuperdiffusiveReport r = superdiffusive_diagnostic(WalkParams(0.9, 0.5), cfg);
  ASSERT_EQ(r.sample.size(), 2000u);
  ASSERT_EQ(r.increments.size(), 2u);
  EXPECT_EQ(r.increments[0].k, 1024);
  EXPECT_EQ(r.increments[1].k, 2048);
  EXPECT_FALSE(r.degenerate);
  EXPECT_GT(r.sd, 0.0);
  EXPECT_DOUBLE_EQ(r.dkw, dkw_band(2000, 0.01));
  EXPECT_TRUE(std::isfinite(r.kurtosis_z));
  EXPECT_NEAR(r.mean, 0.0, 5 * r.sd / std::sqrt(2000.0));
  EXPECT_EQ(r.non_normal, r.ks_to_normal > 3 * r.dkw);
  cfg.n = 3;
  EXPECT_THROW(superdiffusive_diagnostic(WalkParams(0.9, 0.5), cfg), ConfigError);
}
