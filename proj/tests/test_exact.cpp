#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <vector>

#include "erwlab/erwlab.hpp"

using namespace erwlab;

namespace {

const double kGridP[] = {0.1, 0.25, 0.5, 0.6, 0.625, 0.7, 0.75, 0.9, 1.0};

// P(T_n = t) by summing over every sign history of the walk as defined:
// X_{k+1} copies X_beta (prob p) or flips it, beta uniform on {1..k}.
std::map<std::int64_t, long double> enumerate_walk(double p, double q, int n) {
  std::map<std::int64_t, long double> law;
  std::vector<int> x(static_cast<std::size_t>(n));
  const auto rec = [&](auto&& self, int k, long double prob) -> void {
    if (k == n) {
      std::int64_t t = 0;
      for (int v : x) t += v;
      law[t] += prob;
      return;
    }
    int ups = 0;
    for (int i = 0; i < k; ++i) ups += x[static_cast<std::size_t>(i)] > 0;
    const long double frac_up = static_cast<long double>(ups) / k;
    const long double up = p * frac_up + (1.0L - p) * (1.0L - frac_up);
    x[static_cast<std::size_t>(k)] = 1;
    self(self, k + 1, prob * up);
    x[static_cast<std::size_t>(k)] = -1;
    self(self, k + 1, prob * (1.0L - up));
  };
  x[0] = 1;
  rec(rec, 1, q);
  x[0] = -1;
  rec(rec, 1, 1.0L - q);
  return law;
}

}  // namespace

// ---- coefficients ------------------------------------------------------------

TEST(Coeffs, ProductFormMatchesGammaForm) {
  for (double p : kGridP) {
    const Coeffs c(p, 10000);
    for (std::int64_t n = 1; n <= 10000; ++n) {
      const double g = gamma_form_a(p, n);
      ASSERT_NEAR(c.a(n), g, 1e-10 * g) << "p=" << p << " n=" << n;
    }
  }
}

TEST(Coeffs, MatchLongDoubleOracle) {
  for (double p : {0.2, 0.6, 0.75, 0.95}) {
    const std::int64_t n = 100000;
    const Coeffs c(p, n);
    long double a = 1.0L, v = 1.0L;
    for (std::int64_t k = 1; k < n; ++k) {
      a /= 1.0L + (2.0L * p - 1.0L) / k;
      v += a * a;
    }
    EXPECT_NEAR(c.a(n), static_cast<double>(a), 1e-12 * static_cast<double>(a));
    EXPECT_NEAR(c.v(n), static_cast<double>(v), 1e-12 * static_cast<double>(v));
  }
}

TEST(Coeffs, DefinitionsAndIndexing) {
  const Coeffs c(0.7, 50);
  EXPECT_EQ(c.a(1), 1.0);
  EXPECT_EQ(c.v(1), 1.0);
  EXPECT_DOUBLE_EQ(c.gamma(4), 1.0 + 0.4 / 4.0);
  for (std::int64_t k = 1; k < 50; ++k) EXPECT_NEAR(c.a(k + 1), c.a(k) / c.gamma(k), 1e-14);
  EXPECT_THROW(c.a(0), IndexError);
  EXPECT_THROW(c.v(51), IndexError);
  EXPECT_THROW(Coeffs(0.0, 10), ConfigError);
  EXPECT_THROW(Coeffs(0.5, 0), ConfigError);
  const Coeffs half(0.5, 10);
  for (std::int64_t k = 1; k <= 10; ++k) {
    EXPECT_EQ(half.a(k), 1.0);
    EXPECT_EQ(half.v(k), static_cast<double>(k));
  }
}

TEST(Coeffs, MonotoneWithKnownMaximum) {
  for (double p : kGridP) {
    const Coeffs c(p, 2000);
    double mx = 0.0;
    for (std::int64_t k = 2; k <= 2000; ++k) {
      mx = std::max(mx, c.a(k));
      if (k > 2) {
        if (p <= 0.5)
          ASSERT_GE(c.a(k), c.a(k - 1));
        else
          ASSERT_LT(c.a(k), c.a(k - 1));
      }
    }
    const double expect = p <= 0.5 ? c.a(2000) : 1.0 / (2.0 * p);
    EXPECT_NEAR(mx, expect, 1e-14) << p;
  }
}

TEST(Coeffs, Asymptotics) {
  for (double p : {0.3, 0.6, 0.75}) {
    const AsymptoticReport r = asymptotic_check(Coeffs(p, 1000000));
    EXPECT_NEAR(r.a_ratio, 1.0, 0.01) << p;
  }
  const AsymptoticReport mid = asymptotic_check(Coeffs(0.6, 1000000));
  ASSERT_TRUE(mid.v_ratio.has_value());
  EXPECT_NEAR(*mid.v_ratio, 1.0, 0.02);
  const Coeffs crit(0.75, 1000000);
  ASSERT_TRUE(asymptotic_check(crit).critical_ratio.has_value());
  const LinearFit f = critical_log_slope(crit, 10000, 1000000);
  EXPECT_NEAR(f.slope, std::numbers::pi / 4.0, 0.02 * std::numbers::pi / 4.0);
  EXPECT_FALSE(asymptotic_check(Coeffs(0.9, 100)).v_ratio.has_value());
}

TEST(Coeffs, RegimeBoundary) {
  EXPECT_EQ(classify_regime(0.75), Regime::critical);
  EXPECT_EQ(classify_regime(std::nextafter(0.75, 0.0)), Regime::diffusive);
  EXPECT_EQ(classify_regime(std::nextafter(0.75, 1.0)), Regime::superdiffusive);
  EXPECT_STREQ(regime_name(Regime::critical), "critical");
}

// ---- lattice DP --------------------------------------------------------------

TEST(Lattice, TwoStepEnumeration) {
  const LatticeDist d = dp_distribution(0.75, 0.5, 2);
  EXPECT_DOUBLE_EQ(d.prob(2), 0.375);
  EXPECT_DOUBLE_EQ(d.prob(0), 0.25);
  EXPECT_DOUBLE_EQ(d.prob(-2), 0.375);
  EXPECT_EQ(d.prob(1), 0.0);
  EXPECT_EQ(d.prob(4), 0.0);
}

TEST(Lattice, MatchesHistoryEnumeration) {
  for (auto [p, q] : {std::pair{0.2, 0.5}, std::pair{0.75, 0.3}, std::pair{0.95, 0.9}, std::pair{1.0, 0.6}}) {
    for (int n : {1, 3, 7, 11}) {
      const auto law = enumerate_walk(p, q, n);
      const LatticeDist d = dp_distribution(p, q, n);
      for (std::int64_t t = -n; t <= n; t += 2) {
        const auto it = law.find(t);
        const double expect = it == law.end() ? 0.0 : static_cast<double>(it->second);
        EXPECT_NEAR(d.prob(t), expect, 1e-14) << "p=" << p << " q=" << q << " n=" << n << " t=" << t;
      }
    }
  }
}

TEST(Lattice, MassAndSnapshots) {
  const std::int64_t grid[] = {1, 5, 64, 300};
  const auto snaps = dp_snapshots(0.6, 0.8, grid);
  ASSERT_EQ(snaps.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(snaps[i].n(), grid[i]);
    EXPECT_NEAR(snaps[i].total(), 1.0, 1e-13);
    const LatticeDist direct = dp_distribution(0.6, 0.8, grid[i]);
    for (std::size_t j = 0; j < direct.size(); ++j) EXPECT_EQ(snaps[i].masses()[j], direct.masses()[j]);
  }
}

TEST(Lattice, BudgetAndArguments) {
  EXPECT_THROW(dp_distribution(0.5, 0.5, kDpBudget + 1), BudgetError);
  EXPECT_THROW(dp_distribution(0.5, 0.5, 0), ConfigError);
  EXPECT_THROW(dp_distribution(0.5, 0.0, 4), ConfigError);
  const std::int64_t unsorted[] = {5, 3};
  EXPECT_THROW(dp_snapshots(0.5, 0.5, unsorted), ConfigError);
}

TEST(Lattice, MartingaleMeanIsExact) {
  for (double p : kGridP) {
    const std::int64_t n = 500;
    const Coeffs c(p, n);
    const LatticeDist d = dp_distribution(p, 0.7, n);
    double abs1 = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) abs1 += std::abs(static_cast<double>(d.point(j))) * d.masses()[j];
    EXPECT_NEAR(c.a(n) * d.moment(1), 2.0 * 0.7 - 1.0, 1e-12 * c.a(n) * abs1) << p;
  }
}

// ---- moments -----------------------------------------------------------------

TEST(Moments, RecursionsMatchDp) {
  for (double p : {0.2, 0.5, 0.7, 0.75, 0.95}) {
    for (double q : {0.3, 0.5, 1.0}) {
      const MomentTable t = moment_recursions(p, q, 100);
      for (std::int64_t n = 1; n <= 100; ++n) {
        const LatticeDist d = dp_distribution(p, q, n);
        const auto i = static_cast<std::size_t>(n);
        for (int k = 1; k <= 3; ++k) {
          const double rec = k == 1 ? t.m1[i] : k == 2 ? t.m2[i] : t.m3[i];
          double scale = 0.0;
          for (std::size_t j = 0; j < d.size(); ++j)
            scale += std::pow(std::abs(static_cast<double>(d.point(j))), k) * d.masses()[j];
          ASSERT_NEAR(d.moment(k), rec, 1e-12 * std::max(1.0, scale)) << p << " " << q << " " << n << " " << k;
        }
      }
    }
  }
}

TEST(Moments, MartingaleVarianceMatchesDp) {
  for (double p : {0.2, 0.5, 0.7, 0.75, 0.95}) {
    for (double q : {0.3, 0.5, 1.0}) {
      const std::int64_t n = 200;
      const MomentTable t = moment_recursions(p, q, n);
      const Coeffs c(p, n);
      const LatticeDist d = dp_distribution(p, q, n);
      const double a = c.a(n);
      const double var_dp = a * a * (d.moment(2) - d.moment(1) * d.moment(1));
      EXPECT_NEAR(t.var_m[n], var_dp, 1e-10 * std::max(1.0, var_dp)) << p << " " << q;
    }
  }
}

TEST(Moments, PublishedVarianceFormHoldsForUnbiasedFirstStep) {
  // v_n - (2p - 1)^2 E zeta_n equals Var M_n when q = 1/2; otherwise it is off by (2q - 1)^2.
  for (double q : {0.5, 0.8}) {
    const MomentTable t = moment_recursions(0.7, q, 50);
    const Coeffs c(0.7, 50);
    const double published = c.v(50) - 0.4 * 0.4 * t.e_zeta[50];
    EXPECT_NEAR(published - t.var_m[50], (2.0 * q - 1.0) * (2.0 * q - 1.0), 1e-12);
  }
}

TEST(Moments, VarianceBounds) {
  for (double p : kGridP) {
    for (double q : {0.5, 0.9}) {
      const std::int64_t n = 10000;
      const MomentTable t = moment_recursions(p, q, n);
      const Coeffs c(p, n);
      for (std::int64_t k = 1; k <= n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        ASSERT_LE(t.var_m[i], c.v(k) * (1.0 + 1e-12));
        const double a = c.a(k);
        ASSERT_LE(a * a * t.m2[i], 2.0 * (1.0 + c.v(k)) * (1.0 + 1e-12));
        if (q == 0.5 && k >= 2) {
          if (p == 0.5)
            ASSERT_NEAR(t.var_m[i], c.v(k), 1e-12 * c.v(k));
          else
            ASSERT_LT(t.var_m[i], c.v(k));
        }
      }
    }
  }
}

TEST(Moments, IncrementBound) {
  for (double p : kGridP) {
    const std::int64_t n = 200;
    const Coeffs c(p, n);
    for (double q : {0.3, 1.0}) {
      for (int x1 : {-1, 1}) EXPECT_LE(std::abs(x1 - (2.0 * q - 1.0)), 2.0 * c.a(1));
    }
    for (std::int64_t k = 2; k <= n; ++k) {
      for (std::int64_t t = -(k - 1); t <= k - 1; t += 2) {
        for (int x : {-1, 1}) {
          const double dm = c.a(k) * (x - (2.0 * p - 1.0) * static_cast<double>(t) / static_cast<double>(k - 1));
          ASSERT_LE(std::abs(dm), 2.0 * c.a(k) * (1.0 + 1e-15));
        }
      }
    }
  }
}

TEST(Moments, ConditionalMomentsMatchTwoPointLaw) {
  Philox4x32 eng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const double p = 0.01 + 0.99 * uniform01(eng);
    const auto k = static_cast<std::int64_t>(2 + uniform_below(eng, 5000));
    const std::int64_t t = -(k - 1) + 2 * static_cast<std::int64_t>(uniform_below(eng, static_cast<std::uint64_t>(k)));
    const double a = gamma_form_a(p, k);
    const double mu = (2.0 * p - 1.0) * static_cast<double>(t) / static_cast<double>(k - 1);
    const double up = 0.5 * (1.0 + mu);
    double m3 = 0.0, m4 = 0.0;
    for (int x : {1, -1}) {
      const double w = x > 0 ? up : 1.0 - up;
      const double d = a * (x - mu);
      m3 += w * d * d * d;
      m4 += w * d * d * d * d;
    }
    const ConditionalMoments cm = lemma42_identities(p, a, t, k);
    const double a3 = a * a * a, a4 = a3 * a;
    ASSERT_NEAR(cm.third, m3, 1e-12 * a3);
    ASSERT_NEAR(cm.fourth, m4, 1e-12 * a4);
    const double ratio = static_cast<double>(t) / static_cast<double>(k - 1);
    ASSERT_LE(std::abs(cm.third), 4.0 * a3 * std::abs(ratio) + 1e-15 * a3);
    ASSERT_LE(std::abs(cm.fourth - a4), 5.0 * a4 * ratio * ratio + 1e-15 * a4);
  }
}

TEST(Moments, FirstStepConvention) {
  // With T_0 / 0 = 1 the formulas describe X_1 - (2q - 1) exactly when q = p.
  for (double p : {0.2, 0.6, 0.9}) {
    const double q = p;
    const double c = 2.0 * q - 1.0;
    const double m3 = q * std::pow(1.0 - c, 3) + (1.0 - q) * std::pow(-1.0 - c, 3);
    const double m4 = q * std::pow(1.0 - c, 4) + (1.0 - q) * std::pow(-1.0 - c, 4);
    const ConditionalMoments cm = lemma42_identities(p, 1.0, 0, 1);
    EXPECT_NEAR(cm.third, m3, 1e-14);
    EXPECT_NEAR(cm.fourth, m4, 1e-14);
  }
  EXPECT_THROW(lemma42_identities(0.5, 1.0, 1, 1), ConfigError);
  EXPECT_THROW(lemma42_identities(0.5, 1.0, 2, 4), ConfigError);
  EXPECT_THROW(lemma42_identities(0.5, 1.0, 5, 4), ConfigError);
}
