#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "erwlab/coeffs.hpp"
#include "erwlab/errors.hpp"
#include "erwlab/lattice.hpp"

namespace erwlab {

// Exact moments of T_k and of the martingale M_k = a_k T_k - (2q - 1),
// indexed from 1 (slot 0 unused).
struct MomentTable {
  double p = 0.0;
  double q = 0.0;
  std::int64_t n_max = 0;
  std::vector<double> m1;      // E T_k
  std::vector<double> m2;      // E T_k^2
  std::vector<double> m3;      // E T_k^3
  std::vector<double> e_zeta;  // E sum_{j<k} a_{j+1}^2 (T_j / j)^2
  std::vector<double> var_m;   // Var M_k
};

// Moment recursions from the conditional laws
//   E[T_k | F_{k-1}]   = g T_{k-1}
//   E[T_k^2 | F_{k-1}] = (2g - 1) T_{k-1}^2 + 1
//   E[T_k^3 | F_{k-1}] = (3g - 2) T_{k-1}^3 + (g + 2) T_{k-1},   g = gamma_{k-1}.
//
// Var M_k sums the conditional variances of the increments: the first one is
// Var X_1 = 1 - (2q - 1)^2 and the later ones are a_k^2 (1 - ((2p-1) T_{k-1}/(k-1))^2),
// hence Var M_n = v_n - (2q - 1)^2 - (2p - 1)^2 E zeta_n.
inline MomentTable moment_recursions(double p, double q, std::int64_t n_max) {
  require_memory_parameter(p);
  require_first_step_probability(q);
  if (n_max < 1) throw ConfigError("moment_recursions: n_max must be >= 1");
  const Coeffs c(p, n_max);
  const auto size = static_cast<std::size_t>(n_max) + 1;
  MomentTable t;
  t.p = p;
  t.q = q;
  t.n_max = n_max;
  t.m1.assign(size, 0.0);
  t.m2.assign(size, 0.0);
  t.m3.assign(size, 0.0);
  t.e_zeta.assign(size, 0.0);
  t.var_m.assign(size, 0.0);
  const double bias = 2.0 * q - 1.0;
  const double drift = 2.0 * p - 1.0;
  t.m1[1] = bias;
  t.m2[1] = 1.0;
  t.m3[1] = bias;
  CompensatedSum zeta;
  for (std::int64_t k = 2; k <= n_max; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double g = c.gamma(k - 1);
    t.m1[i] = g * t.m1[i - 1];
    t.m2[i] = (2.0 * g - 1.0) * t.m2[i - 1] + 1.0;
    t.m3[i] = (3.0 * g - 2.0) * t.m3[i - 1] + (g + 2.0) * t.m1[i - 1];
    const double prev = static_cast<double>(k - 1);
    zeta.add(std::exp(2.0 * c.log_a(k)) * t.m2[i - 1] / (prev * prev));
    t.e_zeta[i] = zeta.value();
  }
  for (std::int64_t k = 1; k <= n_max; ++k) {
    const auto i = static_cast<std::size_t>(k);
    t.var_m[i] = c.v(k) - bias * bias - drift * drift * t.e_zeta[i];
  }
  return t;
}

struct ConditionalMoments {
  double third = 0.0;
  double fourth = 0.0;
};

// E[dM_k^3 | F_{k-1}] and E[dM_k^4 | F_{k-1}] given T_{k-1} = t_prev, with the
// convention T_0 / 0 = 1 at k = 1 (which describes the first step only when q = p).
inline ConditionalMoments lemma42_identities(double p, double a_k, std::int64_t t_prev, std::int64_t k) {
  require_memory_parameter(p);
  if (k < 1) throw ConfigError("lemma42_identities: k must be >= 1");
  double ratio = 1.0;
  if (k == 1) {
    if (t_prev != 0) throw ConfigError("lemma42_identities: T_0 must be 0");
  } else {
    const std::int64_t prev = k - 1;
    if (t_prev < -prev || t_prev > prev || ((t_prev + prev) & 1) != 0)
      throw ConfigError("lemma42_identities: T_{k-1} violates range or parity");
    ratio = static_cast<double>(t_prev) / static_cast<double>(prev);
  }
  const double c = 2.0 * p - 1.0;
  const double a3 = a_k * a_k * a_k;
  const double a4 = a3 * a_k;
  const double r2 = ratio * ratio;
  ConditionalMoments out;
  out.third = 2.0 * c * a3 * (-ratio + c * c * r2 * ratio);
  out.fourth = a4 + a4 * c * c * (2.0 * r2 - 3.0 * c * c * r2 * r2);
  return out;
}

}  // namespace erwlab
