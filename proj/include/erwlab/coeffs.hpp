#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "erwlab/errors.hpp"
#include "erwlab/regression.hpp"

namespace erwlab {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline void require_memory_parameter(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p must lie in (0, 1]");
}

// Deterministic normalizing sequences of the walk, indexed from 1:
//   gamma_k = 1 + (2p - 1)/k,  a_1 = 1,  a_{k+1} = a_k / gamma_k,  v_k = sum_{i<=k} a_i^2.
// a_k is held as log a_k.
class Coeffs {
 public:
  Coeffs(double p, std::int64_t n_max) : p_(p), n_max_(n_max) {
    require_memory_parameter(p);
    if (n_max < 1) throw ConfigError("coefficients need n_max >= 1");
    const auto size = static_cast<std::size_t>(n_max) + 1;
    log_a_.assign(size, 0.0);
    v_.assign(size, 0.0);
    const double drift = 2.0 * p - 1.0;
    CompensatedSum log_a;
    CompensatedSum v;
    v.add(1.0);
    v_[1] = 1.0;
    for (std::int64_t k = 1; k < n_max; ++k) {
      log_a.add(-std::log1p(drift / static_cast<double>(k)));
      const auto next = static_cast<std::size_t>(k + 1);
      log_a_[next] = log_a.value();
      v.add(std::exp(2.0 * log_a_[next]));
      v_[next] = v.value();
    }
  }

  double p() const noexcept { return p_; }
  std::int64_t n_max() const noexcept { return n_max_; }

  double gamma(std::int64_t k) const {
    check(k);
    return 1.0 + (2.0 * p_ - 1.0) / static_cast<double>(k);
  }
  double log_a(std::int64_t n) const {
    check(n);
    return log_a_[static_cast<std::size_t>(n)];
  }
  double a(std::int64_t n) const { return std::exp(log_a(n)); }
  double v(std::int64_t n) const {
    check(n);
    return v_[static_cast<std::size_t>(n)];
  }

 private:
  void check(std::int64_t n) const {
    if (n < 1 || n > n_max_) throw IndexError("coefficient index " + std::to_string(n) + " outside [1, n_max]");
  }

  double p_;
  std::int64_t n_max_;
  std::vector<double> log_a_;
  std::vector<double> v_;
};

inline Coeffs build_coeffs(double p, std::int64_t n_max) { return Coeffs(p, n_max); }

// a_n through log-Gamma: Gamma(n) Gamma(2p) / Gamma(n + 2p - 1).
inline double gamma_form_a(double p, std::int64_t n) {
  require_memory_parameter(p);
  if (n < 1) throw IndexError("gamma_form_a: n must be >= 1");
  if (n == 1) return 1.0;
  const double x = static_cast<double>(n);
  return std::exp(std::lgamma(x) + std::lgamma(2.0 * p) - std::lgamma(x + 2.0 * p - 1.0));
}

enum class Regime { diffusive, critical, superdiffusive };

inline Regime classify_regime(double p) {
  require_memory_parameter(p);
  if (p < 0.75) return Regime::diffusive;
  if (p == 0.75) return Regime::critical;
  return Regime::superdiffusive;
}

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::diffusive:
      return "diffusive";
    case Regime::critical:
      return "critical";
    case Regime::superdiffusive:
      return "superdiffusive";
  }
  return "?";
}

struct AsymptoticReport {
  std::int64_t n = 0;
  double a_ratio = 0.0;                 // a_n n^{2p-1} / Gamma(2p)
  std::optional<double> v_ratio;        // v_n / (n^{3-4p} Gamma(2p)^2 / (3-4p)), p < 3/4
  std::optional<double> critical_ratio; // v_n / ((pi/4) log n), p = 3/4
};

// Ratios of the coefficients to their limiting forms at n = n_max; each tends to 1.
inline AsymptoticReport asymptotic_check(const Coeffs& c) {
  const double p = c.p();
  const std::int64_t n = c.n_max();
  const double x = static_cast<double>(n);
  AsymptoticReport out;
  out.n = n;
  out.a_ratio = std::exp(c.log_a(n) + (2.0 * p - 1.0) * std::log(x) - std::lgamma(2.0 * p));
  switch (classify_regime(p)) {
    case Regime::diffusive: {
      const double e = 3.0 - 4.0 * p;
      const double limit = std::exp(e * std::log(x) + 2.0 * std::lgamma(2.0 * p)) / e;
      out.v_ratio = c.v(n) / limit;
      break;
    }
    case Regime::critical:
      if (n >= 2) out.critical_ratio = c.v(n) / (std::numbers::pi / 4.0 * std::log(x));
      break;
    case Regime::superdiffusive:
      break;
  }
  return out;
}

// Least-squares slope of v_n against log n over `points` log-spaced n in
// [n_lo, n_hi]. In the critical regime it tends to pi/4.
inline LinearFit critical_log_slope(const Coeffs& c, std::int64_t n_lo, std::int64_t n_hi, int points = 200) {
  if (n_lo < 2 || n_hi <= n_lo || n_hi > c.n_max()) throw ConfigError("critical_log_slope: need 2 <= n_lo < n_hi <= n_max");
  if (points < 3) throw ConfigError("critical_log_slope: need at least 3 points");
  std::vector<double> x, y;
  const double lo = std::log(static_cast<double>(n_lo));
  const double hi = std::log(static_cast<double>(n_hi));
  std::int64_t last = 0;
  for (int i = 0; i < points; ++i) {
    const auto n = static_cast<std::int64_t>(std::llround(std::exp(lo + (hi - lo) * i / (points - 1))));
    if (n == last) continue;
    last = n;
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(c.v(n));
  }
  return ols_fit(x, y);
}

}  // namespace erwlab
