#pragma once

#include <cmath>
#include <numbers>

#include "erwlab/errors.hpp"

namespace erwlab {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kInvSqrt2 = 0.707106781186547524400844362105;

inline double normal_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

inline double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x * kInvSqrt2); }

// 1 - Phi(x) without cancellation in the right tail.
inline double normal_sf(double x) noexcept { return 0.5 * std::erfc(x * kInvSqrt2); }

// Antiderivative of Phi: d/dt [t Phi(t) + phi(t)] = Phi(t).
inline double normal_cdf_integral(double t) noexcept { return t * normal_cdf(t) + normal_pdf(t); }

// Antiderivative of t Phi(t) + phi(t).
inline double normal_cdf_integral2(double t) noexcept {
  return 0.5 * (t * t + 1.0) * normal_cdf(t) + 0.5 * t * normal_pdf(t);
}

namespace detail {

// Acklam's rational approximation, relative error ~1e-9, valid for u in (0, 1).
inline double acklam_quantile(double u) noexcept {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double low = 0.02425;
  if (u < low) {
    const double q = std::sqrt(-2.0 * std::log(u));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (u > 1.0 - low) {
    const double q = std::sqrt(-2.0 * std::log1p(-u));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = u - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// One Halley step on Phi(x) = u; the residual is taken in whichever tail
// keeps it free of cancellation.
inline double refine_quantile(double x, double u) noexcept {
  const double e = x <= 0.0 ? normal_cdf(x) - u : (1.0 - u) - normal_sf(x);
  const double step = e / normal_pdf(x);
  return x - step / (1.0 + 0.5 * x * step);
}

}  // namespace detail

inline double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw ConfigError("normal_quantile: argument must lie in (0, 1)");
  double x = detail::acklam_quantile(u);
  x = detail::refine_quantile(x, u);
  return detail::refine_quantile(x, u);
}

// Quantile at 1 - s, accurate when s is tiny.
inline double normal_quantile_upper(double s) { return -normal_quantile(s); }

}  // namespace erwlab
