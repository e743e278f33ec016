#pragma once

#include <cmath>
#include <span>

#include "erwlab/errors.hpp"

namespace erwlab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;  // zero when only two points
  std::size_t points = 0;
};

// Ordinary least squares of y on x.
inline LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("ols_fit: x and y lengths differ");
  const std::size_t k = x.size();
  if (k < 2) throw NumericalError("ols_fit: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw NumericalError("ols_fit: abscissae are all equal");
  LinearFit fit;
  fit.points = k;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (k > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double e = y[i] - fit.intercept - fit.slope * x[i];
      ssr += e * e;
    }
    fit.slope_se = std::sqrt(ssr / static_cast<double>(k - 2) / sxx);
  }
  return fit;
}

}  // namespace erwlab
