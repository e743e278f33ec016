#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "erwlab/coeffs.hpp"
#include "erwlab/errors.hpp"
#include "erwlab/lattice.hpp"

namespace erwlab {

// Finitely supported law on the real line: strictly increasing support points
// with nonnegative weights summing to one. An empirical CDF is the special
// case of m samples with weight 1/m each (ties merged).
class DiscreteDist {
 public:
  // Empirical law of a sample.
  static DiscreteDist from_sample(std::span<const double> sample) {
    if (sample.empty()) throw ConfigError("empirical distribution of an empty sample");
    std::vector<double> xs(sample.begin(), sample.end());
    for (double x : xs)
      if (!std::isfinite(x)) throw NumericalError("empirical distribution: non-finite sample value");
    std::sort(xs.begin(), xs.end());
    // Ties merged here so that a point seen c times gets weight exactly c / m.
    const auto m = static_cast<double>(xs.size());
    std::vector<double> ux, ws;
    for (std::size_t i = 0; i < xs.size();) {
      std::size_t j = i;
      while (j < xs.size() && xs[j] == xs[i]) ++j;
      ux.push_back(xs[i]);
      ws.push_back(static_cast<double>(j - i) / m);
      i = j;
    }
    DiscreteDist d(std::move(ux), std::move(ws));
    d.sample_size_ = sample.size();
    return d;
  }

  // Weighted law; points need not be sorted. Weights must sum to 1 within 1e-9.
  static DiscreteDist from_weighted(std::vector<double> points, std::vector<double> weights) {
    if (points.empty()) throw ConfigError("discrete distribution with no support points");
    if (points.size() != weights.size()) throw ConfigError("discrete distribution: points and weights differ in length");
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return points[i] < points[j]; });
    std::vector<double> xs, ws;
    xs.reserve(points.size());
    ws.reserve(points.size());
    CompensatedSum total;
    for (std::size_t i : order) {
      if (!std::isfinite(points[i])) throw NumericalError("discrete distribution: non-finite support point");
      if (!(weights[i] >= 0.0)) throw ConfigError("discrete distribution: negative weight");
      xs.push_back(points[i]);
      ws.push_back(weights[i]);
      total.add(weights[i]);
    }
    if (std::abs(total.value() - 1.0) > 1e-9) throw ConfigError("discrete distribution: weights do not sum to 1");
    return DiscreteDist(std::move(xs), std::move(ws));
  }

  static DiscreteDist point_mass(double x) { return from_weighted({x}, {1.0}); }

  std::size_t size() const noexcept { return x_.size(); }
  std::span<const double> points() const noexcept { return x_; }
  std::span<const double> weights() const noexcept { return w_; }
  double point(std::size_t i) const noexcept { return x_[i]; }
  double weight(std::size_t i) const noexcept { return w_[i]; }

  // F(x_i) = P(X <= x_i), summed from the left.
  double cdf_at(std::size_t i) const noexcept { return below_[i + 1]; }
  // P(X < x_i).
  double cdf_before(std::size_t i) const noexcept { return below_[i]; }
  // P(X > x_i), summed from the right so small upper tails keep full precision.
  double sf_at(std::size_t i) const noexcept { return above_[i + 1]; }
  // P(X >= x_i).
  double sf_before(std::size_t i) const noexcept { return above_[i]; }

  // Number of samples behind an empirical law; 0 for an exact law.
  std::size_t sample_size() const noexcept { return sample_size_; }
  bool is_sample() const noexcept { return sample_size_ > 0; }

  double mean() const noexcept {
    CompensatedSum s;
    for (std::size_t i = 0; i < x_.size(); ++i) s.add(x_[i] * w_[i]);
    return s.value();
  }
  double variance() const noexcept {
    const double mu = mean();
    CompensatedSum s;
    for (std::size_t i = 0; i < x_.size(); ++i) s.add((x_[i] - mu) * (x_[i] - mu) * w_[i]);
    return s.value();
  }

  DiscreteDist shifted(double delta) const {
    DiscreteDist out = *this;
    for (double& x : out.x_) x += delta;
    return out;
  }

  // Affine image x -> scale * x + shift with scale > 0.
  DiscreteDist affine(double scale, double shift) const {
    if (!(scale > 0.0)) throw ConfigError("affine image needs a positive scale");
    DiscreteDist out = *this;
    for (double& x : out.x_) x = scale * x + shift;
    return out;
  }

 private:
  DiscreteDist(std::vector<double> xs, std::vector<double> ws) {
    // Merge ties.
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!x_.empty() && xs[i] == x_.back())
        w_.back() += ws[i];
      else
        x_.push_back(xs[i]), w_.push_back(ws[i]);
    }
    const std::size_t k = x_.size();
    below_.assign(k + 1, 0.0);
    above_.assign(k + 1, 0.0);
    CompensatedSum lo, hi;
    for (std::size_t i = 0; i < k; ++i) {
      lo.add(w_[i]);
      below_[i + 1] = std::min(1.0, lo.value());
    }
    // above_[i] = P(X >= x_i); above_[k] = 0.
    for (std::size_t i = k; i-- > 0;) {
      hi.add(w_[i]);
      above_[i] = std::min(1.0, hi.value());
    }
  }

  std::vector<double> x_;
  std::vector<double> w_;
  std::vector<double> below_;
  std::vector<double> above_;
  std::size_t sample_size_ = 0;
};

// Law of (a_n T_n - (2q - 1)) / sqrt(v_n), the centred and scaled position of
// the walk with unit steps, as the pushforward of the exact lattice law.
inline DiscreteDist exact_statistic_dist(const LatticeDist& law, double q, const Coeffs& coeffs) {
  const std::int64_t n = law.n();
  const double a = coeffs.a(n);
  const double scale = std::sqrt(coeffs.v(n));
  const double bias = 2.0 * q - 1.0;
  std::vector<double> xs(law.size()), ws(law.masses().begin(), law.masses().end());
  for (std::size_t j = 0; j < law.size(); ++j) xs[j] = (a * static_cast<double>(law.point(j)) - bias) / scale;
  return DiscreteDist::from_weighted(std::move(xs), std::move(ws));
}

inline DiscreteDist exact_statistic_dist(double p, double q, std::int64_t n, const Coeffs& coeffs) {
  if (coeffs.p() != p) throw ConfigError("exact_statistic_dist: coefficients built for a different p");
  return exact_statistic_dist(dp_distribution(p, q, n), q, coeffs);
}

}  // namespace erwlab
