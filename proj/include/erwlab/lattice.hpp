#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "erwlab/coeffs.hpp"
#include "erwlab/errors.hpp"

namespace erwlab {

inline constexpr std::int64_t kDpBudget = 30000;

inline void require_first_step_probability(double q) {
  if (!(q > 0.0 && q <= 1.0)) throw ConfigError("q must lie in (0, 1]");
}

// Exact law of T_n. Slot j carries the lattice point t = -n + 2j, j = 0..n.
class LatticeDist {
 public:
  LatticeDist(std::int64_t n, std::vector<double> mass) : n_(n), mass_(std::move(mass)) {
    if (static_cast<std::int64_t>(mass_.size()) != n_ + 1) throw ConfigError("lattice mass has wrong length");
  }

  std::int64_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return mass_.size(); }
  std::int64_t point(std::size_t j) const noexcept { return -n_ + 2 * static_cast<std::int64_t>(j); }
  std::span<const double> masses() const noexcept { return mass_; }

  // P(T_n = t); zero off the support, including the wrong parity.
  double prob(std::int64_t t) const noexcept {
    if (t < -n_ || t > n_ || ((t + n_) & 1) != 0) return 0.0;
    return mass_[static_cast<std::size_t>((t + n_) / 2)];
  }

  double total() const noexcept {
    CompensatedSum s;
    for (double m : mass_) s.add(m);
    return s.value();
  }

  // E[T_n^k].
  double moment(int k) const noexcept {
    CompensatedSum s;
    for (std::size_t j = 0; j < mass_.size(); ++j) s.add(mass_[j] * std::pow(static_cast<double>(point(j)), k));
    return s.value();
  }

 private:
  std::int64_t n_;
  std::vector<double> mass_;
};

namespace detail {

// One transition of the position chain from level k to level k + 1:
// t -> t + 1 with probability (1 + (2p - 1) t / k) / 2, else t - 1.
inline void dp_advance(std::vector<double>& from, std::vector<double>& to, std::int64_t k, double drift) {
  to.assign(static_cast<std::size_t>(k + 2), 0.0);
  const double inv_k = 1.0 / static_cast<double>(k);
  for (std::int64_t j = 0; j <= k; ++j) {
    const double m = from[static_cast<std::size_t>(j)];
    if (m == 0.0) continue;
    const double t = static_cast<double>(2 * j - k);
    const double up = 0.5 * (1.0 + drift * t * inv_k);
    to[static_cast<std::size_t>(j + 1)] += m * up;
    to[static_cast<std::size_t>(j)] += m * (1.0 - up);
  }
  from.swap(to);
}

inline void check_dp_args(double p, double q, std::int64_t n) {
  require_memory_parameter(p);
  require_first_step_probability(q);
  if (n < 1) throw ConfigError("dp_distribution: n must be >= 1");
  if (n > kDpBudget)
    throw BudgetError("dp_distribution: n = " + std::to_string(n) + " exceeds the budget of " +
                      std::to_string(kDpBudget));
}

}  // namespace detail

// Exact law of T_n by forward dynamic programming over the position chain,
// O(n^2) time and O(n) memory.
inline LatticeDist dp_distribution(double p, double q, std::int64_t n) {
  detail::check_dp_args(p, q, n);
  std::vector<double> cur{1.0 - q, q};
  std::vector<double> next;
  const double drift = 2.0 * p - 1.0;
  for (std::int64_t k = 1; k < n; ++k) detail::dp_advance(cur, next, k, drift);
  return LatticeDist(n, std::move(cur));
}

// Laws of T_n at every n of an increasing grid, in one forward pass.
inline std::vector<LatticeDist> dp_snapshots(double p, double q, std::span<const std::int64_t> grid) {
  if (grid.empty()) return {};
  if (!std::is_sorted(grid.begin(), grid.end()) || std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw ConfigError("dp_snapshots: grid must be strictly increasing");
  detail::check_dp_args(p, q, grid.back());
  if (grid.front() < 1) throw ConfigError("dp_snapshots: grid must start at n >= 1");
  std::vector<LatticeDist> out;
  out.reserve(grid.size());
  std::vector<double> cur{1.0 - q, q};
  std::vector<double> next;
  const double drift = 2.0 * p - 1.0;
  std::size_t g = 0;
  for (std::int64_t k = 1;; ++k) {
    while (g < grid.size() && grid[g] == k) out.emplace_back(k, cur), ++g;
    if (g == grid.size()) break;
    detail::dp_advance(cur, next, k, drift);
  }
  return out;
}

}  // namespace erwlab
