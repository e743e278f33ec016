#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "erwlab/coeffs.hpp"
#include "erwlab/errors.hpp"
#include "erwlab/parallel.hpp"
#include "erwlab/rng.hpp"
#include "erwlab/walk.hpp"

namespace erwlab {

enum class Normalization {
  clt_centered,    // (a_n S_n - (2q - 1)) / sqrt(v_n + n a_n^2 sigma^2)
  raw_scaled,      // a_n S_n / sqrt(v_n + n a_n^2 sigma^2)
  lil,             // regime statistic of lil_value at n
  superdiffusive,  // S_n / n^{2p-1}
};

inline const char* normalization_name(Normalization t) {
  switch (t) {
    case Normalization::clt_centered:
      return "clt_centered";
    case Normalization::raw_scaled:
      return "raw_scaled";
    case Normalization::lil:
      return "lil";
    case Normalization::superdiffusive:
      return "superdiffusive";
  }
  return "?";
}

// One value per replica; values[i] depends only on (master_seed, i).
struct SampleSet {
  std::vector<double> values;
  std::int64_t n = 0;
  std::int64_t m = 0;
  WalkParams params;
  Normalization normalization = Normalization::clt_centered;
  std::uint64_t master_seed = 0;
};

// Maps a terminal checkpoint to the requested statistic.
class StatisticMap {
 public:
  StatisticMap(const WalkParams& params, std::int64_t n, Normalization tag) : params_(params), n_(n), tag_(tag) {
    if (n < 1) throw ConfigError("empty walk: n must be >= 1");
    if (tag == Normalization::clt_centered || tag == Normalization::raw_scaled) {
      const Coeffs c(params.p(), n);
      a_ = c.a(n);
      scale_ = std::sqrt(c.v(n) + static_cast<double>(n) * a_ * a_ * params.steps().variance());
    }
    if (tag == Normalization::lil && !lil_value(params.regime(), params.p(), n, 0.0))
      throw ConfigError("lil statistic undefined at n = " + std::to_string(n) + " (burn-in)");
  }

  double operator()(const Checkpoint& c) const {
    switch (tag_) {
      case Normalization::clt_centered:
        return (a_ * c.s - (2.0 * params_.q() - 1.0)) / scale_;
      case Normalization::raw_scaled:
        return a_ * c.s / scale_;
      case Normalization::lil:
        return *lil_value(params_.regime(), params_.p(), c.n, c.s);
      case Normalization::superdiffusive:
        return c.s / std::pow(static_cast<double>(c.n), 2.0 * params_.p() - 1.0);
    }
    return 0.0;
  }

 private:
  WalkParams params_;
  std::int64_t n_;
  Normalization tag_;
  double a_ = 1.0;
  double scale_ = 1.0;
};

// m independent replicas of the normalized statistic at n, replica i
// simulated with the collapsed simulator under derive_seed(master_seed, i).
inline SampleSet sample_statistic(const WalkParams& params, std::int64_t n, std::int64_t m, std::uint64_t master_seed,
                                  Normalization tag, int threads = 0) {
  if (m < 1) throw ConfigError("replica count m must be >= 1");
  const StatisticMap stat(params, n, tag);
  SampleSet out{std::vector<double>(static_cast<std::size_t>(m)), n, m, params, tag, master_seed};
  const std::int64_t final_only[] = {n};
  parallel_for(m, resolve_threads(threads), [&](std::int64_t i) {
    const Trajectory tr = simulate_collapsed(params, n, derive_seed(master_seed, static_cast<std::uint64_t>(i)), final_only);
    const double v = stat(tr.last());
    if (!std::isfinite(v)) throw NumericalError("non-finite statistic");
    out.values[static_cast<std::size_t>(i)] = v;
  });
  return out;
}

// T_n of m replicas under either simulator, replica i under
// derive_seed(master_seed, i).
inline std::vector<std::int64_t> sample_positions(const WalkParams& params, std::int64_t n, std::int64_t m,
                                                  std::uint64_t master_seed, SimulatorTag tag, int threads = 0) {
  if (m < 1) throw ConfigError("replica count m must be >= 1");
  std::vector<std::int64_t> out(static_cast<std::size_t>(m));
  const std::int64_t final_only[] = {n};
  parallel_for(m, resolve_threads(threads), [&](std::int64_t i) {
    out[static_cast<std::size_t>(i)] =
        simulate(tag, params, n, derive_seed(master_seed, static_cast<std::uint64_t>(i)), final_only).last().t;
  });
  return out;
}

}  // namespace erwlab
