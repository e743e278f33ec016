#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "erwlab/coeffs.hpp"
#include "erwlab/errors.hpp"
#include "erwlab/lattice.hpp"
#include "erwlab/rng.hpp"
#include "erwlab/step_law.hpp"

namespace erwlab {

// Full model configuration: memory parameter p, first-step probability q and
// the step-size law.
class WalkParams {
 public:
  WalkParams(double p, double q, StepLaw steps = StepLaw::constant()) : p_(p), q_(q), steps_(std::move(steps)) {
    require_memory_parameter(p);
    require_first_step_probability(q);
  }

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  const StepLaw& steps() const noexcept { return steps_; }
  Regime regime() const { return classify_regime(p_); }

 private:
  double p_;
  double q_;
  StepLaw steps_;
};

struct Checkpoint {
  std::int64_t n = 0;
  std::int64_t t = 0;  // T_n, sum of the signs
  double s = 0.0;      // S_n, sum of the signed step sizes
  double h = 0.0;      // H_n, sum of sign * (Z - 1)
};

enum class SimulatorTag { literal, collapsed };

inline const char* simulator_name(SimulatorTag t) { return t == SimulatorTag::literal ? "literal" : "collapsed"; }

struct Trajectory {
  WalkParams params;
  std::int64_t n_final = 0;
  std::vector<Checkpoint> checkpoints;
  std::uint64_t seed = 0;
  SimulatorTag simulator = SimulatorTag::collapsed;

  const Checkpoint& at(std::int64_t n) const {
    const auto it = std::lower_bound(checkpoints.begin(), checkpoints.end(), n,
                                     [](const Checkpoint& c, std::int64_t v) { return c.n < v; });
    if (it == checkpoints.end() || it->n != n) throw IndexError("no checkpoint at n = " + std::to_string(n));
    return *it;
  }
  const Checkpoint& last() const { return checkpoints.back(); }
};

// Geometric checkpoint grid ceil(2^{k/per_doubling}) for k = 0, 1, ...,
// deduplicated, capped at n and always ending with n.
inline std::vector<std::int64_t> geometric_checkpoints(std::int64_t n, int per_doubling = 2) {
  if (n < 1) throw ConfigError("checkpoint grid needs n >= 1");
  if (per_doubling < 1) throw ConfigError("checkpoint grid density must be >= 1");
  std::vector<std::int64_t> out;
  for (int k = 0;; ++k) {
    const auto c = static_cast<std::int64_t>(std::ceil(std::exp2(static_cast<double>(k) / per_doubling) - 1e-9));
    if (c >= n) break;
    if (out.empty() || c != out.back()) out.push_back(c);
  }
  out.push_back(n);
  return out;
}

// Every n in [1, n].
inline std::vector<std::int64_t> dense_checkpoints(std::int64_t n) {
  if (n < 1) throw ConfigError("checkpoint grid needs n >= 1");
  std::vector<std::int64_t> out(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i + 1;
  return out;
}

namespace detail {

inline std::vector<std::int64_t> normalize_checkpoints(std::span<const std::int64_t> requested, std::int64_t n) {
  if (n < 1) throw ConfigError("empty walk: n must be >= 1");
  std::vector<std::int64_t> cps(requested.begin(), requested.end());
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  if (!cps.empty() && (cps.front() < 1 || cps.back() > n))
    throw ConfigError("checkpoints must lie in [1, n]");
  return cps;
}

inline void check_position(std::int64_t n, std::int64_t t) {
  if (t < -n || t > n || ((t + n) & 1) != 0)
    throw NumericalError("walk invariant violated at n = " + std::to_string(n) + ": T = " + std::to_string(t));
}

// Running sums of one path; `step` adds one signed step of size z. S_n is
// formed as H_n + T_n when recorded, so the decomposition holds bit-exactly.
struct PathState {
  std::int64_t t = 0;
  double h = 0.0;

  void step(int sign, double z, bool unit_steps) {
    t += sign;
    if (!unit_steps) {
      if (!std::isfinite(z)) throw NumericalError("simulation fault: non-finite step size");
      h += sign * (z - 1.0);
    }
  }
};

class CheckpointRecorder {
 public:
  CheckpointRecorder(std::vector<std::int64_t> cps) : cps_(std::move(cps)) { out_.reserve(cps_.size()); }
  void maybe_record(std::int64_t n, const PathState& st) {
    if (next_ < cps_.size() && cps_[next_] == n) {
      check_position(n, st.t);
      out_.push_back({n, st.t, st.h + static_cast<double>(st.t), st.h});
      ++next_;
    }
  }
  std::vector<Checkpoint> take() { return std::move(out_); }
  // Next checkpoint still to be recorded, or `fallback` when none is left.
  std::int64_t next_target(std::int64_t fallback) const { return next_ < cps_.size() ? cps_[next_] : fallback; }

 private:
  std::vector<std::int64_t> cps_;
  std::vector<Checkpoint> out_;
  std::size_t next_ = 0;
};

}  // namespace detail

// The walk as defined: the full sign history X_1..X_k is kept (one bit per
// step); step k+1 picks beta uniformly on {1..k}, alpha = +1 with probability
// p, and sets X_{k+1} = alpha X_beta, Y_{k+1} = X_{k+1} Z_{k+1}.
inline Trajectory simulate_literal(const WalkParams& params, std::int64_t n, std::uint64_t seed,
                                   std::span<const std::int64_t> checkpoints) {
  detail::CheckpointRecorder rec(detail::normalize_checkpoints(checkpoints, n));
  Philox4x32 eng(seed);
  const StepLaw& law = params.steps();
  const bool unit = law.kind() == StepKind::constant;
  std::vector<std::uint64_t> history(static_cast<std::size_t>((n + 63) / 64), 0);
  const auto sign_at = [&](std::int64_t i) { return (history[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1u; };

  detail::PathState st;
  const bool first_up = uniform01(eng) < params.q();
  if (first_up) history[0] |= 1u;
  st.step(first_up ? 1 : -1, unit ? 1.0 : law.sample(eng), unit);
  rec.maybe_record(1, st);
  for (std::int64_t k = 1; k < n; ++k) {
    const auto beta = static_cast<std::int64_t>(uniform_below(eng, static_cast<std::uint64_t>(k)));
    const bool keep = uniform01(eng) < params.p();
    const bool up = (sign_at(beta) != 0) == keep;
    if (up) history[static_cast<std::size_t>(k >> 6)] |= std::uint64_t{1} << (k & 63);
    st.step(up ? 1 : -1, unit ? 1.0 : law.sample(eng), unit);
    rec.maybe_record(k + 1, st);
  }
  return Trajectory{params, n, rec.take(), seed, SimulatorTag::literal};
}

// Markov form of the same walk: given T_k, X_{k+1} = +1 with probability
// (1 + (2p - 1) T_k / k) / 2. O(1) memory.
inline Trajectory simulate_collapsed(const WalkParams& params, std::int64_t n, std::uint64_t seed,
                                     std::span<const std::int64_t> checkpoints) {
  detail::CheckpointRecorder rec(detail::normalize_checkpoints(checkpoints, n));
  Philox4x32 eng(seed);
  const StepLaw& law = params.steps();
  const bool unit = law.kind() == StepKind::constant;
  const double half_drift = 0.5 * (2.0 * params.p() - 1.0);

  detail::PathState st;
  const bool first_up = uniform01(eng) < params.q();
  st.step(first_up ? 1 : -1, unit ? 1.0 : law.sample(eng), unit);
  rec.maybe_record(1, st);
  // Segments between checkpoints run without bookkeeping.
  std::int64_t k = 1;
  while (k < n) {
    const std::int64_t stop = std::min(n, rec.next_target(n));
    if (unit) {
      std::int64_t t = st.t;
      for (; k < stop; ++k) {
        const double up_prob = 0.5 + half_drift * static_cast<double>(t) * (1.0 / static_cast<double>(k));
        if (!(up_prob >= 0.0 && up_prob <= 1.0)) throw NumericalError("collapsed simulator: step probability outside [0, 1]");
        t += 2 * static_cast<std::int64_t>(uniform01(eng) < up_prob) - 1;
      }
      st.t = t;
    } else {
      for (; k < stop; ++k) {
        const double up_prob = 0.5 + half_drift * static_cast<double>(st.t) * (1.0 / static_cast<double>(k));
        if (!(up_prob >= 0.0 && up_prob <= 1.0)) throw NumericalError("collapsed simulator: step probability outside [0, 1]");
        const bool up = uniform01(eng) < up_prob;
        st.step(up ? 1 : -1, law.sample(eng), false);
      }
    }
    rec.maybe_record(k, st);
  }
  return Trajectory{params, n, rec.take(), seed, SimulatorTag::collapsed};
}

inline Trajectory simulate(SimulatorTag which, const WalkParams& params, std::int64_t n, std::uint64_t seed,
                           std::span<const std::int64_t> checkpoints) {
  return which == SimulatorTag::literal ? simulate_literal(params, n, seed, checkpoints)
                                        : simulate_collapsed(params, n, seed, checkpoints);
}

// (a_n S_n - (2q - 1)) / sqrt(v_n + n a_n^2 sigma^2).
inline double clt_statistic(const Trajectory& traj, const Coeffs& coeffs, std::int64_t n) {
  const Checkpoint& c = traj.at(n);
  if (coeffs.p() != traj.params.p()) throw ConfigError("clt_statistic: coefficients built for a different p");
  const double a = coeffs.a(n);
  const double var = traj.params.steps().variance();
  return (a * c.s - (2.0 * traj.params.q() - 1.0)) / std::sqrt(coeffs.v(n) + static_cast<double>(n) * a * a * var);
}

// Iterated-log statistics are reported from this n on (log log n > 1).
inline constexpr std::int64_t kLilBurnIn = 16;

// Regime statistic at one n, or nullopt where it is undefined:
//   diffusive       |S_n| / sqrt(n log log n)
//   critical        |S_n| / sqrt(n log n log log log n)
//   superdiffusive  S_n / n^{2p-1}
inline std::optional<double> lil_value(Regime regime, double p, std::int64_t n, double s) {
  const double x = static_cast<double>(n);
  switch (regime) {
    case Regime::diffusive:
      if (n < kLilBurnIn) return std::nullopt;
      return std::abs(s) / std::sqrt(x * std::log(std::log(x)));
    case Regime::critical: {
      if (n < kLilBurnIn) return std::nullopt;
      const double lll = std::log(std::log(std::log(x)));
      if (!(lll > 0.0)) return std::nullopt;
      return std::abs(s) / std::sqrt(x * std::log(x) * lll);
    }
    case Regime::superdiffusive:
      return s / std::pow(x, 2.0 * p - 1.0);
  }
  return std::nullopt;
}

// The regime statistic along the checkpoints of a path. Points inside the
// burn-in are omitted.
inline std::vector<std::pair<std::int64_t, double>> lil_path_statistic(const Trajectory& traj, Regime regime) {
  if (traj.params.regime() != regime)
    throw ConfigError(std::string("lil statistic for the ") + regime_name(regime) + " regime requested, but p = " +
                      std::to_string(traj.params.p()) + " is " + regime_name(traj.params.regime()));
  std::vector<std::pair<std::int64_t, double>> out;
  for (const auto& c : traj.checkpoints)
    if (auto v = lil_value(regime, traj.params.p(), c.n, c.s)) out.emplace_back(c.n, *v);
  return out;
}

}  // namespace erwlab
