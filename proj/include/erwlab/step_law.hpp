#pragma once

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include "erwlab/errors.hpp"
#include "erwlab/normal.hpp"
#include "erwlab/rng.hpp"

namespace erwlab {

enum class StepKind { constant, exponential, lognormal, two_point, pareto };

// Law of the step sizes Z_i. Every kind is strictly positive and is rescaled
// at construction so that E Z = 1; variance and absolute moments are the
// analytic values of the rescaled law.
class StepLaw {
 public:
  static StepLaw constant() { return StepLaw(StepKind::constant, 1.0, 0.0, 0.0); }

  // Any rate gives Exp(1) after rescaling; the raw rate is kept for the record.
  static StepLaw exponential(double rate = 1.0) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw ConfigError("step law exponential: rate must be > 0");
    return StepLaw(StepKind::exponential, rate, 0.0, 0.0);
  }

  // exp(mu + s N); the location mu cancels under rescaling.
  static StepLaw lognormal(double log_sd, double log_mean = 0.0) {
    if (!(log_sd > 0.0) || !std::isfinite(log_sd) || !std::isfinite(log_mean))
      throw ConfigError("step law lognormal: log-scale sd must be > 0");
    return StepLaw(StepKind::lognormal, log_sd, log_mean, 0.0);
  }

  // Value `low` with probability `prob_low`, else `high`.
  static StepLaw two_point(double low, double high, double prob_low) {
    if (!(low > 0.0) || !(high > 0.0) || !std::isfinite(low) || !std::isfinite(high))
      throw ConfigError("step law two_point: both values must be > 0");
    if (!(prob_low > 0.0 && prob_low < 1.0)) throw ConfigError("step law two_point: probability must lie in (0, 1)");
    return StepLaw(StepKind::two_point, low, high, prob_low);
  }

  // Two-point law with mean 1 and standard deviation `sd`, putting mass
  // `prob_low` on the smaller value. Needs prob_low > sd^2 / (1 + sd^2).
  static StepLaw two_point_with_sd(double sd, double prob_low) {
    if (!(sd > 0.0)) throw ConfigError("step law two_point: sd must be > 0");
    if (!(prob_low > 0.0 && prob_low < 1.0)) throw ConfigError("step law two_point: probability must lie in (0, 1)");
    const double low = 1.0 - sd * std::sqrt((1.0 - prob_low) / prob_low);
    const double high = 1.0 + sd * std::sqrt(prob_low / (1.0 - prob_low));
    if (!(low > 0.0)) throw ConfigError("step law two_point: sd too large for the requested probability");
    return two_point(low, high, prob_low);
  }

  // Pareto with tail index `shape` and scale `scale`. E Z^s < inf iff s < shape,
  // so shape > 2 is needed for a finite variance.
  static StepLaw pareto(double shape, double scale = 1.0) {
    if (!(shape > 2.0) || !std::isfinite(shape)) throw ConfigError("step law pareto: shape must be > 2 (finite variance)");
    if (!(scale > 0.0)) throw ConfigError("step law pareto: scale must be > 0");
    return StepLaw(StepKind::pareto, shape, scale, 0.0);
  }

  StepKind kind() const noexcept { return kind_; }
  double raw_param(int i) const noexcept { return i == 0 ? raw_[0] : i == 1 ? raw_[1] : raw_[2]; }
  double mean() const noexcept { return 1.0; }
  double variance() const noexcept { return variance_; }
  double sd() const noexcept { return std::sqrt(variance_); }

  // Exclusive upper limit on rho for which E Z^{2+rho} is finite; nullopt when
  // every moment is finite.
  std::optional<double> rho_limit() const noexcept {
    if (kind_ == StepKind::pareto) return raw_[0] - 2.0;
    return std::nullopt;
  }

  // E |Z|^{2 + rho} for rho in (0, 1]. Infinite moments are reported as an error.
  double rho_moment(double rho) const {
    if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("rho_moment: rho must lie in (0, 1]");
    if (auto lim = rho_limit(); lim && rho >= *lim)
      throw ConfigError("rho_moment: E Z^(2+rho) is infinite for this pareto law");
    return moment(2.0 + rho);
  }

  // E Z^s of the normalized law, s > 0.
  double moment(double s) const {
    switch (kind_) {
      case StepKind::constant:
        return 1.0;
      case StepKind::exponential:
        return std::tgamma(s + 1.0);
      case StepKind::lognormal: {
        const double sig = raw_[0];
        return std::exp(0.5 * s * (s - 1.0) * sig * sig);
      }
      case StepKind::two_point:
        return low_prob_ * std::pow(low_, s) + (1.0 - low_prob_) * std::pow(high_, s);
      case StepKind::pareto: {
        const double a = raw_[0];
        if (s >= a) return std::numeric_limits<double>::infinity();
        return a * std::pow(pareto_xm_, s) / (a - s);
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  template <class Engine>
  double sample(Engine& eng) const {
    switch (kind_) {
      case StepKind::constant:
        return 1.0;
      case StepKind::exponential:
        return -std::log(uniform_open_closed(eng));
      case StepKind::lognormal: {
        const double sig = raw_[0];
        return std::exp(sig * normal_quantile(uniform_open(eng)) - 0.5 * sig * sig);
      }
      case StepKind::two_point:
        return uniform01(eng) < low_prob_ ? low_ : high_;
      case StepKind::pareto:
        return pareto_xm_ * std::pow(uniform_open_closed(eng), -1.0 / raw_[0]);
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  // Canonical text form, parsed back by parse_step_law.
  std::string describe() const {
    switch (kind_) {
      case StepKind::constant:
        return "constant";
      case StepKind::exponential:
        return raw_[0] == 1.0 ? "exponential" : "exponential:" + format_param(raw_[0]);
      case StepKind::lognormal:
        return "lognormal:" + format_param(raw_[0]);
      case StepKind::two_point:
        return "twopoint:" + format_param(raw_[0]) + ":" + format_param(raw_[1]) + ":" + format_param(raw_[2]);
      case StepKind::pareto:
        return "pareto:" + format_param(raw_[0]);
    }
    return "?";
  }

 private:
  static std::string format_param(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  }

  StepLaw(StepKind kind, double r0, double r1, double r2) : kind_(kind), raw_{r0, r1, r2} {
    switch (kind_) {
      case StepKind::constant:
        variance_ = 0.0;
        break;
      case StepKind::exponential:
        variance_ = 1.0;
        break;
      case StepKind::lognormal:
        variance_ = std::expm1(r0 * r0);
        break;
      case StepKind::two_point: {
        const double raw_mean = r2 * r0 + (1.0 - r2) * r1;
        low_ = r0 / raw_mean;
        high_ = r1 / raw_mean;
        low_prob_ = r2;
        variance_ = low_prob_ * (low_ - 1.0) * (low_ - 1.0) + (1.0 - low_prob_) * (high_ - 1.0) * (high_ - 1.0);
        break;
      }
      case StepKind::pareto: {
        const double a = r0;
        pareto_xm_ = (a - 1.0) / a;
        variance_ = a * pareto_xm_ * pareto_xm_ / (a - 2.0) - 1.0;
        break;
      }
    }
  }

  StepKind kind_;
  double raw_[3];
  double variance_ = 0.0;
  double low_ = 1.0, high_ = 1.0, low_prob_ = 1.0;
  double pareto_xm_ = 1.0;
};

namespace detail {

inline double parse_double_field(const std::string& text, const std::string& what) {
  double out = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last) throw ConfigError("step law: cannot parse " + what + " '" + text + "'");
  return out;
}

}  // namespace detail

// Inverse of StepLaw::describe. Accepted forms: constant, exponential[:rate],
// lognormal:<sd>, twopoint:<low>:<high>:<prob_low>, twopoint-sd:<sd>:<prob_low>,
// pareto:<shape>.
inline StepLaw parse_step_law(const std::string& spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  const std::string& kind = parts[0];
  const auto arg = [&](std::size_t i) { return detail::parse_double_field(parts.at(i), kind + " parameter"); };
  const auto want = [&](std::size_t count) {
    if (parts.size() != count + 1)
      throw ConfigError("step law '" + spec + "': expected " + std::to_string(count) + " parameter(s)");
  };
  if (kind == "constant") {
    want(0);
    return StepLaw::constant();
  }
  if (kind == "exponential") {
    if (parts.size() == 1) return StepLaw::exponential();
    want(1);
    return StepLaw::exponential(arg(1));
  }
  if (kind == "lognormal") {
    want(1);
    return StepLaw::lognormal(arg(1));
  }
  if (kind == "twopoint") {
    want(3);
    return StepLaw::two_point(arg(1), arg(2), arg(3));
  }
  if (kind == "twopoint-sd") {
    want(2);
    return StepLaw::two_point_with_sd(arg(1), arg(2));
  }
  if (kind == "pareto") {
    want(1);
    return StepLaw::pareto(arg(1));
  }
  throw ConfigError("unknown step law '" + kind + "'");
}

}  // namespace erwlab
