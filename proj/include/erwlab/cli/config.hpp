#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "erwlab/errors.hpp"

namespace erwlab::cli {

// Everything a subcommand needs. Field names double as JSON keys and, with
// '_' written as '-', as long flag names.
struct RunConfig {
  std::string subcommand;
  std::string target;  // exact: coeffs | dist | moments
  double p = 0.5;
  double q = 0.5;
  std::string steps = "constant";
  std::int64_t n = 1000;
  std::string grid = "64:16384:x2";
  std::int64_t m = 10000;
  std::uint64_t seed = 1;
  std::string out;  // empty or "-" writes to stdout
  std::string format;  // empty: csv for tables, json for reports
  std::string metric = "kolmogorov";
  double r = 1.0;
  std::optional<double> rho;
  double alpha = 0.01;
  std::string mode = "exact";
  int threads = 0;
  std::string simulator = "collapsed";
  std::string checkpoints = "geometric";
  int per_doubling = 0;  // checkpoints per doubling of n; 0: 2 for simulate, 8 for lil
  std::int64_t n_traj = 100;
  std::int64_t burn_in = 1000;
  double slack = 1.1;

  bool operator==(const RunConfig&) const = default;
};

inline void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"subcommand", c.subcommand}, {"target", c.target},   {"p", c.p},
                     {"q", c.q},                   {"steps", c.steps},     {"n", c.n},
                     {"grid", c.grid},             {"m", c.m},             {"seed", c.seed},
                     {"out", c.out},               {"format", c.format},   {"metric", c.metric},
                     {"r", c.r},                   {"alpha", c.alpha},     {"mode", c.mode},
                     {"threads", c.threads},       {"simulator", c.simulator},
                     {"checkpoints", c.checkpoints}, {"per_doubling", c.per_doubling},
                     {"n_traj", c.n_traj},         {"burn_in", c.burn_in}, {"slack", c.slack}};
  j["rho"] = c.rho ? nlohmann::json(*c.rho) : nlohmann::json(nullptr);
}

namespace detail {

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    j.at(key).get_to(dst);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

}  // namespace detail

// Missing keys keep their defaults; unknown keys are rejected.
inline void from_json(const nlohmann::json& j, RunConfig& c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const char* const known[] = {"subcommand", "target", "p", "q", "steps", "n", "grid", "m",
                                      "seed", "out", "format", "metric", "r", "rho", "alpha", "mode",
                                      "threads", "simulator", "checkpoints", "per_doubling", "n_traj",
                                      "burn_in", "slack"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw ConfigError("config: unknown field '" + item.key() + "'");
  }
  detail::read_field(j, "subcommand", c.subcommand);
  detail::read_field(j, "target", c.target);
  detail::read_field(j, "p", c.p);
  detail::read_field(j, "q", c.q);
  detail::read_field(j, "steps", c.steps);
  detail::read_field(j, "n", c.n);
  detail::read_field(j, "grid", c.grid);
  detail::read_field(j, "m", c.m);
  detail::read_field(j, "seed", c.seed);
  detail::read_field(j, "out", c.out);
  detail::read_field(j, "format", c.format);
  detail::read_field(j, "metric", c.metric);
  detail::read_field(j, "r", c.r);
  detail::read_field(j, "alpha", c.alpha);
  detail::read_field(j, "mode", c.mode);
  detail::read_field(j, "threads", c.threads);
  detail::read_field(j, "simulator", c.simulator);
  detail::read_field(j, "checkpoints", c.checkpoints);
  detail::read_field(j, "per_doubling", c.per_doubling);
  detail::read_field(j, "n_traj", c.n_traj);
  detail::read_field(j, "burn_in", c.burn_in);
  detail::read_field(j, "slack", c.slack);
  if (j.contains("rho")) {
    if (j.at("rho").is_null())
      c.rho.reset();
    else
      c.rho = j.at("rho").get<double>();
  }
}

inline RunConfig config_from_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return j.get<RunConfig>();
}

inline std::string config_to_text(const RunConfig& c) { return nlohmann::json(c).dump(2) + "\n"; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline RunConfig load_config(const std::string& path) { return config_from_text(read_file(path)); }

// Shortest decimal form that parses back to the same double.
inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string fmt(std::int64_t x) { return std::to_string(x); }

inline double parse_real(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError(what + ": '" + s + "' is not a number");
  return v;
}

inline std::int64_t parse_count(const std::string& s, const std::string& what) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError(what + ": '" + s + "' is not an integer");
  return v;
}

// Grid forms: "start:stop:x<factor>" (geometric, rounded, deduplicated) or a
// comma-separated list. Result is strictly increasing.
inline std::vector<std::int64_t> parse_grid(const std::string& spec) {
  std::vector<std::int64_t> out;
  if (spec.find(':') != std::string::npos) {
    const auto a = spec.find(':');
    const auto b = spec.find(':', a + 1);
    if (b == std::string::npos || spec.size() < b + 3 || spec[b + 1] != 'x')
      throw ConfigError("grid '" + spec + "': expected start:stop:x<factor>");
    const std::int64_t start = parse_count(spec.substr(0, a), "grid start");
    const std::int64_t stop = parse_count(spec.substr(a + 1, b - a - 1), "grid stop");
    const double factor = parse_real(spec.substr(b + 2), "grid factor");
    if (start < 1 || stop < start) throw ConfigError("grid '" + spec + "': need 1 <= start <= stop");
    if (!(factor > 1.0)) throw ConfigError("grid '" + spec + "': factor must be > 1");
    for (int k = 0;; ++k) {
      const auto v = static_cast<std::int64_t>(
          std::llround(static_cast<double>(start) * std::pow(factor, static_cast<double>(k))));
      if (v > stop) break;
      if (out.empty() || v > out.back()) out.push_back(v);
    }
  } else {
    std::size_t pos = 0;
    while (pos <= spec.size()) {
      const auto comma = spec.find(',', pos);
      const auto end = comma == std::string::npos ? spec.size() : comma;
      const std::int64_t v = parse_count(spec.substr(pos, end - pos), "grid entry");
      if (v < 1) throw ConfigError("grid entries must be >= 1");
      if (!out.empty() && v <= out.back()) throw ConfigError("grid '" + spec + "' must be strictly increasing");
      out.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (out.empty()) throw ConfigError("grid '" + spec + "' is empty");
  return out;
}

}  // namespace erwlab::cli
