#pragma once

#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "erwlab/cli/config.hpp"
#include "erwlab/errors.hpp"
#include "erwlab/lattice.hpp"
#include "erwlab/lil.hpp"
#include "erwlab/rates.hpp"
#include "erwlab/walk.hpp"

namespace erwlab::cli {

// Unquoted comma-separated table with a header line, as written by the tool.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (comma == std::string::npos) return out;
    pos = comma + 1;
  }
}

inline void require_header(const CsvTable& t, const std::vector<std::string>& expect) {
  if (t.header != expect) {
    std::string want;
    for (std::size_t i = 0; i < expect.size(); ++i) want += (i ? "," : "") + expect[i];
    throw ConfigError("csv header mismatch: expected '" + want + "'");
  }
}

inline bool parse_flag(const std::string& s) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw ConfigError("csv: '" + s + "' is not 0 or 1");
}

}  // namespace detail

inline CsvTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CsvTable t;
  if (!std::getline(in, line)) throw ConfigError("csv: empty input");
  t.header = detail::split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = detail::split_line(line);
    if (row.size() != t.header.size())
      throw ConfigError("csv: row " + std::to_string(t.rows.size() + 1) + " has " + std::to_string(row.size()) +
                        " fields, header has " + std::to_string(t.header.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Checkpoint table n,T,S,H.
inline std::vector<Checkpoint> read_checkpoints(const std::string& text) {
  const CsvTable t = parse_csv(text);
  detail::require_header(t, {"n", "T", "S", "H"});
  std::vector<Checkpoint> out;
  for (const auto& r : t.rows)
    out.push_back({parse_count(r[0], "n"), parse_count(r[1], "T"), parse_real(r[2], "S"), parse_real(r[3], "H")});
  return out;
}

// Exact law table t,prob (any row order).
inline LatticeDist read_lattice(const std::string& text) {
  const CsvTable t = parse_csv(text);
  detail::require_header(t, {"t", "prob"});
  if (t.rows.empty()) throw ConfigError("csv: lattice table has no rows");
  const auto n = static_cast<std::int64_t>(t.rows.size()) - 1;
  std::vector<double> mass(t.rows.size(), -1.0);
  for (const auto& r : t.rows) {
    const std::int64_t pt = parse_count(r[0], "t");
    if (pt < -n || pt > n || (pt + n) % 2 != 0) throw ConfigError("csv: lattice point " + r[0] + " off the grid");
    mass[static_cast<std::size_t>((pt + n) / 2)] = parse_real(r[1], "prob");
  }
  for (double m : mass)
    if (m < 0.0) throw ConfigError("csv: lattice table has a missing or negative mass");
  return LatticeDist(n, std::move(mass));
}

// Rate grid n,distance,band,used.
inline std::vector<RatePoint> read_rate_points(const std::string& text) {
  const CsvTable t = parse_csv(text);
  detail::require_header(t, {"n", "distance", "band", "used"});
  std::vector<RatePoint> out;
  for (const auto& r : t.rows)
    out.push_back({parse_count(r[0], "n"), parse_real(r[1], "distance"), parse_real(r[2], "band"),
                   detail::parse_flag(r[3])});
  return out;
}

// LIL trajectories index,seed,max_stat,argmax_n,final_stat,exceeds.
inline std::vector<LilTrajectory> read_lil_trajectories(const std::string& text) {
  const CsvTable t = parse_csv(text);
  detail::require_header(t, {"index", "seed", "max_stat", "argmax_n", "final_stat", "exceeds"});
  std::vector<LilTrajectory> out;
  for (const auto& r : t.rows) {
    LilTrajectory x;
    x.index = parse_count(r[0], "index");
    std::uint64_t seed = 0;
    const auto res = std::from_chars(r[1].data(), r[1].data() + r[1].size(), seed);
    if (res.ec != std::errc() || res.ptr != r[1].data() + r[1].size())
      throw ConfigError("seed: '" + r[1] + "' is not an unsigned integer");
    x.seed = seed;
    x.max_stat = parse_real(r[2], "max_stat");
    x.argmax_n = parse_count(r[3], "argmax_n");
    x.final_stat = parse_real(r[4], "final_stat");
    x.exceeds = detail::parse_flag(r[5]);
    out.push_back(x);
  }
  return out;
}

// Superdiffusive sample replica,L.
inline std::vector<double> read_superdiffusive_sample(const std::string& text) {
  const CsvTable t = parse_csv(text);
  detail::require_header(t, {"replica", "L"});
  std::vector<double> out;
  for (const auto& r : t.rows) {
    if (parse_count(r[0], "replica") != static_cast<std::int64_t>(out.size()))
      throw ConfigError("csv: replica indices out of order");
    out.push_back(parse_real(r[1], "L"));
  }
  return out;
}

}  // namespace erwlab::cli
