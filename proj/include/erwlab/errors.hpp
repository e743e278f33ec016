#pragma once

#include <stdexcept>
#include <string>

namespace erwlab {

// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  ok = 0,
  config = 2,
  budget = 3,
  numerical_floor = 4,
};

class Error : public std::runtime_error {
 public:
  Error(const std::string& what, ExitCode code) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Invalid parameters, regime mismatch, malformed flags, unreadable paths.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what, ExitCode::config) {}
};

// A request beyond a fixed resource budget (DP size, memory).
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error(what, ExitCode::budget) {}
};

// Non-finite draws, degenerate fits, quantities under the numerical floor.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what, ExitCode::numerical_floor) {}
};

// Lookup of a checkpoint or index that does not exist.
class IndexError : public Error {
 public:
  explicit IndexError(const std::string& what) : Error(what, ExitCode::config) {}
};

}  // namespace erwlab
