#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "ppsolve/system.hpp"

namespace ppsolve::cli {

enum class Command { Solve, Qualitative, Policy, Bssg, Convert, Normalize };
enum class OutputFormat { Human, Json };

struct Config {
  Command command = Command::Solve;
  std::string input;
  std::size_t j = 20;
  Rational epsilon = Rational(1, 1024);
  OutputFormat format = OutputFormat::Human;
  /// Print exact rationals next to the truncated decimals.
  bool exact = false;
  /// Pure systems: run both the LP and the Newton path and compare.
  bool differential_lp = false;
  std::optional<std::size_t> override_precision;
  Objective objective = Objective::MaximizeExtinction;
  /// bssg: JSON file {"max": {...}, "min": {...}} to check instead of searching.
  std::optional<std::string> candidate;
};

/// Exit status: 0 success, 1 input error, 2 internal invariant violated.
/// Errors go to `err` as a single line "error: <kind>: <reason>".
int run(const Config& config, std::ostream& out, std::ostream& err);

/// Number of decimal digits certified by a 2^-j error bound: ceil(j log10 2).
std::size_t certified_digits(std::size_t j);

}  // namespace ppsolve::cli
