#pragma once

#include <string>
#include <string_view>

#include "ppsolve/system.hpp"

namespace ppsolve {

struct ParseOptions {
  /// Accept systems mixing max and min equations (the max-min flavor).
  bool allow_mixed = false;
};

/// Parses the equation-file format:
///
///   eq    := var "=" rhs
///   rhs   := "max(" sum ("," sum)+ ")" | "min(" sum ("," sum)+ ")" | sum
///   sum   := term ("+" term)*
///   term  := coeff ("*" var)* | var ("*" var)*
///   coeff := decimal | integer "/" integer
///
/// One equation per line, '#' starts a comment. Variables are indexed in the
/// order of their defining equations. Coefficients are exact (0.3 -> 3/10).
/// Right-hand sides that already fit forms L, Q or M are stored in that form.
/// Throws ParseError carrying the line and column.
EquationSystem parse_system(std::string_view text, const ParseOptions& options = {});

/// Inverse of parse_system: one line per equation, exact fractions.
std::string format_system(const EquationSystem& sys);
std::string format_equation(const EquationSystem& sys, std::size_t i);

/// Parses a BMDP description:
///
///   type <name>
///   action <name>
///   <p> -> <type> <type> ...
///   <p> -> ()
///
/// Rules that appear before any `action` line of a type form a single
/// implicit action.
Bmdp parse_bmdp(std::string_view text);

}  // namespace ppsolve
