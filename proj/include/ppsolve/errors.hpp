#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ppsolve {

/// Malformed user input: bad syntax, violated probabilistic invariants,
/// unknown variables, wrong dimensions, ill-formed policies.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                   ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(std::size_t dimension, std::size_t rank)
      : std::runtime_error("singular matrix: rank " + std::to_string(rank) + " of " +
                           std::to_string(dimension)),
        dimension_(dimension),
        rank_(rank) {}

  std::size_t rank_deficiency() const noexcept { return dimension_ - rank_; }
  std::size_t rank() const noexcept { return rank_; }

 private:
  std::size_t dimension_;
  std::size_t rank_;
};

/// Raised when the policy enumeration ceiling would be exceeded.
class EnumerationCapError : public InputError {
 public:
  using InputError::InputError;
};

/// A condition the theory rules out was observed. Indicates a bug, not bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ppsolve
