#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ppsolve/linalg.hpp"

namespace ppsolve {

enum class Relation { LessEqual, GreaterEqual, Equal };
enum class Direction { Minimize, Maximize };

struct Constraint {
  RationalVector row;
  Relation relation = Relation::LessEqual;
  Rational rhs;
};

/// direction objective . x subject to the constraints and optional per-variable
/// bounds. A variable with no lower bound is free; `lower`/`upper` may be left
/// empty, meaning every variable is unbounded on that side.
struct LinearProgram {
  Direction direction = Direction::Minimize;
  RationalVector objective;
  std::vector<Constraint> constraints;
  std::vector<std::optional<Rational>> lower;
  std::vector<std::optional<Rational>> upper;

  std::size_t variables() const noexcept { return objective.size(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  RationalVector point;
  Rational value;
  /// Optimal basis as standard-form column indices. Feeding it back as a hint
  /// to an LP with the same shape skips phase one when it is still feasible.
  std::vector<std::size_t> basis;
  std::size_t pivots = 0;
};

/// Two-phase dense-tableau simplex over exact rationals with Bland's rule.
LpSolution solve_lp(const LinearProgram& lp);
LpSolution solve_lp(const LinearProgram& lp, std::span<const std::size_t> basis_hint);

}  // namespace ppsolve
