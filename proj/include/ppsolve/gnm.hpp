#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "ppsolve/lp.hpp"
#include "ppsolve/qualitative.hpp"
#include "ppsolve/system.hpp"

namespace ppsolve {

/// P^y: Q rows replaced by their tangent at the anchor, L and M rows kept.
/// Constants of linearized rows may be negative.
struct LinearizedSystem {
  RationalVector anchor;
  std::vector<std::variant<LinearEquation, ChoiceEquation>> rows;

  RationalVector evaluate(const RationalVector& x) const;
};

LinearizedSystem linearize(const EquationSystem& sys, const RationalVector& y);

struct GnmStep {
  RationalVector point;
  /// Optimal basis, reusable as a hint for the next step on the same system.
  std::vector<std::size_t> basis;
  std::size_t pivots = 0;
};

/// I(y) by one LP: minimize sum(a) s.t. P^y(a) <= a for max and pure
/// systems, maximize sum(a) s.t. P^y(a) >= a for min systems.
GnmStep gnm_step_lp(const EquationSystem& sys, const RationalVector& y, std::span<const std::size_t> basis_hint = {});
RationalVector gnm_step(const EquationSystem& sys, const RationalVector& y);

/// y + (I - P'(y))^{-1} (P(y) - y) for a pure system in SNF.
RationalVector newton_step(const EquationSystem& sys, const RationalVector& y);

/// max(0, floor(v_i 2^h) / 2^h) componentwise.
RationalVector round_down(const RationalVector& v, std::size_t h);

struct SolveOptions {
  /// Pure systems normally take Newton steps; this forces the LP.
  bool use_lp_for_pure = false;
  bool record_iterates = true;
};

struct SolveIterate {
  RationalVector unrounded;
  RationalVector rounded;
};

struct SolveReport {
  /// Approximation of q* over the variables of the input system.
  RationalVector approximation;
  std::size_t j = 0;
  std::size_t h = 0;
  /// |P| of the reduced system.
  std::size_t encoding_size = 0;
  /// Iterations actually computed. The loop stops early once an iterate
  /// repeats, since every later one would be identical.
  std::size_t iterations = 0;
  std::vector<SolveIterate> iterates;
  /// Over the SNF system; its first n variables are the input's.
  QualitativeReport qualitative;
  EquationSystem snf;
  std::chrono::nanoseconds elapsed{0};
};

/// Rounded GNM: h = j + 2 + 4|P| iterations from 0 on the reduced system,
/// giving ||q* - v||_inf <= 2^-j.
SolveReport solve(const EquationSystem& sys, std::size_t j, const SolveOptions& options = {});

struct PolicyImprovementResult {
  Policy policy;
  RationalVector iterate;
  std::size_t switches = 0;
};

/// Test oracle for I(y) on min systems: improve σ until P^y(N_σ(y)) = N_σ(y).
PolicyImprovementResult policy_improvement_min(const EquationSystem& sys, const RationalVector& y);

}  // namespace ppsolve
