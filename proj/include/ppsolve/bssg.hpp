#pragma once

#include <cstddef>

#include "ppsolve/system.hpp"

namespace ppsolve {

struct CandidateCertificate {
  Policy max_policy;
  Policy min_policy;
  Rational epsilon;
  bool accepted = false;
  /// v_σ, within ε of q* when accepted.
  RationalVector value;
  /// ||v_σ - v_τ||_inf.
  Rational gap;
  RationalVector v_sigma;
  RationalVector v_tau;
  /// Precision each side was solved to: smallest j with 2^-j <= ε/4.
  std::size_t j = 0;
};

/// Fixes σ (max choices) and τ (min choices) in turn, solves both one-player
/// systems to ε/4, and accepts when they agree to within ε/4. SNF input.
CandidateCertificate check_candidate(const EquationSystem& sys, const Policy& max_policy, const Policy& min_policy,
                                     const Rational& epsilon);

struct BssgSolution {
  CandidateCertificate certificate;
  std::size_t candidates_checked = 0;
};

/// Checks every (σ, τ) pair, σ outer and τ inner, each in lexicographic order
/// of its choice vector, and returns the first accepted one. At most 20 M
/// equations.
BssgSolution solve_exhaustive(const EquationSystem& sys, const Rational& epsilon);

inline constexpr std::size_t kBssgChoiceCap = 20;

}  // namespace ppsolve
