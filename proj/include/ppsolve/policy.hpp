#pragma once

#include <cstddef>
#include <optional>

#include "ppsolve/qualitative.hpp"
#include "ppsolve/system.hpp"

namespace ppsolve {

struct EpsilonPolicyReport {
  /// Over the SNF system (which keeps the input's variables first).
  Policy policy;
  Rational epsilon;
  /// Approximation of q*_σ to within 2^-value_j.
  RationalVector value;
  std::size_t value_j = 0;
  /// The approximation of q* the policy was read off, and its precision.
  RationalVector y;
  std::size_t j = 0;
  /// Set when j came from the caller instead of the worst-case formula.
  bool heuristic = false;
  std::size_t repair_switches = 0;
  EquationSystem snf;
};

struct PolicyOptions {
  std::optional<std::size_t> override_j;
};

/// Per M equation the argument with the larger (max) or smaller (min) y
/// value; ties go to the lower variable index.
Policy greedy_policy(const EquationSystem& sys, const RationalVector& y);

/// ceil(log2(1/ε)) for 0 < ε <= 1.
std::size_t log2_inverse_ceil(const Rational& epsilon);

/// ε-optimal policy for a reduced min system: greedy at a 2^-j approximation,
/// j = 14|P| + 3 + ceil(log2(1/ε)).
EpsilonPolicyReport epsilon_policy_min(const EquationSystem& reduced, const Rational& epsilon,
                                       const PolicyOptions& options = {});

/// ε-optimal policy for a reduced max system: greedy at j = 14|P| + 2 +
/// ceil(log2(1/ε)), then switches away from choices that leave zeros.
EpsilonPolicyReport epsilon_policy_max(const EquationSystem& reduced, const Rational& epsilon,
                                       const PolicyOptions& options = {});

/// Lifts a policy of report.reduced to every M equation of `full`.
Policy extend_policy(const EquationSystem& full, const Policy& reduced_policy, const QualitativeReport& report);

/// q*_σ to within 2^-j.
RationalVector evaluate_policy(const EquationSystem& sys, const Policy& policy, std::size_t j);

/// Whole pipeline for any max or min system: SNF, reduction, ε-policy on the
/// reduced system, extension, and evaluation of the result.
EpsilonPolicyReport epsilon_policy(const EquationSystem& sys, const Rational& epsilon,
                                   const PolicyOptions& options = {});

/// Replaces the listed M equations by x_i = x_choice; the rest stay.
EquationSystem fix_choices(const EquationSystem& sys, const Policy& partial);

}  // namespace ppsolve
