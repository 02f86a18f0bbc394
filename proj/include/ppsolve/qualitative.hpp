#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "ppsolve/system.hpp"

namespace ppsolve {

using IndexSet = std::set<std::size_t>;

struct QualitativeReport {
  IndexSet zero_set;
  IndexSet one_set;
  /// The remaining variables with 0 and 1 substituted; its LFP lies in (0,1).
  EquationSystem reduced;
  /// back_map[r] is the original index of reduced variable r.
  std::vector<std::size_t> back_map;
};

/// {i : q*_i = 0} by the boolean positivity fixpoint. SNF input.
IndexSet zero_set(const EquationSystem& sys);

/// {i : q*_i = 1}; `zeros` must be zero_set(sys). Max and min systems go
/// through policy enumeration, capped by policy_enumeration_cap().
IndexSet one_set(const EquationSystem& sys, const IndexSet& zeros);

/// Removes the 0 and 1 variables. Surviving M and Q equations that lose an
/// argument degrade to x_i = x_other.
QualitativeReport reduce(const EquationSystem& sys);

/// Splices a solution of report.reduced back into the original index space.
RationalVector expand(const QualitativeReport& report, const RationalVector& reduced_value, std::size_t n);

/// 2^20 unless GNM_POLICY_ENUM_CAP is set.
std::size_t policy_enumeration_cap();

}  // namespace ppsolve
