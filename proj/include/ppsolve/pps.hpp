#pragma once

#include <cstddef>
#include <vector>

#include "ppsolve/system.hpp"

namespace ppsolve {

struct SnfResult {
  EquationSystem system;
  /// mapping[i] is the index of original variable i in `system`.
  std::vector<std::size_t> mapping;
};

/// Rewrites any system into forms L, Q, M. Original variables keep their
/// indices; auxiliary variables are appended with fresh names x<k>. An input
/// already in SNF comes back unchanged.
SnfResult to_snf(const EquationSystem& sys);

/// |P| for a system in SNF. Throws InputError otherwise.
std::size_t encoding_size(const EquationSystem& sys);

/// Replaces each M equation i by x_i = x_{σ(i)}. The policy must cover exactly
/// the M equations.
EquationSystem apply_policy(const EquationSystem& sys, const Policy& policy);

/// Like apply_policy, restricted to the M equations with operator `op`; the
/// remaining M equations stay. Used on max-min systems.
EquationSystem apply_partial_policy(const EquationSystem& sys, const Policy& policy, ChoiceOp op);

RationalVector evaluate(const EquationSystem& sys, const RationalVector& point);
std::vector<double> evaluate(const EquationSystem& sys, const std::vector<double>& point);

/// P'(point) for a pure system in SNF.
RationalMatrix jacobian(const EquationSystem& sys, const RationalVector& point);

/// P^k(0), exact. Denominators grow quickly; keep k small.
RationalVector kleene_iterate(const EquationSystem& sys, std::size_t k);
std::vector<double> kleene_iterate_numeric(const EquationSystem& sys, std::size_t k);

/// Variables that the right-hand side of equation i mentions, ascending.
std::vector<std::size_t> dependencies(const EquationSystem& sys, std::size_t i);

/// Strongly connected components of the dependency graph, each sorted
/// ascending. A component comes before every component it depends on.
std::vector<std::vector<std::size_t>> scc_decomposition(const EquationSystem& sys);

/// Same, over an explicit graph: adjacency[v] lists the vertices v depends on.
std::vector<std::vector<std::size_t>> scc_decomposition(const std::vector<std::vector<std::size_t>>& adjacency);

EquationSystem bmdp_to_system(const Bmdp& bmdp, Objective objective);

}  // namespace ppsolve
