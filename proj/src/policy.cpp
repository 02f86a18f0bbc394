#include "ppsolve/policy.hpp"

#include <algorithm>

#include "ppsolve/errors.hpp"
#include "ppsolve/gnm.hpp"
#include "ppsolve/pps.hpp"

namespace ppsolve {

namespace {

void check_epsilon(const Rational& epsilon) {
  if (sgn(epsilon) <= 0 || epsilon > 1) throw InputError("epsilon must lie in (0, 1]");
}

RationalVector approximate(const EquationSystem& sys, std::size_t j) {
  SolveOptions options;
  options.record_iterates = false;
  return solve(sys, j, options).approximation;
}

EpsilonPolicyReport start_report(const EquationSystem& reduced, const Rational& epsilon,
                                 const PolicyOptions& options, std::size_t slack, Flavor flavor) {
  check_epsilon(epsilon);
  if (!reduced.is_snf()) throw InputError("ε-policies need a system in SNF");
  if (reduced.flavor() != flavor && reduced.flavor() != Flavor::Pure)
    throw InputError("expected a " + to_string(flavor) + " system, got " + to_string(reduced.flavor()));
  EpsilonPolicyReport report;
  report.epsilon = epsilon;
  report.snf = reduced;
  report.heuristic = options.override_j.has_value();
  report.j = options.override_j.value_or(14 * encoding_size(reduced) + slack + log2_inverse_ceil(epsilon));
  report.y = approximate(reduced, report.j);
  return report;
}

void finish_report(EpsilonPolicyReport& report) {
  report.value_j = log2_inverse_ceil(report.epsilon) + 4;
  report.value = evaluate_policy(report.snf, report.policy, report.value_j);
}

std::size_t lower_of(const ChoiceEquation& c) { return std::min(c.first, c.second); }

}  // namespace

std::size_t log2_inverse_ceil(const Rational& epsilon) {
  check_epsilon(epsilon);
  std::size_t k = 0;
  while (pow2(-static_cast<long>(k)) > epsilon) ++k;
  return k;
}

Policy greedy_policy(const EquationSystem& sys, const RationalVector& y) {
  if (y.size() != sys.size()) throw InputError("point has the wrong dimension");
  Policy policy;
  for (std::size_t i : sys.choice_equations()) {
    const auto& c = std::get<ChoiceEquation>(sys.equation(i));
    const std::size_t lo = std::min(c.first, c.second), hi = std::max(c.first, c.second);
    const bool hi_wins = c.op == ChoiceOp::Max ? y[hi] > y[lo] : y[hi] < y[lo];
    policy.choice[i] = hi_wins ? hi : lo;
  }
  return policy;
}

EquationSystem fix_choices(const EquationSystem& sys, const Policy& partial) {
  std::vector<Equation> eqs = sys.equations();
  for (auto [i, j] : partial.choice) {
    const auto* c = std::get_if<ChoiceEquation>(&sys.equation(i));
    if (!c || (j != c->first && j != c->second))
      throw InputError("policy entry for " + sys.name(i) + " does not name an argument of a choice equation");
    eqs[i] = LinearEquation{0, {{j, 1}}};
  }
  return EquationSystem(sys.names(), eqs, infer_flavor(eqs));
}

EpsilonPolicyReport epsilon_policy_min(const EquationSystem& reduced, const Rational& epsilon,
                                       const PolicyOptions& options) {
  auto report = start_report(reduced, epsilon, options, 3, Flavor::Min);
  report.policy = greedy_policy(reduced, report.y);
  finish_report(report);
  return report;
}

EpsilonPolicyReport epsilon_policy_max(const EquationSystem& reduced, const Rational& epsilon,
                                       const PolicyOptions& options) {
  auto report = start_report(reduced, epsilon, options, 2, Flavor::Max);
  const Rational threshold = report.heuristic
                                 ? pow2(1 - static_cast<long>(report.j))
                                 : Rational(pow2(-static_cast<long>(14 * encoding_size(reduced)) - 1) * epsilon);
  report.policy = greedy_policy(reduced, report.y);
  const std::size_t limit = reduced.size();
  for (;;) {
    const IndexSet zeros = zero_set(apply_policy(reduced, report.policy));
    if (zeros.empty()) break;
    std::optional<std::pair<std::size_t, std::size_t>> change;
    for (std::size_t i : zeros) {
      const auto* c = std::get_if<ChoiceEquation>(&reduced.equation(i));
      if (!c) continue;
      for (std::size_t arg : {std::min(c->first, c->second), std::max(c->first, c->second)}) {
        if (zeros.count(arg)) continue;
        Rational diff = report.y[i] - report.y[arg];
        if (abs(diff) <= threshold) {
          change = {i, arg};
          break;
        }
      }
      if (change) break;
    }
    if (!change)
      throw InvariantViolation("max policy repair found no eligible switch; y is not accurate enough");
    report.policy.choice[change->first] = change->second;
    if (++report.repair_switches > limit) throw InvariantViolation("max policy repair did not terminate");
  }
  finish_report(report);
  return report;
}

Policy extend_policy(const EquationSystem& full, const Policy& reduced_policy, const QualitativeReport& report) {
  const std::size_t n = full.size();
  std::vector<std::optional<std::size_t>> local(n);
  for (std::size_t r = 0; r < report.back_map.size(); ++r) local[report.back_map[r]] = r;
  const auto& zeros = report.zero_set;
  const auto& ones = report.one_set;

  Policy policy;
  std::vector<std::size_t> pending;  // max equations with q*_i = 1
  for (std::size_t i : full.choice_equations()) {
    const auto& c = std::get<ChoiceEquation>(full.equation(i));
    if (local[i]) {
      const std::size_t r = *local[i];
      if (std::holds_alternative<ChoiceEquation>(report.reduced.equation(r))) {
        auto it = reduced_policy.choice.find(r);
        if (it == reduced_policy.choice.end())
          throw InputError("reduced policy misses equation " + report.reduced.name(r));
        policy.choice[i] = report.back_map[it->second];
      } else {
        // One argument was the neutral constant and dropped out.
        const IndexSet& neutral = c.op == ChoiceOp::Max ? zeros : ones;
        policy.choice[i] = neutral.count(c.first) ? c.second : c.first;
      }
      continue;
    }
    if (c.op == ChoiceOp::Min) {
      if (zeros.count(i)) {
        std::size_t lo = std::min(c.first, c.second), hi = std::max(c.first, c.second);
        policy.choice[i] = zeros.count(lo) ? lo : hi;
      } else {
        policy.choice[i] = lower_of(c);
      }
    } else if (zeros.count(i)) {
      policy.choice[i] = lower_of(c);
    } else {
      pending.push_back(i);
    }
  }

  // Max equations at value 1: fix one at a time, keeping a choice only if
  // the one set survives with the remaining pending equations still free.
  Policy fixed;
  for (std::size_t i : pending) {
    const auto& c = std::get<ChoiceEquation>(full.equation(i));
    const std::size_t lo = std::min(c.first, c.second), hi = std::max(c.first, c.second);
    fixed.choice[i] = lo;
    const EquationSystem trial = fix_choices(full, fixed);
    const IndexSet trial_ones = one_set(trial, zero_set(trial));
    if (!std::includes(trial_ones.begin(), trial_ones.end(), ones.begin(), ones.end())) fixed.choice[i] = hi;
    policy.choice[i] = fixed.choice[i];
  }
  return policy;
}

RationalVector evaluate_policy(const EquationSystem& sys, const Policy& policy, std::size_t j) {
  return approximate(apply_policy(sys, policy), j);
}

EpsilonPolicyReport epsilon_policy(const EquationSystem& sys, const Rational& epsilon, const PolicyOptions& options) {
  check_epsilon(epsilon);
  if (sys.flavor() == Flavor::MaxMin) throw InputError("ε-policies are for max or min systems; use bssg for max-min");
  SnfResult snf = to_snf(sys);
  const QualitativeReport qual = reduce(snf.system);

  EpsilonPolicyReport report;
  if (qual.reduced.choice_equations().empty()) {
    report.epsilon = epsilon;
    report.heuristic = options.override_j.has_value();
    report.j = options.override_j.value_or(0);
  } else if (qual.reduced.flavor() == Flavor::Min) {
    report = epsilon_policy_min(qual.reduced, epsilon, options);
  } else {
    report = epsilon_policy_max(qual.reduced, epsilon, options);
  }
  report.policy = extend_policy(snf.system, report.policy, qual);
  if (!report.y.empty()) report.y = expand(qual, report.y, snf.system.size());
  report.snf = std::move(snf.system);
  finish_report(report);
  return report;
}

}  // namespace ppsolve
