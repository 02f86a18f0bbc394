#include "ppsolve/bssg.hpp"

#include <algorithm>
#include <map>

#include "ppsolve/errors.hpp"
#include "ppsolve/gnm.hpp"
#include "ppsolve/policy.hpp"
#include "ppsolve/pps.hpp"

namespace ppsolve {

namespace {

std::vector<std::size_t> choices_with(const EquationSystem& sys, ChoiceOp op) {
  std::vector<std::size_t> out;
  for (std::size_t i : sys.choice_equations())
    if (std::get<ChoiceEquation>(sys.equation(i)).op == op) out.push_back(i);
  return out;
}

RationalVector side_value(const EquationSystem& sys, const Policy& policy, ChoiceOp op, std::size_t j) {
  SolveOptions options;
  options.record_iterates = false;
  return solve(apply_partial_policy(sys, policy, op), j, options).approximation;
}

std::size_t quarter_precision(const Rational& epsilon) {
  Rational quarter = epsilon / 4;
  return log2_inverse_ceil(quarter);
}

// Policy number `mask` of the lexicographic order: the first equation's
// choice is the most significant digit, digit 0 selects the lower index.
Policy nth_policy(const EquationSystem& sys, const std::vector<std::size_t>& eqs, std::size_t mask) {
  Policy p;
  for (std::size_t b = 0; b < eqs.size(); ++b) {
    const auto& c = std::get<ChoiceEquation>(sys.equation(eqs[b]));
    const bool high = (mask >> (eqs.size() - 1 - b)) & 1;
    p.choice[eqs[b]] = high ? std::max(c.first, c.second) : std::min(c.first, c.second);
  }
  return p;
}

CandidateCertificate compare(const Policy& sigma, const Policy& tau, const Rational& epsilon, std::size_t j,
                             RationalVector v_sigma, RationalVector v_tau) {
  CandidateCertificate cert;
  cert.max_policy = sigma;
  cert.min_policy = tau;
  cert.epsilon = epsilon;
  cert.j = j;
  cert.gap = max_norm(v_sigma - v_tau);
  cert.accepted = cert.gap <= epsilon / 4;
  cert.value = v_sigma;
  cert.v_sigma = std::move(v_sigma);
  cert.v_tau = std::move(v_tau);
  return cert;
}

void require_input(const EquationSystem& sys, const Rational& epsilon) {
  if (!sys.is_snf()) throw InputError("bssg needs a system in SNF");
  if (sgn(epsilon) <= 0 || epsilon > 1) throw InputError("epsilon must lie in (0, 1]");
}

}  // namespace

CandidateCertificate check_candidate(const EquationSystem& sys, const Policy& max_policy, const Policy& min_policy,
                                     const Rational& epsilon) {
  require_input(sys, epsilon);
  const std::size_t j = quarter_precision(epsilon);
  auto v_sigma = side_value(sys, max_policy, ChoiceOp::Max, j);
  auto v_tau = side_value(sys, min_policy, ChoiceOp::Min, j);
  return compare(max_policy, min_policy, epsilon, j, std::move(v_sigma), std::move(v_tau));
}

BssgSolution solve_exhaustive(const EquationSystem& sys, const Rational& epsilon) {
  require_input(sys, epsilon);
  const auto max_eqs = choices_with(sys, ChoiceOp::Max);
  const auto min_eqs = choices_with(sys, ChoiceOp::Min);
  if (max_eqs.size() + min_eqs.size() > kBssgChoiceCap)
    throw EnumerationCapError("exhaustive search supports at most " + std::to_string(kBssgChoiceCap) +
                              " choice equations, the system has " +
                              std::to_string(max_eqs.size() + min_eqs.size()));
  const std::size_t j = quarter_precision(epsilon);
  const std::size_t sigma_count = std::size_t{1} << max_eqs.size();
  const std::size_t tau_count = std::size_t{1} << min_eqs.size();

  std::map<std::size_t, RationalVector> tau_values;
  BssgSolution out;
  for (std::size_t s = 0; s < sigma_count; ++s) {
    const Policy sigma = nth_policy(sys, max_eqs, s);
    const RationalVector v_sigma = side_value(sys, sigma, ChoiceOp::Max, j);
    for (std::size_t t = 0; t < tau_count; ++t) {
      const Policy tau = nth_policy(sys, min_eqs, t);
      auto it = tau_values.find(t);
      if (it == tau_values.end()) it = tau_values.emplace(t, side_value(sys, tau, ChoiceOp::Min, j)).first;
      ++out.candidates_checked;
      auto cert = compare(sigma, tau, epsilon, j, v_sigma, it->second);
      if (cert.accepted) {
        out.certificate = std::move(cert);
        return out;
      }
    }
  }
  throw InvariantViolation("no policy pair passed the check; determinacy says one must");
}

}  // namespace ppsolve
