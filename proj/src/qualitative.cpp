#include "ppsolve/qualitative.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "ppsolve/errors.hpp"
#include "ppsolve/pps.hpp"

namespace ppsolve {

namespace {

void require_snf(const EquationSystem& sys, const char* what) {
  if (!sys.is_snf()) throw InputError(std::string(what) + " needs a system in SNF");
}

IndexSet pure_one_set(const EquationSystem& sys, const IndexSet& zeros) {
  const std::size_t n = sys.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (zeros.count(i)) continue;
    for (std::size_t j : dependencies(sys, i))
      if (!zeros.count(j)) adj[i].push_back(j);
  }
  auto components = scc_decomposition(adj);

  IndexSet ones;
  for (auto it = components.rbegin(); it != components.rend(); ++it) {
    const auto& scc = *it;
    if (zeros.count(scc.front())) continue;  // zero variables form singleton components here
    const IndexSet members(scc.begin(), scc.end());

    bool candidate = true;
    bool linear = true;
    for (std::size_t i : scc) {
      for (std::size_t j : adj[i])
        if (!members.count(j) && !ones.count(j)) candidate = false;
      const auto& eq = sys.equation(i);
      if (const auto* l = std::get_if<LinearEquation>(&eq)) {
        Rational mass = l->constant;
        for (const auto& t : l->terms)
          if (!zeros.count(t.var)) mass += t.coeff;
        if (mass != 1) candidate = false;
      } else {
        linear = false;
      }
      if (!candidate) break;
    }
    if (!candidate) continue;

    const std::size_t m = scc.size();
    std::vector<std::size_t> local(n, m);
    for (std::size_t r = 0; r < m; ++r) local[scc[r]] = r;

    bool is_one;
    if (linear) {
      // (I - A_SS) z = c + A_S,ext * 1
      RationalMatrix a = RationalMatrix::identity(m);
      RationalVector b(m);
      for (std::size_t r = 0; r < m; ++r) {
        const auto& l = std::get<LinearEquation>(sys.equation(scc[r]));
        b[r] = l.constant;
        for (const auto& t : l.terms) {
          if (zeros.count(t.var)) continue;
          if (local[t.var] < m)
            a(r, local[t.var]) -= t.coeff;
          else
            b[r] += t.coeff;
        }
      }
      try {
        auto z = solve_linear(a, b);
        is_one = std::all_of(z.begin(), z.end(), [](const Rational& v) { return v == 1; });
      } catch (const SingularMatrixError&) {
        is_one = false;
      }
    } else {
      RationalVector point(n, Rational(1));
      for (std::size_t z : zeros) point[z] = 0;
      const RationalMatrix j = jacobian(sys, point);
      RationalMatrix restricted(m, m);
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) restricted(r, c) = j(scc[r], scc[c]);
      is_one = spectral_radius_leq_one(restricted);
    }
    if (is_one) ones.insert(scc.begin(), scc.end());
  }
  return ones;
}

}  // namespace

std::size_t policy_enumeration_cap() {
  if (const char* env = std::getenv("GNM_POLICY_ENUM_CAP")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw InputError(std::string("GNM_POLICY_ENUM_CAP is not a number: ") + env);
    }
  }
  return std::size_t{1} << 20;
}

IndexSet zero_set(const EquationSystem& sys) {
  require_snf(sys, "zero_set");
  const std::size_t n = sys.size();
  std::vector<bool> positive(n, false);
  // Monotone, so at most n rounds change anything.
  for (std::size_t round = 0; round <= n; ++round) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (positive[i]) continue;
      const auto& eq = sys.equation(i);
      bool pos = false;
      if (const auto* l = std::get_if<LinearEquation>(&eq)) {
        pos = sgn(l->constant) > 0 ||
              std::any_of(l->terms.begin(), l->terms.end(),
                          [&](const LinearTerm& t) { return sgn(t.coeff) > 0 && positive[t.var]; });
      } else if (const auto* q = std::get_if<ProductEquation>(&eq)) {
        pos = positive[q->left] && positive[q->right];
      } else {
        const auto& c = std::get<ChoiceEquation>(eq);
        pos = c.op == ChoiceOp::Max ? positive[c.first] || positive[c.second]
                                    : positive[c.first] && positive[c.second];
      }
      if (pos) {
        positive[i] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  IndexSet zeros;
  for (std::size_t i = 0; i < n; ++i)
    if (!positive[i]) zeros.insert(i);
  return zeros;
}

IndexSet one_set(const EquationSystem& sys, const IndexSet& zeros) {
  require_snf(sys, "one_set");
  const auto choices = sys.choice_equations();
  if (choices.empty()) return pure_one_set(sys, zeros);
  if (sys.flavor() == Flavor::MaxMin) throw InputError("one_set is not defined for max-min systems");

  const std::size_t cap = policy_enumeration_cap();
  if (choices.size() >= 64 || (std::size_t{1} << choices.size()) > cap)
    throw EnumerationCapError("one_set would enumerate 2^" + std::to_string(choices.size()) +
                              " policies, above the cap of " + std::to_string(cap));

  const bool is_max = sys.flavor() == Flavor::Max;
  IndexSet result;
  bool first = true;
  const std::size_t count = std::size_t{1} << choices.size();
  for (std::size_t mask = 0; mask < count; ++mask) {
    Policy policy;
    for (std::size_t b = 0; b < choices.size(); ++b) {
      const auto& c = std::get<ChoiceEquation>(sys.equation(choices[b]));
      policy.choice[choices[b]] = (mask >> b) & 1 ? c.second : c.first;
    }
    const EquationSystem fixed = apply_policy(sys, policy);
    const IndexSet ones = pure_one_set(fixed, zero_set(fixed));
    if (first) {
      result = ones;
      first = false;
    } else if (is_max) {
      result.insert(ones.begin(), ones.end());
    } else {
      IndexSet both;
      std::set_intersection(result.begin(), result.end(), ones.begin(), ones.end(),
                            std::inserter(both, both.begin()));
      result = std::move(both);
    }
  }
  return result;
}

QualitativeReport reduce(const EquationSystem& sys) {
  require_snf(sys, "reduce");
  QualitativeReport report;
  report.zero_set = zero_set(sys);
  report.one_set = one_set(sys, report.zero_set);
  const auto& zeros = report.zero_set;
  const auto& ones = report.one_set;

  const std::size_t n = sys.size();
  std::vector<std::size_t> index(n, n);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    if (zeros.count(i) || ones.count(i)) continue;
    index[i] = report.back_map.size();
    report.back_map.push_back(i);
    names.push_back(sys.name(i));
  }

  auto inconsistent = [&](std::size_t i) {
    return InvariantViolation("qualitative sets are inconsistent at equation " + sys.name(i));
  };
  auto copy_of = [&](std::size_t j) { return LinearEquation{0, {{index[j], 1}}}; };

  std::vector<Equation> eqs;
  for (std::size_t i : report.back_map) {
    const auto& eq = sys.equation(i);
    if (const auto* l = std::get_if<LinearEquation>(&eq)) {
      LinearEquation out{l->constant, {}};
      for (const auto& t : l->terms) {
        if (ones.count(t.var))
          out.constant += t.coeff;
        else if (!zeros.count(t.var))
          out.terms.push_back({index[t.var], t.coeff});
      }
      eqs.push_back(std::move(out));
    } else if (const auto* q = std::get_if<ProductEquation>(&eq)) {
      const bool one_l = ones.count(q->left), one_r = ones.count(q->right);
      if (zeros.count(q->left) || zeros.count(q->right) || (one_l && one_r)) throw inconsistent(i);
      if (one_l)
        eqs.push_back(copy_of(q->right));
      else if (one_r)
        eqs.push_back(copy_of(q->left));
      else
        eqs.push_back(ProductEquation{index[q->left], index[q->right]});
    } else {
      const auto& c = std::get<ChoiceEquation>(eq);
      // The argument that decides the value outright would have put i in a
      // qualitative set; the neutral one (0 for max, 1 for min) drops out.
      const IndexSet& absorbing = c.op == ChoiceOp::Max ? ones : zeros;
      const IndexSet& neutral = c.op == ChoiceOp::Max ? zeros : ones;
      if (absorbing.count(c.first) || absorbing.count(c.second)) throw inconsistent(i);
      const bool drop_first = neutral.count(c.first), drop_second = neutral.count(c.second);
      if (drop_first && drop_second) throw inconsistent(i);
      if (drop_first)
        eqs.push_back(copy_of(c.second));
      else if (drop_second)
        eqs.push_back(copy_of(c.first));
      else
        eqs.push_back(ChoiceEquation{c.op, index[c.first], index[c.second]});
    }
  }
  Flavor flavor = infer_flavor(eqs);
  report.reduced = EquationSystem(std::move(names), std::move(eqs), flavor);
  return report;
}

RationalVector expand(const QualitativeReport& report, const RationalVector& reduced_value, std::size_t n) {
  if (reduced_value.size() != report.back_map.size())
    throw InputError("reduced solution has the wrong dimension");
  RationalVector out(n);
  for (std::size_t i : report.one_set) out[i] = 1;
  for (std::size_t r = 0; r < report.back_map.size(); ++r) out[report.back_map[r]] = reduced_value[r];
  return out;
}

}  // namespace ppsolve
