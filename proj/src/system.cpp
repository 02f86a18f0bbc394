#include "ppsolve/system.hpp"

#include <algorithm>

#include "ppsolve/errors.hpp"

namespace ppsolve {

namespace {

void check_index(std::size_t var, std::size_t n, std::size_t eq) {
  if (var >= n)
    throw InputError("equation " + std::to_string(eq) + " references variable index " +
                     std::to_string(var) + " outside the system");
}

void check_polynomial(const ProbPolynomial& p, std::size_t n, std::size_t eq) {
  if (sgn(p.constant) < 0) throw InputError("negative constant in equation " + std::to_string(eq));
  Rational mass = p.constant;
  for (const auto& t : p.terms) {
    if (sgn(t.coeff) < 0) throw InputError("negative coefficient in equation " + std::to_string(eq));
    mass += t.coeff;
    for (auto [v, e] : t.monomial) {
      check_index(v, n, eq);
      if (e == 0) throw InputError("zero exponent in equation " + std::to_string(eq));
    }
  }
  if (mass > 1)
    throw InputError("coefficients of equation " + std::to_string(eq) + " sum to " + to_string(mass) +
                     " > 1");
}

std::size_t degree(const Monomial& m) {
  std::size_t d = 0;
  for (auto [v, e] : m) d += e;
  return d;
}

// Sums like monomials and drops zero coefficients; terms sorted by monomial.
ProbPolynomial canonical(ProbPolynomial p) {
  std::map<Monomial, Rational> merged;
  for (auto& t : p.terms) merged[t.monomial] += t.coeff;
  p.terms.clear();
  for (auto& [mono, coeff] : merged)
    if (sgn(coeff) != 0) p.terms.push_back({coeff, mono});
  return p;
}

std::optional<std::size_t> bare_variable(const ProbPolynomial& p) {
  if (sgn(p.constant) != 0 || p.terms.size() != 1) return std::nullopt;
  const auto& t = p.terms.front();
  if (t.coeff != 1 || degree(t.monomial) != 1) return std::nullopt;
  return t.monomial.front().first;
}

}  // namespace

Equation classify(GeneralEquation equation) {
  for (auto& alt : equation.alternatives) alt = canonical(std::move(alt));
  if (equation.op && equation.alternatives.size() == 1) equation.op.reset();
  if (!equation.op) {
    if (equation.alternatives.size() != 1) return equation;
    const auto& p = equation.alternatives.front();
    const bool linear = std::all_of(p.terms.begin(), p.terms.end(),
                                    [](const PolyTerm& t) { return degree(t.monomial) == 1; });
    if (linear) {
      LinearEquation l{p.constant, {}};
      for (const auto& t : p.terms) l.terms.push_back({t.monomial.front().first, t.coeff});
      return l;
    }
    if (sgn(p.constant) == 0 && p.terms.size() == 1 && p.terms.front().coeff == 1 &&
        degree(p.terms.front().monomial) == 2) {
      const auto& m = p.terms.front().monomial;
      return m.size() == 1 ? ProductEquation{m[0].first, m[0].first} : ProductEquation{m[0].first, m[1].first};
    }
    return equation;
  }
  if (equation.alternatives.size() == 2) {
    auto a = bare_variable(equation.alternatives[0]);
    auto b = bare_variable(equation.alternatives[1]);
    if (a && b) return ChoiceEquation{*equation.op, *a, *b};
  }
  return equation;
}

Flavor infer_flavor(const std::vector<Equation>& equations) {
  bool has_max = false;
  bool has_min = false;
  auto note = [&](ChoiceOp op) { (op == ChoiceOp::Max ? has_max : has_min) = true; };
  for (const auto& eq : equations) {
    if (const auto* c = std::get_if<ChoiceEquation>(&eq)) note(c->op);
    if (const auto* g = std::get_if<GeneralEquation>(&eq); g && g->op) note(*g->op);
  }
  if (has_max && has_min) return Flavor::MaxMin;
  if (has_max) return Flavor::Max;
  if (has_min) return Flavor::Min;
  return Flavor::Pure;
}

EquationSystem::EquationSystem(std::vector<std::string> names, std::vector<Equation> equations, Flavor flavor)
    : names_(std::move(names)), equations_(std::move(equations)), flavor_(flavor) {
  const std::size_t n = equations_.size();
  if (names_.size() != n) throw InputError("variable name count does not match equation count");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& eq = equations_[i];
    if (const auto* l = std::get_if<LinearEquation>(&eq)) {
      if (sgn(l->constant) < 0) throw InputError("negative constant in equation " + std::to_string(i));
      Rational mass = l->constant;
      for (const auto& t : l->terms) {
        check_index(t.var, n, i);
        if (sgn(t.coeff) < 0) throw InputError("negative coefficient in equation " + std::to_string(i));
        mass += t.coeff;
      }
      if (mass > 1)
        throw InputError("coefficients of equation " + std::to_string(i) + " sum to " + to_string(mass) +
                         " > 1");
    } else if (const auto* q = std::get_if<ProductEquation>(&eq)) {
      check_index(q->left, n, i);
      check_index(q->right, n, i);
    } else if (const auto* c = std::get_if<ChoiceEquation>(&eq)) {
      check_index(c->first, n, i);
      check_index(c->second, n, i);
    } else {
      const auto& g = std::get<GeneralEquation>(eq);
      if (g.alternatives.empty()) throw InputError("equation " + std::to_string(i) + " has no right-hand side");
      if (!g.op && g.alternatives.size() != 1)
        throw InputError("equation " + std::to_string(i) + " lists alternatives without max/min");
      for (const auto& p : g.alternatives) check_polynomial(p, n, i);
    }
  }
  const Flavor needed = infer_flavor(equations_);
  const bool compatible = needed == Flavor::Pure || needed == flavor_ || flavor_ == Flavor::MaxMin;
  if (!compatible)
    throw InputError("system uses " + to_string(needed) + " choices but is declared " + to_string(flavor_));
}

std::optional<std::size_t> EquationSystem::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

bool EquationSystem::is_snf() const {
  return std::none_of(equations_.begin(), equations_.end(),
                      [](const Equation& e) { return std::holds_alternative<GeneralEquation>(e); });
}

std::vector<std::size_t> EquationSystem::choice_equations() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < equations_.size(); ++i)
    if (std::holds_alternative<ChoiceEquation>(equations_[i])) out.push_back(i);
  return out;
}

void Bmdp::validate() const {
  if (actions.size() != types.size()) throw InputError("BMDP action table does not match type list");
  for (std::size_t t = 0; t < types.size(); ++t) {
    if (actions[t].empty()) throw InputError("type '" + types[t] + "' has no actions");
    for (const auto& action : actions[t]) {
      Rational total = 0;
      for (const auto& rule : action.rules) {
        if (sgn(rule.probability) <= 0)
          throw InputError("non-positive rule probability in type '" + types[t] + "'");
        for (auto [child, count] : rule.offspring)
          if (child >= types.size() || count == 0)
            throw InputError("malformed offspring in type '" + types[t] + "'");
        total += rule.probability;
      }
      if (total != 1)
        throw InputError("rule probabilities of type '" + types[t] + "', action '" + action.name +
                         "' sum to " + to_string(total) + ", not 1");
    }
  }
}

std::string to_string(Flavor flavor) {
  switch (flavor) {
    case Flavor::Pure: return "pure";
    case Flavor::Max: return "max";
    case Flavor::Min: return "min";
    case Flavor::MaxMin: return "max-min";
  }
  return "?";
}

}  // namespace ppsolve
