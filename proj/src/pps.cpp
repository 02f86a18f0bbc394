#include "ppsolve/pps.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "ppsolve/errors.hpp"

namespace ppsolve {

namespace {

class SnfBuilder {
 public:
  explicit SnfBuilder(const EquationSystem& sys) : names_(sys.names()), equations_(sys.equations()) {
    used_.insert(names_.begin(), names_.end());
    next_name_ = names_.size() + 1;
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (std::holds_alternative<GeneralEquation>(equations_[i])) {
        // lower() appends to equations_, so work on a copy.
        GeneralEquation g = std::get<GeneralEquation>(equations_[i]);
        Equation lowered = lower(g);
        equations_[i] = std::move(lowered);
      }
  }

  EquationSystem build(Flavor flavor) { return EquationSystem(std::move(names_), std::move(equations_), flavor); }

 private:
  std::size_t fresh(Equation eq) {
    while (used_.count("x" + std::to_string(next_name_))) ++next_name_;
    std::string name = "x" + std::to_string(next_name_++);
    used_.insert(name);
    names_.push_back(std::move(name));
    equations_.push_back(std::move(eq));
    return names_.size() - 1;
  }

  std::size_t power(std::size_t v, unsigned e) {
    if (e == 1) return v;
    Monomial key{{v, e}};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::size_t out;
    if (e % 2 == 0) {
      std::size_t half = power(v, e / 2);
      out = fresh(ProductEquation{half, half});
    } else {
      out = fresh(ProductEquation{power(v, e - 1), v});
    }
    cache_.emplace(std::move(key), out);
    return out;
  }

  std::size_t product(const Monomial& m) {
    if (m.size() == 1) return power(m[0].first, m[0].second);
    if (auto it = cache_.find(m); it != cache_.end()) return it->second;
    Monomial rest(m.begin(), m.end() - 1);
    std::size_t left = product(rest);
    std::size_t right = power(m.back().first, m.back().second);
    std::size_t out = fresh(ProductEquation{left, right});
    cache_.emplace(m, out);
    return out;
  }

  Equation linear_form(const ProbPolynomial& p) {
    LinearEquation l{p.constant, {}};
    std::map<std::size_t, Rational> coeffs;
    for (const auto& t : p.terms) coeffs[product(t.monomial)] += t.coeff;
    for (auto& [v, c] : coeffs) l.terms.push_back({v, c});
    return l;
  }

  Equation polynomial_form(const ProbPolynomial& p) {
    // A lone coefficient-1 monomial of degree >= 2 is already a product.
    if (sgn(p.constant) == 0 && p.terms.size() == 1 && p.terms[0].coeff == 1) {
      const auto& m = p.terms[0].monomial;
      unsigned degree = 0;
      for (auto [v, e] : m) degree += e;
      if (degree >= 2) {
        if (m.size() == 1) {
          auto [v, e] = m[0];
          if (e == 2) return ProductEquation{v, v};
          return e % 2 == 0 ? ProductEquation{power(v, e / 2), power(v, e / 2)}
                            : ProductEquation{power(v, e - 1), v};
        }
        Monomial rest(m.begin(), m.end() - 1);
        return ProductEquation{product(rest), power(m.back().first, m.back().second)};
      }
    }
    return linear_form(p);
  }

  std::size_t argument(const ProbPolynomial& p) {
    if (sgn(p.constant) == 0 && p.terms.size() == 1 && p.terms[0].coeff == 1) {
      const auto& m = p.terms[0].monomial;
      if (m.size() == 1 && m[0].second == 1) return m[0].first;
      return product(m);
    }
    return fresh(linear_form(p));
  }

  Equation lower(const GeneralEquation& g) {
    if (!g.op) return polynomial_form(g.alternatives.front());
    std::vector<std::size_t> args;
    for (const auto& p : g.alternatives) args.push_back(argument(p));
    // x_i = op(a1, y1), y1 = op(a2, y2), ..., y_{m-2} = op(a_{m-1}, a_m)
    std::size_t tail = args.back();
    std::vector<std::size_t> chain;
    if (args.size() > 2) {
      chain.reserve(args.size() - 2);
      for (std::size_t k = 1; k + 1 < args.size(); ++k) chain.push_back(fresh(LinearEquation{}));
      for (std::size_t k = chain.size(); k-- > 0;) {
        equations_[chain[k]] = ChoiceEquation{*g.op, args[k + 1], tail};
        tail = chain[k];
      }
    }
    return ChoiceEquation{*g.op, args[0], tail};
  }

  std::vector<std::string> names_;
  std::vector<Equation> equations_;
  std::unordered_set<std::string> used_;
  std::size_t next_name_ = 0;
  std::map<Monomial, std::size_t> cache_;
};

std::size_t index_bits(std::size_t n) {
  // ceil(log2(n + 1)) = bit length of n
  std::size_t b = 0;
  while (n > 0) {
    ++b;
    n >>= 1;
  }
  return b;
}

void check_dimension(const EquationSystem& sys, std::size_t size) {
  if (size != sys.size())
    throw InputError("point has dimension " + std::to_string(size) + ", system has " +
                     std::to_string(sys.size()) + " variables");
}

template <typename T>
T coefficient(const Rational& r) {
  if constexpr (std::is_same_v<T, Rational>)
    return r;
  else
    return r.get_d();
}

template <typename T>
T eval_polynomial(const ProbPolynomial& p, const std::vector<T>& x) {
  T value = coefficient<T>(p.constant);
  for (const auto& t : p.terms) {
    T term = coefficient<T>(t.coeff);
    for (auto [v, e] : t.monomial)
      for (unsigned k = 0; k < e; ++k) term *= x[v];
    value += term;
  }
  return value;
}

template <typename T>
std::vector<T> evaluate_impl(const EquationSystem& sys, const std::vector<T>& x) {
  check_dimension(sys, x.size());
  std::vector<T> out(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const auto& eq = sys.equation(i);
    if (const auto* l = std::get_if<LinearEquation>(&eq)) {
      T v = coefficient<T>(l->constant);
      for (const auto& t : l->terms) v += coefficient<T>(t.coeff) * x[t.var];
      out[i] = v;
    } else if (const auto* q = std::get_if<ProductEquation>(&eq)) {
      out[i] = x[q->left] * x[q->right];
    } else if (const auto* c = std::get_if<ChoiceEquation>(&eq)) {
      const T& a = x[c->first];
      const T& b = x[c->second];
      out[i] = c->op == ChoiceOp::Max ? std::max(a, b) : std::min(a, b);
    } else {
      const auto& g = std::get<GeneralEquation>(eq);
      T best = eval_polynomial(g.alternatives.front(), x);
      for (std::size_t k = 1; k < g.alternatives.size(); ++k) {
        T v = eval_polynomial(g.alternatives[k], x);
        best = *g.op == ChoiceOp::Max ? std::max(best, v) : std::min(best, v);
      }
      out[i] = best;
    }
  }
  return out;
}

void check_policy(const EquationSystem& sys, const Policy& policy, std::optional<ChoiceOp> only) {
  std::size_t expected = 0;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const auto* c = std::get_if<ChoiceEquation>(&sys.equation(i));
    if (!c || (only && c->op != *only)) continue;
    ++expected;
    auto it = policy.choice.find(i);
    if (it == policy.choice.end()) throw InputError("policy misses choice equation " + sys.name(i));
    if (it->second != c->first && it->second != c->second)
      throw InputError("policy picks " + std::to_string(it->second) + ", which is not an argument of " + sys.name(i));
  }
  if (policy.choice.size() != expected) throw InputError("policy covers equations that are not choices");
}

}  // namespace

SnfResult to_snf(const EquationSystem& sys) {
  std::vector<std::size_t> mapping(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) mapping[i] = i;
  if (sys.is_snf()) return {sys, mapping};
  SnfBuilder builder(sys);
  return {builder.build(sys.flavor()), mapping};
}

std::size_t encoding_size(const EquationSystem& sys) {
  if (!sys.is_snf()) throw InputError("encoding size is defined for systems in SNF");
  const std::size_t idx = index_bits(sys.size());
  std::size_t total = 0;
  for (const auto& eq : sys.equations()) {
    total += 2;
    if (const auto* l = std::get_if<LinearEquation>(&eq)) {
      if (sgn(l->constant) != 0) total += bit_size(l->constant);
      for (const auto& t : l->terms) {
        if (sgn(t.coeff) == 0) continue;
        total += bit_size(t.coeff) + idx;
      }
    } else {
      total += 2 * idx;
    }
  }
  return total;
}

EquationSystem apply_policy(const EquationSystem& sys, const Policy& policy) {
  check_policy(sys, policy, std::nullopt);
  std::vector<Equation> eqs = sys.equations();
  for (auto [i, j] : policy.choice) eqs[i] = LinearEquation{0, {{j, 1}}};
  return EquationSystem(sys.names(), std::move(eqs), Flavor::Pure);
}

EquationSystem apply_partial_policy(const EquationSystem& sys, const Policy& policy, ChoiceOp op) {
  check_policy(sys, policy, op);
  std::vector<Equation> eqs = sys.equations();
  for (auto [i, j] : policy.choice) eqs[i] = LinearEquation{0, {{j, 1}}};
  return EquationSystem(sys.names(), eqs, infer_flavor(eqs));
}

RationalVector evaluate(const EquationSystem& sys, const RationalVector& point) {
  return evaluate_impl(sys, point);
}

std::vector<double> evaluate(const EquationSystem& sys, const std::vector<double>& point) {
  return evaluate_impl(sys, point);
}

RationalMatrix jacobian(const EquationSystem& sys, const RationalVector& point) {
  check_dimension(sys, point.size());
  const std::size_t n = sys.size();
  RationalMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& eq = sys.equation(i);
    if (const auto* l = std::get_if<LinearEquation>(&eq)) {
      for (const auto& t : l->terms) out(i, t.var) += t.coeff;
    } else if (const auto* q = std::get_if<ProductEquation>(&eq)) {
      out(i, q->left) += point[q->right];
      out(i, q->right) += point[q->left];
    } else {
      throw InputError("jacobian needs a pure system in SNF; equation " + sys.name(i) + " is not L or Q");
    }
  }
  return out;
}

RationalVector kleene_iterate(const EquationSystem& sys, std::size_t k) {
  RationalVector x(sys.size());
  for (std::size_t step = 0; step < k; ++step) x = evaluate(sys, x);
  return x;
}

std::vector<double> kleene_iterate_numeric(const EquationSystem& sys, std::size_t k) {
  std::vector<double> x(sys.size(), 0.0);
  for (std::size_t step = 0; step < k; ++step) x = evaluate(sys, x);
  return x;
}

std::vector<std::size_t> dependencies(const EquationSystem& sys, std::size_t i) {
  std::set<std::size_t> deps;
  const auto& eq = sys.equation(i);
  if (const auto* l = std::get_if<LinearEquation>(&eq)) {
    for (const auto& t : l->terms)
      if (sgn(t.coeff) != 0) deps.insert(t.var);
  } else if (const auto* q = std::get_if<ProductEquation>(&eq)) {
    deps.insert({q->left, q->right});
  } else if (const auto* c = std::get_if<ChoiceEquation>(&eq)) {
    deps.insert({c->first, c->second});
  } else {
    for (const auto& p : std::get<GeneralEquation>(eq).alternatives)
      for (const auto& t : p.terms)
        if (sgn(t.coeff) != 0)
          for (auto [v, e] : t.monomial) deps.insert(v);
  }
  return {deps.begin(), deps.end()};
}

std::vector<std::vector<std::size_t>> scc_decomposition(const EquationSystem& sys) {
  std::vector<std::vector<std::size_t>> adj(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) adj[i] = dependencies(sys, i);
  return scc_decomposition(adj);
}

std::vector<std::vector<std::size_t>> scc_decomposition(const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);

  // Iterative Tarjan; components are emitted sinks first.
  std::vector<std::size_t> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    std::vector<std::pair<std::size_t, std::size_t>> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < adj[v].size()) {
        std::size_t w = adj[v][next++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<std::size_t> component;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != done);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
    }
  }
  std::reverse(components.begin(), components.end());
  return components;
}

EquationSystem bmdp_to_system(const Bmdp& bmdp, Objective objective) {
  bmdp.validate();
  const ChoiceOp op = objective == Objective::MaximizeExtinction ? ChoiceOp::Max : ChoiceOp::Min;
  std::vector<Equation> eqs;
  for (const auto& acts : bmdp.actions) {
    GeneralEquation g{acts.size() > 1 ? std::optional(op) : std::nullopt, {}};
    for (const auto& action : acts) {
      ProbPolynomial p;
      for (const auto& rule : action.rules) {
        if (rule.offspring.empty())
          p.constant += rule.probability;
        else
          p.terms.push_back({rule.probability, Monomial(rule.offspring.begin(), rule.offspring.end())});
      }
      g.alternatives.push_back(std::move(p));
    }
    eqs.push_back(classify(std::move(g)));
  }
  Flavor flavor = infer_flavor(eqs);
  return EquationSystem(bmdp.types, std::move(eqs), flavor);
}

}  // namespace ppsolve
