#pragma once

// Shared fixtures, generators and oracles for the test binaries. The oracles
// here deliberately avoid the library's own evaluation code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ppsolve/linalg.hpp"
#include "ppsolve/lp.hpp"
#include "ppsolve/parse.hpp"
#include "ppsolve/system.hpp"

namespace testing {

using namespace ppsolve;

// x1 = 3/4 x1^2 + 1/4 in SNF. q* = (1/3, 1/9).
inline EquationSystem system_a() { return parse_system("x1 = 3/4*x2 + 1/4\nx2 = x1*x1\n"); }

// x1 = max/min(x2, x3) over two quadratic gadgets with q*_x2 = 1/3 and
// q*_x3 = 1 - sqrt(2/5).
inline std::string system_b_text(const char* op) {
  return std::string("x1 = ") + op +
         "(x2, x3)\n"
         "x2 = 0.75*x4 + 0.25\n"
         "x3 = 0.5*x5 + 0.3\n"
         "x4 = x2*x2\n"
         "x5 = x3*x3\n";
}
inline EquationSystem system_b_max() { return parse_system(system_b_text("max")); }
inline EquationSystem system_b_min() { return parse_system(system_b_text("min")); }

// zero = {x1}, one = {x2}.
inline EquationSystem system_c() { return parse_system("x1 = x1*x2\nx2 = 0.5*x2 + 0.5\n"); }

// q* = (1/2, 1/2, 1/2); choosing x2 at x1 gives a zero cycle.
inline EquationSystem system_d() { return parse_system("x1 = max(x2, x3)\nx2 = x1\nx3 = 0.5*x3 + 0.25\n"); }

// Max-min: x3 -> 1 - sqrt(1/2), x4 -> 1/3, x5 -> 1 - sqrt(2/5).
inline EquationSystem system_e() {
  ParseOptions options;
  options.allow_mixed = true;
  return parse_system(
      "x1 = max(x2, x3)\n"
      "x2 = min(x4, x5)\n"
      "x3 = 0.5*x8 + 0.25\n"
      "x4 = 0.75*x6 + 0.25\n"
      "x5 = 0.5*x7 + 0.3\n"
      "x6 = x4*x4\n"
      "x7 = x5*x5\n"
      "x8 = x3*x3\n",
      options);
}

// Least root of x = a x^2 + b.
inline double quadratic_lfp(double a, double b) { return (1.0 - std::sqrt(1.0 - 4.0 * a * b)) / (2.0 * a); }

inline const double kBranchX3 = quadratic_lfp(0.5, 0.3);  // 1 - sqrt(0.4)
inline const double kGadgetHalf = quadratic_lfp(0.5, 0.25);  // 1 - sqrt(0.5)

// ---------------------------------------------------------------------------
// Independent floating-point evaluation of SNF systems.

inline std::vector<double> eval_double(const EquationSystem& sys, const std::vector<double>& x) {
  std::vector<double> out(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) {
    std::visit(
        [&](const auto& eq) {
          using T = std::decay_t<decltype(eq)>;
          if constexpr (std::is_same_v<T, LinearEquation>) {
            double v = eq.constant.get_d();
            for (const auto& t : eq.terms) v += t.coeff.get_d() * x[t.var];
            out[i] = v;
          } else if constexpr (std::is_same_v<T, ProductEquation>) {
            out[i] = x[eq.left] * x[eq.right];
          } else if constexpr (std::is_same_v<T, ChoiceEquation>) {
            out[i] = eq.op == ChoiceOp::Max ? std::max(x[eq.first], x[eq.second]) : std::min(x[eq.first], x[eq.second]);
          } else {
            double best = 0;
            for (std::size_t k = 0; k < eq.alternatives.size(); ++k) {
              const auto& p = eq.alternatives[k];
              double v = p.constant.get_d();
              for (const auto& t : p.terms) {
                double m = t.coeff.get_d();
                for (auto [var, e] : t.monomial) m *= std::pow(x[var], static_cast<int>(e));
                v += m;
              }
              if (k == 0 || (*eq.op == ChoiceOp::Max ? v > best : v < best)) best = v;
            }
            out[i] = best;
          }
        },
        sys.equation(i));
  }
  return out;
}

inline std::vector<double> kleene_double(const EquationSystem& sys, std::size_t steps) {
  std::vector<double> x(sys.size(), 0.0);
  for (std::size_t k = 0; k < steps; ++k) x = eval_double(sys, x);
  return x;
}

// Exact evaluation by substitution, for rational points.
inline RationalVector eval_exact(const EquationSystem& sys, const RationalVector& x) {
  RationalVector out(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const auto& eq = sys.equation(i);
    if (const auto* l = std::get_if<LinearEquation>(&eq)) {
      out[i] = l->constant;
      for (const auto& t : l->terms) out[i] += t.coeff * x[t.var];
    } else if (const auto* q = std::get_if<ProductEquation>(&eq)) {
      out[i] = x[q->left] * x[q->right];
    } else if (const auto* c = std::get_if<ChoiceEquation>(&eq)) {
      out[i] = c->op == ChoiceOp::Max ? std::max(x[c->first], x[c->second]) : std::min(x[c->first], x[c->second]);
    } else {
      const auto& g = std::get<GeneralEquation>(eq);
      for (std::size_t k = 0; k < g.alternatives.size(); ++k) {
        Rational v = g.alternatives[k].constant;
        for (const auto& t : g.alternatives[k].terms) {
          Rational m = t.coeff;
          for (auto [var, e] : t.monomial)
            for (unsigned p = 0; p < e; ++p) m *= x[var];
          v += m;
        }
        if (k == 0 || (*g.op == ChoiceOp::Max ? v > out[i] : v < out[i])) out[i] = v;
      }
    }
  }
  return out;
}

// Every policy of `sys`, in index order of the choice equations.
inline std::vector<Policy> all_policies(const EquationSystem& sys) {
  const auto eqs = sys.choice_equations();
  std::vector<Policy> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << eqs.size()); ++mask) {
    Policy p;
    for (std::size_t b = 0; b < eqs.size(); ++b) {
      const auto& c = std::get<ChoiceEquation>(sys.equation(eqs[b]));
      p.choice[eqs[b]] = (mask >> b) & 1 ? c.second : c.first;
    }
    out.push_back(std::move(p));
  }
  return out;
}

// Fixes choices without going through the library.
inline EquationSystem fix_policy(const EquationSystem& sys, const Policy& p) {
  std::vector<Equation> eqs = sys.equations();
  for (auto [i, j] : p.choice) eqs[i] = LinearEquation{0, {{j, 1}}};
  return EquationSystem(sys.names(), eqs, infer_flavor(eqs));
}

// Variables whose least fixed point is positive, by a boolean fixpoint.
inline std::vector<bool> positive_double(const EquationSystem& sys) {
  std::vector<bool> pos(sys.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < sys.size(); ++i) {
      if (pos[i]) continue;
      const auto& eq = sys.equation(i);
      bool p = false;
      if (const auto* l = std::get_if<LinearEquation>(&eq)) {
        p = sgn(l->constant) > 0;
        for (const auto& t : l->terms) p = p || (sgn(t.coeff) > 0 && pos[t.var]);
      } else if (const auto* q = std::get_if<ProductEquation>(&eq)) {
        p = pos[q->left] && pos[q->right];
      } else if (const auto* c = std::get_if<ChoiceEquation>(&eq)) {
        p = c->op == ChoiceOp::Max ? pos[c->first] || pos[c->second] : pos[c->first] && pos[c->second];
      }
      if (p) changed = pos[i] = true;
    }
  }
  return pos;
}

// Least fixed point of a pure SNF system by floating-point Newton from 0 on
// the positive variables. Accurate to roughly 1e-12 away from criticality
// and 1e-7 at it.
inline std::vector<double> newton_double(const EquationSystem& sys, std::size_t max_steps = 200) {
  const std::size_t n = sys.size();
  const auto pos = positive_double(sys);
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < n; ++i)
    if (pos[i]) live.push_back(i);
  const std::size_t m = live.size();
  std::vector<double> x(n, 0.0);
  for (std::size_t step = 0; step < max_steps && m > 0; ++step) {
    const auto fx = eval_double(sys, x);
    std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
    std::vector<std::size_t> slot(n, m);
    for (std::size_t r = 0; r < m; ++r) slot[live[r]] = r;
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t i = live[r];
      a[r][r] = 1.0;
      const auto& eq = sys.equation(i);
      if (const auto* l = std::get_if<LinearEquation>(&eq)) {
        for (const auto& t : l->terms)
          if (slot[t.var] < m) a[r][slot[t.var]] -= t.coeff.get_d();
      } else if (const auto* q = std::get_if<ProductEquation>(&eq)) {
        a[r][slot[q->left]] -= x[q->right];
        a[r][slot[q->right]] -= x[q->left];
      }
      a[r][m] = fx[i] - x[i];
    }
    for (std::size_t c = 0; c < m; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < m; ++r)
        if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
      if (std::abs(a[p][c]) < 1e-300) return x;
      std::swap(a[p], a[c]);
      for (std::size_t r = 0; r < m; ++r) {
        if (r == c || a[r][c] == 0) continue;
        const double f = a[r][c] / a[c][c];
        for (std::size_t k = c; k <= m; ++k) a[r][k] -= f * a[c][k];
      }
    }
    double moved = 0;
    for (std::size_t r = 0; r < m; ++r) {
      const double d = a[r][m] / a[r][r];
      const double next = std::clamp(x[live[r]] + d, 0.0, 1.0);
      moved = std::max(moved, std::abs(next - x[live[r]]));
      x[live[r]] = next;
    }
    if (moved < 1e-16) break;
  }
  return x;
}

// q* of a max or min SNF system as the componentwise best policy value.
inline std::vector<double> game_value_double(const EquationSystem& sys) {
  const bool max = sys.flavor() != Flavor::Min;
  std::vector<double> best;
  for (const auto& p : all_policies(sys)) {
    const auto v = newton_double(fix_policy(sys, p));
    if (best.empty()) {
      best = v;
      continue;
    }
    for (std::size_t i = 0; i < v.size(); ++i) best[i] = max ? std::max(best[i], v[i]) : std::min(best[i], v[i]);
  }
  return best;
}

// Spectral radius of a nonnegative matrix by power iteration on (A + I)/2,
// whose Perron root is (rho + 1)/2 and which is aperiodic.
inline double spectral_radius_numeric(const std::vector<std::vector<double>>& a, std::size_t steps = 10000) {
  const std::size_t n = a.size();
  if (n == 0) return 0;
  std::vector<double> v(n, 1.0);
  double rho = 0;
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 * v[i];
      for (std::size_t j = 0; j < n; ++j) w[i] += 0.5 * a[i][j] * v[j];
    }
    double norm = *std::max_element(w.begin(), w.end());
    if (norm == 0) return 0;
    for (auto& x : w) x /= norm;
    rho = 2 * norm - 1;
    v = std::move(w);
  }
  return std::max(rho, 0.0);
}

// ---------------------------------------------------------------------------
// Random generators.

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937_64& engine() { return rng_; }

  // Rational in [lo, hi] with denominator `den`.
  Rational rational(long lo_num, long hi_num, long den) {
    long num = std::uniform_int_distribution<long>(lo_num, hi_num)(rng_);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  // Nonnegative weights with denominator `den` summing to at most `budget`/den.
  std::vector<long> split(std::size_t parts, long budget) {
    std::vector<long> out(parts, 0);
    long left = budget;
    for (std::size_t k = 0; k < parts; ++k) {
      out[k] = std::uniform_int_distribution<long>(0, left)(rng_);
      left -= out[k];
    }
    std::shuffle(out.begin(), out.end(), rng_);
    return out;
  }

  // SNF system over n variables. `choices` M equations with operator `op`.
  // L rows use denominators `den`; their mass is at most 1.
  EquationSystem snf_system(std::size_t n, std::size_t choices, ChoiceOp op, long den, double q_share = 0.3) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng_);
    std::vector<Equation> eqs(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = order[k];
      if (k < choices) {
        std::size_t a = below(n), b = below(n);
        while (b == a && n > 1) b = below(n);
        eqs[i] = ChoiceEquation{op, a, b};
      } else if (coin(q_share)) {
        eqs[i] = ProductEquation{below(n), below(n)};
      } else {
        const std::size_t arity = 1 + below(std::min<std::size_t>(n, 3));
        const long mass = coin(0.4) ? den : static_cast<long>(below(static_cast<std::size_t>(den)) + 1);
        auto w = split(arity + 1, mass);
        LinearEquation l{Rational(w[0], den), {}};
        l.constant.canonicalize();
        std::map<std::size_t, Rational> coeffs;
        for (std::size_t t = 0; t < arity; ++t) coeffs[below(n)] += Rational(w[t + 1], den);
        for (auto& [v, c] : coeffs) {
          c.canonicalize();
          if (sgn(c) != 0) l.terms.push_back({v, c});
        }
        eqs[i] = std::move(l);
      }
    }
    Flavor flavor = choices == 0 ? Flavor::Pure : (op == ChoiceOp::Max ? Flavor::Max : Flavor::Min);
    return EquationSystem(std::move(names), std::move(eqs), flavor);
  }

 private:
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// LP oracle: enumerate every basic point of {A x (rel) b, x >= 0} and keep
// the best feasible one. Small instances only.

struct BruteLpResult {
  bool feasible = false;
  bool bounded = true;
  Rational value;
};

inline bool satisfies(const LinearProgram& lp, const RationalVector& x) {
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (!lp.lower.empty() && lp.lower[v] && x[v] < *lp.lower[v]) return false;
    if (!lp.upper.empty() && lp.upper[v] && x[v] > *lp.upper[v]) return false;
  }
  for (const auto& c : lp.constraints) {
    Rational s = 0;
    for (std::size_t v = 0; v < x.size(); ++v) s += c.row[v] * x[v];
    if (c.relation == Relation::LessEqual && s > c.rhs) return false;
    if (c.relation == Relation::GreaterEqual && s < c.rhs) return false;
    if (c.relation == Relation::Equal && s != c.rhs) return false;
  }
  return true;
}

// Candidate hyperplanes: constraint rows and bounds; a vertex is the solution
// of n linearly independent tight hyperplanes.
inline BruteLpResult brute_force_lp(const LinearProgram& lp) {
  const std::size_t n = lp.variables();
  std::vector<std::pair<RationalVector, Rational>> planes;
  for (const auto& c : lp.constraints) planes.push_back({c.row, c.rhs});
  for (std::size_t v = 0; v < n; ++v) {
    RationalVector e(n);
    e[v] = 1;
    if (!lp.lower.empty() && lp.lower[v]) planes.push_back({e, *lp.lower[v]});
    if (!lp.upper.empty() && lp.upper[v]) planes.push_back({e, *lp.upper[v]});
  }
  BruteLpResult best;
  const bool maximize = lp.direction == Direction::Maximize;
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t start, std::size_t depth) {
    if (depth == n) {
      RationalMatrix m(n, n);
      RationalVector b(n);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) m(r, c) = planes[pick[r]].first[c];
        b[r] = planes[pick[r]].second;
      }
      RationalVector x;
      try {
        x = solve_linear(m, b);
      } catch (const std::exception&) {
        return;
      }
      if (!satisfies(lp, x)) return;
      Rational value = 0;
      for (std::size_t v = 0; v < n; ++v) value += lp.objective[v] * x[v];
      if (!best.feasible || (maximize ? value > best.value : value < best.value)) best.value = value;
      best.feasible = true;
      return;
    }
    for (std::size_t k = start; k < planes.size(); ++k) {
      pick[depth] = k;
      choose(k + 1, depth + 1);
    }
  };
  choose(0, 0);
  return best;
}

// Every variable boxed, so an optimum exists whenever the program is
// feasible; some lower bounds are negative.
inline LinearProgram random_boxed_lp(Generator& gen) {
  const std::size_t n = 1 + gen.below(4);
  const std::size_t m = 1 + gen.below(6);
  LinearProgram lp;
  lp.direction = gen.coin() ? Direction::Maximize : Direction::Minimize;
  for (std::size_t v = 0; v < n; ++v) lp.objective.push_back(gen.rational(-6, 6, 1 + gen.below(4)));
  for (std::size_t v = 0; v < n; ++v) {
    lp.lower.push_back(gen.rational(-4, 0, 1 + gen.below(3)));
    lp.upper.push_back(gen.rational(1, 8, 1));
  }
  for (std::size_t r = 0; r < m; ++r) {
    Constraint c{RationalVector(n), Relation::LessEqual, gen.rational(-6, 10, 1 + gen.below(3))};
    for (std::size_t v = 0; v < n; ++v) c.row[v] = gen.coin(0.25) ? Rational(0) : gen.rational(-5, 5, 1 + gen.below(5));
    const auto pick = gen.below(5);
    c.relation = pick < 2 ? Relation::LessEqual : pick < 4 ? Relation::GreaterEqual : Relation::Equal;
    lp.constraints.push_back(std::move(c));
  }
  return lp;
}

// Beale's example; cycles under the largest-coefficient rule. Optimum -1/20.
inline LinearProgram beale_lp() {
  LinearProgram lp;
  lp.objective = {Rational(-3, 4), 150, Rational(-1, 50), 6};
  lp.constraints = {{{Rational(1, 4), -60, Rational(-1, 25), 9}, Relation::LessEqual, 0},
                    {{Rational(1, 2), -90, Rational(-1, 50), 3}, Relation::LessEqual, 0},
                    {{0, 0, 1, 0}, Relation::LessEqual, 1}};
  lp.lower.assign(4, Rational(0));
  return lp;
}

}  // namespace testing
