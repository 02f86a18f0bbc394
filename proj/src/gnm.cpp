#include "ppsolve/gnm.hpp"

#include <algorithm>

#include "ppsolve/errors.hpp"
#include "ppsolve/pps.hpp"

namespace ppsolve {

namespace {

void require_snf(const EquationSystem& sys, const RationalVector& y) {
  if (!sys.is_snf()) throw InputError("GNM needs a system in SNF");
  if (y.size() != sys.size()) throw InputError("anchor has the wrong dimension");
}

}  // namespace

RationalVector LinearizedSystem::evaluate(const RationalVector& x) const {
  if (x.size() != rows.size()) throw InputError("point has the wrong dimension");
  RationalVector out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (const auto* l = std::get_if<LinearEquation>(&rows[i])) {
      out[i] = l->constant;
      for (const auto& t : l->terms) out[i] += t.coeff * x[t.var];
    } else {
      const auto& c = std::get<ChoiceEquation>(rows[i]);
      out[i] = c.op == ChoiceOp::Max ? std::max(x[c.first], x[c.second]) : std::min(x[c.first], x[c.second]);
    }
  }
  return out;
}

LinearizedSystem linearize(const EquationSystem& sys, const RationalVector& y) {
  require_snf(sys, y);
  LinearizedSystem out{y, {}};
  out.rows.reserve(sys.size());
  for (const auto& eq : sys.equations()) {
    if (const auto* l = std::get_if<LinearEquation>(&eq)) {
      out.rows.emplace_back(*l);
    } else if (const auto* q = std::get_if<ProductEquation>(&eq)) {
      const std::size_t j = q->left, k = q->right;
      LinearEquation row{-y[j] * y[k], {}};
      if (j == k) {
        if (sgn(y[j]) != 0) row.terms.push_back({j, 2 * y[j]});
      } else {
        std::map<std::size_t, Rational> coeffs{{j, y[k]}, {k, y[j]}};
        for (auto& [v, c] : coeffs)
          if (sgn(c) != 0) row.terms.push_back({v, c});
      }
      out.rows.emplace_back(std::move(row));
    } else {
      out.rows.emplace_back(std::get<ChoiceEquation>(eq));
    }
  }
  return out;
}

GnmStep gnm_step_lp(const EquationSystem& sys, const RationalVector& y, std::span<const std::size_t> basis_hint) {
  if (sys.flavor() == Flavor::MaxMin) throw InputError("GNM runs on max or min systems, not max-min");
  const auto lin = linearize(sys, y);
  const std::size_t n = sys.size();
  const bool minimize = sys.flavor() != Flavor::Min;
  const Relation rel = minimize ? Relation::LessEqual : Relation::GreaterEqual;

  LinearProgram lp;
  lp.direction = minimize ? Direction::Minimize : Direction::Maximize;
  lp.objective.assign(n, Rational(1));
  for (std::size_t i = 0; i < n; ++i) {
    if (const auto* l = std::get_if<LinearEquation>(&lin.rows[i])) {
      // constant + sum c_j a_j  (<= or >=)  a_i
      Constraint con{RationalVector(n), rel, -l->constant};
      for (const auto& t : l->terms) con.row[t.var] += t.coeff;
      con.row[i] -= 1;
      lp.constraints.push_back(std::move(con));
    } else {
      const auto& c = std::get<ChoiceEquation>(lin.rows[i]);
      for (std::size_t arg : {c.first, c.second}) {
        Constraint con{RationalVector(n), rel, 0};
        con.row[arg] += 1;
        con.row[i] -= 1;
        lp.constraints.push_back(std::move(con));
      }
    }
  }

  LpSolution sol = solve_lp(lp, basis_hint);
  if (sol.status != LpStatus::Optimal)
    throw InvariantViolation(std::string("GNM linear program is ") +
                             (sol.status == LpStatus::Infeasible ? "infeasible" : "unbounded") +
                             "; the anchor is probably not below q* or the system was not reduced");
  return {std::move(sol.point), std::move(sol.basis), sol.pivots};
}

RationalVector gnm_step(const EquationSystem& sys, const RationalVector& y) { return gnm_step_lp(sys, y).point; }

RationalVector newton_step(const EquationSystem& sys, const RationalVector& y) {
  require_snf(sys, y);
  const RationalMatrix m = RationalMatrix::identity(sys.size()) - jacobian(sys, y);
  return y + solve_linear(m, evaluate(sys, y) - y);
}

RationalVector round_down(const RationalVector& v, std::size_t h) {
  if (h == 0) throw InputError("round_down needs h >= 1");
  const Rational scale = pow2(static_cast<long>(h));
  RationalVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (sgn(v[i]) <= 0) continue;
    out[i] = Rational(floor(v[i] * scale)) / scale;
    out[i].canonicalize();
  }
  return out;
}

SolveReport solve(const EquationSystem& sys, std::size_t j, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (sys.flavor() == Flavor::MaxMin) throw InputError("solve takes a max or a min system; use bssg for max-min");

  SolveReport report;
  report.j = j;
  SnfResult snf = to_snf(sys);
  report.snf = std::move(snf.system);
  report.qualitative = reduce(report.snf);
  const EquationSystem& reduced = report.qualitative.reduced;
  report.encoding_size = encoding_size(reduced);
  report.h = j + 2 + 4 * report.encoding_size;

  const bool newton = reduced.choice_equations().empty() && !options.use_lp_for_pure;
  RationalVector x(reduced.size());
  std::vector<std::size_t> basis;
  for (std::size_t k = 0; k < report.h && !reduced.empty(); ++k) {
    RationalVector next;
    if (newton) {
      next = newton_step(reduced, x);
    } else {
      GnmStep step = gnm_step_lp(reduced, x, basis);
      next = std::move(step.point);
      basis = std::move(step.basis);
    }
    for (std::size_t i = 0; i < next.size(); ++i)
      if (next[i] > 1)
        throw InvariantViolation("GNM iterate " + std::to_string(k + 1) + " exceeds 1 at " + reduced.name(i) +
                                 " (" + to_decimal(next[i], 12) + ")");
    RationalVector rounded = round_down(next, report.h);
    ++report.iterations;
    const bool repeated = rounded == x;
    if (options.record_iterates) report.iterates.push_back({std::move(next), rounded});
    x = std::move(rounded);
    if (repeated) break;
  }

  RationalVector full = expand(report.qualitative, x, report.snf.size());
  report.approximation.assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(sys.size()));
  report.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return report;
}

PolicyImprovementResult policy_improvement_min(const EquationSystem& sys, const RationalVector& y) {
  require_snf(sys, y);
  if (sys.flavor() == Flavor::Max || sys.flavor() == Flavor::MaxMin)
    throw InputError("policy_improvement_min takes a min system");

  PolicyImprovementResult out;
  for (std::size_t i : sys.choice_equations()) {
    const auto& c = std::get<ChoiceEquation>(sys.equation(i));
    // Greedy at the anchor; ties go to the lower index.
    std::size_t lo = std::min(c.first, c.second), hi = std::max(c.first, c.second);
    out.policy.choice[i] = y[hi] < y[lo] ? hi : lo;
  }

  const auto lin = linearize(sys, y);
  const std::size_t limit = sys.choice_equations().size() >= 63
                                ? static_cast<std::size_t>(-1)
                                : (std::size_t{1} << sys.choice_equations().size());
  for (;;) {
    out.iterate = newton_step(apply_policy(sys, out.policy), y);
    const RationalVector image = lin.evaluate(out.iterate);
    std::optional<std::size_t> improvable;
    for (std::size_t i = 0; i < image.size(); ++i)
      if (image[i] < out.iterate[i]) {
        improvable = i;
        break;
      }
    if (!improvable) return out;
    const auto* c = std::get_if<ChoiceEquation>(&sys.equation(*improvable));
    if (!c) throw InvariantViolation("policy evaluation is not a fixed point off the choice equations");
    const auto& z = out.iterate;
    std::size_t lo = std::min(c->first, c->second), hi = std::max(c->first, c->second);
    out.policy.choice[*improvable] = z[hi] < z[lo] ? hi : lo;
    if (++out.switches > limit) throw InvariantViolation("policy improvement did not terminate");
  }
}

}  // namespace ppsolve
