#include "ppsolve/lp.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "ppsolve/errors.hpp"

namespace ppsolve {

namespace {

// x_original = offset + sum sign * x_column over the listed columns.
struct VariableMap {
  Rational offset;
  std::vector<std::pair<std::size_t, int>> columns;
};

// min c.x  s.t.  A x = b, x >= 0, b >= 0.
struct StandardForm {
  std::size_t rows = 0;
  std::size_t columns = 0;
  std::vector<RationalVector> a;
  RationalVector b;
  RationalVector c;
  Rational c_offset;
  std::vector<VariableMap> vars;
  // Column whose coefficient is +1 in that row and zero elsewhere, if any.
  std::vector<std::optional<std::size_t>> unit_column;
};

StandardForm to_standard_form(const LinearProgram& lp) {
  const std::size_t n = lp.variables();
  if (!lp.lower.empty() && lp.lower.size() != n)
    throw std::invalid_argument("solve_lp: lower bound vector has wrong length");
  if (!lp.upper.empty() && lp.upper.size() != n)
    throw std::invalid_argument("solve_lp: upper bound vector has wrong length");
  for (const auto& con : lp.constraints)
    if (con.row.size() != n) throw std::invalid_argument("solve_lp: constraint row has wrong length");

  StandardForm sf;
  sf.vars.resize(n);
  std::vector<Constraint> extra;  // bound rows x' <= u - l
  std::size_t col = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const std::optional<Rational> lo = lp.lower.empty() ? std::nullopt : lp.lower[v];
    const std::optional<Rational> hi = lp.upper.empty() ? std::nullopt : lp.upper[v];
    if (lo) {
      sf.vars[v] = {*lo, {{col, 1}}};
      if (hi) {
        if (*hi < *lo) throw std::invalid_argument("solve_lp: empty variable range");
        Constraint bound{RationalVector(n), Relation::LessEqual, *hi - *lo};
        bound.row[v] = 1;  // expressed on the shifted variable below
        extra.push_back(std::move(bound));
      }
      col += 1;
    } else if (hi) {
      sf.vars[v] = {*hi, {{col, -1}}};
      col += 1;
    } else {
      sf.vars[v] = {0, {{col, 1}, {col + 1, -1}}};
      col += 2;
    }
  }
  const std::size_t structural = col;

  std::size_t slack_count = extra.size();
  for (const auto& con : lp.constraints)
    if (con.relation != Relation::Equal) ++slack_count;

  sf.columns = structural + slack_count;
  sf.rows = lp.constraints.size() + extra.size();
  sf.a.assign(sf.rows, RationalVector(sf.columns));
  sf.b.assign(sf.rows, Rational(0));
  sf.unit_column.assign(sf.rows, std::nullopt);

  std::size_t slack = structural;
  std::size_t r = 0;
  for (const auto& con : lp.constraints) {
    Rational rhs = con.rhs;
    for (std::size_t v = 0; v < n; ++v) {
      if (sgn(con.row[v]) == 0) continue;
      rhs -= con.row[v] * sf.vars[v].offset;
      for (auto [c, sign] : sf.vars[v].columns) sf.a[r][c] += sign > 0 ? con.row[v] : Rational(-con.row[v]);
    }
    sf.b[r] = rhs;
    if (con.relation == Relation::LessEqual) sf.a[r][slack++] = 1;
    if (con.relation == Relation::GreaterEqual) sf.a[r][slack++] = -1;
    ++r;
  }
  for (const auto& bound : extra) {
    std::size_t v = 0;
    while (sgn(bound.row[v]) == 0) ++v;
    sf.a[r][sf.vars[v].columns.front().first] = 1;
    sf.b[r] = bound.rhs;
    sf.a[r][slack++] = 1;
    ++r;
  }
  for (std::size_t i = 0; i < sf.rows; ++i) {
    if (sgn(sf.b[i]) < 0) {
      sf.b[i] = -sf.b[i];
      for (auto& x : sf.a[i]) x = -x;
    }
    for (std::size_t c = structural; c < sf.columns; ++c)
      if (sf.a[i][c] == 1) sf.unit_column[i] = c;
  }

  sf.c.assign(sf.columns, Rational(0));
  const bool maximize = lp.direction == Direction::Maximize;
  for (std::size_t v = 0; v < n; ++v) {
    Rational coef = maximize ? Rational(-lp.objective[v]) : lp.objective[v];
    sf.c_offset += coef * sf.vars[v].offset;
    for (auto [c, sign] : sf.vars[v].columns) sf.c[c] += sign > 0 ? coef : Rational(-coef);
  }
  return sf;
}

std::size_t binomial_ceiling(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double acc = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (acc > static_cast<long double>(std::numeric_limits<std::size_t>::max() / 2))
      return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(acc + 0.5L);
}

class Tableau {
 public:
  Tableau(std::vector<RationalVector> rows, std::vector<std::size_t> basis)
      : rows_(std::move(rows)), basis_(std::move(basis)) {}

  std::size_t rows() const { return rows_.size(); }
  std::size_t width() const { return rows_.empty() ? cost_.size() : rows_.front().size(); }
  std::size_t rhs() const { return width() - 1; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  const RationalVector& row(std::size_t r) const { return rows_[r]; }
  const RationalVector& cost() const { return cost_; }
  std::size_t pivots() const { return pivots_; }

  void set_cost(const RationalVector& c) {
    cost_.assign(width(), Rational(0));
    for (std::size_t j = 0; j < c.size(); ++j) cost_[j] = c[j];
    for (std::size_t r = 0; r < rows(); ++r) {
      const Rational& cb = c[basis_[r]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < width(); ++j)
        if (sgn(rows_[r][j]) != 0) cost_[j] -= cb * rows_[r][j];
    }
  }

  void pivot(std::size_t r, std::size_t e) {
    auto& prow = rows_[r];
    const Rational inv = 1 / prow[e];
    std::vector<std::size_t> nonzero;
    for (std::size_t j = 0; j < prow.size(); ++j) {
      if (sgn(prow[j]) == 0) continue;
      prow[j] *= inv;
      nonzero.push_back(j);
    }
    auto eliminate = [&](RationalVector& target) {
      if (sgn(target[e]) == 0) return;
      const Rational f = target[e];
      for (std::size_t j : nonzero) target[j] -= f * prow[j];
    };
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (i != r) eliminate(rows_[i]);
    if (!cost_.empty()) eliminate(cost_);
    basis_[r] = e;
    ++pivots_;
  }

  void erase_row(std::size_t r) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  void drop_columns_from(std::size_t first) {
    const Rational rhs_cost = cost_.back();
    for (auto& row : rows_) {
      Rational rhs_value = row.back();
      row.resize(first);
      row.push_back(rhs_value);
    }
    cost_.resize(first);
    cost_.push_back(rhs_cost);
  }

  // Bland's rule over columns [0, allowed). Returns false when unbounded.
  bool optimize(std::size_t allowed) {
    const std::size_t ceiling = binomial_ceiling(allowed, rows());
    std::size_t steps = 0;
    for (;;) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < allowed; ++j)
        if (sgn(cost_[j]) < 0) {
          entering = j;
          break;
        }
      if (!entering) return true;
      const std::size_t e = *entering;
      std::optional<std::size_t> leave;
      Rational best_ratio;
      for (std::size_t r = 0; r < rows(); ++r) {
        if (sgn(rows_[r][e]) <= 0) continue;
        Rational ratio = rows_[r][rhs()] / rows_[r][e];
        if (!leave || ratio < best_ratio || (ratio == best_ratio && basis_[r] < basis_[*leave])) {
          leave = r;
          best_ratio = std::move(ratio);
        }
      }
      if (!leave) return false;
      pivot(*leave, e);
      if (++steps > ceiling)
        throw InvariantViolation("simplex exceeded its pivot ceiling; Bland's rule should prevent cycling");
    }
  }

 private:
  std::vector<RationalVector> rows_;
  std::vector<std::size_t> basis_;
  RationalVector cost_;
  std::size_t pivots_ = 0;
};

LpSolution finish(const LinearProgram& lp, const StandardForm& sf, std::vector<std::size_t> basis,
                  const RationalVector& basic_values, std::size_t pivots) {
  RationalVector column_value(sf.columns);
  for (std::size_t r = 0; r < basis.size(); ++r) column_value[basis[r]] = basic_values[r];
  LpSolution out;
  out.status = LpStatus::Optimal;
  out.point.resize(lp.variables());
  for (std::size_t v = 0; v < lp.variables(); ++v) {
    Rational x = sf.vars[v].offset;
    for (auto [c, sign] : sf.vars[v].columns) x += sign > 0 ? column_value[c] : Rational(-column_value[c]);
    out.point[v] = x;
    out.value += lp.objective[v] * x;
  }
  out.basis = std::move(basis);
  out.pivots = pivots;
  return out;
}

LpSolution from_tableau(const LinearProgram& lp, const StandardForm& sf, const Tableau& t) {
  RationalVector values(t.rows());
  for (std::size_t r = 0; r < t.rows(); ++r) values[r] = t.row(r)[t.rhs()];
  return finish(lp, sf, t.basis(), values, t.pivots());
}

LpSolution phase_two(const LinearProgram& lp, const StandardForm& sf, Tableau& t) {
  t.set_cost(sf.c);
  if (!t.optimize(sf.columns)) {
    LpSolution out;
    out.status = LpStatus::Unbounded;
    out.pivots = t.pivots();
    return out;
  }
  return from_tableau(lp, sf, t);
}

LpSolution cold_start(const LinearProgram& lp, const StandardForm& sf) {
  const std::size_t m = sf.rows;
  std::vector<std::size_t> basis(m);
  std::size_t artificials = 0;
  for (std::size_t r = 0; r < m; ++r) {
    if (sf.unit_column[r] && std::count(basis.begin(), basis.begin() + r, *sf.unit_column[r]) == 0)
      basis[r] = *sf.unit_column[r];
    else
      basis[r] = sf.columns + artificials++;
  }
  std::vector<RationalVector> rows(m, RationalVector(sf.columns + artificials + 1));
  for (std::size_t r = 0; r < m; ++r) {
    std::copy(sf.a[r].begin(), sf.a[r].end(), rows[r].begin());
    if (basis[r] >= sf.columns) rows[r][basis[r]] = 1;
    rows[r].back() = sf.b[r];
  }
  Tableau t(std::move(rows), std::move(basis));

  if (artificials > 0) {
    RationalVector phase_one_cost(sf.columns + artificials);
    for (std::size_t j = sf.columns; j < phase_one_cost.size(); ++j) phase_one_cost[j] = 1;
    t.set_cost(phase_one_cost);
    t.optimize(sf.columns + artificials);  // bounded below by zero
    if (sgn(t.cost()[t.rhs()]) != 0) {
      LpSolution out;
      out.status = LpStatus::Infeasible;
      out.pivots = t.pivots();
      return out;
    }
    // Drive artificial columns out of the basis; rows that cannot be
    // pivoted are linearly dependent and are dropped.
    for (std::size_t r = 0; r < t.rows();) {
      if (t.basis()[r] < sf.columns) {
        ++r;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < sf.columns; ++j)
        if (sgn(t.row(r)[j]) != 0) {
          col = j;
          break;
        }
      if (col) {
        t.pivot(r, *col);
        ++r;
      } else {
        t.erase_row(r);
      }
    }
    t.drop_columns_from(sf.columns);
  }
  return phase_two(lp, sf, t);
}

// Tries to start from a previously optimal basis. Returns nullopt when the
// hint is unusable (wrong size, singular, or primal infeasible).
std::optional<LpSolution> warm_start(const LinearProgram& lp, const StandardForm& sf,
                                     std::span<const std::size_t> hint) {
  const std::size_t m = sf.rows;
  if (hint.size() != m) return std::nullopt;
  for (std::size_t col : hint)
    if (col >= sf.columns) return std::nullopt;

  RationalMatrix basis_matrix(m, m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t k = 0; k < m; ++k) basis_matrix(r, k) = sf.a[r][hint[k]];
  RationalVector x_basic;
  try {
    x_basic = solve_linear(basis_matrix, sf.b);
  } catch (const SingularMatrixError&) {
    return std::nullopt;
  }
  for (const auto& x : x_basic)
    if (sgn(x) < 0) return std::nullopt;

  // Optimality check through the duals: B^T pi = c_B, d_j = c_j - pi . A_j.
  RationalVector c_basic(m);
  for (std::size_t k = 0; k < m; ++k) c_basic[k] = sf.c[hint[k]];
  RationalVector pi = solve_linear(basis_matrix.transposed(), c_basic);
  std::vector<bool> is_basic(sf.columns, false);
  for (std::size_t col : hint) is_basic[col] = true;
  bool optimal = true;
  for (std::size_t j = 0; j < sf.columns && optimal; ++j) {
    if (is_basic[j]) continue;
    Rational d = sf.c[j];
    for (std::size_t r = 0; r < m; ++r)
      if (sgn(sf.a[r][j]) != 0 && sgn(pi[r]) != 0) d -= pi[r] * sf.a[r][j];
    if (sgn(d) < 0) optimal = false;
  }
  std::vector<std::size_t> basis(hint.begin(), hint.end());
  if (optimal) return finish(lp, sf, std::move(basis), x_basic, 0);

  // Install the basis in a tableau and continue with phase two.
  std::vector<RationalVector> rows(m, RationalVector(sf.columns + 1));
  for (std::size_t r = 0; r < m; ++r) {
    std::copy(sf.a[r].begin(), sf.a[r].end(), rows[r].begin());
    rows[r].back() = sf.b[r];
  }
  Tableau t(std::move(rows), std::vector<std::size_t>(m, sf.columns));
  std::vector<bool> assigned(m, false);
  for (std::size_t col : hint) {
    std::optional<std::size_t> target;
    for (std::size_t r = 0; r < m; ++r)
      if (!assigned[r] && sgn(t.row(r)[col]) != 0 &&
          (!target || bit_size(t.row(r)[col]) < bit_size(t.row(*target)[col])))
        target = r;
    if (!target) return std::nullopt;
    t.pivot(*target, col);
    assigned[*target] = true;
  }
  return phase_two(lp, sf, t);
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) { return solve_lp(lp, {}); }

LpSolution solve_lp(const LinearProgram& lp, std::span<const std::size_t> basis_hint) {
  if (lp.objective.empty() && lp.constraints.empty()) {
    LpSolution out;
    out.status = LpStatus::Optimal;
    return out;
  }
  const StandardForm sf = to_standard_form(lp);
  if (sf.rows == 0) {
    for (const auto& c : sf.c)
      if (sgn(c) < 0) return LpSolution{LpStatus::Unbounded, {}, 0, {}, 0};
    return finish(lp, sf, {}, {}, 0);
  }
  if (!basis_hint.empty())
    if (auto warm = warm_start(lp, sf, basis_hint)) return *std::move(warm);
  return cold_start(lp, sf);
}

}  // namespace ppsolve
