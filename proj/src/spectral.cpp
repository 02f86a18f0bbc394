#include "ppsolve/errors.hpp"
#include "ppsolve/linalg.hpp"
#include "ppsolve/lp.hpp"

namespace ppsolve {

bool spectral_radius_leq_one(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("spectral_radius_leq_one: matrix is not square");
  const std::size_t n = a.rows();
  LinearProgram lp;
  lp.objective.assign(n, Rational(0));
  lp.lower.assign(n, Rational(1));
  for (std::size_t i = 0; i < n; ++i) {
    Constraint row{RationalVector(n), Relation::LessEqual, 0};
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(a(i, j)) < 0) throw InputError("spectral_radius_leq_one: negative matrix entry");
      row.row[j] = a(i, j);
    }
    row.row[i] -= 1;
    lp.constraints.push_back(std::move(row));
  }
  return solve_lp(lp).status == LpStatus::Optimal;
}

}  // namespace ppsolve
