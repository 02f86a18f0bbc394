#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "ppsolve/rational.hpp"

namespace ppsolve {

using RationalVector = std::vector<Rational>;

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RationalMatrix transposed() const;

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
RationalVector operator*(const RationalMatrix& a, const RationalVector& x);
RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);

RationalVector operator+(const RationalVector& a, const RationalVector& b);
RationalVector operator-(const RationalVector& a, const RationalVector& b);

/// max_i |v_i|; zero for the empty vector.
Rational max_norm(const RationalVector& v);

/// Componentwise a <= b.
bool leq(const RationalVector& a, const RationalVector& b);

std::ostream& operator<<(std::ostream& os, const RationalVector& v);

/// Exact solution of M z = b by Gaussian elimination. Pivots are chosen by
/// smallest bit size among the nonzero candidates of each column.
/// Throws SingularMatrixError (with the rank) when M is singular.
RationalVector solve_linear(const RationalMatrix& m, const RationalVector& b);

/// Exact inverse by Gauss-Jordan elimination. Throws SingularMatrixError.
RationalMatrix invert(const RationalMatrix& m);

/// Decides rho(A) <= 1 for a nonnegative irreducible A, exactly, as LP
/// feasibility of { A v <= v, v >= 1 }. Irreducibility is the caller's
/// responsibility and is not checked; negative entries throw InputError.
bool spectral_radius_leq_one(const RationalMatrix& a);

}  // namespace ppsolve
