#include "ppsolve/linalg.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "ppsolve/errors.hpp"

namespace ppsolve {

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::transposed() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: dimension mismatch");
  RationalMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (sgn(a(i, k)) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (sgn(b(k, j)) != 0) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

RationalVector operator*(const RationalMatrix& a, const RationalVector& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector product: dimension mismatch");
  RationalVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (sgn(a(i, k)) != 0 && sgn(x[k]) != 0) out[i] += a(i, k) * x[k];
  return out;
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix difference: dimension mismatch");
  RationalMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

RationalVector operator+(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector sum: dimension mismatch");
  RationalVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RationalVector operator-(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector difference: dimension mismatch");
  RationalVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Rational max_norm(const RationalVector& v) {
  Rational best = 0;
  for (const auto& x : v)
    if (abs(x) > best) best = abs(x);
  return best;
}

bool leq(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("comparison: dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

std::ostream& operator<<(std::ostream& os, const RationalVector& v) {
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << to_string(v[i]);
  return os << ')';
}

namespace {

// Row of the cheapest nonzero pivot in column `col` among rows [from, rows).
std::optional<std::size_t> pick_pivot(const RationalMatrix& m, std::size_t col, std::size_t from) {
  std::optional<std::size_t> best;
  std::size_t best_bits = 0;
  for (std::size_t r = from; r < m.rows(); ++r) {
    if (sgn(m(r, col)) == 0) continue;
    std::size_t b = bit_size(m(r, col));
    if (!best || b < best_bits) {
      best = r;
      best_bits = b;
    }
  }
  return best;
}

void swap_rows(RationalMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(a, c), m(b, c));
}

// Reduces the augmented matrix [A | B] (A square, occupying the first n
// columns) to [I | A^{-1} B]. Throws SingularMatrixError with the rank of A.
void gauss_jordan(RationalMatrix& aug, std::size_t n) {
  const std::size_t width = aug.cols();
  for (std::size_t col = 0; col < n; ++col) {
    auto pivot = pick_pivot(aug, col, col);
    if (!pivot) {
      // Finish a plain echelon reduction to report the rank.
      std::size_t rank = col;
      for (std::size_t c = col + 1; c < n && rank < n; ++c) {
        auto p = pick_pivot(aug, c, rank);
        if (!p) continue;
        swap_rows(aug, rank, *p);
        for (std::size_t r = rank + 1; r < n; ++r) {
          if (sgn(aug(r, c)) == 0) continue;
          Rational f = aug(r, c) / aug(rank, c);
          for (std::size_t k = c; k < n; ++k) aug(r, k) -= f * aug(rank, k);
        }
        ++rank;
      }
      throw SingularMatrixError(n, rank);
    }
    swap_rows(aug, col, *pivot);
    Rational inv = 1 / aug(col, col);
    std::vector<std::size_t> nonzero;
    for (std::size_t k = col; k < width; ++k) {
      if (sgn(aug(col, k)) == 0) continue;
      aug(col, k) *= inv;
      nonzero.push_back(k);
    }
    for (std::size_t r = 0; r < aug.rows(); ++r) {
      if (r == col || sgn(aug(r, col)) == 0) continue;
      Rational f = aug(r, col);
      for (std::size_t k : nonzero) aug(r, k) -= f * aug(col, k);
    }
  }
}

}  // namespace

RationalVector solve_linear(const RationalMatrix& m, const RationalVector& b) {
  if (m.rows() != m.cols()) throw std::invalid_argument("solve_linear: matrix is not square");
  if (b.size() != m.rows()) throw std::invalid_argument("solve_linear: right-hand side mismatch");
  const std::size_t n = m.rows();
  RationalMatrix aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n) = b[i];
  }
  gauss_jordan(aug, n);
  RationalVector z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = aug(i, n);
  return z;
}

RationalMatrix invert(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("invert: matrix is not square");
  const std::size_t n = m.rows();
  RationalMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  gauss_jordan(aug, n);
  RationalMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

}  // namespace ppsolve
