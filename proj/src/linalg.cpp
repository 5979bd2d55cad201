#include "ltrace/linalg.hpp"

#include <cmath>

#include "ltrace/errors.hpp"

namespace ltrace {

Rref rref(RationalMatrix m, int pivot_cols) {
  const int rows = m.rows();
  const int cols = m.cols();
  if (pivot_cols < 0 || pivot_cols > cols) pivot_cols = cols;
  Rref out;
  int row = 0;
  for (int c = 0; c < pivot_cols && row < rows; ++c) {
    int best = -1;
    Rational best_abs = 0;
    for (int r = row; r < rows; ++r) {
      if (m(r, c) == 0) continue;
      Rational a = abs(m(r, c));
      if (best < 0 || a > best_abs) {
        best = r;
        best_abs = a;
      }
    }
    if (best < 0) continue;
    if (best != row) {
      for (int j = 0; j < cols; ++j) std::swap(m(row, j), m(best, j));
    }
    const Rational inv = 1 / m(row, c);
    for (int j = c; j < cols; ++j) m(row, j) *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == row || m(r, c) == 0) continue;
      const Rational f = m(r, c);
      for (int j = c; j < cols; ++j) {
        if (m(row, j) != 0) m(r, j) -= f * m(row, j);
      }
    }
    out.pivot_cols.push_back(c);
    ++row;
  }
  out.r = std::move(m);
  return out;
}

int exact_rank(const RationalMatrix& m) { return rref(m).rank(); }

std::vector<std::vector<Rational>> kernel_basis(const RationalMatrix& m) {
  const Rref e = rref(m);
  const int cols = m.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int c : e.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<std::vector<Rational>> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    std::vector<Rational> v(static_cast<std::size_t>(cols), Rational(0));
    v[static_cast<std::size_t>(f)] = 1;
    for (int i = 0; i < e.rank(); ++i) v[static_cast<std::size_t>(e.pivot_cols[static_cast<std::size_t>(i)])] = -e.r(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<std::optional<std::vector<Rational>>> solve_many(const RationalMatrix& m,
                                                             const RationalMatrix& rhs) {
  if (rhs.rows() != m.rows()) throw DimensionError("solve_many: right-hand side rows", m.rows(), rhs.rows());
  const int n = m.cols();
  RationalMatrix aug(m.rows(), n + rhs.cols());
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < n; ++c) aug(r, c) = m(r, c);
    for (int c = 0; c < rhs.cols(); ++c) aug(r, n + c) = rhs(r, c);
  }
  const Rref e = rref(std::move(aug), n);
  std::vector<std::optional<std::vector<Rational>>> out;
  out.reserve(static_cast<std::size_t>(rhs.cols()));
  for (int j = 0; j < rhs.cols(); ++j) {
    bool consistent = true;
    for (int r = e.rank(); r < m.rows(); ++r) {
      if (e.r(r, n + j) != 0) {
        consistent = false;
        break;
      }
    }
    if (!consistent) {
      out.emplace_back(std::nullopt);
      continue;
    }
    std::vector<Rational> x(static_cast<std::size_t>(n), Rational(0));
    for (int i = 0; i < e.rank(); ++i) x[static_cast<std::size_t>(e.pivot_cols[static_cast<std::size_t>(i)])] = e.r(i, n + j);
    out.emplace_back(std::move(x));
  }
  return out;
}

}  // namespace ltrace
