#pragma once

#include <optional>
#include <vector>

#include "ltrace/polynomial.hpp"

namespace ltrace {

/// Exact reduced row echelon form. Pivots are searched column by column
/// among the first `pivot_cols` columns (all columns when negative); within a
/// column the entry of largest rational magnitude is chosen, ties broken by
/// the lowest row index, so the result is platform independent.
struct Rref {
  RationalMatrix r;
  std::vector<int> pivot_cols;  ///< pivot column of row i, for i < rank
  int rank() const { return static_cast<int>(pivot_cols.size()); }
};

Rref rref(RationalMatrix m, int pivot_cols = -1);

int exact_rank(const RationalMatrix& m);

/// Basis of {x : m x = 0}, one vector per free column, free entries 0/1.
std::vector<std::vector<Rational>> kernel_basis(const RationalMatrix& m);

/// Solves m x = b_j for every column b_j of `rhs` with one elimination.
/// Free variables are set to zero. Returns nullopt for inconsistent columns.
std::vector<std::optional<std::vector<Rational>>> solve_many(const RationalMatrix& m,
                                                             const RationalMatrix& rhs);

}  // namespace ltrace
