#pragma once

#include <optional>
#include <vector>

#include "ltrace/polynomial.hpp"
#include "ltrace/symbol.hpp"

namespace ltrace {

/// Exact left-inverse data of degree d: for every |alpha| = d a homogeneous
/// dimV x dimW matrix polynomial C_alpha of degree d - k with
/// xi^alpha Id_V = C_alpha[xi] A[xi].
struct Certificate {
  int n = 0;
  int k = 0;
  int d = 0;
  int dim_v = 0;
  int dim_w = 0;
  std::vector<MultiIndex> alphas;       ///< descending lexicographic order
  std::vector<PolynomialMatrix> blocks;  ///< blocks[i] = C_{alphas[i]}
};

struct CertificateSearch {
  std::optional<Certificate> certificate;
  int d_max = 0;
  /// Last degree tried and the size of its linear system.
  int unknowns = 0;
  int equations = 0;
};

/// Tries d = k, ..., d_max and returns the first degree at which every
/// xi^alpha e_i^T lies in the row space {c A[xi]}; one exact basic solution
/// (free variables zero) per target.
CertificateSearch search_certificate(const HomogeneousSymbol& a, int d_max);

struct CertificateCheck {
  bool exact = false;
  /// Largest |coefficient| of C_alpha A - xi^alpha Id over all alpha.
  Rational max_defect = 0;
  /// Max over alpha of |d^alpha u - C_alpha[D] A[D] u| / |d^alpha u| on a
  /// band-limited periodic field; negative when the grid check was skipped.
  double grid_relative_error = -1.0;
};

CertificateCheck verify_certificate(const HomogeneousSymbol& a, const Certificate& cert,
                                    bool grid_check = true, std::uint64_t seed = 7);

/// D^d certificate as the dimV*#alphas x dimW matrix polynomial B[xi] with
/// rows ordered (alpha-major, then component of V).
PolynomialMatrix stacked_certificate(const Certificate& cert);

}  // namespace ltrace
