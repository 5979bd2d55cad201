#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ltrace/polynomial.hpp"
#include "ltrace/rational.hpp"

namespace ltrace {

/// Fourier symbol A[xi] = sum_{|alpha| = k} xi^alpha A_alpha of a homogeneous
/// constant-coefficient operator from V = R^dimV to W = R^dimW on R^n.
///
/// Coefficients are exact rationals. W carries a diagonal inner product given
/// by `w_weights` (all ones unless W stores symmetric tensors, where the weight
/// of a component is the number of index tuples it represents). All norms,
/// singular values and projectors are taken with respect to that inner
/// product, so they do not depend on the storage layout.
///
/// Instances are immutable; evaluation is thread-safe.
class HomogeneousSymbol {
 public:
  using Terms = std::map<MultiIndex, RationalMatrix>;

  HomogeneousSymbol(int n, int k, int dim_v, int dim_w, Terms terms, std::string name = {},
                    std::vector<Rational> w_weights = {});

  int n() const { return n_; }
  int order() const { return k_; }
  int dim_v() const { return dim_v_; }
  int dim_w() const { return dim_w_; }
  const Terms& terms() const { return terms_; }
  const std::string& name() const { return name_; }
  const std::vector<Rational>& w_weights() const { return w_weights_; }
  /// Square roots of the W weights, as doubles.
  const Eigen::VectorXd& metric_sqrt() const { return metric_sqrt_; }
  bool has_unit_weights() const;

  Eigen::MatrixXd eval_real(std::span<const double> xi) const;
  RationalMatrix eval_exact(std::span<const Rational> xi) const;
  Eigen::MatrixXcd eval_complex(std::span<const std::complex<double>> xi) const;

  /// A[xi] premultiplied by the square root of the W metric, i.e. the matrix in
  /// an orthonormal basis of W.
  Eigen::MatrixXd eval_orthonormal(std::span<const double> xi) const;
  Eigen::MatrixXcd eval_orthonormal(std::span<const std::complex<double>> xi) const;

  PolynomialMatrix to_polynomial_matrix() const;

  HomogeneousSymbol scaled(const Rational& c) const;
  HomogeneousSymbol renamed(std::string name) const;

 private:
  void check_dim(std::size_t got) const;

  int n_;
  int k_;
  int dim_v_;
  int dim_w_;
  Terms terms_;
  std::string name_;
  std::vector<Rational> w_weights_;
  Eigen::VectorXd metric_sqrt_;
  std::vector<std::pair<std::vector<int>, Eigen::MatrixXd>> numeric_terms_;
};

/// Symbol of the restriction to the plane spanned by e1, e2:
/// B[s, t] = A[s e1 + t e2]. Coefficients are expanded exactly; double inputs
/// are converted to the rationals they represent.
HomogeneousSymbol restrict_to_plane(const HomogeneousSymbol& a, std::span<const double> e1,
                                    std::span<const double> e2);
HomogeneousSymbol restrict_to_plane(const HomogeneousSymbol& a, std::span<const Rational> e1,
                                    std::span<const Rational> e2);

struct PseudoInverse {
  Eigen::MatrixXd pinv;       ///< dimV x dimW, left inverse of A[xi]
  Eigen::MatrixXd projector;  ///< dimW x dimW, A[xi] pinv; self-adjoint for the W metric
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

/// A^dagger[xi] = (A^* G A)^{-1} A^* G for the W metric G. Throws SingularError
/// when sigma_min(A[xi]) <= tol.
PseudoInverse pseudo_inverse_eval(const HomogeneousSymbol& a, std::span<const double> xi,
                                  double tol = 1e-9);

/// Smallest and largest singular values of A[xi] in orthonormal coordinates.
std::pair<double, double> singular_range(const HomogeneousSymbol& a, std::span<const double> xi);
double sigma_min_complex(const HomogeneousSymbol& a, std::span<const std::complex<double>> xi,
                         Eigen::VectorXcd* kernel = nullptr);

struct MinorPolynomial {
  std::vector<int> rows;  ///< selected rows of A[xi], ascending
  Polynomial det;
};

/// Determinants of every dimV x dimV row selection of A[xi], in lexicographic
/// order of the row selections. Throws DomainError when dimW < dimV.
std::vector<MinorPolynomial> minor_polynomials(const HomogeneousSymbol& a);

/// Scalar first-order symbol d/dx_axis on R^n.
HomogeneousSymbol make_partial(int n, int axis);

/// Symbol of D^m on V = R^dim_v with codomain V (x) Sym^m(R^n) stored in the
/// lexicographic symmetric basis (component index = v * #multi-indices + beta).
HomogeneousSymbol make_higher_gradient(int n, int m, int dim_v = 1);

}  // namespace ltrace
