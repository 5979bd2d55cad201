#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ltrace/catalog.hpp"
#include "ltrace/errors.hpp"
#include "ltrace/symbol.hpp"

using namespace ltrace;
using cd = std::complex<double>;

namespace {
Eigen::MatrixXd ev(const HomogeneousSymbol& a, std::vector<double> xi) {
  return a.eval_real(std::span<const double>(xi));
}
}  // namespace

TEST(Symbol, GradientColumn) {
  auto g = catalog("gradient", 2);
  Eigen::MatrixXd m = ev(g, {1.0, 0.0});
  ASSERT_EQ(m.rows(), 2);
  ASSERT_EQ(m.cols(), 1);
  EXPECT_DOUBLE_EQ(m(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m(1, 0), 0.0);
}

TEST(Symbol, SymGradientOnE2) {
  // storage (11, 12, 22): A[e1] e2 = (0, 1/2, 0), the matrix [[0, 1/2], [1/2, 0]]
  auto e = catalog("sym_gradient", 2);
  Eigen::VectorXd v(2);
  v << 0.0, 1.0;
  Eigen::VectorXd w = ev(e, {1.0, 0.0}) * v;
  EXPECT_DOUBLE_EQ(w(0), 0.0);
  EXPECT_DOUBLE_EQ(w(1), 0.5);
  EXPECT_DOUBLE_EQ(w(2), 0.0);
  EXPECT_DOUBLE_EQ(e.w_weights()[1].get_d(), 2.0);
}

TEST(Symbol, LaplacianOnUnitVector) {
  auto l = catalog("laplacian", 2);
  EXPECT_NEAR(ev(l, {0.6, 0.8})(0, 0), -1.0, 1e-15);
  auto l3 = catalog("laplacian", 3);
  EXPECT_NEAR(ev(l3, {1.0, 2.0, -2.0})(0, 0), -9.0, 1e-14);
}

TEST(Symbol, ComplexZerosOfWirtingerAndLaplacian) {
  std::vector<cd> z{{1.0, 0.0}, {0.0, 1.0}};
  // real 2x2 form: at (1, i) the matrix is singular with kernel (1, -i)
  auto wz = catalog("wirtinger", 2).eval_complex(z);
  Eigen::VectorXcd v(2);
  v << cd(1, 0), cd(0, -1);
  EXPECT_LT((wz * v).norm(), 1e-15);
  EXPECT_LT(catalog("laplacian", 2).eval_complex(z).norm(), 1e-15);
}

TEST(Symbol, WrongLengthIsDimensionError) {
  auto g = catalog("gradient", 3);
  EXPECT_THROW(ev(g, {1.0, 0.0}), DimensionError);
}

TEST(Symbol, ConstructorValidation) {
  HomogeneousSymbol::Terms t;
  t.emplace(MultiIndex({1, 1}), RationalMatrix(1, 1));
  EXPECT_THROW(HomogeneousSymbol(2, 1, 1, 1, t), DomainError);
  HomogeneousSymbol::Terms z;
  z.emplace(MultiIndex({1, 0}), RationalMatrix(1, 1));
  EXPECT_THROW(HomogeneousSymbol(2, 1, 1, 1, z), DomainError);
}

TEST(Restrict, GradientToCoordinatePlane) {
  std::vector<double> e1{1, 0, 0}, e2{0, 1, 0};
  auto b = restrict_to_plane(catalog("gradient", 3), e1, e2);
  EXPECT_EQ(b.n(), 2);
  Eigen::MatrixXd m = ev(b, {0.3, -0.7});
  EXPECT_DOUBLE_EQ(m(0, 0), 0.3);
  EXPECT_DOUBLE_EQ(m(1, 0), -0.7);
  EXPECT_DOUBLE_EQ(m(2, 0), 0.0);
}

TEST(Restrict, LaplacianToE1E3) {
  std::vector<double> e1{1, 0, 0}, e2{0, 0, 1};
  auto b = restrict_to_plane(catalog("laplacian", 3), e1, e2);
  EXPECT_NEAR(ev(b, {0.5, 2.0})(0, 0), -(0.25 + 4.0), 1e-14);
}

TEST(Restrict, DependentBasisRejected) {
  std::vector<double> e1{1, 1, 0}, e2{2, 2, 0};
  EXPECT_THROW(restrict_to_plane(catalog("gradient", 3), e1, e2), DomainError);
}

TEST(PseudoInverse, GradientAtE1) {
  std::vector<double> xi{1.0, 0.0};
  auto p = pseudo_inverse_eval(catalog("gradient", 2), xi);
  EXPECT_NEAR(p.pinv(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(p.pinv(0, 1), 0.0, 1e-14);
  EXPECT_NEAR(p.projector(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(p.projector(1, 1), 0.0, 1e-14);
  EXPECT_NEAR(p.projector(0, 1), 0.0, 1e-14);
}

TEST(PseudoInverse, WirtingerProjectorIsIdentity) {
  std::vector<double> xi{0.0, 1.0};
  auto p = pseudo_inverse_eval(catalog("wirtinger", 2), xi);
  EXPECT_LT((p.projector - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-14);
}

TEST(PseudoInverse, LeftInverseAndMetricSymmetry) {
  auto e = catalog("sym_gradient", 3);
  std::vector<double> xi{0.3, -0.5, 0.8};
  auto p = pseudo_inverse_eval(e, xi);
  Eigen::MatrixXd a = ev(e, xi);
  EXPECT_LT((p.pinv * a - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-12);
  // self-adjoint for G: G P symmetric
  Eigen::VectorXd g = e.metric_sqrt().array().square();
  Eigen::MatrixXd gp = g.asDiagonal() * p.projector;
  EXPECT_LT((gp - gp.transpose()).norm(), 1e-12);
}

TEST(PseudoInverse, SingularThrows) {
  std::vector<double> xi{1.0, 0.0};
  EXPECT_THROW(pseudo_inverse_eval(make_partial(2, 1), xi), SingularError);
}

TEST(Minors, WirtingerDeterminant) {
  auto m = minor_polynomials(catalog("wirtinger", 2));
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].det.coefficient(MultiIndex({2, 0})), Rational(1, 4));
  EXPECT_EQ(m[0].det.coefficient(MultiIndex({0, 2})), Rational(1, 4));
  EXPECT_EQ(m[0].det.coefficient(MultiIndex({1, 1})), Rational(0));
}

TEST(Minors, CountAndDegree) {
  auto e = catalog("sym_gradient", 2);
  auto m = minor_polynomials(e);
  EXPECT_EQ(m.size(), 3u);
  for (const auto& p : m) EXPECT_TRUE(p.det.is_zero() || p.det.is_homogeneous(2));
}

TEST(Catalog, KnownNamesAndErrors) {
  for (const auto& name : catalog_names()) {
    int n = name == "wirtinger" ? 2 : 3;
    EXPECT_NO_THROW(catalog(name, n)) << name;
  }
  EXPECT_THROW(catalog("nope", 2), DomainError);
  EXPECT_THROW(catalog("wirtinger", 3), DomainError);
  EXPECT_THROW(catalog("gradient", 2, 2), DomainError);
}

TEST(Catalog, HigherGradientShape) {
  auto h = catalog("higher_gradient", 2, 3);
  EXPECT_EQ(h.order(), 3);
  EXPECT_EQ(h.dim_w(), 4);
  // xi^beta entries times multiplicity weights: sum w_b (xi^b)^2 = |xi|^6
  std::vector<double> xi{0.6, 0.8};
  Eigen::MatrixXd m = h.eval_orthonormal(std::span<const double>(xi));
  EXPECT_NEAR(m.squaredNorm(), 1.0, 1e-14);
}

TEST(Catalog, DivCurlSquareNorm) {
  auto d = catalog("divcurl", 3);
  std::vector<double> xi{1.0, 2.0, 2.0};
  Eigen::MatrixXd a = ev(d, xi);
  // div^2 + |curl|^2 = |xi|^2 |v|^2
  EXPECT_LT((a.transpose() * a - 9.0 * Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-12);
}
