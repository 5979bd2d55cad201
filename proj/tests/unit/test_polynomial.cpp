#include <gtest/gtest.h>

#include <complex>
#include <vector>

#include "ltrace/polynomial.hpp"

using namespace ltrace;

namespace {
Polynomial var(int n, int i) { return Polynomial::monomial(MultiIndex::unit(n, i)); }
}  // namespace

TEST(Polynomial, ZeroTermsAreDropped) {
  Polynomial p = var(2, 0) - var(2, 0);
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ(p.degree(), -1);
}

TEST(Polynomial, ProductAndEvaluation) {
  Polynomial x = var(2, 0), y = var(2, 1);
  Polynomial p = (x + y) * (x - y);  // x^2 - y^2
  EXPECT_EQ(p.coefficient(MultiIndex({2, 0})), Rational(1));
  EXPECT_EQ(p.coefficient(MultiIndex({1, 1})), Rational(0));
  EXPECT_EQ(p.coefficient(MultiIndex({0, 2})), Rational(-1));
  EXPECT_TRUE(p.is_homogeneous(2));
  std::vector<Rational> q{Rational(1, 2), Rational(1, 3)};
  EXPECT_EQ(p.eval(std::span<const Rational>(q)), Rational(5, 36));
  std::vector<double> d{3.0, 1.0};
  EXPECT_DOUBLE_EQ(p.eval(std::span<const double>(d)), 8.0);
  std::vector<std::complex<double>> z{{1.0, 0.0}, {0.0, 1.0}};
  auto v = p.eval(std::span<const std::complex<double>>(z));
  EXPECT_NEAR(v.real(), 2.0, 1e-15);
  EXPECT_NEAR(v.imag(), 0.0, 1e-15);
}

TEST(Polynomial, NotHomogeneous) {
  Polynomial p = var(1, 0) * var(1, 0) + Polynomial::monomial(MultiIndex({0}), 3);
  EXPECT_FALSE(p.is_homogeneous(2));
  EXPECT_EQ(p.degree(), 2);
}

TEST(PolynomialMatrix, DeterminantOfRotationSymbol) {
  // [[x, -y], [y, x]] has determinant x^2 + y^2.
  PolynomialMatrix m(2, 2, 2);
  m(0, 0) = var(2, 0);
  m(0, 1) = var(2, 1).scaled(-1);
  m(1, 0) = var(2, 1);
  m(1, 1) = var(2, 0);
  Polynomial d = determinant(m);
  EXPECT_EQ(d, var(2, 0) * var(2, 0) + var(2, 1) * var(2, 1));
}

TEST(PolynomialMatrix, ProductMatchesNumeric) {
  PolynomialMatrix a(1, 2, 2), b(2, 1, 2);
  a(0, 0) = var(2, 0);
  a(0, 1) = var(2, 1);
  b(0, 0) = var(2, 1);
  b(1, 0) = var(2, 0).scaled(2);
  PolynomialMatrix c = a * b;
  std::vector<double> x{0.7, -1.3};
  Eigen::MatrixXd num = a.eval(std::span<const double>(x)) * b.eval(std::span<const double>(x));
  EXPECT_NEAR(c.eval(std::span<const double>(x))(0, 0), num(0, 0), 1e-14);
  EXPECT_EQ(c(0, 0).coefficient(MultiIndex({1, 1})), Rational(3));
}

TEST(RationalMatrix, IdentityProduct) {
  RationalMatrix m(2, 2);
  m(0, 0) = Rational(1, 3);
  m(1, 0) = 2;
  EXPECT_EQ(RationalMatrix::identity(2) * m, m);
  EXPECT_FALSE(m.is_zero());
  EXPECT_TRUE(RationalMatrix(3, 1).is_zero());
}
