#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ltrace/rational.hpp"

namespace ltrace {

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols);

  static RationalMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& operator()(int r, int c) { return data_[index(r, c)]; }
  const Rational& operator()(int r, int c) const { return data_[index(r, c)]; }

  bool is_zero() const;
  Eigen::MatrixXd to_double() const;

  RationalMatrix operator*(const RationalMatrix& rhs) const;
  RationalMatrix& operator+=(const RationalMatrix& rhs);
  RationalMatrix scaled(const Rational& s) const;

  bool operator==(const RationalMatrix& rhs) const;

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

/// Sparse multivariate polynomial in n variables with rational coefficients.
/// Zero coefficients are never stored.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int n) : n_(n) {}

  static Polynomial monomial(const MultiIndex& alpha, const Rational& c = 1);

  int variables() const { return n_; }
  const std::map<MultiIndex, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous(int degree) const;

  Rational coefficient(const MultiIndex& alpha) const;
  void add_term(const MultiIndex& alpha, const Rational& c);

  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial scaled(const Rational& s) const;
  bool operator==(const Polynomial& rhs) const { return n_ == rhs.n_ && terms_ == rhs.terms_; }

  Rational eval(std::span<const Rational> x) const;
  double eval(std::span<const double> x) const;
  std::complex<double> eval(std::span<const std::complex<double>> x) const;

  std::string to_string() const;

 private:
  int n_ = 0;
  std::map<MultiIndex, Rational> terms_;
};

/// Matrix whose entries are polynomials in the same n variables.
class PolynomialMatrix {
 public:
  PolynomialMatrix() = default;
  PolynomialMatrix(int rows, int cols, int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int variables() const { return n_; }

  Polynomial& operator()(int r, int c) { return data_[index(r, c)]; }
  const Polynomial& operator()(int r, int c) const { return data_[index(r, c)]; }

  PolynomialMatrix operator*(const PolynomialMatrix& rhs) const;
  bool operator==(const PolynomialMatrix& rhs) const;

  Eigen::MatrixXd eval(std::span<const double> x) const;
  Eigen::MatrixXcd eval(std::span<const std::complex<double>> x) const;

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }
  int rows_ = 0;
  int cols_ = 0;
  int n_ = 0;
  std::vector<Polynomial> data_;
};

/// Exact determinant by cofactor expansion along the first row.
Polynomial determinant(const PolynomialMatrix& m);

}  // namespace ltrace
