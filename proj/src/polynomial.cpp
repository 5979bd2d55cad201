#include "ltrace/polynomial.hpp"

#include <sstream>

#include "ltrace/errors.hpp"

namespace ltrace {

RationalMatrix::RationalMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
  if (rows < 0 || cols < 0) throw DomainError("RationalMatrix: negative dimension");
}

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool RationalMatrix::is_zero() const {
  for (const auto& q : data_) {
    if (q != 0) return false;
  }
  return true;
}

Eigen::MatrixXd RationalMatrix::to_double() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c).get_d();
  }
  return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw DimensionError("RationalMatrix product", cols_, rhs.rows_);
  RationalMatrix out(rows_, rhs.cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < rhs.cols_; ++c) {
      Rational acc = 0;
      for (int t = 0; t < cols_; ++t) acc += (*this)(r, t) * rhs(t, c);
      out(r, c) = acc;
    }
  }
  return out;
}

RationalMatrix& RationalMatrix::operator+=(const RationalMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    throw DimensionError("RationalMatrix sum", static_cast<long>(data_.size()),
                         static_cast<long>(rhs.data_.size()));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

RationalMatrix RationalMatrix::scaled(const Rational& s) const {
  RationalMatrix out = *this;
  for (auto& q : out.data_) q *= s;
  return out;
}

bool RationalMatrix::operator==(const RationalMatrix& rhs) const {
  return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
}

Polynomial Polynomial::monomial(const MultiIndex& alpha, const Rational& c) {
  Polynomial p(alpha.size());
  p.add_term(alpha, c);
  return p;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [alpha, c] : terms_) d = std::max(d, alpha.order());
  return d;
}

bool Polynomial::is_homogeneous(int degree) const {
  for (const auto& [alpha, c] : terms_) {
    if (alpha.order() != degree) return false;
  }
  return true;
}

Rational Polynomial::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const MultiIndex& alpha, const Rational& c) {
  if (alpha.size() != n_) throw DimensionError("Polynomial term length", n_, alpha.size());
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  Polynomial out = *this;
  out += rhs;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (n_ == 0 && terms_.empty()) n_ = rhs.n_;
  for (const auto& [alpha, c] : rhs.terms_) add_term(alpha, c);
  return *this;
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
  return *this + rhs.scaled(-1);
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  Polynomial out(std::max(n_, rhs.n_));
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : rhs.terms_) out.add_term(a + b, ca * cb);
  }
  return out;
}

Polynomial Polynomial::scaled(const Rational& s) const {
  Polynomial out(n_);
  if (s == 0) return out;
  out.terms_ = terms_;
  for (auto& [alpha, c] : out.terms_) c *= s;
  return out;
}

namespace {

template <class T>
T power(T base, int e) {
  T r(1);
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

Rational Polynomial::eval(std::span<const Rational> x) const {
  if (static_cast<int>(x.size()) != n_) throw DimensionError("Polynomial::eval", n_, static_cast<long>(x.size()));
  Rational acc = 0;
  for (const auto& [alpha, c] : terms_) {
    Rational m = c;
    for (int i = 0; i < n_; ++i) m *= power<Rational>(x[static_cast<std::size_t>(i)], alpha[i]);
    acc += m;
  }
  return acc;
}

double Polynomial::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw DimensionError("Polynomial::eval", n_, static_cast<long>(x.size()));
  double acc = 0;
  for (const auto& [alpha, c] : terms_) {
    double m = c.get_d();
    for (int i = 0; i < n_; ++i) m *= power<double>(x[static_cast<std::size_t>(i)], alpha[i]);
    acc += m;
  }
  return acc;
}

std::complex<double> Polynomial::eval(std::span<const std::complex<double>> x) const {
  if (static_cast<int>(x.size()) != n_) throw DimensionError("Polynomial::eval", n_, static_cast<long>(x.size()));
  std::complex<double> acc = 0;
  for (const auto& [alpha, c] : terms_) {
    std::complex<double> m = c.get_d();
    for (int i = 0; i < n_; ++i) {
      m *= power<std::complex<double>>(x[static_cast<std::size_t>(i)], alpha[i]);
    }
    acc += m;
  }
  return acc;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [alpha, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << ltrace::to_string(c);
    for (int i = 0; i < n_; ++i) {
      if (alpha[i] == 0) continue;
      os << "*x" << (i + 1);
      if (alpha[i] > 1) os << "^" << alpha[i];
    }
  }
  return os.str();
}

PolynomialMatrix::PolynomialMatrix(int rows, int cols, int n)
    : rows_(rows), cols_(cols), n_(n),
      data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), Polynomial(n)) {}

PolynomialMatrix PolynomialMatrix::operator*(const PolynomialMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw DimensionError("PolynomialMatrix product", cols_, rhs.rows_);
  PolynomialMatrix out(rows_, rhs.cols_, std::max(n_, rhs.n_));
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < rhs.cols_; ++c) {
      Polynomial acc(out.n_);
      for (int t = 0; t < cols_; ++t) {
        if ((*this)(r, t).is_zero() || rhs(t, c).is_zero()) continue;
        acc += (*this)(r, t) * rhs(t, c);
      }
      out(r, c) = std::move(acc);
    }
  }
  return out;
}

bool PolynomialMatrix::operator==(const PolynomialMatrix& rhs) const {
  return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
}

Eigen::MatrixXd PolynomialMatrix::eval(std::span<const double> x) const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c).eval(x);
  }
  return m;
}

Eigen::MatrixXcd PolynomialMatrix::eval(std::span<const std::complex<double>> x) const {
  Eigen::MatrixXcd m(rows_, cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c).eval(x);
  }
  return m;
}

namespace {

Polynomial det_rec(const PolynomialMatrix& m, std::vector<int>& rows, std::vector<int>& cols) {
  const std::size_t size = rows.size();
  if (size == 1) return m(rows[0], cols[0]);
  Polynomial acc(m.variables());
  const int r0 = rows.front();
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t j = 0; j < size; ++j) {
    const Polynomial& entry = m(r0, cols[j]);
    if (entry.is_zero()) continue;
    std::vector<int> sub_cols;
    sub_cols.reserve(size - 1);
    for (std::size_t t = 0; t < size; ++t) {
      if (t != j) sub_cols.push_back(cols[t]);
    }
    Polynomial minor = det_rec(m, sub_rows, sub_cols);
    if (minor.is_zero()) continue;
    Polynomial term = entry * minor;
    acc += (j % 2 == 0) ? term : term.scaled(-1);
  }
  return acc;
}

}  // namespace

Polynomial determinant(const PolynomialMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant of non-square matrix", m.rows(), m.cols());
  if (m.rows() == 0) return Polynomial::monomial(MultiIndex(std::vector<int>(static_cast<std::size_t>(m.variables()), 0)));
  std::vector<int> rows(static_cast<std::size_t>(m.rows())), cols(static_cast<std::size_t>(m.cols()));
  for (int i = 0; i < m.rows(); ++i) rows[static_cast<std::size_t>(i)] = cols[static_cast<std::size_t>(i)] = i;
  return det_rec(m, rows, cols);
}

}  // namespace ltrace
