#include "ltrace/symbol.hpp"

#include <Eigen/SVD>

#include <cmath>

#include "ltrace/errors.hpp"

namespace ltrace {

HomogeneousSymbol::HomogeneousSymbol(int n, int k, int dim_v, int dim_w, Terms terms, std::string name,
                                     std::vector<Rational> w_weights)
    : n_(n), k_(k), dim_v_(dim_v), dim_w_(dim_w), terms_(std::move(terms)), name_(std::move(name)),
      w_weights_(std::move(w_weights)) {
  if (n_ < 1) throw DomainError("symbol: ambient dimension n must be >= 1");
  if (k_ < 1) throw DomainError("symbol: order k must be >= 1");
  if (dim_v_ < 1 || dim_w_ < 1) throw DomainError("symbol: dimV and dimW must be positive");
  if (w_weights_.empty()) w_weights_.assign(static_cast<std::size_t>(dim_w_), Rational(1));
  if (static_cast<int>(w_weights_.size()) != dim_w_) {
    throw DimensionError("symbol: W weight count", dim_w_, static_cast<long>(w_weights_.size()));
  }
  for (const auto& w : w_weights_) {
    if (w <= 0) throw DomainError("symbol: W weights must be positive");
  }
  bool any_nonzero = false;
  for (auto it = terms_.begin(); it != terms_.end();) {
    const auto& [alpha, m] = *it;
    if (alpha.size() != n_) throw DimensionError("symbol: multi-index length", n_, alpha.size());
    for (int a : alpha.e) {
      if (a < 0) throw DomainError("symbol: negative multi-index entry");
    }
    if (alpha.order() != k_) {
      throw DomainError("symbol: term " + to_string(alpha) + " has order " +
                        std::to_string(alpha.order()) + " but k = " + std::to_string(k_));
    }
    if (m.rows() != dim_w_) throw DimensionError("symbol: coefficient rows (dimW)", dim_w_, m.rows());
    if (m.cols() != dim_v_) throw DimensionError("symbol: coefficient cols (dimV)", dim_v_, m.cols());
    if (m.is_zero()) {
      it = terms_.erase(it);
      continue;
    }
    any_nonzero = true;
    ++it;
  }
  if (!any_nonzero) throw DomainError("symbol: at least one coefficient matrix must be nonzero");

  metric_sqrt_.resize(dim_w_);
  for (int i = 0; i < dim_w_; ++i) metric_sqrt_(i) = std::sqrt(w_weights_[static_cast<std::size_t>(i)].get_d());
  for (const auto& [alpha, m] : terms_) numeric_terms_.emplace_back(alpha.e, m.to_double());
}

bool HomogeneousSymbol::has_unit_weights() const {
  for (const auto& w : w_weights_) {
    if (w != 1) return false;
  }
  return true;
}

void HomogeneousSymbol::check_dim(std::size_t got) const {
  if (static_cast<int>(got) != n_) {
    throw DimensionError("symbol evaluation: xi length (n)", n_, static_cast<long>(got));
  }
}

namespace {

template <class T>
T monomial_value(std::span<const T> xi, const std::vector<int>& alpha) {
  T r(1);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (int p = 0; p < alpha[i]; ++p) r *= xi[i];
  }
  return r;
}

}  // namespace

Eigen::MatrixXd HomogeneousSymbol::eval_real(std::span<const double> xi) const {
  check_dim(xi.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_w_, dim_v_);
  for (const auto& [alpha, m] : numeric_terms_) {
    const double mono = monomial_value<double>(xi, alpha);
    for (int c = 0; c < dim_v_; ++c) {
      for (int r = 0; r < dim_w_; ++r) out(r, c) += m(r, c) * mono;
    }
  }
  return out;
}

Eigen::MatrixXcd HomogeneousSymbol::eval_complex(std::span<const std::complex<double>> xi) const {
  check_dim(xi.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_w_, dim_v_);
  for (const auto& [alpha, m] : numeric_terms_) {
    const std::complex<double> mono = monomial_value<std::complex<double>>(xi, alpha);
    for (int c = 0; c < dim_v_; ++c) {
      for (int r = 0; r < dim_w_; ++r) out(r, c) += m(r, c) * mono;
    }
  }
  return out;
}

RationalMatrix HomogeneousSymbol::eval_exact(std::span<const Rational> xi) const {
  check_dim(xi.size());
  RationalMatrix out(dim_w_, dim_v_);
  for (const auto& [alpha, m] : terms_) {
    const Rational mono = monomial_value<Rational>(xi, alpha.e);
    out += m.scaled(mono);
  }
  return out;
}

Eigen::MatrixXd HomogeneousSymbol::eval_orthonormal(std::span<const double> xi) const {
  return metric_sqrt_.asDiagonal() * eval_real(xi);
}

Eigen::MatrixXcd HomogeneousSymbol::eval_orthonormal(std::span<const std::complex<double>> xi) const {
  return metric_sqrt_.cast<std::complex<double>>().asDiagonal() * eval_complex(xi);
}

PolynomialMatrix HomogeneousSymbol::to_polynomial_matrix() const {
  PolynomialMatrix p(dim_w_, dim_v_, n_);
  for (const auto& [alpha, m] : terms_) {
    for (int r = 0; r < dim_w_; ++r) {
      for (int c = 0; c < dim_v_; ++c) p(r, c).add_term(alpha, m(r, c));
    }
  }
  return p;
}

HomogeneousSymbol HomogeneousSymbol::scaled(const Rational& c) const {
  if (c == 0) throw DomainError("symbol: scaling by zero");
  Terms t;
  for (const auto& [alpha, m] : terms_) t.emplace(alpha, m.scaled(c));
  return HomogeneousSymbol(n_, k_, dim_v_, dim_w_, std::move(t), name_, w_weights_);
}

HomogeneousSymbol HomogeneousSymbol::renamed(std::string name) const {
  return HomogeneousSymbol(n_, k_, dim_v_, dim_w_, terms_, std::move(name), w_weights_);
}

HomogeneousSymbol restrict_to_plane(const HomogeneousSymbol& a, std::span<const Rational> e1,
                                    std::span<const Rational> e2) {
  const int n = a.n();
  if (static_cast<int>(e1.size()) != n) throw DimensionError("restrict_to_plane: e1 length", n, static_cast<long>(e1.size()));
  if (static_cast<int>(e2.size()) != n) throw DimensionError("restrict_to_plane: e2 length", n, static_cast<long>(e2.size()));

  // Numeric rank of the 2 x n matrix [e1; e2].
  Eigen::MatrixXd basis(2, n);
  for (int i = 0; i < n; ++i) {
    basis(0, i) = e1[static_cast<std::size_t>(i)].get_d();
    basis(1, i) = e2[static_cast<std::size_t>(i)].get_d();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis);
  const auto sv = svd.singularValues();
  if (sv.size() < 2 || sv(0) == 0.0 || sv(1) <= 1e-9 * sv(0)) {
    throw DomainError("restrict_to_plane: basis vectors are linearly dependent");
  }

  // (s e1 + t e2)_i as linear polynomials in (s, t).
  std::vector<Polynomial> lin(static_cast<std::size_t>(n), Polynomial(2));
  for (int i = 0; i < n; ++i) {
    lin[static_cast<std::size_t>(i)].add_term(MultiIndex({1, 0}), e1[static_cast<std::size_t>(i)]);
    lin[static_cast<std::size_t>(i)].add_term(MultiIndex({0, 1}), e2[static_cast<std::size_t>(i)]);
  }

  HomogeneousSymbol::Terms out;
  for (const auto& [alpha, m] : a.terms()) {
    Polynomial mono = Polynomial::monomial(MultiIndex({0, 0}));
    for (int i = 0; i < n; ++i) {
      for (int p = 0; p < alpha[i]; ++p) mono = mono * lin[static_cast<std::size_t>(i)];
    }
    for (const auto& [beta, c] : mono.terms()) {
      auto [it, inserted] = out.try_emplace(beta, RationalMatrix(a.dim_w(), a.dim_v()));
      it->second += m.scaled(c);
    }
  }
  bool any = false;
  for (const auto& [beta, m] : out) any = any || !m.is_zero();
  if (!any) throw DomainError("restrict_to_plane: symbol vanishes identically on the plane");
  std::string name = a.name().empty() ? std::string() : a.name() + "|plane";
  return HomogeneousSymbol(2, a.order(), a.dim_v(), a.dim_w(), std::move(out), std::move(name), a.w_weights());
}

HomogeneousSymbol restrict_to_plane(const HomogeneousSymbol& a, std::span<const double> e1,
                                    std::span<const double> e2) {
  std::vector<Rational> q1, q2;
  for (double x : e1) q1.push_back(rational_from_double(x));
  for (double x : e2) q2.push_back(rational_from_double(x));
  return restrict_to_plane(a, std::span<const Rational>(q1), std::span<const Rational>(q2));
}

std::pair<double, double> singular_range(const HomogeneousSymbol& a, std::span<const double> xi) {
  const Eigen::MatrixXd m = a.eval_orthonormal(xi);
  if (a.dim_w() < a.dim_v()) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return {0.0, svd.singularValues()(0)};
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  return {sv(sv.size() - 1), sv(0)};
}

double sigma_min_complex(const HomogeneousSymbol& a, std::span<const std::complex<double>> xi,
                         Eigen::VectorXcd* kernel) {
  const Eigen::MatrixXcd m = a.eval_orthonormal(xi);
  if (a.dim_w() < a.dim_v()) {
    if (kernel) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
      *kernel = svd.matrixV().col(a.dim_v() - 1);
    }
    return 0.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, kernel ? Eigen::ComputeFullV : 0);
  const auto& sv = svd.singularValues();
  if (kernel) *kernel = svd.matrixV().col(sv.size() - 1);
  return sv(sv.size() - 1);
}

PseudoInverse pseudo_inverse_eval(const HomogeneousSymbol& a, std::span<const double> xi, double tol) {
  if (!(tol > 0)) throw DomainError("pseudo_inverse_eval: tol must be positive");
  if (a.dim_w() < a.dim_v()) throw SingularError("pseudo_inverse_eval: dimW < dimV, symbol never injective", 0.0);
  const Eigen::MatrixXd m = a.eval_real(xi);
  const Eigen::VectorXd g = a.metric_sqrt().array().square();
  const Eigen::MatrixXd mo = a.metric_sqrt().asDiagonal() * m;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mo);
  const auto& sv = svd.singularValues();
  PseudoInverse out;
  out.sigma_max = sv(0);
  out.sigma_min = sv(sv.size() - 1);
  if (!(out.sigma_min > tol)) {
    throw SingularError("pseudo_inverse_eval: A[xi] is not injective at this xi", out.sigma_min);
  }
  const Eigen::MatrixXd at_g = m.transpose() * g.asDiagonal();
  const Eigen::MatrixXd gram = at_g * m;
  out.pinv = gram.ldlt().solve(at_g);
  out.projector = m * out.pinv;
  return out;
}

namespace {

void row_selections(int dim_w, int dim_v, int start, std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == dim_v) {
    out.push_back(cur);
    return;
  }
  for (int r = start; r < dim_w; ++r) {
    cur.push_back(r);
    row_selections(dim_w, dim_v, r + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<MinorPolynomial> minor_polynomials(const HomogeneousSymbol& a) {
  if (a.dim_w() < a.dim_v()) {
    throw DomainError("minor_polynomials: dimW < dimV, the symbol can never be injective");
  }
  const PolynomialMatrix p = a.to_polynomial_matrix();
  std::vector<std::vector<int>> sel;
  std::vector<int> cur;
  row_selections(a.dim_w(), a.dim_v(), 0, cur, sel);
  std::vector<MinorPolynomial> out;
  out.reserve(sel.size());
  for (const auto& rows : sel) {
    PolynomialMatrix sub(a.dim_v(), a.dim_v(), a.n());
    for (int i = 0; i < a.dim_v(); ++i) {
      for (int j = 0; j < a.dim_v(); ++j) sub(i, j) = p(rows[static_cast<std::size_t>(i)], j);
    }
    out.push_back({rows, determinant(sub)});
  }
  return out;
}

HomogeneousSymbol make_partial(int n, int axis) {
  if (axis < 0 || axis >= n) throw DomainError("make_partial: axis out of range");
  HomogeneousSymbol::Terms t;
  RationalMatrix one(1, 1);
  one(0, 0) = 1;
  t.emplace(MultiIndex::unit(n, axis), one);
  return HomogeneousSymbol(n, 1, 1, 1, std::move(t), "partial_" + std::to_string(axis + 1));
}

HomogeneousSymbol make_higher_gradient(int n, int m, int dim_v) {
  if (m < 1) throw DomainError("make_higher_gradient: order must be >= 1");
  const auto betas = multi_indices(n, m);
  const int nb = static_cast<int>(betas.size());
  const int dim_w = dim_v * nb;
  HomogeneousSymbol::Terms t;
  std::vector<Rational> weights(static_cast<std::size_t>(dim_w));
  for (int b = 0; b < nb; ++b) {
    RationalMatrix coef(dim_w, dim_v);
    for (int v = 0; v < dim_v; ++v) {
      coef(v * nb + b, v) = 1;
      weights[static_cast<std::size_t>(v * nb + b)] = Rational(multinomial(betas[static_cast<std::size_t>(b)]));
    }
    t.emplace(betas[static_cast<std::size_t>(b)], coef);
  }
  std::string name = m == 1 ? "gradient" : "higher_gradient";
  return HomogeneousSymbol(n, m, dim_v, dim_w, std::move(t), name, std::move(weights));
}

}  // namespace ltrace
