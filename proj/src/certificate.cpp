#include "ltrace/certificate.hpp"

#include <cmath>
#include <map>

#include "ltrace/errors.hpp"
#include "ltrace/fields.hpp"
#include "ltrace/linalg.hpp"

namespace ltrace {

namespace {

std::map<MultiIndex, int> index_of(const std::vector<MultiIndex>& list) {
  std::map<MultiIndex, int> m;
  for (std::size_t i = 0; i < list.size(); ++i) m.emplace(list[i], static_cast<int>(i));
  return m;
}

}  // namespace

CertificateSearch search_certificate(const HomogeneousSymbol& a, int d_max) {
  const int n = a.n(), k = a.order(), dv = a.dim_v(), dw = a.dim_w();
  if (d_max < k) throw DomainError("search_certificate: d_max must be >= k = " + std::to_string(k));
  CertificateSearch out;
  out.d_max = d_max;
  if (dw < dv) return out;
  for (int d = k; d <= d_max; ++d) {
    const auto gammas = multi_indices(n, d - k);
    const auto betas = multi_indices(n, d);
    const auto beta_idx = index_of(betas);
    const int ng = static_cast<int>(gammas.size());
    const int nb = static_cast<int>(betas.size());
    // Row vector c[xi] = sum_gamma xi^gamma c_gamma; unknown gamma * dw + w.
    // Equation (beta, v): sum_{gamma + alpha = beta} sum_w c_gamma[w] A_alpha(w, v).
    RationalMatrix m(nb * dv, ng * dw);
    for (int g = 0; g < ng; ++g) {
      for (const auto& [alpha, coef] : a.terms()) {
        const int b = beta_idx.at(gammas[static_cast<std::size_t>(g)] + alpha);
        for (int w = 0; w < dw; ++w) {
          for (int v = 0; v < dv; ++v) {
            if (coef(w, v) != 0) m(b * dv + v, g * dw + w) += coef(w, v);
          }
        }
      }
    }
    // Targets xi^beta e_i^T for every beta and i.
    RationalMatrix rhs(nb * dv, nb * dv);
    for (int t = 0; t < nb * dv; ++t) rhs(t, t) = 1;
    out.unknowns = ng * dw;
    out.equations = nb * dv;
    const auto sol = solve_many(m, rhs);
    bool all = true;
    for (const auto& s : sol) all = all && s.has_value();
    if (!all) continue;

    Certificate cert;
    cert.n = n;
    cert.k = k;
    cert.d = d;
    cert.dim_v = dv;
    cert.dim_w = dw;
    cert.alphas = betas;
    for (int b = 0; b < nb; ++b) {
      PolynomialMatrix block(dv, dw, n);
      for (int i = 0; i < dv; ++i) {
        const auto& x = *sol[static_cast<std::size_t>(b * dv + i)];
        for (int g = 0; g < ng; ++g) {
          for (int w = 0; w < dw; ++w) {
            const Rational& c = x[static_cast<std::size_t>(g * dw + w)];
            if (c != 0) block(i, w).add_term(gammas[static_cast<std::size_t>(g)], c);
          }
        }
      }
      cert.blocks.push_back(std::move(block));
    }
    out.certificate = std::move(cert);
    return out;
  }
  return out;
}

PolynomialMatrix stacked_certificate(const Certificate& cert) {
  const int na = static_cast<int>(cert.alphas.size());
  PolynomialMatrix b(na * cert.dim_v, cert.dim_w, cert.n);
  for (int t = 0; t < na; ++t) {
    for (int i = 0; i < cert.dim_v; ++i) {
      for (int w = 0; w < cert.dim_w; ++w) b(t * cert.dim_v + i, w) = cert.blocks[static_cast<std::size_t>(t)](i, w);
    }
  }
  return b;
}

CertificateCheck verify_certificate(const HomogeneousSymbol& a, const Certificate& cert, bool grid_check,
                                    std::uint64_t seed) {
  if (cert.n != a.n()) throw DimensionError("verify_certificate: n", a.n(), cert.n);
  if (cert.k != a.order()) throw DimensionError("verify_certificate: k", a.order(), cert.k);
  if (cert.dim_v != a.dim_v()) throw DimensionError("verify_certificate: dimV", a.dim_v(), cert.dim_v);
  if (cert.dim_w != a.dim_w()) throw DimensionError("verify_certificate: dimW", a.dim_w(), cert.dim_w);
  if (cert.alphas.size() != cert.blocks.size()) {
    throw DimensionError("verify_certificate: block count", static_cast<long>(cert.alphas.size()),
                         static_cast<long>(cert.blocks.size()));
  }
  const auto expected = multi_indices(a.n(), cert.d);
  if (cert.alphas != expected) throw DomainError("verify_certificate: alphas must list every |alpha| = d");

  CertificateCheck out;
  out.exact = true;
  const PolynomialMatrix pa = a.to_polynomial_matrix();
  for (std::size_t t = 0; t < cert.alphas.size(); ++t) {
    const PolynomialMatrix& c = cert.blocks[t];
    if (c.rows() != a.dim_v() || c.cols() != a.dim_w()) {
      throw DimensionError("verify_certificate: block shape", a.dim_v() * a.dim_w(), c.rows() * c.cols());
    }
    const PolynomialMatrix prod = c * pa;
    for (int i = 0; i < a.dim_v(); ++i) {
      for (int j = 0; j < a.dim_v(); ++j) {
        Polynomial diff = prod(i, j);
        if (i == j) diff = diff - Polynomial::monomial(cert.alphas[t]);
        for (const auto& [mono, q] : diff.terms()) {
          const Rational aq = abs(q);
          if (aq > out.max_defect) out.max_defect = aq;
          out.exact = false;
        }
      }
    }
  }
  if (!grid_check) return out;

  // d^alpha u against C_alpha[D] (A[D] u) on a band-limited periodic field.
  const int res = a.n() <= 2 ? 32 : (a.n() == 3 ? 16 : 8);
  const Grid g = Grid::cube(a.n(), res, 1.0);
  const GridField u = random_band_limited(g, a.dim_v(), 2, seed);
  const GridField au = apply_symbol(a, u);
  double worst = 0;
  for (std::size_t t = 0; t < cert.alphas.size(); ++t) {
    const GridField lhs = partial_derivative(u, cert.alphas[t]);
    const GridField rhs = apply_polynomial_matrix(cert.blocks[t], au);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lhs.values().size(); ++i) {
      const double dlt = lhs.values()[i] - rhs.values()[i];
      num += dlt * dlt;
      den += lhs.values()[i] * lhs.values()[i];
    }
    worst = std::max(worst, den > 0 ? std::sqrt(num / den) : std::sqrt(num));
  }
  out.grid_relative_error = worst;
  return out;
}

}  // namespace ltrace
