#include "ltrace/catalog.hpp"

#include "ltrace/errors.hpp"

namespace ltrace {

namespace {

using Terms = HomogeneousSymbol::Terms;

/// First-order term bookkeeping: coefficient matrices A_{e_i}.
struct FirstOrder {
  int n, dim_v, dim_w;
  std::vector<RationalMatrix> a;  // one per axis

  FirstOrder(int n_, int dim_v_, int dim_w_) : n(n_), dim_v(dim_v_), dim_w(dim_w_) {
    a.assign(static_cast<std::size_t>(n), RationalMatrix(dim_w, dim_v));
  }
  void add(int axis, int row, int col, const Rational& c) { a[static_cast<std::size_t>(axis)](row, col) += c; }

  Terms terms() const {
    Terms t;
    for (int i = 0; i < n; ++i) {
      if (!a[static_cast<std::size_t>(i)].is_zero()) t.emplace(MultiIndex::unit(n, i), a[static_cast<std::size_t>(i)]);
    }
    return t;
  }
};

std::vector<std::pair<int, int>> upper_pairs(int n) {
  std::vector<std::pair<int, int>> p;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) p.emplace_back(i, j);
  }
  return p;
}

std::vector<Rational> sym_weights(int n) {
  std::vector<Rational> w;
  for (auto [i, j] : upper_pairs(n)) w.emplace_back(i == j ? 1 : 2);
  return w;
}

HomogeneousSymbol laplacian(int n) {
  Terms t;
  RationalMatrix m(1, 1);
  m(0, 0) = -1;
  for (int i = 0; i < n; ++i) {
    MultiIndex a(std::vector<int>(static_cast<std::size_t>(n), 0));
    a.e[static_cast<std::size_t>(i)] = 2;
    t.emplace(a, m);
  }
  return HomogeneousSymbol(n, 2, 1, 1, std::move(t), "laplacian");
}

HomogeneousSymbol wirtinger() {
  FirstOrder f(2, 2, 2);
  const Rational half(1, 2);
  // (1/2)[[xi1, -xi2], [xi2, xi1]] acting on (Re u, Im u).
  f.add(0, 0, 0, half);
  f.add(0, 1, 1, half);
  f.add(1, 0, 1, -half);
  f.add(1, 1, 0, half);
  return HomogeneousSymbol(2, 1, 2, 2, f.terms(), "wirtinger");
}

HomogeneousSymbol divcurl(int n) {
  const int dim_w = 1 + n * (n - 1) / 2;
  FirstOrder f(n, n, dim_w);
  for (int i = 0; i < n; ++i) f.add(i, 0, i, 1);
  int row = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++row) {
      // d_i u_j - d_j u_i
      f.add(i, row, j, 1);
      f.add(j, row, i, -1);
    }
  }
  return HomogeneousSymbol(n, 1, n, dim_w, f.terms(), "divcurl");
}

HomogeneousSymbol sym_gradient(int n, bool trace_free) {
  const auto pairs = upper_pairs(n);
  const int dim_w = static_cast<int>(pairs.size());
  FirstOrder f(n, n, dim_w);
  const Rational half(1, 2);
  for (int row = 0; row < dim_w; ++row) {
    const auto [i, j] = pairs[static_cast<std::size_t>(row)];
    if (i == j) {
      f.add(i, row, i, 1);
      if (trace_free) {
        for (int l = 0; l < n; ++l) f.add(l, row, l, Rational(-1, n));
      }
    } else {
      f.add(i, row, j, half);
      f.add(j, row, i, half);
    }
  }
  return HomogeneousSymbol(n, 1, n, dim_w, f.terms(), trace_free ? "tracefree_sym_gradient" : "sym_gradient",
                           sym_weights(n));
}

HomogeneousSymbol escnotcell(int n, int k, int big_n) {
  // Inner first-order operator on u: R^n -> R^N.
  std::vector<std::pair<int, int>> extra;  // (axis i, component j)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < big_n; ++j) {
      if (!(i < 2 && j < 2)) extra.emplace_back(i, j);
    }
  }
  const int inner_w = 2 + static_cast<int>(extra.size());
  FirstOrder b(n, big_n, inner_w);
  b.add(0, 0, 0, 1);   // d1 u1
  b.add(1, 0, 1, 1);   // + d2 u2
  b.add(1, 1, 0, 1);   // d2 u1
  b.add(0, 1, 1, -1);  // - d1 u2
  for (std::size_t r = 0; r < extra.size(); ++r) b.add(extra[r].first, 2 + static_cast<int>(r), extra[r].second, 1);

  const auto gammas = multi_indices(n, k - 1);
  const int ng = static_cast<int>(gammas.size());
  const int dim_w = inner_w * ng;
  std::vector<Rational> weights(static_cast<std::size_t>(dim_w));
  for (int r = 0; r < inner_w; ++r) {
    for (int g = 0; g < ng; ++g) weights[static_cast<std::size_t>(r * ng + g)] = Rational(multinomial(gammas[static_cast<std::size_t>(g)]));
  }
  Terms t;
  for (int g = 0; g < ng; ++g) {
    for (int i = 0; i < n; ++i) {
      const RationalMatrix& bi = b.a[static_cast<std::size_t>(i)];
      if (bi.is_zero()) continue;
      const MultiIndex alpha = gammas[static_cast<std::size_t>(g)] + MultiIndex::unit(n, i);
      auto [it, inserted] = t.try_emplace(alpha, RationalMatrix(dim_w, big_n));
      for (int r = 0; r < inner_w; ++r) {
        for (int c = 0; c < big_n; ++c) it->second(r * ng + g, c) += bi(r, c);
      }
    }
  }
  return HomogeneousSymbol(n, k, big_n, dim_w, std::move(t), "escnotcell", std::move(weights));
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {
      "gradient", "higher_gradient", "laplacian", "wirtinger", "divcurl",
      "sym_gradient", "tracefree_sym_gradient", "escnotcell"};
  return names;
}

HomogeneousSymbol catalog(const std::string& name, int n, std::optional<int> k, std::optional<int> components) {
  auto unsupported = [&](const std::string& why) {
    return DomainError("catalog: unsupported combination for '" + name + "' (n = " + std::to_string(n) +
                       (k ? ", k = " + std::to_string(*k) : std::string()) + "): " + why);
  };
  if (n < 1) throw unsupported("n must be >= 1");
  auto require_k = [&](int expected) {
    if (k && *k != expected) throw unsupported("order is fixed at k = " + std::to_string(expected));
  };
  if (components && name != "escnotcell") throw unsupported("component count only applies to escnotcell");

  if (name == "gradient") {
    require_k(1);
    return make_higher_gradient(n, 1);
  }
  if (name == "higher_gradient") {
    const int order = k.value_or(2);
    if (order < 1) throw unsupported("k must be >= 1");
    return make_higher_gradient(n, order).renamed("higher_gradient");
  }
  if (name == "laplacian") {
    require_k(2);
    return laplacian(n);
  }
  if (name == "wirtinger") {
    require_k(1);
    if (n != 2) throw unsupported("the Wirtinger derivative lives on R^2");
    return wirtinger();
  }
  if (name == "divcurl") {
    require_k(1);
    if (n < 2) throw unsupported("n must be >= 2");
    return divcurl(n);
  }
  if (name == "sym_gradient" || name == "tracefree_sym_gradient") {
    require_k(1);
    if (n < 2) throw unsupported("n must be >= 2");
    return sym_gradient(n, name == "tracefree_sym_gradient");
  }
  if (name == "escnotcell") {
    const int order = k.value_or(2);
    const int big_n = components.value_or(2);
    if (n < 2 || order < 1 || big_n < 2) throw unsupported("need n >= 2, k >= 1, N >= 2");
    return escnotcell(n, order, big_n);
  }
  throw DomainError("catalog: unknown operator '" + name + "'");
}

}  // namespace ltrace
