#include "ltrace/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "ltrace/errors.hpp"
#include "ltrace/fft.hpp"
#include "ltrace/parallel.hpp"
#include "ltrace/sampling.hpp"

namespace ltrace {

using cd = std::complex<double>;

Grid Grid::cube(int n, int res, double length, double origin) {
  Grid g;
  g.n = n;
  g.res.assign(static_cast<std::size_t>(n), res);
  g.length.assign(static_cast<std::size_t>(n), length);
  g.origin.assign(static_cast<std::size_t>(n), origin);
  g.validate();
  return g;
}

Grid Grid::centered(int n, int res, double length) { return cube(n, res, length, -0.5 * length); }

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int r : res) s *= static_cast<std::size_t>(r);
  return s;
}

double Grid::max_spacing() const {
  double h = 0;
  for (int a = 0; a < n; ++a) h = std::max(h, spacing(a));
  return h;
}

double Grid::cell_volume() const {
  double v = 1;
  for (int a = 0; a < n; ++a) v *= spacing(a);
  return v;
}

void Grid::unravel(std::size_t linear, std::span<int> idx) const {
  for (int a = n - 1; a >= 0; --a) {
    const auto u = static_cast<std::size_t>(a);
    idx[u] = static_cast<int>(linear % static_cast<std::size_t>(res[u]));
    linear /= static_cast<std::size_t>(res[u]);
  }
}

std::size_t Grid::ravel(std::span<const int> idx) const {
  std::size_t l = 0;
  for (int a = 0; a < n; ++a) l = l * static_cast<std::size_t>(res[static_cast<std::size_t>(a)]) + static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]);
  return l;
}

void Grid::node(std::size_t linear, std::span<double> x) const {
  for (int a = n - 1; a >= 0; --a) {
    const auto u = static_cast<std::size_t>(a);
    const auto j = linear % static_cast<std::size_t>(res[u]);
    linear /= static_cast<std::size_t>(res[u]);
    x[u] = origin[u] + static_cast<double>(j) * spacing(a);
  }
}

double Grid::wavenumber(int axis, int j) const {
  const int N = res[static_cast<std::size_t>(axis)];
  const int m = j < (N + 1) / 2 ? j : j - N;
  return 2 * std::numbers::pi * m / length[static_cast<std::size_t>(axis)];
}

void Grid::validate() const {
  if (n < 1) throw DomainError("grid: n must be >= 1");
  if (static_cast<int>(res.size()) != n || static_cast<int>(length.size()) != n || static_cast<int>(origin.size()) != n) {
    throw DimensionError("grid: per-axis description length", n, static_cast<long>(res.size()));
  }
  for (int a = 0; a < n; ++a) {
    const int r = res[static_cast<std::size_t>(a)];
    if (r < 8 || (r & (r - 1)) != 0) throw DomainError("grid: resolution must be a power of two >= 8, got " + std::to_string(r));
    if (!(length[static_cast<std::size_t>(a)] > 0)) throw DomainError("grid: box length must be positive");
  }
}

GridField::GridField(Grid grid, int components, std::vector<double> weights)
    : grid_(std::move(grid)), components_(components), weights_(std::move(weights)) {
  grid_.validate();
  if (components_ < 1) throw DomainError("field: component count must be positive");
  if (weights_.empty()) weights_.assign(static_cast<std::size_t>(components_), 1.0);
  if (static_cast<int>(weights_.size()) != components_) {
    throw DimensionError("field: weight count", components_, static_cast<long>(weights_.size()));
  }
  values_.assign(static_cast<std::size_t>(components_) * grid_.size(), 0.0);
}

std::span<double> GridField::component(int c) {
  return {values_.data() + static_cast<std::size_t>(c) * nodes(), nodes()};
}
std::span<const double> GridField::component(int c) const {
  return {values_.data() + static_cast<std::size_t>(c) * nodes(), nodes()};
}

double GridField::pointwise_norm(std::size_t node) const {
  double s = 0;
  for (int c = 0; c < components_; ++c) {
    const double v = at(c, node);
    s += weights_[static_cast<std::size_t>(c)] * v * v;
  }
  return std::sqrt(s);
}

double GridField::max_abs() const {
  double m = 0;
  for (std::size_t i = 0; i < nodes(); ++i) m = std::max(m, pointwise_norm(i));
  return m;
}

GridField& GridField::operator+=(const GridField& o) {
  if (!(grid_ == o.grid_) || components_ != o.components_) throw DimensionError("field sum: layouts differ", components_, o.components_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  band_limited_ = band_limited_ && o.band_limited_;
  return *this;
}

GridField GridField::operator+(const GridField& o) const {
  GridField r = *this;
  r += o;
  return r;
}

GridField GridField::operator-(const GridField& o) const { return *this + o.scaled(-1.0); }

GridField GridField::scaled(double s) const {
  GridField r = *this;
  for (double& v : r.values_) v *= s;
  return r;
}

GridField sample_field(const Grid& grid, int components,
                       const std::function<void(std::span<const double>, std::span<double>)>& f,
                       std::vector<double> weights) {
  GridField u(grid, components, std::move(weights));
  const std::size_t N = grid.size();
  parallel_for(N, [&](std::size_t i) {
    std::vector<double> x(static_cast<std::size_t>(grid.n)), out(static_cast<std::size_t>(components));
    grid.node(i, x);
    f(x, out);
    for (int c = 0; c < components; ++c) u.at(c, i) = out[static_cast<std::size_t>(c)];
  });
  return u;
}

std::vector<std::vector<cd>> spectra(const GridField& u) {
  FftPlan plan(u.grid().res);
  std::vector<std::vector<cd>> hat(static_cast<std::size_t>(u.components()));
  for (int c = 0; c < u.components(); ++c) {
    auto comp = u.component(c);
    auto& h = hat[static_cast<std::size_t>(c)];
    h.assign(comp.begin(), comp.end());
    plan.forward(h);
  }
  return hat;
}

GridField from_spectra(const Grid& grid, std::vector<std::vector<cd>> hat, std::vector<double> weights) {
  GridField u(grid, static_cast<int>(hat.size()), std::move(weights));
  FftPlan plan(grid.res);
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (int c = 0; c < u.components(); ++c) {
    auto& h = hat[static_cast<std::size_t>(c)];
    plan.backward(h);
    auto comp = u.component(c);
    for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = h[i].real() * inv;
  }
  return u;
}

namespace {

void require_spectral(const GridField& u) {
  if (!u.grid().periodic) throw DomainError("spectral mode requires a periodic box");
}

/// Calls f(linear, idx) for every Fourier mode.
template <class F>
void for_each_mode(const Grid& g, F&& f) {
  std::vector<int> idx(static_cast<std::size_t>(g.n), 0);
  const std::size_t N = g.size();
  for (std::size_t i = 0; i < N; ++i) {
    f(i, idx);
    for (int a = g.n - 1; a >= 0; --a) {
      const auto u = static_cast<std::size_t>(a);
      if (++idx[u] < g.res[u]) break;
      idx[u] = 0;
    }
  }
}

/// table[a][p][j] = (i kappa_a(j))^p for p <= max_power.
std::vector<std::vector<std::vector<cd>>> ik_powers(const Grid& g, int max_power) {
  std::vector<std::vector<std::vector<cd>>> t(static_cast<std::size_t>(g.n));
  for (int a = 0; a < g.n; ++a) {
    auto& ta = t[static_cast<std::size_t>(a)];
    const int N = g.res[static_cast<std::size_t>(a)];
    ta.assign(static_cast<std::size_t>(max_power + 1), std::vector<cd>(static_cast<std::size_t>(N), cd(1.0)));
    for (int p = 1; p <= max_power; ++p) {
      for (int j = 0; j < N; ++j) {
        ta[static_cast<std::size_t>(p)][static_cast<std::size_t>(j)] =
            ta[static_cast<std::size_t>(p - 1)][static_cast<std::size_t>(j)] * cd(0.0, g.wavenumber(a, j));
      }
    }
  }
  return t;
}

/// out += sum over terms c_alpha (i kappa)^alpha hat, for a list of
/// (alpha, coefficient) pairs.
void accumulate_monomials(const Grid& g, const std::vector<std::pair<std::vector<int>, double>>& terms,
                          const std::vector<std::vector<std::vector<cd>>>& pw, const std::vector<cd>& in,
                          std::vector<cd>& out) {
  if (terms.empty()) return;
  for_each_mode(g, [&](std::size_t i, const std::vector<int>& idx) {
    cd acc = 0;
    for (const auto& [alpha, c] : terms) {
      cd m = c;
      for (int a = 0; a < g.n; ++a) {
        const int p = alpha[static_cast<std::size_t>(a)];
        if (p) m *= pw[static_cast<std::size_t>(a)][static_cast<std::size_t>(p)][static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
      }
      acc += m;
    }
    out[i] += acc * in[i];
  });
}

// Finite differences along one axis, periodic wrap or zero extension.
void fd_axis(const Grid& g, int axis, int order, int accuracy, const std::vector<double>& in, std::vector<double>& out) {
  const int N = g.res[static_cast<std::size_t>(axis)];
  std::size_t stride = 1;
  for (int a = g.n - 1; a > axis; --a) stride *= static_cast<std::size_t>(g.res[static_cast<std::size_t>(a)]);
  const double h = g.spacing(axis);
  const std::size_t total = g.size();
  const std::size_t lines = total / static_cast<std::size_t>(N);
  std::vector<double> c;  // stencil coefficients for offsets -R..R
  int R;
  if (accuracy == 2) {
    R = 1;
    c = order == 1 ? std::vector<double>{-0.5, 0.0, 0.5} : std::vector<double>{1.0, -2.0, 1.0};
  } else if (accuracy == 4) {
    R = 2;
    c = order == 1 ? std::vector<double>{1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12}
                   : std::vector<double>{-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
  } else {
    throw DomainError("finite differences: accuracy must be 2 or 4");
  }
  const double scale = order == 1 ? 1.0 / h : 1.0 / (h * h);
  out.assign(total, 0.0);
  parallel_for(lines, [&](std::size_t line) {
    const std::size_t outer = line / stride;
    const std::size_t inner = line % stride;
    const std::size_t base = outer * static_cast<std::size_t>(N) * stride + inner;
    for (int j = 0; j < N; ++j) {
      double acc = 0;
      for (int o = -R; o <= R; ++o) {
        const double w = c[static_cast<std::size_t>(o + R)];
        if (w == 0) continue;
        int jj = j + o;
        if (g.periodic) {
          jj = (jj % N + N) % N;
        } else if (jj < 0 || jj >= N) {
          continue;
        }
        acc += w * in[base + static_cast<std::size_t>(jj) * stride];
      }
      out[base + static_cast<std::size_t>(j) * stride] = acc * scale;
    }
  });
}

std::vector<double> fd_partial(const Grid& g, const std::vector<int>& alpha, int accuracy, std::vector<double> v) {
  std::vector<double> tmp;
  for (int a = 0; a < g.n; ++a) {
    int p = alpha[static_cast<std::size_t>(a)];
    for (; p >= 2; p -= 2) {
      fd_axis(g, a, 2, accuracy, v, tmp);
      v.swap(tmp);
    }
    if (p == 1) {
      fd_axis(g, a, 1, accuracy, v, tmp);
      v.swap(tmp);
    }
  }
  return v;
}

std::vector<double> to_doubles(const std::vector<Rational>& w) {
  std::vector<double> out;
  for (const auto& q : w) out.push_back(q.get_d());
  return out;
}

}  // namespace

GridField random_band_limited(const Grid& grid, int components, int max_mode, std::uint64_t seed) {
  grid.validate();
  if (max_mode < 1) throw DomainError("random_band_limited: max_mode must be >= 1");
  for (int r : grid.res) {
    if (2 * max_mode >= r) throw DomainError("random_band_limited: max_mode must be below Nyquist");
  }
  Rng rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<std::vector<cd>> hat(static_cast<std::size_t>(components), std::vector<cd>(grid.size(), cd(0)));
  for (int c = 0; c < components; ++c) {
    for_each_mode(grid, [&](std::size_t i, const std::vector<int>& idx) {
      bool inside = true, dc = true;
      for (int a = 0; a < grid.n; ++a) {
        const int N = grid.res[static_cast<std::size_t>(a)];
        const int j = idx[static_cast<std::size_t>(a)];
        const int m = j < (N + 1) / 2 ? j : j - N;
        inside = inside && std::abs(m) <= max_mode;
        dc = dc && m == 0;
      }
      if (inside && !dc) {
        const double re = gauss(rng), im = gauss(rng);
        hat[static_cast<std::size_t>(c)][i] = cd(re, im) * static_cast<double>(grid.size());
      }
    });
  }
  GridField u = from_spectra(grid, std::move(hat));
  bool limited = true;
  for (int r : grid.res) limited = limited && 3 * max_mode < r;
  u.set_band_limited(limited);
  return u;
}

GridField band_limit(const GridField& u) {
  require_spectral(u);
  const Grid& g = u.grid();
  auto hat = spectra(u);
  for (auto& h : hat) {
    for_each_mode(g, [&](std::size_t i, const std::vector<int>& idx) {
      for (int a = 0; a < g.n; ++a) {
        const int N = g.res[static_cast<std::size_t>(a)];
        const int j = idx[static_cast<std::size_t>(a)];
        const int m = j < (N + 1) / 2 ? j : j - N;
        if (3 * std::abs(m) > N) {
          h[i] = 0;
          return;
        }
      }
    });
  }
  GridField out = from_spectra(g, std::move(hat), u.weights());
  out.set_band_limited(true);
  return out;
}

GridField apply_symbol(const HomogeneousSymbol& a, const GridField& u, DiffMode mode, int fd_accuracy) {
  if (u.grid().n != a.n()) throw DimensionError("apply_symbol: field dimension n", a.n(), u.grid().n);
  if (u.components() != a.dim_v()) throw DimensionError("apply_symbol: field components (dimV)", a.dim_v(), u.components());
  const Grid& g = u.grid();
  std::vector<double> weights = to_doubles(a.w_weights());
  if (mode == DiffMode::spectral) {
    require_spectral(u);
    const auto pw = ik_powers(g, a.order());
    const auto hat = spectra(u);
    std::vector<std::vector<cd>> out(static_cast<std::size_t>(a.dim_w()), std::vector<cd>(g.size(), cd(0)));
    parallel_for(static_cast<std::size_t>(a.dim_w()), [&](std::size_t w) {
      for (int v = 0; v < a.dim_v(); ++v) {
        std::vector<std::pair<std::vector<int>, double>> terms;
        for (const auto& [alpha, m] : a.terms()) {
          const double c = m(static_cast<int>(w), v).get_d();
          if (c != 0) terms.emplace_back(alpha.e, c);
        }
        accumulate_monomials(g, terms, pw, hat[static_cast<std::size_t>(v)], out[w]);
      }
    });
    GridField r = from_spectra(g, std::move(out), std::move(weights));
    r.set_band_limited(u.band_limited());
    return r;
  }
  GridField r(g, a.dim_w(), std::move(weights));
  for (const auto& [alpha, m] : a.terms()) {
    for (int v = 0; v < a.dim_v(); ++v) {
      bool used = false;
      for (int w = 0; w < a.dim_w(); ++w) used = used || m(w, v) != 0;
      if (!used) continue;
      auto comp = u.component(v);
      const std::vector<double> d = fd_partial(g, alpha.e, fd_accuracy, std::vector<double>(comp.begin(), comp.end()));
      for (int w = 0; w < a.dim_w(); ++w) {
        const double c = m(w, v).get_d();
        if (c == 0) continue;
        auto out = r.component(w);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * d[i];
      }
    }
  }
  return r;
}

GridField apply_polynomial_matrix(const PolynomialMatrix& p, const GridField& u, std::vector<double> weights) {
  require_spectral(u);
  if (p.variables() != u.grid().n) throw DimensionError("apply_polynomial_matrix: variables", u.grid().n, p.variables());
  if (p.cols() != u.components()) throw DimensionError("apply_polynomial_matrix: columns", u.components(), p.cols());
  const Grid& g = u.grid();
  int max_power = 0;
  for (int r = 0; r < p.rows(); ++r) {
    for (int c = 0; c < p.cols(); ++c) max_power = std::max(max_power, p(r, c).degree());
  }
  const auto pw = ik_powers(g, std::max(max_power, 0));
  const auto hat = spectra(u);
  std::vector<std::vector<cd>> out(static_cast<std::size_t>(p.rows()), std::vector<cd>(g.size(), cd(0)));
  parallel_for(static_cast<std::size_t>(p.rows()), [&](std::size_t r) {
    for (int c = 0; c < p.cols(); ++c) {
      std::vector<std::pair<std::vector<int>, double>> terms;
      for (const auto& [alpha, q] : p(static_cast<int>(r), c).terms()) terms.emplace_back(alpha.e, q.get_d());
      accumulate_monomials(g, terms, pw, hat[static_cast<std::size_t>(c)], out[r]);
    }
  });
  GridField res = from_spectra(g, std::move(out), std::move(weights));
  res.set_band_limited(u.band_limited());
  return res;
}

GridField partial_derivative(const GridField& u, const MultiIndex& alpha, DiffMode mode, int fd_accuracy) {
  const Grid& g = u.grid();
  if (alpha.size() != g.n) throw DimensionError("partial_derivative: multi-index length", g.n, alpha.size());
  if (mode == DiffMode::finite_difference) {
    GridField r(g, u.components(), u.weights());
    for (int c = 0; c < u.components(); ++c) {
      auto comp = u.component(c);
      const auto d = fd_partial(g, alpha.e, fd_accuracy, std::vector<double>(comp.begin(), comp.end()));
      std::copy(d.begin(), d.end(), r.component(c).begin());
    }
    return r;
  }
  require_spectral(u);
  const auto pw = ik_powers(g, alpha.order());
  auto hat = spectra(u);
  const std::vector<std::pair<std::vector<int>, double>> terms{{alpha.e, 1.0}};
  std::vector<std::vector<cd>> out(hat.size(), std::vector<cd>(g.size(), cd(0)));
  for (std::size_t c = 0; c < hat.size(); ++c) accumulate_monomials(g, terms, pw, hat[c], out[c]);
  GridField r = from_spectra(g, std::move(out), u.weights());
  r.set_band_limited(u.band_limited());
  return r;
}

GridField derivative_tensor(const GridField& u, int order, DiffMode mode, int fd_accuracy) {
  if (order < 0) throw DomainError("derivative_tensor: order must be >= 0");
  if (order == 0) return u;
  return apply_symbol(make_higher_gradient(u.grid().n, order, u.components()), u, mode, fd_accuracy);
}

GridField riesz_potential(const GridField& f, double alpha) {
  require_spectral(f);
  const Grid& g = f.grid();
  if (!(alpha > -g.n && alpha < g.n)) throw DomainError("riesz_potential: alpha must lie in (-n, n)");
  auto hat = spectra(f);
  const double N = static_cast<double>(g.size());
  if (alpha > 0) {
    double rms = 0;
    for (double v : f.values()) rms += v * v;
    rms = std::sqrt(rms / static_cast<double>(f.values().size()));
    for (const auto& h : hat) {
      const double mean = std::abs(h[0]) / N;
      if (mean > 1e-10 * std::max(rms, std::numeric_limits<double>::min())) {
        throw DomainError("riesz_potential: input has nonzero mean " + std::to_string(mean) +
                          "; the zero mode is undefined for alpha > 0");
      }
    }
  }
  std::vector<double> mult(g.size());
  {
    std::vector<std::vector<double>> k2(static_cast<std::size_t>(g.n));
    for (int a = 0; a < g.n; ++a) {
      for (int j = 0; j < g.res[static_cast<std::size_t>(a)]; ++j) {
        const double k = g.wavenumber(a, j);
        k2[static_cast<std::size_t>(a)].push_back(k * k);
      }
    }
    for_each_mode(g, [&](std::size_t i, const std::vector<int>& idx) {
      double s = 0;
      for (int a = 0; a < g.n; ++a) s += k2[static_cast<std::size_t>(a)][static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
      mult[i] = s > 0 ? std::pow(s, -0.5 * alpha) : 0.0;
    });
  }
  for (auto& h : hat) {
    for (std::size_t i = 0; i < h.size(); ++i) h[i] *= mult[i];
  }
  GridField r = from_spectra(g, std::move(hat), f.weights());
  r.set_band_limited(f.band_limited());
  return r;
}

GridField mollify(const GridField& u, double eps) {
  require_spectral(u);
  const Grid& g = u.grid();
  if (!(eps >= 2 * g.max_spacing() * (1 - 1e-12))) {
    throw DomainError("mollify: eps = " + std::to_string(eps) + " is below two grid spacings (" +
                      std::to_string(2 * g.max_spacing()) + ")");
  }
  for (int a = 0; a < g.n; ++a) {
    if (eps > 0.5 * g.length[static_cast<std::size_t>(a)]) throw DomainError("mollify: eps exceeds half the box");
  }
  std::vector<cd> kernel(g.size());
  double mass = 0;
  {
    std::vector<int> idx(static_cast<std::size_t>(g.n));
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.unravel(i, idx);
      double r2 = 0;
      for (int a = 0; a < g.n; ++a) {
        const int N = g.res[static_cast<std::size_t>(a)];
        const int j = idx[static_cast<std::size_t>(a)];
        const double d = (j <= N / 2 ? j : j - N) * g.spacing(a) / eps;
        r2 += d * d;
      }
      const double v = r2 < 1 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
      kernel[i] = v;
      mass += v;
    }
  }
  for (auto& k : kernel) k /= mass;
  FftPlan plan(g.res);
  plan.forward(kernel);
  kernel[0] = 1.0;
  auto hat = spectra(u);
  for (auto& h : hat) {
    for (std::size_t i = 0; i < h.size(); ++i) h[i] *= kernel[i];
  }
  GridField r = from_spectra(g, std::move(hat), u.weights());
  r.set_band_limited(u.band_limited());
  return r;
}

double lebesgue_norm(const GridField& u, double p) {
  if (!(p >= 1)) throw DomainError("lebesgue_norm: p must lie in [1, inf]");
  const std::size_t N = u.nodes();
  if (std::isinf(p)) return u.max_abs();
  long double s = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const double v = u.pointwise_norm(i);
    s += p == 1 ? v : std::pow(v, p);
  }
  const double integral = static_cast<double>(s) * u.grid().cell_volume();
  return p == 1 ? integral : std::pow(integral, 1.0 / p);
}

std::vector<double> interpolate(const GridField& u, std::span<const double> x) {
  const Grid& g = u.grid();
  if (static_cast<int>(x.size()) != g.n) throw DimensionError("interpolate: point length", g.n, static_cast<long>(x.size()));
  std::vector<int> i0(static_cast<std::size_t>(g.n));
  std::vector<double> frac(static_cast<std::size_t>(g.n));
  for (int a = 0; a < g.n; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const double lo = g.origin[ua], L = g.length[ua];
    const double tol = 1e-12 * std::max(1.0, std::abs(L));
    if (x[ua] < lo - tol || x[ua] > lo + L + tol) {
      throw DomainError("measure atom outside the field's box on axis " + std::to_string(a));
    }
    const double t = (x[ua] - lo) / g.spacing(a);
    const double f = std::floor(t);
    i0[ua] = static_cast<int>(f);
    frac[ua] = t - f;
  }
  std::vector<double> out(static_cast<std::size_t>(u.components()), 0.0);
  const int corners = 1 << g.n;
  std::vector<int> idx(static_cast<std::size_t>(g.n));
  for (int corner = 0; corner < corners; ++corner) {
    double w = 1;
    bool inside = true;
    for (int a = 0; a < g.n; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      const int bit = (corner >> a) & 1;
      w *= bit ? frac[ua] : 1 - frac[ua];
      int j = i0[ua] + bit;
      const int N = g.res[ua];
      if (g.periodic) {
        j = ((j % N) + N) % N;
      } else if (j < 0 || j >= N) {
        inside = false;
      }
      idx[ua] = j;
    }
    if (w == 0 || !inside) continue;
    const std::size_t node = g.ravel(idx);
    for (int c = 0; c < u.components(); ++c) out[static_cast<std::size_t>(c)] += w * u.at(c, node);
  }
  return out;
}

double measure_norm(const GridField& u, const DiscreteMeasure& mu, double q) {
  if (!(q >= 1) || std::isinf(q)) throw DomainError("measure_norm: q must lie in [1, inf)");
  if (mu.n != u.grid().n) throw DimensionError("measure_norm: measure dimension", u.grid().n, mu.n);
  std::vector<double> part(mu.size());
  parallel_for(mu.size(), [&](std::size_t i) {
    const auto v = interpolate(u, mu.point(i));
    double s = 0;
    for (int c = 0; c < u.components(); ++c) s += u.weights()[static_cast<std::size_t>(c)] * v[static_cast<std::size_t>(c)] * v[static_cast<std::size_t>(c)];
    const double norm = std::sqrt(s);
    part[i] = mu.weights[i] * (q == 1 ? norm : std::pow(norm, q));
  });
  long double s = 0;
  for (double p : part) s += p;
  return q == 1 ? static_cast<double>(s) : std::pow(static_cast<double>(s), 1.0 / q);
}

double hyperplane_l1(const GridField& u, int axis, int index) {
  const Grid& g = u.grid();
  if (axis < 0 || axis >= g.n) throw DomainError("hyperplane_l1: axis out of range");
  if (index < 0 || index >= g.res[static_cast<std::size_t>(axis)]) throw DomainError("hyperplane_l1: plane index outside the grid");
  double area = 1;
  for (int a = 0; a < g.n; ++a) {
    if (a != axis) area *= g.spacing(a);
  }
  std::vector<int> idx(static_cast<std::size_t>(g.n));
  long double s = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.unravel(i, idx);
    if (idx[static_cast<std::size_t>(axis)] == index) s += u.pointwise_norm(i);
  }
  return static_cast<double>(s) * area;
}

double halfspace_l1(const GridField& u, int axis, int index) {
  const Grid& g = u.grid();
  if (axis < 0 || axis >= g.n) throw DomainError("halfspace_l1: axis out of range");
  std::vector<int> idx(static_cast<std::size_t>(g.n));
  long double s = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.unravel(i, idx);
    const int j = idx[static_cast<std::size_t>(axis)];
    if (j > index) {
      s += u.pointwise_norm(i);
    } else if (j == index) {
      s += 0.5 * u.pointwise_norm(i);
    }
  }
  return static_cast<double>(s) * g.cell_volume();
}

double boundary_leakage(const GridField& u, double margin) {
  const Grid& g = u.grid();
  std::vector<int> idx(static_cast<std::size_t>(g.n));
  double edge = 0, peak = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = u.pointwise_norm(i);
    peak = std::max(peak, v);
    g.unravel(i, idx);
    bool near = false;
    for (int a = 0; a < g.n; ++a) {
      const int N = g.res[static_cast<std::size_t>(a)];
      const int band = std::max(1, static_cast<int>(margin * N));
      const int j = idx[static_cast<std::size_t>(a)];
      near = near || j < band || j >= N - band;
    }
    if (near) edge = std::max(edge, v);
  }
  return peak > 0 ? edge / peak : 0.0;
}

}  // namespace ltrace
