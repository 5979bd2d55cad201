#include "ltrace/harness.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ltrace/classify.hpp"
#include "ltrace/errors.hpp"
#include "ltrace/fft.hpp"
#include "ltrace/parallel.hpp"
#include "ltrace/sampling.hpp"

namespace ltrace {

const char* to_string(Boundedness b) {
  switch (b) {
    case Boundedness::bounded:
      return "bounded";
    case Boundedness::diverging:
      return "diverging";
    case Boundedness::inconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

using cd = std::complex<double>;

double smooth_e(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }

/// 1 for r <= r0, 0 for r >= r1, smooth in between.
double plateau(double r, double r0, double r1) {
  if (r <= r0) return 1.0;
  if (r >= r1) return 0.0;
  const double t = (r - r0) / (r1 - r0);
  const double a = smooth_e(1 - t), b = smooth_e(t);
  return a / (a + b);
}

double norm(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void check_s(double s) {
  if (!(s >= 0 && s < 1)) throw DomainError("s = " + std::to_string(s) + " must lie in [0, 1)");
}

void check_field(const HomogeneousSymbol& a, const GridField& u) {
  if (u.grid().n != a.n()) throw DimensionError("field dimension n", a.n(), u.grid().n);
  if (u.components() != a.dim_v()) throw DimensionError("field components (dimV)", a.dim_v(), u.components());
  if (a.n() < 2) throw DomainError("trace inequalities need n >= 2");
}

struct Common {
  GridField du;
  GridField au;
  double rhs = 0;
};

Common common_terms(const HomogeneousSymbol& a, const GridField& u) {
  Common c;
  c.au = apply_symbol(a, u);
  c.rhs = lebesgue_norm(c.au, 1);
  c.du = derivative_tensor(u, a.order() - 1);
  const double size = std::max(c.du.max_abs(), u.max_abs());
  if (!(c.rhs > 1e-13 * size) || c.rhs == 0) {
    throw DomainError("zero denominator: ||A[D]u||_1 = " + std::to_string(c.rhs) +
                      "; u lies in the kernel of A[D] (or vanishes)");
  }
  return c;
}

double morrey_or_estimate(const DiscreteMeasure& mu, double lambda, std::optional<double> morrey) {
  if (morrey) return *morrey;
  return estimate_morrey_norm(mu, lambda).value;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double spread_of(const std::vector<double>& v) {
  if (v.empty()) return 0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo > 0 ? *hi / *lo : std::numeric_limits<double>::infinity();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

Rational exponent_q(int n, const Rational& s) {
  if (n < 2) throw DomainError("q = (n - s)/(n - 1) needs n >= 2");
  return (Rational(n) - s) / Rational(n - 1);
}

Rational exponent_beta(int n, const Rational& s) {
  if (n < 2) throw DomainError("beta needs n >= 2");
  return (Rational(1) - s) * Rational(n - 1) / (Rational(n) - s);
}

Rational exponent_adams_q(int n, const Rational& s, const Rational& alpha) {
  return (Rational(n) - s) / (Rational(n) - alpha);
}

std::pair<double, double> theta_range(int n, double s) {
  return {s * (n - 1) / (n - s), 1.0};
}

RatioTerms trace_ratio(const HomogeneousSymbol& a, const GridField& u, const DiscreteMeasure& mu, double s,
                       std::optional<double> morrey) {
  check_field(a, u);
  check_s(s);
  const int n = a.n();
  const double q = exponent_q(n, rational_from_double(s)).get_d();
  const Common c = common_terms(a, u);
  RatioTerms t;
  t.rhs = c.rhs;
  t.morrey = morrey_or_estimate(mu, n - s, morrey);
  t.lhs = measure_norm(c.du, mu, q);
  t.ratio = t.lhs / (std::pow(t.morrey, 1.0 / q) * t.rhs);
  return t;
}

RatioTerms multiplicative_ratio(const HomogeneousSymbol& a, const GridField& u, const DiscreteMeasure& mu, double s,
                                double theta, std::optional<double> morrey) {
  check_field(a, u);
  check_s(s);
  const int n = a.n();
  const auto [lo, hi] = theta_range(n, s);
  if (!(theta > lo && theta <= hi)) {
    throw DomainError("theta = " + fmt(theta) + " outside the admissible interval (s(n-1)/(n-s), 1] = (" + fmt(lo) +
                      ", 1]");
  }
  const double q = exponent_q(n, rational_from_double(s)).get_d();
  const Common c = common_terms(a, u);
  RatioTerms t;
  t.rhs = c.rhs;
  t.morrey = morrey_or_estimate(mu, n - s, morrey);
  t.lhs = measure_norm(c.du, mu, q);
  t.middle = lebesgue_norm(c.du, static_cast<double>(n) / (n - 1));
  t.ratio = t.lhs / (std::pow(t.morrey, 1.0 / q) * std::pow(t.middle, 1.0 - theta) * std::pow(t.rhs, theta));
  return t;
}

RatioTerms adams_ratio(const HomogeneousSymbol& a, const GridField& u, const DiscreteMeasure& mu, double s,
                       double alpha, std::optional<double> morrey) {
  check_field(a, u);
  const int n = a.n();
  if (!(s >= 0 && s < alpha && alpha < n)) {
    throw DomainError("need 0 <= s < alpha < n; got s = " + fmt(s) + ", alpha = " + fmt(alpha));
  }
  const double q = exponent_adams_q(n, rational_from_double(s), rational_from_double(alpha)).get_d();
  RatioTerms t;
  const GridField au = apply_symbol(a, u);
  t.rhs = lebesgue_norm(au, 1);
  if (!(t.rhs > 0)) throw DomainError("zero denominator: A[D]u vanishes");
  t.morrey = morrey_or_estimate(mu, n - s, morrey);
  t.lhs = measure_norm(riesz_potential(au, alpha), mu, q);
  t.ratio = t.lhs / (std::pow(t.morrey, 1.0 / q) * t.rhs);
  return t;
}

GridField bump_member(const Grid& grid, int components, const BumpFamily& family, int index,
                      std::vector<double> weights) {
  const int n = grid.n;
  std::vector<double> center = family.center;
  if (center.empty()) center.assign(static_cast<std::size_t>(n), 0.0);
  if (static_cast<int>(center.size()) != n) throw DimensionError("bump family center", n, static_cast<long>(center.size()));
  if (!(family.radius > 0) || family.max_mode < 0) throw DomainError("bump family: radius > 0 and max_mode >= 0 required");
  // modes m in {-M..M}^n, one (cos, sin) coefficient pair per component
  std::vector<std::vector<int>> modes;
  {
    const int side = 2 * family.max_mode + 1;
    int total = 1;
    for (int a = 0; a < n; ++a) total *= side;
    for (int i = 0; i < total; ++i) {
      std::vector<int> m(static_cast<std::size_t>(n));
      int r = i;
      for (int a = 0; a < n; ++a) {
        m[static_cast<std::size_t>(a)] = r % side - family.max_mode;
        r /= side;
      }
      modes.push_back(m);
    }
  }
  Rng rng(shard_seed(family.seed, static_cast<std::uint64_t>(index)));
  std::normal_distribution<double> gauss;
  std::vector<double> ca(modes.size() * static_cast<std::size_t>(components)), cb(ca.size());
  for (std::size_t i = 0; i < ca.size(); ++i) {
    ca[i] = gauss(rng);
    cb[i] = gauss(rng);
  }
  const double R = family.radius;
  return sample_field(
      grid, components,
      [&](std::span<const double> x, std::span<double> out) {
        double r2 = 0;
        for (int a = 0; a < n; ++a) {
          const double d = x[static_cast<std::size_t>(a)] - center[static_cast<std::size_t>(a)];
          r2 += d * d;
        }
        r2 /= R * R;
        std::fill(out.begin(), out.end(), 0.0);
        if (r2 >= 1) return;
        const double win = std::exp(1 - 1 / (1 - r2));
        for (std::size_t m = 0; m < modes.size(); ++m) {
          double ph = 0;
          for (int a = 0; a < n; ++a) {
            ph += modes[m][static_cast<std::size_t>(a)] * (x[static_cast<std::size_t>(a)] - center[static_cast<std::size_t>(a)]);
          }
          ph *= std::numbers::pi / R;
          const double cs = std::cos(ph), sn = std::sin(ph);
          for (int c = 0; c < components; ++c) {
            const std::size_t i = m * static_cast<std::size_t>(components) + static_cast<std::size_t>(c);
            out[static_cast<std::size_t>(c)] += win * (ca[i] * cs + cb[i] * sn);
          }
        }
      },
      std::move(weights));
}

InequalityReport sweep_sobolev(const HomogeneousSymbol& a, double s, const DiscreteMeasure& mu, const SweepConfig& cfg) {
  check_s(s);
  const int n = a.n();
  if (mu.n != n) throw DimensionError("sweep_sobolev: measure dimension", n, mu.n);
  InequalityReport rep;
  rep.test_id = cfg.alpha ? "adams" : cfg.theta ? "multiplicative" : "sobolev";
  rep.operator_name = a.name();
  rep.n = n;
  rep.k = a.order();
  rep.s = s;
  rep.theta = cfg.theta;
  rep.alpha = cfg.alpha;
  const Rational sq = rational_from_double(s);
  rep.q_exact = to_string(cfg.alpha ? exponent_adams_q(n, sq, rational_from_double(*cfg.alpha)) : exponent_q(n, sq));
  const MorreyEstimate est = estimate_morrey_norm(mu, n - s, cfg.morrey_balls);
  rep.morrey = est.value;
  rep.morrey_family = est.family;
  rep.resolutions = cfg.resolutions;
  rep.box_sizes = {cfg.length};
  rep.seeds = {cfg.family.seed};
  std::vector<double> sups;
  for (int res : cfg.resolutions) {
    const Grid grid = Grid::centered(n, res, cfg.length);
    std::vector<RatioTerms> terms(static_cast<std::size_t>(cfg.family.count));
    for (int i = 0; i < cfg.family.count; ++i) {
      const GridField u = bump_member(grid, a.dim_v(), cfg.family, i);
      if (cfg.alpha) {
        terms[static_cast<std::size_t>(i)] = adams_ratio(a, u, mu, s, *cfg.alpha, rep.morrey);
      } else if (cfg.theta) {
        terms[static_cast<std::size_t>(i)] = multiplicative_ratio(a, u, mu, s, *cfg.theta, rep.morrey);
      } else {
        terms[static_cast<std::size_t>(i)] = trace_ratio(a, u, mu, s, rep.morrey);
      }
    }
    std::vector<double> r;
    double lhs = 0, rhs = 0;
    for (const auto& t : terms) {
      r.push_back(t.ratio);
      lhs = std::max(lhs, t.lhs);
      rhs = std::max(rhs, t.rhs);
    }
    const double sup = *std::max_element(r.begin(), r.end());
    const double sp = spread_of(r);
    rep.metrics["sup@" + std::to_string(res)] = sup;
    rep.metrics["spread@" + std::to_string(res)] = sp;
    rep.spread = std::max(rep.spread, sp);
    rep.growth.push_back({static_cast<double>(res), lhs, rhs, sup});
    rep.ratios.insert(rep.ratios.end(), r.begin(), r.end());
    sups.push_back(sup);
  }
  rep.sup_ratio = *std::max_element(sups.begin(), sups.end());
  const double across = spread_of(sups);
  rep.metrics["resolution_spread"] = across;
  rep.verdict = rep.spread <= cfg.max_spread && across <= cfg.max_spread ? Boundedness::bounded : Boundedness::inconclusive;
  rep.notes.push_back("Morrey normalizer is a lower-bound estimate: " + est.family);
  return rep;
}

RatioTerms halfspace_trace_ratio(const HomogeneousSymbol& a, const GridField& u, int axis, double offset,
                                 HalfspaceSide side) {
  check_field(a, u);
  const Grid& g = u.grid();
  if (axis < 0 || axis >= g.n) throw DomainError("halfspace_trace_ratio: axis out of range");
  const double h = g.spacing(axis);
  const double pos = (offset - g.origin[static_cast<std::size_t>(axis)]) / h;
  const long index = std::lround(pos);
  if (std::abs(pos - static_cast<double>(index)) > 1e-9 || index < 0 || index >= g.res[static_cast<std::size_t>(axis)]) {
    throw DomainError("misaligned hyperplane: x_" + std::to_string(axis + 1) + " = " + fmt(offset) +
                      " is not a grid plane");
  }
  const GridField au = apply_symbol(a, u);
  RatioTerms t;
  t.rhs = side == HalfspaceSide::both ? lebesgue_norm(au, 1) : halfspace_l1(au, axis, static_cast<int>(index));
  if (!(t.rhs > 0)) throw DomainError("zero denominator: A[D]u vanishes on the chosen side");
  t.lhs = hyperplane_l1(derivative_tensor(u, a.order() - 1), axis, static_cast<int>(index));
  t.ratio = t.lhs / t.rhs;
  return t;
}

InequalityReport halfspace_sweep(const HomogeneousSymbol& a, const HalfspaceConfig& cfg) {
  const int n = a.n();
  const int axis = cfg.axis < 0 ? n - 1 : cfg.axis;
  InequalityReport rep;
  rep.test_id = "halfspace";
  rep.operator_name = a.name();
  rep.n = n;
  rep.k = a.order();
  rep.s = 1.0;
  rep.q_exact = "1";
  rep.resolutions = cfg.resolutions;
  rep.box_sizes = {cfg.length};
  rep.seeds = {cfg.family.seed};
  rep.metrics["axis"] = axis;
  rep.metrics["offset"] = cfg.offset;
  std::vector<double> sups;
  for (int res : cfg.resolutions) {
    const Grid grid = Grid::centered(n, res, cfg.length);
    std::vector<double> r;
    double lhs = 0, rhs = 0;
    for (int i = 0; i < cfg.family.count; ++i) {
      const GridField u = bump_member(grid, a.dim_v(), cfg.family, i);
      const RatioTerms t = halfspace_trace_ratio(a, u, axis, cfg.offset, cfg.side);
      r.push_back(t.ratio);
      lhs = std::max(lhs, t.lhs);
      rhs = std::max(rhs, t.rhs);
    }
    const double sup = *std::max_element(r.begin(), r.end());
    const double sp = spread_of(r);
    rep.metrics["sup@" + std::to_string(res)] = sup;
    rep.metrics["spread@" + std::to_string(res)] = sp;
    rep.spread = std::max(rep.spread, sp);
    rep.growth.push_back({static_cast<double>(res), lhs, rhs, sup});
    rep.ratios.insert(rep.ratios.end(), r.begin(), r.end());
    sups.push_back(sup);
  }
  rep.sup_ratio = *std::max_element(sups.begin(), sups.end());
  const double across = spread_of(sups);
  rep.metrics["resolution_spread"] = across;
  if (cfg.exploratory) {
    rep.exploratory = true;
    rep.verdict = Boundedness::inconclusive;
    rep.notes.push_back("exploratory — open conjecture");
  } else {
    rep.verdict =
        rep.spread <= cfg.max_spread && across <= cfg.max_spread ? Boundedness::bounded : Boundedness::inconclusive;
  }
  return rep;
}

Boundedness growth_verdict(const std::vector<GrowthRow>& rows, int window, double min_growth, double max_rhs_spread,
                           double max_spread) {
  if (static_cast<int>(rows.size()) < window + 1) return Boundedness::inconclusive;
  std::vector<double> rhs, lhs;
  for (const auto& r : rows) {
    rhs.push_back(r.rhs);
    lhs.push_back(r.lhs);
  }
  const double med = median(rhs);
  const auto [rlo, rhi] = std::minmax_element(rhs.begin(), rhs.end());
  const bool rhs_ok = med > 0 && *rhi <= max_rhs_spread * med && med <= max_rhs_spread * *rlo;
  bool growing = true;
  for (std::size_t j = rows.size() - static_cast<std::size_t>(window); j < rows.size(); ++j) {
    growing = growing && lhs[j] >= min_growth * lhs[j - 1];
  }
  if (growing && rhs_ok) return Boundedness::diverging;
  if (spread_of(lhs) <= max_spread && rhs_ok) return Boundedness::bounded;
  return Boundedness::inconclusive;
}

namespace {

int witness_axis(std::span<const double> x, const char* what) {
  const double nx = norm(x);
  if (!(nx > 0)) throw DomainError(std::string(what) + " must be nonzero");
  int axis = -1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > (1 - 1e-9) * nx) axis = static_cast<int>(i);
  }
  if (axis < 0) throw DomainError(std::string(what) + " must be a coordinate axis (rotate the operator first)");
  return axis;
}

double symbol_scale(const HomogeneousSymbol& a) {
  double scale = 0;
  for (int i = 0; i < a.n(); ++i) {
    std::vector<double> e(static_cast<std::size_t>(a.n()), 0.0);
    e[static_cast<std::size_t>(i)] = 1;
    scale = std::max(scale, singular_range(a, e).second);
  }
  return scale;
}

/// 8-point Gauss-Legendre nodes on [-1, 1], positive half.
constexpr double kGLx[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
constexpr double kGLw[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

struct Quadrature {
  std::vector<double> x, w;
  void panel(double lo, double hi) {
    const double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    for (int i = 0; i < 4; ++i) {
      x.push_back(m - h * kGLx[i]);
      w.push_back(h * kGLw[i]);
      x.push_back(m + h * kGLx[i]);
      w.push_back(h * kGLw[i]);
    }
  }
  /// [lo, hi] with panels halving toward `toward` (an endpoint).
  void graded(double lo, double hi, bool toward_lo, int halvings = 60) {
    double a = lo, b = hi;
    for (int m = 0; m < halvings; ++m) {
      const double mid = 0.5 * (a + b);
      if (toward_lo) {
        panel(mid, b);
        b = mid;
      } else {
        panel(a, mid);
        a = mid;
      }
    }
  }
};

/// Integration rule for functions smooth on [lo, hi] except for an integrable
/// |t|^p singularity at t = 0 (inside, at an end, or nearby).
Quadrature singular_rule(double lo, double hi, int panels = 16) {
  Quadrature q;
  auto piece = [&](double a, double b) {
    // a, b on the same side of 0; grade the panel nearest 0 when 0 is close
    const double w = (b - a) / panels;
    const bool near_lo = std::abs(a) <= std::abs(b);
    const double dist = std::min(std::abs(a), std::abs(b));
    for (int i = 0; i < panels; ++i) {
      const double pa = a + i * w, pb = (i + 1 == panels) ? b : a + (i + 1) * w;
      const bool nearest = near_lo ? i == 0 : i + 1 == panels;
      if (nearest && dist < w) {
        q.graded(pa, pb, near_lo, dist > 0 ? std::clamp(static_cast<int>(std::log2(w / dist)) + 4, 4, 60) : 60);
      } else {
        q.panel(pa, pb);
      }
    }
  };
  if (lo < 0 && hi > 0) {
    piece(lo, 0.0);
    piece(0.0, hi);
  } else {
    piece(lo, hi);
  }
  return q;
}

/// 1 on [0, r0], 0 beyond r1, C^order polynomial transition; value and
/// derivatives in r.
class PolyCutoff {
 public:
  PolyCutoff(double r0, double r1, int order) : r0_(r0), r1_(r1) {
    // smoothstep S(x) = x^{N+1} sum_i C(N+i, i) C(2N+1, N-i) (-x)^i
    const int N = order;
    std::vector<double> c(static_cast<std::size_t>(2 * N + 2), 0.0);
    for (int i = 0; i <= N; ++i) {
      c[static_cast<std::size_t>(N + 1 + i)] = static_cast<double>(binomial(N + i, i) * binomial(2 * N + 1, N - i)) * (i % 2 ? -1.0 : 1.0);
    }
    coef_.push_back(c);
    for (int d = 1; d <= 2 * N + 1; ++d) {
      std::vector<double> nd(c.size(), 0.0);
      const auto& prev = coef_.back();
      for (std::size_t j = 1; j < prev.size(); ++j) nd[j - 1] = prev[j] * static_cast<double>(j);
      coef_.push_back(nd);
    }
  }
  /// d^m/dr^m of the cutoff at r >= 0.
  double radial(double r, int m) const {
    if (r <= r0_) return m == 0 ? 1.0 : 0.0;
    if (r >= r1_) return 0.0;
    if (m >= static_cast<int>(coef_.size())) return 0.0;
    const double h = r1_ - r0_, x = (r - r0_) / h;
    const auto& c = coef_[static_cast<std::size_t>(m)];
    double acc = 0;
    for (std::size_t j = c.size(); j-- > 0;) acc = acc * x + c[j];
    return (m == 0 ? 1.0 - acc : -acc) / std::pow(h, m);
  }
  /// d^m/dx^m of cutoff(|x|).
  double operator()(double x, int m) const { return (x < 0 && m % 2 ? -1.0 : 1.0) * radial(std::abs(x), m); }
  double support() const { return r1_; }

 private:
  double r0_, r1_;
  std::vector<std::vector<double>> coef_;
};

double falling(double p, int b) {
  double r = 1;
  for (int i = 0; i < b; ++i) r *= p - i;
  return r;
}

/// G^{(m)}(t) = (rho_eps * g^{(m)})(t) for g = |t|^p chi(t), rho the 1-D bump.
class MollifiedProfile {
 public:
  MollifiedProfile(double p, const PolyCutoff& chi, double eps) : p_(p), chi_(chi), eps_(eps) {
    Quadrature q = singular_rule(-1, 1, 32);
    double z = 0;
    for (std::size_t i = 0; i < q.x.size(); ++i) z += q.w[i] * bump(q.x[i]);
    norm_ = 1.0 / (z * eps);
  }
  double g(double tau, int m) const {
    const double a = std::abs(tau);
    if (a == 0 || a >= chi_.support()) return 0.0;
    double acc = 0;
    for (int b = 0; b <= m; ++b) {
      const double sing = falling(p_, b) * std::pow(a, p_ - b) * (tau < 0 && b % 2 ? -1.0 : 1.0);
      acc += static_cast<double>(binomial(m, b)) * sing * chi_(tau, m - b);
    }
    return acc;
  }
  double operator()(double t, int m) const {
    const double lo = std::max(t - eps_, -chi_.support()), hi = std::min(t + eps_, chi_.support());
    if (lo >= hi) return 0.0;
    const Quadrature q = singular_rule(lo, hi);
    double acc = 0;
    for (std::size_t i = 0; i < q.x.size(); ++i) acc += q.w[i] * bump((t - q.x[i]) / eps_) * g(q.x[i], m);
    return acc * norm_;
  }

 private:
  static double bump(double x) { return std::abs(x) < 1 ? std::exp(-1 / (1 - x * x)) : 0.0; }
  double p_;
  const PolyCutoff& chi_;
  double eps_;
  double norm_ = 0;
};

}  // namespace

InequalityReport blowup_nonelliptic(const HomogeneousSymbol& a, std::span<const double> xi0, std::span<const double> v,
                                    double s, const NonEllipticConfig& cfg) {
  const int n = a.n(), k = a.order();
  if (static_cast<int>(xi0.size()) != n) throw DimensionError("blowup_nonelliptic: xi0 length", n, static_cast<long>(xi0.size()));
  if (static_cast<int>(v.size()) != a.dim_v()) throw DimensionError("blowup_nonelliptic: v length", a.dim_v(), static_cast<long>(v.size()));
  check_s(s);
  if (n < 2) throw DomainError("blowup_nonelliptic needs n >= 2");
  const int ax = witness_axis(xi0, "xi0");
  Eigen::VectorXd vv(a.dim_v());
  for (int i = 0; i < a.dim_v(); ++i) vv(i) = v[static_cast<std::size_t>(i)];
  double witness_residual = 0;
  {
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(ax)] = 1;
    witness_residual = (a.eval_orthonormal(e) * vv).norm() / (vv.norm() * std::max(symbol_scale(a), 1e-300));
    if (!(vv.norm() > 0) || !(witness_residual < 1e-6)) {
      throw DomainError("witness fails re-verification: |A[xi0] v| / (|v| scale) = " + fmt(witness_residual));
    }
  }
  if (cfg.levels < 2 || !(cfg.eps_step > 1) || !(cfg.eps0 > 0)) throw DomainError("blowup_nonelliptic: bad level schedule");
  if (!(cfg.cantor_extent < 0.6 * cfg.cutoff_singular) || !(cfg.perp_half_width < 0.6 * cfg.cutoff_other)) {
    throw DomainError("blowup_nonelliptic: the measure must sit where the cutoffs equal 1");
  }
  if (cfg.perp_res < 8 || cfg.t_panels < 4 || !(cfg.grading > 1) || !(cfg.domain_scale >= 1)) {
    throw DomainError("blowup_nonelliptic: bad quadrature settings");
  }
  const Rational sq = rational_from_double(s);
  const Rational beta_q = exponent_beta(n, sq);
  const double beta = beta_q.get_d();
  const double q = exponent_q(n, sq).get_d();
  const double p = k - 1 - beta;
  const PolyCutoff chi_t(0.6 * cfg.cutoff_singular, cfg.cutoff_singular, k + 2);
  const PolyCutoff chi_p(0.6 * cfg.cutoff_other, cfg.cutoff_other, k + 2);
  const double eps_min = cfg.eps0 / std::pow(cfg.eps_step, cfg.levels - 1);

  // mu along t: cantor (or full) axis; full axes across xi0-perp.
  const bool t_full = cfg.control || s == 0;
  std::vector<double> t_atoms, t_weights;
  int t_level = 0;
  if (t_full) {
    const double lo = cfg.control ? 0.6 * cfg.cantor_extent : 0.0;
    const Quadrature qd = singular_rule(lo, cfg.cantor_extent, 64);
    t_atoms = qd.x;
    for (double w : qd.w) t_weights.push_back(w / (cfg.cantor_extent - lo));
  } else {
    AxisSpec axs;
    axs.kind = AxisSpec::Kind::cantor;
    axs.dim = 1 - s;
    t_level = cfg.perp_level;
    while (cfg.cantor_extent * std::pow(axs.ratio(), t_level) > eps_min / 4) {
      if (++t_level > cfg.max_cantor_level) {
        throw DomainError("blowup_nonelliptic: the cantor axis would need level > " + std::to_string(cfg.max_cantor_level) +
                          " to resolve eps = " + fmt(eps_min));
      }
    }
    ProductSpec one;
    one.axes = {axs};
    one.lo = {0.0};
    one.hi = {cfg.cantor_extent};
    one.level = t_level;
    const DiscreteMeasure m1 = build_product(one);
    t_atoms = m1.points;
    t_weights = m1.weights;
  }
  DiscreteMeasure perp_mu;
  if (n > 1) {
    ProductSpec ps;
    ps.level = cfg.perp_level;
    for (int i = 0; i < n - 1; ++i) {
      ps.axes.push_back(AxisSpec{});
      ps.lo.push_back(-cfg.perp_half_width);
      ps.hi.push_back(cfg.perp_half_width);
    }
    perp_mu = build_product(ps);
  }

  // Morrey normalizer on the equal-level product (level perp_level).
  ProductSpec spec;
  spec.level = cfg.perp_level;
  for (int i = 0; i < n; ++i) {
    AxisSpec axs;
    if (i == ax) {
      axs.kind = t_full ? AxisSpec::Kind::full : AxisSpec::Kind::cantor;
      axs.dim = t_full ? 1.0 : 1 - s;
      spec.lo.push_back(cfg.control ? 0.6 * cfg.cantor_extent : 0.0);
      spec.hi.push_back(cfg.cantor_extent);
    } else {
      spec.lo.push_back(-cfg.perp_half_width);
      spec.hi.push_back(cfg.perp_half_width);
    }
    spec.axes.push_back(axs);
  }
  const MorreyEstimate est = estimate_morrey_norm(build_product(spec), n - s);

  // Perpendicular derivatives d^b X at a point, b a multi-index over the n - 1 other axes.
  auto perp_derivative = [&](std::span<const double> xp, const MultiIndex& b) {
    double r = 1;
    for (int d = 0; d < n - 1; ++d) r *= chi_p(xp[static_cast<std::size_t>(d)], b[d]);
    return r;
  };
  auto split = [&](const MultiIndex& alpha) {
    std::vector<int> rest;
    for (int d = 0; d < n; ++d) {
      if (d != ax) rest.push_back(alpha[d]);
    }
    return std::make_pair(alpha[ax], MultiIndex(rest));
  };
  const auto gammas = multi_indices(n, k - 1);
  std::vector<std::pair<int, MultiIndex>> gamma_split;
  std::vector<double> gamma_mult;
  for (const auto& g : gammas) {
    gamma_split.push_back(split(g));
    gamma_mult.push_back(static_cast<double>(multinomial(g)));
  }
  // A[D] u = sum_alpha (A_alpha v) G^{(alpha_t)} d^{alpha_perp} X; the alpha_t = k term is A[xi0] v = 0.
  struct Term {
    int m;
    MultiIndex b;
    Eigen::VectorXd av;
  };
  std::vector<Term> terms;
  for (const auto& [alpha, mat] : a.terms()) {
    const auto [m, b] = split(alpha);
    if (m == k) continue;
    const Eigen::VectorXd av = a.metric_sqrt().asDiagonal() * (mat.to_double() * vv);
    terms.push_back({m, b, av});
  }
  // perpendicular midpoint grid over the cutoff support, scaled by domain_scale
  const int pres = static_cast<int>(std::lround(cfg.perp_res * cfg.domain_scale));
  const double phalf = cfg.cutoff_other * cfg.domain_scale, ph = 2 * phalf / pres;
  std::size_t pnodes = 1;
  for (int d = 0; d < n - 1; ++d) pnodes *= static_cast<std::size_t>(pres);
  // B_m(x_perp) = sum over terms with alpha_t = m
  std::vector<std::vector<Eigen::VectorXd>> B(static_cast<std::size_t>(k),
                                              std::vector<Eigen::VectorXd>(pnodes, Eigen::VectorXd::Zero(a.dim_w())));
  {
    std::vector<double> xp(static_cast<std::size_t>(std::max(n - 1, 1)));
    for (std::size_t i = 0; i < pnodes; ++i) {
      std::size_t r = i;
      for (int d = 0; d < n - 1; ++d) {
        xp[static_cast<std::size_t>(d)] = -phalf + (static_cast<double>(r % static_cast<std::size_t>(pres)) + 0.5) * ph;
        r /= static_cast<std::size_t>(pres);
      }
      for (const auto& t : terms) B[static_cast<std::size_t>(t.m)][i] += t.av * perp_derivative(xp, t.b);
    }
  }
  const double pvol = std::pow(ph, n - 1);

  InequalityReport rep;
  rep.test_id = cfg.control ? "blowup-nonelliptic-control" : "blowup-nonelliptic";
  rep.operator_name = a.name();
  rep.n = n;
  rep.k = k;
  rep.s = s;
  rep.q_exact = to_string(exponent_q(n, sq));
  rep.beta_exact = to_string(beta_q);
  rep.morrey = est.value;
  rep.morrey_family = est.family + " (equal-level product at level " + std::to_string(cfg.perp_level) + ")";
  rep.resolutions = {pres, cfg.t_panels};
  rep.box_sizes = {2 * phalf, 2 * (cfg.cutoff_singular + cfg.eps0) * cfg.domain_scale};
  rep.metrics["witness_axis"] = ax;
  rep.metrics["witness_residual"] = witness_residual;
  rep.metrics["t_level"] = t_level;
  rep.metrics["t_atoms"] = static_cast<double>(t_atoms.size());
  rep.metrics["perp_atoms"] = static_cast<double>(perp_mu.size());
  rep.notes.push_back("separable field: 1-D mollification along xi0, graded quadrature in t, midpoint grid across xi0");
  if (t_full) rep.notes.push_back("full t-axis represented by a graded quadrature rule");

  for (int j = 0; j < cfg.levels; ++j) {
    const double eps = cfg.eps0 / std::pow(cfg.eps_step, j);
    const MollifiedProfile G(p, chi_t, eps);
    // LHS: product of the t-measure and the perpendicular measure
    std::vector<double> lhs_t(t_atoms.size());
    parallel_for(t_atoms.size(), [&](std::size_t i) {
      std::vector<double> gm(static_cast<std::size_t>(k));
      for (int m = 0; m < k; ++m) gm[static_cast<std::size_t>(m)] = G(t_atoms[i], m);
      double acc = 0;
      for (std::size_t pj = 0; pj < perp_mu.size(); ++pj) {
        double s2 = 0;
        for (std::size_t g = 0; g < gammas.size(); ++g) {
          const double c = gm[static_cast<std::size_t>(gamma_split[g].first)] * perp_derivative(perp_mu.point(pj), gamma_split[g].second);
          s2 += gamma_mult[g] * c * c;
        }
        acc += perp_mu.weights[pj] * std::pow(s2 * vv.squaredNorm(), 0.5 * q);
      }
      lhs_t[i] = t_weights[i] * acc;
    });
    double lhs = 0;
    for (double x : lhs_t) lhs += x;
    lhs = std::pow(lhs, 1 / q);
    // RHS: graded t-rule on [-T, T], uniform near the singular plane
    Quadrature tq;
    const double T = (cfg.cutoff_singular + eps) * cfg.domain_scale;
    const double inner = std::min(4 * eps, T);
    for (int i = 0; i < cfg.t_panels; ++i) tq.panel(-inner + 2 * inner * i / cfg.t_panels, -inner + 2 * inner * (i + 1) / cfg.t_panels);
    for (double a0 = inner; a0 < T;) {
      const double a1 = std::min(a0 * cfg.grading, T);
      tq.panel(a0, a1);
      tq.panel(-a1, -a0);
      a0 = a1;
    }
    std::vector<double> rhs_t(tq.x.size());
    parallel_for(tq.x.size(), [&](std::size_t i) {
      std::vector<double> gm(static_cast<std::size_t>(k));
      for (int m = 0; m < k; ++m) gm[static_cast<std::size_t>(m)] = G(tq.x[i], m);
      double acc = 0;
      Eigen::VectorXd val(a.dim_w());
      for (std::size_t pj = 0; pj < pnodes; ++pj) {
        val.setZero();
        for (int m = 0; m < k; ++m) val += gm[static_cast<std::size_t>(m)] * B[static_cast<std::size_t>(m)][pj];
        acc += val.norm();
      }
      rhs_t[i] = tq.w[i] * acc * pvol;
    });
    double rhs = 0;
    for (double x : rhs_t) rhs += x;
    rep.growth.push_back({eps, lhs, rhs, lhs / (std::pow(rep.morrey, 1 / q) * rhs)});
    rep.ratios.push_back(rep.growth.back().ratio);
  }
  rep.sup_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  rep.spread = spread_of(rep.ratios);
  rep.verdict = growth_verdict(rep.growth);
  return rep;
}

namespace {

/// Direction of largest |f| on the sphere of radius r and the widest cap
/// around it where |f| stays above half the max.
Cone select_cone(const GridField& f, double r, double cap) {
  const int n = f.grid().n;
  std::vector<std::vector<double>> dirs;
  if (n == 2) {
    for (int d = 0; d < 720; ++d) {
      const double th = 2 * std::numbers::pi * d / 720;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  } else {
    dirs = sphere_samples(n, 4000, 5);
  }
  std::vector<double> val(dirs.size());
  std::vector<double> x(static_cast<std::size_t>(n));
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    for (int a = 0; a < n; ++a) x[static_cast<std::size_t>(a)] = r * dirs[d][static_cast<std::size_t>(a)];
    const auto c = interpolate(f, x);
    double s2 = 0;
    for (int i = 0; i < f.components(); ++i) s2 += f.weights()[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
    val[d] = std::sqrt(s2);
  }
  const std::size_t best = static_cast<std::size_t>(std::max_element(val.begin(), val.end()) - val.begin());
  double half = cap;
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    if (val[d] >= 0.5 * val[best]) continue;
    double dot = 0;
    for (int a = 0; a < n; ++a) dot += dirs[d][static_cast<std::size_t>(a)] * dirs[best][static_cast<std::size_t>(a)];
    half = std::min(half, 0.9 * std::acos(std::clamp(dot, -1.0, 1.0)));
  }
  if (!(half > 0.03)) throw Error("internal: no cone where |D^{k-1}u| is bounded below (inconsistent with w != 0)");
  Cone cone;
  cone.apex.assign(static_cast<std::size_t>(n), 0.0);
  cone.axis = dirs[best];
  cone.half_angle = half;
  return cone;
}

}  // namespace

InequalityReport blowup_noncancelling(const HomogeneousSymbol& a, std::span<const double> w, double s,
                                      const NonCancellingConfig& cfg) {
  const int n = a.n(), k = a.order();
  if (static_cast<int>(w.size()) != a.dim_w()) throw DimensionError("blowup_noncancelling: w length", a.dim_w(), static_cast<long>(w.size()));
  check_s(s);
  if (n < 2) throw DomainError("blowup_noncancelling needs n >= 2");
  {
    Rng rng(shard_seed(99, 1));
    double worst = 0, smin = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 200; ++t) {
      const auto xi = gaussian_unit(n, rng);
      worst = std::max(worst, distance_to_image(a, xi, w));
      smin = std::min(smin, singular_range(a, xi).first);
    }
    if (!(worst < 1e-6)) {
      throw DomainError("witness fails re-verification: w is not in every image A[xi] (max distance " + fmt(worst) +
                        "); no non-cancelling witness");
    }
    if (!(smin > 1e-9 * symbol_scale(a))) throw DomainError("blowup_noncancelling: operator is not elliptic");
  }
  const Rational sq = rational_from_double(s);
  const double q = exponent_q(n, sq).get_d();
  const Grid grid = Grid::centered(n, cfg.resolution, cfg.length);
  if (cfg.cutoff_radius > 0.25 * cfg.length + 1e-12) throw DomainError("blowup_noncancelling: cutoff must fit in half the box");
  if (cfg.cutoff_radius <= 1.1 * cfg.measure_radius) throw DomainError("blowup_noncancelling: cutoff radius too small");
  const double eps0 = 0.5 * cfg.measure_radius;
  const double eps_min = eps0 / std::pow(cfg.eps_step, cfg.levels - 1);
  if (eps_min < 2 * grid.max_spacing()) throw DomainError("blowup_noncancelling: smallest eps below two grid spacings");

  // Phi w: spectral coefficients i^{-k} A^dagger[kappa] w e^{i kappa . origin} / h^n.
  std::vector<std::vector<cd>> hat(static_cast<std::size_t>(a.dim_v()), std::vector<cd>(grid.size(), cd(0)));
  {
    const cd ik = std::pow(cd(0, 1), -k);
    const double vol = grid.cell_volume();
    Eigen::VectorXd wo(a.dim_w());
    for (int i = 0; i < a.dim_w(); ++i) wo(i) = a.metric_sqrt()(i) * w[static_cast<std::size_t>(i)];
    parallel_for(grid.size(), [&](std::size_t i) {
      std::vector<int> idx(static_cast<std::size_t>(n));
      grid.unravel(i, idx);
      std::vector<double> kap(static_cast<std::size_t>(n));
      double k2 = 0, phase = 0;
      for (int d = 0; d < n; ++d) {
        kap[static_cast<std::size_t>(d)] = grid.wavenumber(d, idx[static_cast<std::size_t>(d)]);
        k2 += kap[static_cast<std::size_t>(d)] * kap[static_cast<std::size_t>(d)];
        phase += kap[static_cast<std::size_t>(d)] * grid.origin[static_cast<std::size_t>(d)];
      }
      if (k2 == 0) return;
      const Eigen::MatrixXd m = a.eval_orthonormal(kap);
      const Eigen::VectorXd x = (m.transpose() * m).ldlt().solve(m.transpose() * wo);
      const cd f = ik * std::polar(1.0 / vol, phase);
      for (int c = 0; c < a.dim_v(); ++c) hat[static_cast<std::size_t>(c)][i] = f * x(c);
    });
  }
  const GridField phi = from_spectra(grid, std::move(hat));
  std::vector<double> cut(grid.size());
  {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid.node(i, x);
      cut[i] = plateau(norm(x), 1.1 * cfg.measure_radius, cfg.cutoff_radius);
    }
  }

  InequalityReport rep;
  rep.test_id = "blowup-noncancelling";
  rep.operator_name = a.name();
  rep.n = n;
  rep.k = k;
  rep.s = s;
  rep.q_exact = to_string(exponent_q(n, sq));
  rep.resolutions = {cfg.resolution};
  rep.box_sizes = {cfg.length};
  const double side = cfg.measure_radius / std::sqrt(static_cast<double>(n));
  std::optional<Cone> cone;
  double w_norm = 0;
  for (int i = 0; i < a.dim_w(); ++i) w_norm += a.w_weights()[static_cast<std::size_t>(i)].get_d() * w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
  rep.metrics["source_mass"] = std::sqrt(w_norm);
  std::vector<double> morreys;
  for (int j = 0; j < cfg.levels; ++j) {
    const double eps = eps0 / std::pow(cfg.eps_step, j);
    GridField u = mollify(phi, eps);
    for (int c = 0; c < u.components(); ++c) {
      auto comp = u.component(c);
      for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= cut[i];
    }
    const GridField du = derivative_tensor(u, k - 1);
    if (!cone) {
      cone = select_cone(du, 0.5 * cfg.measure_radius, cfg.max_half_angle);
      rep.metrics["cone_half_angle"] = cone->half_angle;
      for (int d = 0; d < n; ++d) rep.metrics["cone_axis_" + std::to_string(d + 1)] = cone->axis[static_cast<std::size_t>(d)];
    }
    int level = cfg.min_level;
    while (side / std::pow(2.0, level) > eps / 4) ++level;
    const DiscreteMeasure mu = build_cone_cantor(n - s, n, level, *cone, side);
    const MorreyEstimate est = estimate_morrey_norm(mu, n - s);
    morreys.push_back(est.value);
    if (j == 0) rep.morrey_family = est.family;
    const double lhs = measure_norm(du, mu, q);
    const double rhs = lebesgue_norm(apply_symbol(a, u), 1);
    rep.growth.push_back({eps, lhs, rhs, lhs / (std::pow(est.value, 1 / q) * rhs)});
    rep.ratios.push_back(rep.growth.back().ratio);
    rep.metrics["level_" + std::to_string(j)] = level;
  }
  rep.morrey = *std::max_element(morreys.begin(), morreys.end());
  rep.sup_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  rep.spread = spread_of(rep.ratios);
  rep.verdict = growth_verdict(rep.growth);
  rep.notes.push_back("rhs is ||A[D](chi u_eps)||_1; the mollified source has mass |w|");
  return rep;
}

namespace {

/// j-th derivative of F with F^{(k-1)}(z) = 1/z.
cd profile_derivative(int k, int j, cd z) {
  if (j >= k - 1) {
    const int m = j - (k - 1);
    double fact = 1;
    for (int i = 2; i <= m; ++i) fact *= i;
    return (m % 2 ? -1.0 : 1.0) * fact / std::pow(z, m + 1);
  }
  const int p = k - 2 - j;
  double fact = 1, harmonic = 0;
  for (int i = 1; i <= p; ++i) {
    fact *= i;
    harmonic += 1.0 / i;
  }
  return std::pow(z, p) / fact * (std::log(z) - harmonic);
}

long multi_binomial(const MultiIndex& a, const MultiIndex& b) {
  long r = 1;
  for (int i = 0; i < a.size(); ++i) r *= binomial(a[i], b[i]);
  return r;
}

std::vector<MultiIndex> sub_indices(const MultiIndex& a) {
  std::vector<MultiIndex> out;
  for (int o = 0; o <= a.order(); ++o) {
    for (const auto& b : multi_indices(a.size(), o)) {
      if (a.dominates(b)) out.push_back(b);
    }
  }
  return out;
}

}  // namespace

InequalityReport wirtinger_blowup(const HomogeneousSymbol& a, std::span<const double> eta_in,
                                  std::span<const double> nu_in, std::span<const std::complex<double>> v_in,
                                  const ComplexWitnessConfig& cfg) {
  const int n = a.n(), k = a.order();
  if (static_cast<int>(eta_in.size()) != n || static_cast<int>(nu_in.size()) != n) {
    throw DimensionError("wirtinger_blowup: eta/nu length", n, static_cast<long>(eta_in.size()));
  }
  if (static_cast<int>(v_in.size()) != a.dim_v()) throw DimensionError("wirtinger_blowup: v length", a.dim_v(), static_cast<long>(v_in.size()));
  if (n < 2) throw DomainError("wirtinger_blowup needs n >= 2");
  std::vector<double> eta(eta_in.begin(), eta_in.end()), nu(nu_in.begin(), nu_in.end());
  std::vector<cd> v(v_in.begin(), v_in.end());
  const int pax = witness_axis(nu, "nu");
  if (nu[static_cast<std::size_t>(pax)] < 0) {
    // (eta, -nu, conj v) is a witness as well, since A is real.
    for (double& x : nu) x = -x;
    for (cd& z : v) z = std::conj(z);
  }
  std::vector<cd> zeta(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) zeta[static_cast<std::size_t>(i)] = cd(eta[static_cast<std::size_t>(i)], nu[static_cast<std::size_t>(i)]);
  {
    Eigen::VectorXcd vv(a.dim_v());
    for (int i = 0; i < a.dim_v(); ++i) vv(i) = v[static_cast<std::size_t>(i)];
    const double res = (a.eval_orthonormal(std::span<const cd>(zeta)) * vv).norm() /
                       (vv.norm() * std::max(symbol_scale(a), 1e-300) * std::pow(norm(eta) + norm(nu), k));
    if (!(vv.norm() > 0) || !(res < 1e-6)) {
      throw DomainError("witness fails re-verification: |A[eta + i nu] v| relative = " + fmt(res) +
                        "; no complex witness");
    }
  }
  Grid grid;
  grid.n = n;
  for (int i = 0; i < n; ++i) {
    grid.res.push_back(i == pax ? cfg.res_normal : cfg.res_tangent);
    grid.length.push_back(cfg.length);
    grid.origin.push_back(-0.5 * cfg.length);
  }
  grid.validate();
  if (cfg.length < 4.0 - 1e-12) throw DomainError("wirtinger_blowup: box side must be >= 4 for a cutoff in B_1");
  const int plane = grid.res[static_cast<std::size_t>(pax)] / 2;
  double min_h = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (i != pax) min_h = std::min(min_h, grid.spacing(i));
  }
  const double eps_min = cfg.eps0 / std::pow(2.0, cfg.levels - 1);
  if (eps_min < 2 * min_h) throw DomainError("wirtinger_blowup: smallest eps below two tangential grid spacings");

  // rho and its derivatives up to order k.
  const GridField rho = sample_field(grid, 1, [](std::span<const double> x, std::span<double> out) {
    out[0] = plateau(norm(x), 0.5, 1.0);
  });
  std::map<MultiIndex, std::vector<double>> drho;
  for (int o = 0; o <= k; ++o) {
    for (const auto& d : multi_indices(n, o)) {
      const GridField f = o == 0 ? rho : partial_derivative(rho, d);
      auto c = f.component(0);
      drho[d] = std::vector<double>(c.begin(), c.end());
    }
  }
  const auto gammas = multi_indices(n, k - 1);
  std::vector<double> du_weights, au_weights;
  if (k == 1) {
    du_weights.assign(static_cast<std::size_t>(a.dim_v()), 1.0);
  } else {
    for (const auto& q : make_higher_gradient(n, k - 1, a.dim_v()).w_weights()) du_weights.push_back(q.get_d());
  }
  for (const auto& q : a.w_weights()) au_weights.push_back(q.get_d());

  // Leibniz: d^alpha (rho u) = sum_{beta <= alpha} C(alpha, beta) d^{alpha-beta} rho F^{(|beta|)} zeta^beta v.
  struct Term {
    MultiIndex rho_index;
    int order;
    cd factor;  // C(alpha, beta) zeta^beta
  };
  auto leibniz = [&](const MultiIndex& alpha) {
    std::vector<Term> t;
    for (const auto& b : sub_indices(alpha)) {
      cd zb = 1;
      for (int i = 0; i < n; ++i) zb *= std::pow(zeta[static_cast<std::size_t>(i)], b[i]);
      t.push_back({alpha - b, b.order(), static_cast<double>(multi_binomial(alpha, b)) * zb});
    }
    return t;
  };
  std::vector<std::vector<Term>> g_terms;
  for (const auto& g : gammas) g_terms.push_back(leibniz(g));
  std::vector<std::pair<std::vector<Term>, const RationalMatrix*>> a_terms;
  for (const auto& [alpha, m] : a.terms()) a_terms.emplace_back(leibniz(alpha), &m);

  InequalityReport rep;
  rep.test_id = "wirtinger-blowup";
  rep.operator_name = a.name();
  rep.n = n;
  rep.k = k;
  rep.s = 1.0;
  rep.q_exact = "1";
  rep.resolutions = grid.res;
  rep.box_sizes = grid.length;
  std::vector<GrowthRow> parts[2];
  const std::size_t N = grid.size();
  for (int j = 0; j < cfg.levels; ++j) {
    const double eps = cfg.eps0 / std::pow(2.0, j);
    GridField du[2] = {GridField(grid, static_cast<int>(du_weights.size()), du_weights),
                       GridField(grid, static_cast<int>(du_weights.size()), du_weights)};
    GridField au[2] = {GridField(grid, a.dim_w(), au_weights), GridField(grid, a.dim_w(), au_weights)};
    parallel_for(N, [&](std::size_t i) {
      std::vector<double> x(static_cast<std::size_t>(n));
      std::vector<int> idx(static_cast<std::size_t>(n));
      grid.unravel(i, idx);
      if (idx[static_cast<std::size_t>(pax)] < plane) return;
      grid.node(i, x);
      double xe = 0, xn = 0;
      for (int d = 0; d < n; ++d) {
        xe += x[static_cast<std::size_t>(d)] * eta[static_cast<std::size_t>(d)];
        xn += x[static_cast<std::size_t>(d)] * nu[static_cast<std::size_t>(d)];
      }
      const cd z(xe, xn + eps);
      std::vector<cd> Fd(static_cast<std::size_t>(k + 1));
      for (int m = 0; m <= k; ++m) Fd[static_cast<std::size_t>(m)] = profile_derivative(k, m, z);
      auto eval = [&](const std::vector<Term>& terms) {
        cd acc = 0;
        for (const auto& t : terms) acc += drho.at(t.rho_index)[i] * Fd[static_cast<std::size_t>(t.order)] * t.factor;
        return acc;
      };
      if (idx[static_cast<std::size_t>(pax)] == plane) {
        for (std::size_t g = 0; g < gammas.size(); ++g) {
          const cd base = eval(g_terms[g]);
          for (int c = 0; c < a.dim_v(); ++c) {
            const cd val = base * v[static_cast<std::size_t>(c)];
            const int comp = c * static_cast<int>(gammas.size()) + static_cast<int>(g);
            du[0].at(comp, i) = val.real();
            du[1].at(comp, i) = val.imag();
          }
        }
      }
      std::vector<cd> out(static_cast<std::size_t>(a.dim_w()), cd(0));
      for (const auto& [terms, m] : a_terms) {
        const cd base = eval(terms);
        for (int r = 0; r < a.dim_w(); ++r) {
          cd acc = 0;
          for (int c = 0; c < a.dim_v(); ++c) {
            const double coef = (*m)(r, c).get_d();
            if (coef != 0) acc += coef * v[static_cast<std::size_t>(c)];
          }
          out[static_cast<std::size_t>(r)] += base * acc;
        }
      }
      for (int r = 0; r < a.dim_w(); ++r) {
        au[0].at(r, i) = out[static_cast<std::size_t>(r)].real();
        au[1].at(r, i) = out[static_cast<std::size_t>(r)].imag();
      }
    });
    for (int part = 0; part < 2; ++part) {
      const double lhs = hyperplane_l1(du[part], pax, plane);
      const double rhs = halfspace_l1(au[part], pax, plane);
      parts[part].push_back({eps, lhs, rhs, rhs > 0 ? lhs / rhs : 0.0});
    }
  }
  const int pick = parts[1].back().lhs > parts[0].back().lhs ? 1 : 0;
  rep.growth = parts[pick];
  rep.notes.push_back(pick ? "imaginary part of u_eps" : "real part of u_eps");
  for (const auto& r : rep.growth) rep.ratios.push_back(r.ratio);
  rep.sup_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  rep.spread = spread_of(rep.ratios);

  // Increments per halving against the oracle int_{-1}^{1} dx / |x + i eps| = 2 asinh(1/eps).
  bool increasing = true;
  double drift = 0, oracle_dev = 0;
  std::vector<double> inc, oinc, ratio;
  for (std::size_t j = 1; j < rep.growth.size(); ++j) {
    inc.push_back(rep.growth[j].lhs - rep.growth[j - 1].lhs);
    oinc.push_back(2 * std::asinh(1 / rep.growth[j].parameter) - 2 * std::asinh(1 / rep.growth[j - 1].parameter));
    ratio.push_back(inc.back() / oinc.back());
    increasing = increasing && inc.back() > 0;
    rep.metrics["increment_" + std::to_string(j)] = inc.back();
    rep.metrics["increment_over_log2_" + std::to_string(j)] = inc.back() / std::numbers::ln2;
    rep.metrics["oracle_increment_" + std::to_string(j)] = oinc.back();
  }
  for (std::size_t j = 1; j < inc.size(); ++j) drift = std::max(drift, std::abs(inc[j] / inc[j - 1] - 1));
  double mean_ratio = 0;
  for (double r : ratio) mean_ratio += r;
  mean_ratio /= static_cast<double>(ratio.size());
  for (double r : ratio) oracle_dev = std::max(oracle_dev, std::abs(r / mean_ratio - 1));
  std::vector<double> rhs;
  for (const auto& r : rep.growth) rhs.push_back(r.rhs);
  const double med = median(rhs);
  const double rhs_spread = std::max(*std::max_element(rhs.begin(), rhs.end()) / med, med / *std::min_element(rhs.begin(), rhs.end()));
  rep.metrics["increment_drift"] = drift;
  rep.metrics["oracle_deviation"] = oracle_dev;
  rep.metrics["oracle_scale"] = mean_ratio;
  rep.metrics["rhs_spread"] = rhs_spread;
  rep.metrics["lhs_spread"] = spread_of([&] {
    std::vector<double> l;
    for (const auto& r : rep.growth) l.push_back(r.lhs);
    return l;
  }());
  if (increasing && drift <= cfg.max_increment_drift && oracle_dev <= cfg.max_increment_drift && rhs_spread <= 2.0) {
    rep.verdict = Boundedness::diverging;
  } else if (rep.metrics["lhs_spread"] <= 2.0 && rhs_spread <= 2.0 && !increasing) {
    rep.verdict = Boundedness::bounded;
  } else {
    rep.verdict = Boundedness::inconclusive;
  }
  return rep;
}

InequalityReport robust_blowup(const std::function<InequalityReport(int, double)>& run) {
  InequalityReport base = run(1, 1.0);
  const InequalityReport fine = run(2, 1.0);
  const InequalityReport big = run(2, 2.0);
  base.notes.push_back(std::string("resolution doubling: ") + to_string(fine.verdict));
  base.notes.push_back(std::string("resolution and box doubling: ") + to_string(big.verdict));
  for (std::size_t j = 0; j < fine.growth.size(); ++j) {
    base.metrics["lhs_2N_" + std::to_string(j)] = fine.growth[j].lhs;
    base.metrics["rhs_2N_" + std::to_string(j)] = fine.growth[j].rhs;
  }
  for (std::size_t j = 0; j < big.growth.size(); ++j) {
    base.metrics["lhs_2N2L_" + std::to_string(j)] = big.growth[j].lhs;
    base.metrics["rhs_2N2L_" + std::to_string(j)] = big.growth[j].rhs;
  }
  base.resolutions.insert(base.resolutions.end(), fine.resolutions.begin(), fine.resolutions.end());
  base.resolutions.insert(base.resolutions.end(), big.resolutions.begin(), big.resolutions.end());
  base.box_sizes.insert(base.box_sizes.end(), big.box_sizes.begin(), big.box_sizes.end());
  const Boundedness v = base.verdict;
  base.verdict = (v == fine.verdict && v == big.verdict) ? v : Boundedness::inconclusive;
  return base;
}

}  // namespace ltrace
