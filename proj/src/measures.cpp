#include "ltrace/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ltrace/errors.hpp"
#include "ltrace/parallel.hpp"
#include "ltrace/sampling.hpp"

namespace ltrace {

double AxisSpec::ratio() const {
  switch (kind) {
    case Kind::full:
      return 0.5;
    case Kind::cantor:
      return std::pow(2.0, -1.0 / dim);
    case Kind::point:
      return 0.0;
  }
  return 0.0;
}

double ProductSpec::dimension() const {
  double d = 0;
  for (const auto& a : axes) {
    if (a.kind == AxisSpec::Kind::full) d += 1;
    if (a.kind == AxisSpec::Kind::cantor) d += a.dim;
  }
  return d;
}

const char* to_string(SupportDescriptor::Kind k) {
  switch (k) {
    case SupportDescriptor::Kind::cube:
      return "cube";
    case SupportDescriptor::Kind::cone:
      return "cone";
    case SupportDescriptor::Kind::hyperplane:
      return "hyperplane";
    case SupportDescriptor::Kind::lebesgue:
      return "lebesgue";
    case SupportDescriptor::Kind::point:
      return "point";
  }
  return "?";
}

double DiscreteMeasure::total_mass() const {
  double s = 0;
  for (double w : weights) s += w;
  return s;
}

void DiscreteMeasure::validate() const {
  if (n < 1) throw DomainError("measure: n must be >= 1");
  if (points.size() != weights.size() * static_cast<std::size_t>(n)) {
    throw DimensionError("measure: coordinate count", static_cast<long>(weights.size()) * n,
                         static_cast<long>(points.size()));
  }
  if (weights.empty()) throw DomainError("measure: no atoms");
  for (double w : weights) {
    if (!(w > 0) || !std::isfinite(w)) throw DomainError("measure: weights must be positive and finite");
  }
  constexpr double slack = 1e-12;
  for (std::size_t i = 0; i < size(); ++i) {
    auto x = point(i);
    switch (support.kind) {
      case SupportDescriptor::Kind::cube:
      case SupportDescriptor::Kind::lebesgue:
      case SupportDescriptor::Kind::hyperplane:
        if (!support.lo.empty()) {
          for (int a = 0; a < n; ++a) {
            const auto u = static_cast<std::size_t>(a);
            if (x[u] < support.lo[u] - slack || x[u] > support.hi[u] + slack) {
              throw DomainError("measure: atom " + std::to_string(i) + " outside the support box");
            }
          }
        }
        if (support.kind == SupportDescriptor::Kind::hyperplane) {
          double d = -support.offset;
          for (int a = 0; a < n; ++a) d += support.normal[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
          if (std::abs(d) > slack) throw DomainError("measure: atom " + std::to_string(i) + " off the hyperplane");
        }
        break;
      case SupportDescriptor::Kind::cone: {
        double t = 0, rr = 0;
        for (int a = 0; a < n; ++a) {
          const auto u = static_cast<std::size_t>(a);
          const double y = x[u] - support.apex[u];
          t += y * support.axis[u];
          rr += y * y;
        }
        const double rho = std::sqrt(rr);
        if (std::abs(t) < std::cos(support.half_angle) * rho - slack * std::max(1.0, rho)) {
          throw DomainError("measure: atom " + std::to_string(i) + " outside the cone");
        }
        break;
      }
      case SupportDescriptor::Kind::point:
        break;
    }
  }
}

namespace {

/// Offsets (relative to the box side) and length of the level-`level` cells
/// along one axis.
std::vector<double> axis_centers(const AxisSpec& a, int level, double* cell) {
  std::vector<double> lefts{0.0};
  double len = 1.0;
  if (a.kind == AxisSpec::Kind::point) {
    *cell = 0.0;
    return {a.at};
  }
  const double r = a.ratio();
  for (int l = 0; l < level; ++l) {
    std::vector<double> next;
    next.reserve(lefts.size() * 2);
    const double child = len * r;
    for (double x : lefts) {
      next.push_back(x);
      next.push_back(x + len - child);
    }
    lefts = std::move(next);
    len = child;
  }
  for (double& x : lefts) x += 0.5 * len;
  *cell = len;
  return lefts;
}

void check_box(std::span<const double> lo, std::span<const double> hi, int n) {
  if (static_cast<int>(lo.size()) != n || static_cast<int>(hi.size()) != n) {
    throw DimensionError("measure box", n, static_cast<long>(lo.size()));
  }
  for (int a = 0; a < n; ++a) {
    if (!(hi[static_cast<std::size_t>(a)] > lo[static_cast<std::size_t>(a)])) throw DomainError("measure box: hi must exceed lo");
  }
}

}  // namespace

DiscreteMeasure build_product(const ProductSpec& spec) {
  const int n = spec.n();
  if (n < 1) throw DomainError("build_product: no axes");
  check_box(spec.lo, spec.hi, n);
  if (spec.level < 1) throw DomainError("build_product: level must be >= 1");
  std::vector<std::vector<double>> centers(static_cast<std::size_t>(n));
  std::vector<double> cell(static_cast<std::size_t>(n));
  double spacing = 0;
  std::size_t count = 1;
  for (int a = 0; a < n; ++a) {
    const auto u = static_cast<std::size_t>(a);
    const AxisSpec& ax = spec.axes[u];
    if (ax.kind == AxisSpec::Kind::cantor && !(ax.dim > 0 && ax.dim < 1)) {
      throw DomainError("build_product: cantor axis dimension must lie in (0, 1)");
    }
    centers[u] = axis_centers(ax, spec.level, &cell[u]);
    const double side = spec.hi[u] - spec.lo[u];
    for (double& c : centers[u]) c = spec.lo[u] + side * c;
    cell[u] *= side;
    spacing = std::max(spacing, cell[u]);
    count *= centers[u].size();
  }
  if (count > (std::size_t{1} << 26)) throw DomainError("build_product: too many atoms, lower the level");
  DiscreteMeasure mu;
  mu.n = n;
  mu.level = spec.level;
  mu.dimension_alpha = spec.dimension();
  mu.spacing = spacing;
  mu.points.resize(count * static_cast<std::size_t>(n));
  double volume = 1;
  for (int a = 0; a < n; ++a) {
    if (spec.axes[static_cast<std::size_t>(a)].kind != AxisSpec::Kind::point) volume *= cell[static_cast<std::size_t>(a)];
  }
  mu.weights.assign(count, spec.volume_weights ? volume : 1.0 / static_cast<double>(count));
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < count; ++i) {
    for (int a = 0; a < n; ++a) mu.points[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(a)] = centers[static_cast<std::size_t>(a)][idx[static_cast<std::size_t>(a)]];
    for (int a = n - 1; a >= 0; --a) {
      const auto u = static_cast<std::size_t>(a);
      if (++idx[u] < centers[u].size()) break;
      idx[u] = 0;
    }
  }
  mu.support.kind = SupportDescriptor::Kind::cube;
  bool all_full = true;
  for (const auto& ax : spec.axes) all_full = all_full && ax.kind == AxisSpec::Kind::full;
  if (all_full && spec.volume_weights) {
    mu.support.kind = SupportDescriptor::Kind::lebesgue;
    mu.support.grid.assign(static_cast<std::size_t>(n), 1 << spec.level);
  }
  mu.support.lo = spec.lo;
  mu.support.hi = spec.hi;
  mu.generator = spec;
  return mu;
}

DiscreteMeasure build_cantor_product(double alpha, int n, int level, std::span<const double> lo,
                                     std::span<const double> hi) {
  if (n < 1) throw DomainError("build_cantor_product: n must be >= 1");
  if (!(alpha > 0) || alpha > n) {
    throw DomainError("build_cantor_product: alpha = " + std::to_string(alpha) + " must lie in (0, n = " +
                      std::to_string(n) + "]");
  }
  ProductSpec spec;
  spec.lo.assign(lo.begin(), lo.end());
  spec.hi.assign(hi.begin(), hi.end());
  spec.level = level;
  const int full = static_cast<int>(std::floor(alpha + 1e-12));
  const double frac = alpha - full;
  for (int a = 0; a < n; ++a) {
    AxisSpec ax;
    if (a < full) {
      ax.kind = AxisSpec::Kind::full;
    } else if (a == full && frac > 1e-12) {
      ax.kind = AxisSpec::Kind::cantor;
      ax.dim = frac;
    } else {
      ax.kind = AxisSpec::Kind::point;
      ax.at = 0.0;
    }
    spec.axes.push_back(ax);
  }
  spec.volume_weights = full == n;
  DiscreteMeasure mu = build_product(spec);
  mu.dimension_alpha = alpha;
  return mu;
}

DiscreteMeasure build_cantor_product(double alpha, int n, int level) {
  std::vector<double> lo(static_cast<std::size_t>(std::max(n, 0)), 0.0), hi(lo.size(), 1.0);
  return build_cantor_product(alpha, n, level, lo, hi);
}

DiscreteMeasure lebesgue_measure(std::span<const double> lo, std::span<const double> hi, int res) {
  const int n = static_cast<int>(lo.size());
  check_box(lo, hi, n);
  if (res < 1) throw DomainError("lebesgue_measure: resolution must be >= 1");
  std::vector<int> r(static_cast<std::size_t>(n), res);
  std::vector<double> length(static_cast<std::size_t>(n));
  std::vector<double> origin(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const auto u = static_cast<std::size_t>(a);
    length[u] = hi[u] - lo[u];
    origin[u] = lo[u] + 0.5 * length[u] / res;
  }
  DiscreteMeasure mu = lebesgue_node_measure(origin, length, r);
  mu.support.lo.assign(lo.begin(), lo.end());
  mu.support.hi.assign(hi.begin(), hi.end());
  return mu;
}

DiscreteMeasure lebesgue_node_measure(std::span<const double> origin, std::span<const double> length,
                                      std::span<const int> res) {
  const int n = static_cast<int>(origin.size());
  if (n < 1 || static_cast<int>(length.size()) != n || static_cast<int>(res.size()) != n) {
    throw DimensionError("lebesgue_node_measure: box description", n, static_cast<long>(length.size()));
  }
  DiscreteMeasure mu;
  mu.n = n;
  std::size_t count = 1;
  double volume = 1;
  std::vector<double> h(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const auto u = static_cast<std::size_t>(a);
    if (res[u] < 1 || !(length[u] > 0)) throw DomainError("lebesgue_node_measure: bad grid");
    count *= static_cast<std::size_t>(res[u]);
    h[u] = length[u] / res[u];
    volume *= h[u];
    mu.spacing = std::max(mu.spacing, h[u]);
  }
  mu.points.resize(count * static_cast<std::size_t>(n));
  mu.weights.assign(count, volume);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < count; ++i) {
    for (int a = 0; a < n; ++a) {
      const auto u = static_cast<std::size_t>(a);
      mu.points[i * static_cast<std::size_t>(n) + u] = origin[u] + idx[u] * h[u];
    }
    for (int a = n - 1; a >= 0; --a) {
      const auto u = static_cast<std::size_t>(a);
      if (++idx[u] < res[u]) break;
      idx[u] = 0;
    }
  }
  mu.dimension_alpha = n;
  mu.level = 0;
  mu.support.kind = SupportDescriptor::Kind::lebesgue;
  mu.support.grid.assign(res.begin(), res.end());
  mu.support.lo.resize(static_cast<std::size_t>(n));
  mu.support.hi.resize(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const auto u = static_cast<std::size_t>(a);
    mu.support.lo[u] = origin[u] - 0.5 * h[u];
    mu.support.hi[u] = origin[u] + length[u] - 0.5 * h[u];
  }
  return mu;
}

DiscreteMeasure hyperplane_measure(int n, int axis, double offset, std::span<const double> lo,
                                   std::span<const double> hi, int res) {
  check_box(lo, hi, n);
  if (axis < 0 || axis >= n) throw DomainError("hyperplane_measure: axis out of range");
  if (n == 1) return point_mass(std::vector<double>{offset});
  if (res < 1) throw DomainError("hyperplane_measure: resolution must be >= 1");
  DiscreteMeasure mu;
  mu.n = n;
  std::size_t count = 1;
  double volume = 1;
  for (int a = 0; a < n; ++a) {
    if (a == axis) continue;
    const auto u = static_cast<std::size_t>(a);
    count *= static_cast<std::size_t>(res);
    volume *= (hi[u] - lo[u]) / res;
    mu.spacing = std::max(mu.spacing, (hi[u] - lo[u]) / res);
  }
  mu.points.resize(count * static_cast<std::size_t>(n));
  mu.weights.assign(count, volume);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < count; ++i) {
    for (int a = 0; a < n; ++a) {
      const auto u = static_cast<std::size_t>(a);
      mu.points[i * static_cast<std::size_t>(n) + u] =
          a == axis ? offset : lo[u] + (idx[u] + 0.5) * (hi[u] - lo[u]) / res;
    }
    for (int a = n - 1; a >= 0; --a) {
      if (a == axis) continue;
      const auto u = static_cast<std::size_t>(a);
      if (++idx[u] < res) break;
      idx[u] = 0;
    }
  }
  mu.dimension_alpha = n - 1;
  mu.support.kind = SupportDescriptor::Kind::hyperplane;
  mu.support.lo.assign(lo.begin(), lo.end());
  mu.support.hi.assign(hi.begin(), hi.end());
  mu.support.lo[static_cast<std::size_t>(axis)] = std::min(mu.support.lo[static_cast<std::size_t>(axis)], offset);
  mu.support.hi[static_cast<std::size_t>(axis)] = std::max(mu.support.hi[static_cast<std::size_t>(axis)], offset);
  mu.support.normal.assign(static_cast<std::size_t>(n), 0.0);
  mu.support.normal[static_cast<std::size_t>(axis)] = 1.0;
  mu.support.offset = offset;
  return mu;
}

DiscreteMeasure point_mass(std::span<const double> x, double mass) {
  if (!(mass > 0)) throw DomainError("point_mass: mass must be positive");
  DiscreteMeasure mu;
  mu.n = static_cast<int>(x.size());
  if (mu.n < 1) throw DomainError("point_mass: empty point");
  mu.points.assign(x.begin(), x.end());
  mu.weights = {mass};
  mu.dimension_alpha = 0;
  mu.support.kind = SupportDescriptor::Kind::point;
  mu.support.lo.assign(x.begin(), x.end());
  mu.support.hi.assign(x.begin(), x.end());
  return mu;
}

namespace {

std::vector<double> unit(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  if (!(s > 0)) throw DomainError("cone: axis must be nonzero");
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= s;
  return out;
}

}  // namespace

DiscreteMeasure map_into_cone(const DiscreteMeasure& mu, const Cone& cone, double* dropped_mass) {
  const int n = mu.n;
  if (static_cast<int>(cone.apex.size()) != n || static_cast<int>(cone.axis.size()) != n) {
    throw DimensionError("map_into_cone: cone dimension", n, static_cast<long>(cone.axis.size()));
  }
  if (!(cone.half_angle > 0 && cone.half_angle < std::numbers::pi / 2)) {
    throw DomainError("map_into_cone: half-angle must lie in (0, pi/2)");
  }
  const std::vector<double> e = unit(cone.axis);
  const double squeeze = 2 * cone.half_angle / std::numbers::pi;
  DiscreteMeasure out;
  out.n = n;
  out.level = mu.level;
  out.dimension_alpha = mu.dimension_alpha;
  out.spacing = mu.spacing;
  double kept = 0, total = 0;
  std::vector<double> y(static_cast<std::size_t>(n)), perp(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto x = mu.point(i);
    total += mu.weights[i];
    double t = 0, rr = 0;
    for (int a = 0; a < n; ++a) {
      const auto u = static_cast<std::size_t>(a);
      y[u] = x[u] - cone.apex[u];
      t += y[u] * e[u];
      rr += y[u] * y[u];
    }
    if (std::abs(t) < 1e-9) continue;
    const double rho = std::sqrt(rr);
    double pn = 0;
    for (int a = 0; a < n; ++a) {
      const auto u = static_cast<std::size_t>(a);
      perp[u] = y[u] - t * e[u];
      pn += perp[u] * perp[u];
    }
    pn = std::sqrt(pn);
    const double sign = t > 0 ? 1.0 : -1.0;
    // polar angle from sign * e, in [0, pi/2)
    const double phi = std::atan2(pn, std::abs(t));
    const double phi2 = phi * squeeze;
    for (int a = 0; a < n; ++a) {
      const auto u = static_cast<std::size_t>(a);
      const double dir_perp = pn > 0 ? perp[u] / pn : 0.0;
      out.points.push_back(cone.apex[u] + rho * (sign * std::cos(phi2) * e[u] + std::sin(phi2) * dir_perp));
    }
    out.weights.push_back(mu.weights[i]);
    kept += mu.weights[i];
  }
  if (out.weights.empty()) throw DomainError("map_into_cone: every atom lies on the hyperplane through the apex");
  const double scale = total / kept;
  for (double& w : out.weights) w *= scale;
  if (dropped_mass) *dropped_mass = (total - kept) / total;
  out.support.kind = SupportDescriptor::Kind::cone;
  out.support.apex = cone.apex;
  out.support.axis = e;
  out.support.half_angle = cone.half_angle;
  return out;
}

DiscreteMeasure build_cone_cantor(double alpha, int n, int level, const Cone& cone, double box_side) {
  if (!(box_side > 0)) throw DomainError("build_cone_cantor: box side must be positive");
  std::vector<double> lo(static_cast<std::size_t>(n), 0.0), hi(static_cast<std::size_t>(n), box_side);
  DiscreteMeasure src = build_cantor_product(alpha, n, level, lo, hi);
  if (static_cast<int>(cone.axis.size()) != n || static_cast<int>(cone.apex.size()) != n) {
    throw DimensionError("build_cone_cantor: cone dimension", n, static_cast<long>(cone.axis.size()));
  }
  // Householder reflection taking the box diagonal to the cone axis.
  const std::vector<double> e = unit(cone.axis);
  std::vector<double> v(static_cast<std::size_t>(n));
  double vv = 0;
  for (int a = 0; a < n; ++a) {
    v[static_cast<std::size_t>(a)] = 1.0 / std::sqrt(static_cast<double>(n)) - e[static_cast<std::size_t>(a)];
    vv += v[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(a)];
  }
  for (std::size_t i = 0; i < src.size(); ++i) {
    double* x = src.points.data() + i * static_cast<std::size_t>(n);
    if (vv > 1e-24) {
      double d = 0;
      for (int a = 0; a < n; ++a) d += v[static_cast<std::size_t>(a)] * x[a];
      for (int a = 0; a < n; ++a) x[a] -= 2 * d / vv * v[static_cast<std::size_t>(a)];
    }
    for (int a = 0; a < n; ++a) x[a] += cone.apex[static_cast<std::size_t>(a)];
  }
  DiscreteMeasure out = map_into_cone(src, cone);
  out.dimension_alpha = alpha;
  return out;
}

BallCounter::BallCounter(const DiscreteMeasure& mu, double cell) : mu_(&mu), n_(mu.n) {
  const std::size_t count = mu.size();
  lo_.assign(static_cast<std::size_t>(n_), std::numeric_limits<double>::infinity());
  std::vector<double> hi(static_cast<std::size_t>(n_), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < count; ++i) {
    auto x = mu.point(i);
    for (int a = 0; a < n_; ++a) {
      lo_[static_cast<std::size_t>(a)] = std::min(lo_[static_cast<std::size_t>(a)], x[static_cast<std::size_t>(a)]);
      hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)], x[static_cast<std::size_t>(a)]);
    }
  }
  double extent = 0;
  for (int a = 0; a < n_; ++a) extent = std::max(extent, hi[static_cast<std::size_t>(a)] - lo_[static_cast<std::size_t>(a)]);
  if (cell <= 0) {
    // about 4 atoms per bucket on average, at most 2^20 buckets
    const double target = std::clamp(static_cast<double>(count) / 4.0, 1.0, 1048576.0);
    cell = extent > 0 ? extent / std::max(1.0, std::floor(std::pow(target, 1.0 / n_))) : 1.0;
  }
  cell_ = cell > 0 ? cell : 1.0;
  std::size_t buckets = 1;
  dims_.resize(static_cast<std::size_t>(n_));
  for (int a = 0; a < n_; ++a) {
    const int d = std::max(1, static_cast<int>(std::floor((hi[static_cast<std::size_t>(a)] - lo_[static_cast<std::size_t>(a)]) / cell_)) + 1);
    dims_[static_cast<std::size_t>(a)] = d;
    buckets *= static_cast<std::size_t>(d);
  }
  auto bucket_of = [&](std::span<const double> x) {
    std::size_t b = 0;
    for (int a = 0; a < n_; ++a) {
      int c = static_cast<int>(std::floor((x[static_cast<std::size_t>(a)] - lo_[static_cast<std::size_t>(a)]) / cell_));
      c = std::clamp(c, 0, dims_[static_cast<std::size_t>(a)] - 1);
      b = b * static_cast<std::size_t>(dims_[static_cast<std::size_t>(a)]) + static_cast<std::size_t>(c);
    }
    return b;
  };
  std::vector<std::size_t> which(count);
  start_.assign(buckets + 1, 0);
  bucket_mass_.assign(buckets, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    which[i] = bucket_of(mu.point(i));
    ++start_[which[i] + 1];
    bucket_mass_[which[i]] += mu.weights[i];
  }
  for (std::size_t b = 0; b < buckets; ++b) start_[b + 1] += start_[b];
  order_.resize(count);
  std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t i = 0; i < count; ++i) order_[fill[which[i]]++] = i;
}

double BallCounter::mass(std::span<const double> center, double r) const {
  if (static_cast<int>(center.size()) != n_) throw DimensionError("ball query: center length", n_, static_cast<long>(center.size()));
  const double r2 = r * r;
  std::vector<int> lo(static_cast<std::size_t>(n_)), hi(static_cast<std::size_t>(n_));
  for (int a = 0; a < n_; ++a) {
    const auto u = static_cast<std::size_t>(a);
    lo[u] = std::max(0, static_cast<int>(std::floor((center[u] - r - lo_[u]) / cell_)));
    hi[u] = std::min(dims_[u] - 1, static_cast<int>(std::floor((center[u] + r - lo_[u]) / cell_)));
    if (lo[u] > hi[u]) return 0.0;
  }
  double total = 0;
  std::vector<int> idx = lo;
  for (;;) {
    std::size_t b = 0;
    double near = 0, far = 0;
    for (int a = 0; a < n_; ++a) {
      const auto u = static_cast<std::size_t>(a);
      b = b * static_cast<std::size_t>(dims_[u]) + static_cast<std::size_t>(idx[u]);
      const double b0 = lo_[u] + idx[u] * cell_ - center[u];
      const double b1 = b0 + cell_;
      const double dn = b0 > 0 ? b0 : (b1 < 0 ? -b1 : 0.0);
      const double df = std::max(std::abs(b0), std::abs(b1));
      near += dn * dn;
      far += df * df;
    }
    if (bucket_mass_[b] > 0 && near <= r2) {
      // Buckets hanging past the last bucket edge are clamped, so the fast
      // path is only taken for interior buckets.
      bool interior = true;
      for (int a = 0; a < n_; ++a) interior = interior && idx[static_cast<std::size_t>(a)] < dims_[static_cast<std::size_t>(a)] - 1;
      if (far <= r2 * (1 - 1e-12) && interior) {
        total += bucket_mass_[b];
      } else {
        for (std::size_t k = start_[b]; k < start_[b + 1]; ++k) {
          const std::size_t i = order_[k];
          auto x = mu_->point(i);
          double d2 = 0;
          for (int a = 0; a < n_; ++a) {
            const double d = x[static_cast<std::size_t>(a)] - center[static_cast<std::size_t>(a)];
            d2 += d * d;
          }
          if (d2 <= r2) total += mu_->weights[i];
        }
      }
    }
    int a = n_ - 1;
    for (; a >= 0; --a) {
      const auto u = static_cast<std::size_t>(a);
      if (++idx[u] <= hi[u]) break;
      idx[u] = lo[u];
    }
    if (a < 0) break;
  }
  return total;
}

double ball_mass(const DiscreteMeasure& mu, std::span<const double> center, double r) {
  if (static_cast<int>(center.size()) != mu.n) throw DimensionError("ball_mass: center length", mu.n, static_cast<long>(center.size()));
  const double r2 = r * r;
  double total = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto x = mu.point(i);
    double d2 = 0;
    for (int a = 0; a < mu.n; ++a) {
      const double d = x[static_cast<std::size_t>(a)] - center[static_cast<std::size_t>(a)];
      d2 += d * d;
    }
    if (d2 <= r2) total += mu.weights[i];
  }
  return total;
}

namespace {

double support_diameter(const DiscreteMeasure& mu) {
  std::vector<double> lo(static_cast<std::size_t>(mu.n), std::numeric_limits<double>::infinity());
  std::vector<double> hi(static_cast<std::size_t>(mu.n), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto x = mu.point(i);
    for (int a = 0; a < mu.n; ++a) {
      lo[static_cast<std::size_t>(a)] = std::min(lo[static_cast<std::size_t>(a)], x[static_cast<std::size_t>(a)]);
      hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)], x[static_cast<std::size_t>(a)]);
    }
  }
  double d2 = 0;
  for (int a = 0; a < mu.n; ++a) {
    const double d = hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)] + mu.spacing;
    d2 += d * d;
  }
  return std::sqrt(d2);
}

bool lattice_like(const DiscreteMeasure& mu) {
  if (mu.support.kind == SupportDescriptor::Kind::lebesgue || mu.support.kind == SupportDescriptor::Kind::hyperplane) return true;
  if (mu.generator) {
    for (const auto& ax : mu.generator->axes) {
      if (ax.kind == AxisSpec::Kind::full) return true;
    }
  }
  return false;
}

}  // namespace

AhlforsProfile ahlfors_profile(const DiscreteMeasure& mu, double alpha, std::span<const double> center,
                               std::span<const double> radii) {
  if (static_cast<int>(center.size()) != mu.n) throw DimensionError("ahlfors_profile: center length", mu.n, static_cast<long>(center.size()));
  std::vector<double> rs(radii.begin(), radii.end());
  if (rs.empty()) {
    const double diam = support_diameter(mu);
    const double rmin = 4 * mu.spacing;
    for (int j = -8; j < 64; ++j) {
      const double r = std::ldexp(1.0, -j);
      if (r <= diam && r >= rmin) rs.push_back(r);
    }
    if (rs.empty()) {
      int need = mu.level;
      if (mu.spacing > 0 && diam > 0) need += static_cast<int>(std::ceil(std::log2(4 * mu.spacing / diam))) + 1;
      throw DomainError("ahlfors_profile: no dyadic radius is resolvable (4 * spacing > diameter); raise the level to at least " +
                        std::to_string(std::max(need, mu.level + 1)));
    }
  }
  BallCounter counter(mu);
  AhlforsProfile p;
  p.rows.resize(rs.size());
  parallel_for(rs.size(), [&](std::size_t i) {
    const double m = counter.mass(center, rs[i]);
    p.rows[i] = {rs[i], m, m / std::pow(rs[i], alpha)};
  });
  p.m_hat = std::numeric_limits<double>::infinity();
  p.M_hat = 0;
  for (const auto& row : p.rows) {
    p.m_hat = std::min(p.m_hat, row.ratio);
    p.M_hat = std::max(p.M_hat, row.ratio);
  }
  return p;
}

MorreyEstimate estimate_morrey_norm(const DiscreteMeasure& mu, double lambda, int num_random_balls,
                                    std::uint64_t seed, double min_radius) {
  if (lambda < 0 || lambda > mu.n) throw DomainError("estimate_morrey_norm: lambda must lie in [0, n]");
  MorreyEstimate est;
  const double diam = std::max(support_diameter(mu), 1e-300);
  if (min_radius <= 0) min_radius = (lattice_like(mu) ? 32.0 : 4.0) * mu.spacing;
  if (mu.size() == 1) min_radius = 0;
  est.min_radius = min_radius;
  const int n = mu.n;

  // Radii: dyadic plus the powers of the generator's contraction ratios.
  std::vector<double> radii;
  for (int j = -4; j < 64; ++j) {
    const double r = std::ldexp(1.0, -j);
    if (r <= 2 * diam && r >= min_radius) radii.push_back(r);
  }
  if (mu.generator) {
    for (const auto& ax : mu.generator->axes) {
      if (ax.kind != AxisSpec::Kind::cantor) continue;
      double side = 0;
      for (int a = 0; a < n; ++a) side = std::max(side, mu.generator->hi[static_cast<std::size_t>(a)] - mu.generator->lo[static_cast<std::size_t>(a)]);
      for (double r = side * ax.ratio(); r >= min_radius && r > 0; r *= ax.ratio()) radii.push_back(r);
    }
  }
  if (radii.empty()) radii.push_back(std::max(min_radius, diam));
  std::sort(radii.begin(), radii.end());

  // Centers: up to 512 atoms (evenly strided) and the dyadic grid points of
  // the bounding box down to 8 cells per axis.
  std::vector<std::vector<double>> centers;
  const std::size_t stride = std::max<std::size_t>(1, mu.size() / 512);
  for (std::size_t i = 0; i < mu.size(); i += stride) {
    auto x = mu.point(i);
    centers.emplace_back(x.begin(), x.end());
  }
  {
    std::vector<double> lo(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    std::vector<double> hi(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < mu.size(); ++i) {
      auto x = mu.point(i);
      for (int a = 0; a < n; ++a) {
        lo[static_cast<std::size_t>(a)] = std::min(lo[static_cast<std::size_t>(a)], x[static_cast<std::size_t>(a)] - 0.5 * mu.spacing);
        hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)], x[static_cast<std::size_t>(a)] + 0.5 * mu.spacing);
      }
    }
    const int per_axis = n <= 2 ? 8 : 4;
    std::size_t total = 1;
    for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(per_axis + 1);
    for (std::size_t t = 0; t < total; ++t) {
      std::vector<double> c(static_cast<std::size_t>(n));
      std::size_t rem = t;
      for (int a = 0; a < n; ++a) {
        const auto u = static_cast<std::size_t>(a);
        const std::size_t k = rem % static_cast<std::size_t>(per_axis + 1);
        rem /= static_cast<std::size_t>(per_axis + 1);
        c[u] = lo[u] + (hi[u] - lo[u]) * static_cast<double>(k) / per_axis;
      }
      centers.push_back(std::move(c));
    }
  }

  BallCounter counter(mu);
  struct Best {
    double value = -1;
    std::size_t center = 0;
    double r = 0;
  };
  std::vector<Best> best(centers.size());
  parallel_for(centers.size(), [&](std::size_t c) {
    for (double r : radii) {
      const double v = r > 0 ? counter.mass(centers[c], r) / std::pow(r, lambda) : counter.mass(centers[c], r);
      if (v > best[c].value) best[c] = {v, c, r};
    }
  });
  Best overall;
  for (const auto& b : best) {
    if (b.value > overall.value) overall = b;
  }
  est.value = overall.value;
  est.center = centers[overall.center];
  est.radius = overall.r;
  est.balls = static_cast<int>(centers.size() * radii.size());

  // Random balls: an atom-anchored center jittered by up to one radius, radius
  // log-uniform in [min_radius, diam]. Sequential so the estimate is
  // nondecreasing in num_random_balls.
  Rng rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double rlo = std::max(min_radius, 1e-300);
  for (int b = 0; b < num_random_balls; ++b) {
    const std::size_t i = static_cast<std::size_t>(u01(rng) * static_cast<double>(mu.size())) % mu.size();
    const double r = rlo * std::pow(std::max(diam / rlo, 1.0), u01(rng));
    auto x = mu.point(i);
    std::vector<double> c(x.begin(), x.end());
    for (double& v : c) v += r * (2 * u01(rng) - 1) / std::sqrt(static_cast<double>(n));
    const double v = counter.mass(c, r) / std::pow(r, lambda);
    ++est.balls;
    if (v > est.value) {
      est.value = v;
      est.center = c;
      est.radius = r;
    }
  }
  est.family = "atom and dyadic-grid centers x dyadic and generator radii >= " + std::to_string(min_radius) + ", plus " +
               std::to_string(num_random_balls) + " random balls (seed " + std::to_string(seed) + ")";
  return est;
}

double ls_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m) throw DomainError("ls_slope: need at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

ShellSums shell_divergence_sums(const DiscreteMeasure& mu, double alpha, std::span<const double> center, int J,
                                int j_min) {
  if (static_cast<int>(center.size()) != mu.n) throw DimensionError("shell_divergence_sums: center length", mu.n, static_cast<long>(center.size()));
  if (J < j_min) throw DomainError("shell_divergence_sums: J must be >= j_min");
  const double inner = std::ldexp(1.0, -J - 1);
  if (inner < 4 * mu.spacing) {
    const int jmax = static_cast<int>(std::floor(-std::log2(4 * mu.spacing))) - 1;
    throw DomainError("shell_divergence_sums: shell 2^-" + std::to_string(J + 1) +
                      " is below 4 atom spacings; use J <= " + std::to_string(jmax) + " or raise the level");
  }
  const int count = J - j_min + 1;
  ShellSums out;
  out.j.resize(static_cast<std::size_t>(count));
  out.shell.assign(static_cast<std::size_t>(count), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto x = mu.point(i);
    double d2 = 0;
    for (int a = 0; a < mu.n; ++a) {
      const double d = x[static_cast<std::size_t>(a)] - center[static_cast<std::size_t>(a)];
      d2 += d * d;
    }
    const double d = std::sqrt(d2);
    if (d <= 0) continue;
    // shell i: 2^{-i-1} < d <= 2^{-i}
    int idx = static_cast<int>(std::ceil(-std::log2(d))) - 1;
    // log2 rounding near exact powers of two
    if (d > std::ldexp(1.0, -idx)) --idx;
    if (d <= std::ldexp(1.0, -idx - 1)) ++idx;
    if (idx < j_min || idx > J) continue;
    out.shell[static_cast<std::size_t>(idx - j_min)] += mu.weights[i] * std::pow(d, -alpha);
  }
  double acc = 0;
  std::vector<double> xs(static_cast<std::size_t>(count));
  out.partial.resize(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const auto u = static_cast<std::size_t>(k);
    out.j[u] = j_min + k;
    acc += out.shell[u];
    out.partial[u] = acc;
    xs[u] = j_min + k;
  }
  out.slope = count >= 2 ? ls_slope(xs, out.partial) : 0.0;
  return out;
}

}  // namespace ltrace
