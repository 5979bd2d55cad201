#include "ltrace/demos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ltrace/errors.hpp"

namespace ltrace {

namespace {

double phi(int j, double t) {
  const double a = std::abs(t);
  if (a < 1) return 1.0;
  if (a <= 1 + 1.0 / j) return -j * a + j + 1;
  return 0.0;
}

/// 8-point Gauss-Legendre on [a, b].
double gauss_legendre(double a, double b, auto&& f) {
  static const double x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
  static const double w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  const double m = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0;
  for (int i = 0; i < 4; ++i) s += w[i] * (f(m - h * x[i]) + f(m + h * x[i]));
  return s * h;
}

}  // namespace

DiscontinuityReport strict_discontinuity_demo(int j_levels) {
  if (j_levels < 3) throw DomainError("strict_discontinuity_demo: j_levels must be >= 3");
  DiscontinuityReport rep;
  const double two_pi = 2 * std::numbers::pi;
  // one-sided limits of 1_B at the circle
  auto indicator = [](double r) { return r < 1 ? 1.0 : 0.0; };
  rep.inner_trace = indicator(1 - 1e-9);
  rep.outer_trace = indicator(1 + 1e-9);
  rep.limit_trace = 0.5 * (rep.inner_trace + rep.outer_trace);
  rep.limit_total_variation = two_pi;
  for (int j = 1; j <= j_levels; ++j) {
    DiscontinuityRow row;
    row.j = j;
    // |phi_j'| = j on [1, 1 + 1/j], zero elsewhere for r >= 0
    row.total_variation = gauss_legendre(1.0, 1.0 + 1.0 / j, [&](double r) { return j * two_pi * r; });
    row.exact = two_pi * (1 + 1.0 / (2 * j));
    row.trace = phi(j, 1.0);
    row.limit_trace = rep.limit_trace;
    rep.rows.push_back(row);
  }
  return rep;
}

StrictReport mollification_strict_check(const HomogeneousSymbol& a, const GridField& u, std::vector<double> eps_levels,
                                        std::optional<double> target, DiffMode mode) {
  if (eps_levels.empty()) throw DomainError("mollification_strict_check: no eps levels");
  std::sort(eps_levels.begin(), eps_levels.end(), std::greater<>());
  StrictReport rep;
  rep.target = target;
  for (double eps : eps_levels) {
    StrictRow row;
    row.eps = eps;
    row.mass = lebesgue_norm(apply_symbol(a, mollify(u, eps), mode), 1);
    if (target) row.rel_error = std::abs(row.mass - *target) / *target;
    rep.rows.push_back(row);
  }
  rep.monotone = true;
  if (target) {
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
      rep.monotone = rep.monotone && rep.rows[i].rel_error <= rep.rows[i - 1].rel_error * (1 + 1e-9) + 1e-12;
    }
  }
  return rep;
}

GridField disk_indicator(const Grid& grid, std::span<const double> center, double radius) {
  if (static_cast<int>(center.size()) != grid.n) throw DimensionError("disk_indicator: center", grid.n, static_cast<long>(center.size()));
  const double h = grid.max_spacing();
  return sample_field(grid, 1, [&](std::span<const double> x, std::span<double> out) {
    double r2 = 0;
    for (int i = 0; i < grid.n; ++i) {
      const double d = x[static_cast<std::size_t>(i)] - center[static_cast<std::size_t>(i)];
      r2 += d * d;
    }
    out[0] = std::clamp(0.5 - (std::sqrt(r2) - radius) / h, 0.0, 1.0);
  });
}

GridField box_indicator(const Grid& grid, std::span<const double> lo, std::span<const double> hi) {
  if (static_cast<int>(lo.size()) != grid.n || static_cast<int>(hi.size()) != grid.n) {
    throw DimensionError("box_indicator: corners", grid.n, static_cast<long>(lo.size()));
  }
  return sample_field(grid, 1, [&](std::span<const double> x, std::span<double> out) {
    double v = 1;
    for (int i = 0; i < grid.n; ++i) {
      const double h = grid.spacing(i);
      const double c = x[static_cast<std::size_t>(i)];
      const double overlap = std::min(c + 0.5 * h, hi[static_cast<std::size_t>(i)]) - std::max(c - 0.5 * h, lo[static_cast<std::size_t>(i)]);
      v *= std::clamp(overlap / h, 0.0, 1.0);
    }
    out[0] = v;
  });
}

}  // namespace ltrace
