#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ltrace/fields.hpp"
#include "ltrace/symbol.hpp"

namespace ltrace {

struct DiscontinuityRow {
  int j = 0;
  double total_variation = 0.0;  ///< |D rho_j|(R^2) by quadrature
  double exact = 0.0;            ///< 2 pi (1 + 1/(2j))
  double trace = 0.0;            ///< rho_j on the unit circle
  double limit_trace = 0.0;      ///< interior trace of the limit indicator
};

struct DiscontinuityReport {
  std::vector<DiscontinuityRow> rows;
  double limit_total_variation = 0.0;  ///< 2 pi
  double inner_trace = 0.0;            ///< one-sided traces of 1_B on the circle
  double outer_trace = 0.0;
  double limit_trace = 0.0;            ///< their average
};

/// rho_j(x) = phi_j(|x|): 1 on B_1, linear down to 0 on 1 <= r <= 1 + 1/j.
/// Rows for j = 1 .. j_levels (j_levels >= 3).
DiscontinuityReport strict_discontinuity_demo(int j_levels);

struct StrictRow {
  double eps = 0.0;
  double mass = 0.0;  ///< ||A[D](rho_eps * u)||_1
  double rel_error = 0.0;
};

struct StrictReport {
  std::vector<StrictRow> rows;
  std::optional<double> target;
  bool monotone = false;  ///< |mass - target| nonincreasing as eps decreases
};

/// eps_levels in any order; rows come out with decreasing eps. Central
/// differences by default: at eps of a few grid spacings the spectral
/// derivative of the mollified edge rings and overshoots the L1 mass.
StrictReport mollification_strict_check(const HomogeneousSymbol& a, const GridField& u, std::vector<double> eps_levels,
                                        std::optional<double> target = std::nullopt,
                                        DiffMode mode = DiffMode::finite_difference);

/// Cell-coverage indicator of the ball B(center, radius), antialiased over one
/// grid spacing.
GridField disk_indicator(const Grid& grid, std::span<const double> center, double radius);
/// Exact cell-coverage indicator of an axis-aligned box.
GridField box_indicator(const Grid& grid, std::span<const double> lo, std::span<const double> hi);

}  // namespace ltrace
