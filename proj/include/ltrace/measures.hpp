#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ltrace {

/// One axis of a product construction.
struct AxisSpec {
  enum class Kind { full, cantor, point };
  Kind kind = Kind::full;
  /// Similarity dimension of a cantor axis, in (0, 1). Two branches, ratio
  /// r = 2^(-1/dim), kept at the two ends of each parent cell.
  double dim = 1.0;
  /// Coordinate of a point axis, as a fraction of the box side.
  double at = 0.0;

  double ratio() const;
};

/// Generator of a product measure on the box [lo, hi]. Atoms are the centers
/// of the generation-`level` cells.
struct ProductSpec {
  std::vector<AxisSpec> axes;
  std::vector<double> lo, hi;
  int level = 1;
  /// Equal atom weights summing to one when false; cell volumes (Lebesgue)
  /// when true.
  bool volume_weights = false;

  int n() const { return static_cast<int>(axes.size()); }
  double dimension() const;
};

struct SupportDescriptor {
  enum class Kind { cube, cone, hyperplane, lebesgue, point };
  Kind kind = Kind::cube;
  std::vector<double> lo, hi;      ///< cube, lebesgue, hyperplane patch
  std::vector<int> grid;           ///< lebesgue: cells per axis
  std::vector<double> apex, axis;  ///< cone: unit axis
  double half_angle = 0.0;         ///< cone
  std::vector<double> normal;      ///< hyperplane: unit normal
  double offset = 0.0;             ///< hyperplane: {x : normal . x = offset}
};

const char* to_string(SupportDescriptor::Kind k);

/// Finite atomic measure with metadata.
struct DiscreteMeasure {
  int n = 0;
  std::vector<double> points;  ///< atom coordinates, atom-major (size = atoms * n)
  std::vector<double> weights;
  double dimension_alpha = 0.0;
  int level = 0;
  /// Atom spacing at this level; balls smaller than a few spacings are not
  /// resolved.
  double spacing = 0.0;
  SupportDescriptor support;
  /// Product generator, present when the atoms are exactly the cell centers of
  /// `generator` (required by the binary cell-index format).
  std::optional<ProductSpec> generator;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
  }
  double total_mass() const;
  /// Throws DomainError when an atom lies outside the support descriptor by
  /// more than 1e-12 or a weight is not positive and finite.
  void validate() const;
};

DiscreteMeasure build_product(const ProductSpec& spec);

/// Product of full intervals and one two-branch cantor axis whose dimensions
/// sum to alpha: floor(alpha) full axes, then a cantor axis for the
/// fractional part, then point axes at the lower box face. alpha = n gives
/// the Lebesgue grid measure (cell-volume weights) on the box.
DiscreteMeasure build_cantor_product(double alpha, int n, int level, std::span<const double> lo,
                                     std::span<const double> hi);
DiscreteMeasure build_cantor_product(double alpha, int n, int level);  // unit box [0,1]^n

/// Lebesgue measure on the box: atoms at the centers of a res^n grid with
/// cell-volume weights.
DiscreteMeasure lebesgue_measure(std::span<const double> lo, std::span<const double> hi, int res);

/// Lebesgue measure sampled at the nodes of a periodic grid (node weights =
/// cell volume), so measure_norm reproduces midpoint quadrature exactly.
DiscreteMeasure lebesgue_node_measure(std::span<const double> origin, std::span<const double> length,
                                      std::span<const int> res);

/// (n-1)-dimensional measure on {x_axis = offset} over the box patch.
DiscreteMeasure hyperplane_measure(int n, int axis, double offset, std::span<const double> lo,
                                   std::span<const double> hi, int res);

DiscreteMeasure point_mass(std::span<const double> x, double mass = 1.0);

struct Cone {
  std::vector<double> apex;
  std::vector<double> axis;  ///< normalized on use
  double half_angle = 0.0;   ///< in (0, pi/2)
};

/// Compresses polar angles measured from e (H+) or -e (H-) by 2 theta / pi,
/// keeping |x - apex|. Atoms within 1e-9 of the hyperplane e-perp through the
/// apex are dropped and the rest rescaled to the original total mass.
/// `dropped_mass` receives the removed fraction.
DiscreteMeasure map_into_cone(const DiscreteMeasure& mu, const Cone& cone, double* dropped_mass = nullptr);

/// A product measure of dimension alpha placed with its lower corner at the
/// apex and its box diagonal along the axis, then mapped into the cone.
DiscreteMeasure build_cone_cantor(double alpha, int n, int level, const Cone& cone, double box_side);

struct AhlforsRow {
  double r = 0.0;
  double mass = 0.0;
  double ratio = 0.0;
};

struct AhlforsProfile {
  std::vector<AhlforsRow> rows;
  double m_hat = 0.0;
  double M_hat = 0.0;
};

/// mu(B(center, r)) / r^alpha over dyadic radii 2^-j with 4 * spacing <= r <=
/// diameter of the support, or over `radii` when given. Throws DomainError
/// when no radius is resolvable.
AhlforsProfile ahlfors_profile(const DiscreteMeasure& mu, double alpha, std::span<const double> center,
                               std::span<const double> radii = {});

/// mu of the closed ball, by exact atom counting.
double ball_mass(const DiscreteMeasure& mu, std::span<const double> center, double r);

struct MorreyEstimate {
  double value = 0.0;  ///< lower bound for sup_B mu(B) / r(B)^lambda
  std::vector<double> center;
  double radius = 0.0;
  int balls = 0;
  double min_radius = 0.0;
  std::string family;  ///< description of the ball family used
};

/// Lower bound for the Morrey norm: balls centered at (a subsample of) atoms
/// and at dyadic grid points over dyadic radii and the generator's natural
/// radii, plus `num_random_balls` seeded random balls. Radii below
/// `min_radius` (default 4 spacings, 32 for lattice-like measures) are skipped.
MorreyEstimate estimate_morrey_norm(const DiscreteMeasure& mu, double lambda, int num_random_balls = 256,
                                    std::uint64_t seed = 11, double min_radius = 0.0);

struct ShellSums {
  std::vector<int> j;
  std::vector<double> shell;    ///< integral over 2^{-i-1} < |x - c| <= 2^{-i}
  std::vector<double> partial;  ///< S_j
  double slope = 0.0;           ///< least-squares slope of S_j against j
};

/// Shell sums for i = j_min .. J; the shells must stay above 4 spacings.
ShellSums shell_divergence_sums(const DiscreteMeasure& mu, double alpha, std::span<const double> center,
                                int J, int j_min = 0);

/// Least-squares slope of y against x.
double ls_slope(std::span<const double> x, std::span<const double> y);

/// Bucketed index for repeated ball queries.
class BallCounter {
 public:
  explicit BallCounter(const DiscreteMeasure& mu, double cell = 0.0);
  double mass(std::span<const double> center, double r) const;

 private:
  const DiscreteMeasure* mu_;
  int n_;
  std::vector<double> lo_;
  double cell_;
  std::vector<int> dims_;
  std::vector<std::size_t> start_;  ///< CSR offsets into order_
  std::vector<std::size_t> order_;
  std::vector<double> bucket_mass_;
};

}  // namespace ltrace
