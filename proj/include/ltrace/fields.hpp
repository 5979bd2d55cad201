#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ltrace/measures.hpp"
#include "ltrace/polynomial.hpp"
#include "ltrace/symbol.hpp"

namespace ltrace {

/// Uniform grid on the box [origin, origin + length) with res[a] nodes per
/// axis at origin + j * h. Row-major node order, last axis fastest.
struct Grid {
  int n = 0;
  std::vector<int> res;
  std::vector<double> length;
  std::vector<double> origin;
  bool periodic = true;

  /// res nodes per axis on [origin, origin + length)^n.
  static Grid cube(int n, int res, double length, double origin = 0.0);
  /// Centered box [-length/2, length/2)^n.
  static Grid centered(int n, int res, double length);

  std::size_t size() const;
  double spacing(int axis) const { return length[static_cast<std::size_t>(axis)] / res[static_cast<std::size_t>(axis)]; }
  double max_spacing() const;
  double cell_volume() const;
  /// Coordinates of node `linear`.
  void node(std::size_t linear, std::span<double> x) const;
  /// Multi-index of node `linear`.
  void unravel(std::size_t linear, std::span<int> idx) const;
  std::size_t ravel(std::span<const int> idx) const;
  /// Angular wavenumber 2 pi m / L of Fourier index j along an axis.
  double wavenumber(int axis, int j) const;
  void validate() const;
  bool operator==(const Grid& o) const {
    return n == o.n && res == o.res && length == o.length && origin == o.origin && periodic == o.periodic;
  }
};

/// V-valued samples on a Grid, component-major. Component weights define the
/// pointwise norm |u| = sqrt(sum_c w_c u_c^2), used for symmetric-tensor
/// codomains stored in a multiplicity basis.
class GridField {
 public:
  GridField() = default;
  GridField(Grid grid, int components, std::vector<double> weights = {});

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }
  std::size_t nodes() const { return grid_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  std::span<double> component(int c);
  std::span<const double> component(int c) const;
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  double& at(int c, std::size_t node) { return values_[static_cast<std::size_t>(c) * nodes() + node]; }
  double at(int c, std::size_t node) const { return values_[static_cast<std::size_t>(c) * nodes() + node]; }

  bool band_limited() const { return band_limited_; }
  void set_band_limited(bool b) { band_limited_ = b; }

  double pointwise_norm(std::size_t node) const;
  double max_abs() const;

  GridField& operator+=(const GridField& o);
  GridField operator+(const GridField& o) const;
  GridField operator-(const GridField& o) const;
  GridField scaled(double s) const;

 private:
  Grid grid_;
  int components_ = 0;
  std::vector<double> weights_;
  std::vector<double> values_;
  bool band_limited_ = false;
};

enum class DiffMode { spectral, finite_difference };

/// Samples f(x, out) at every node.
GridField sample_field(const Grid& grid, int components,
                       const std::function<void(std::span<const double>, std::span<double>)>& f,
                       std::vector<double> weights = {});

/// Sum of seeded Gaussian Fourier modes with |m|_inf <= max_mode, real part
/// taken; zero mean. Flagged band-limited when max_mode < res / 3.
GridField random_band_limited(const Grid& grid, int components, int max_mode, std::uint64_t seed);

/// Zeroes spectral coefficients beyond 2/3 of the Nyquist index.
GridField band_limit(const GridField& u);

/// A[D] u. Spectral mode multiplies the coefficients by A[i kappa];
/// finite-difference mode composes central stencils per multi-index
/// (accuracy 2 or 4), zero extension outside non-periodic boxes.
GridField apply_symbol(const HomogeneousSymbol& a, const GridField& u, DiffMode mode = DiffMode::spectral,
                       int fd_accuracy = 2);

/// P[D] u for a matrix polynomial (rows x u.components()), spectral.
GridField apply_polynomial_matrix(const PolynomialMatrix& p, const GridField& u, std::vector<double> weights = {});

GridField partial_derivative(const GridField& u, const MultiIndex& alpha, DiffMode mode = DiffMode::spectral,
                             int fd_accuracy = 2);

/// D^order u with codomain V (x) Sym^order(R^n), component v * #beta + beta
/// in the descending lexicographic multi-index basis, multiplicity weights.
GridField derivative_tensor(const GridField& u, int order, DiffMode mode = DiffMode::spectral, int fd_accuracy = 2);

/// Fourier multiplier |kappa|^(-alpha) with the zero mode set to 0.
GridField riesz_potential(const GridField& f, double alpha);

/// Convolution with the unit-mass bump c exp(-1/(1 - |x/eps|^2)), sampled on
/// the periodic grid and normalized to discrete mass one.
GridField mollify(const GridField& u, double eps);

/// (sum |u|^p h^n)^(1/p); p = infinity gives the max over nodes.
double lebesgue_norm(const GridField& u, double p);

/// (sum_atoms w |u(x)|^q)^(1/q) with multilinear interpolation (periodic wrap).
double measure_norm(const GridField& u, const DiscreteMeasure& mu, double q);

/// Multilinear interpolation of every component at x.
std::vector<double> interpolate(const GridField& u, std::span<const double> x);

/// Integral of |u| over the grid hyperplane {x_axis = node index} by
/// (n-1)-dimensional midpoint quadrature.
double hyperplane_l1(const GridField& u, int axis, int index);

/// Integral of |u| over {x_axis >= x at node index}, nodes on the plane
/// weighted by 1/2.
double halfspace_l1(const GridField& u, int axis, int index);

/// max |u| over nodes within `margin` (fraction of the box side) of the box
/// boundary, divided by max |u|.
double boundary_leakage(const GridField& u, double margin = 0.05);

/// Per-component spectra (unnormalized forward transform).
std::vector<std::vector<std::complex<double>>> spectra(const GridField& u);
/// Inverse of spectra(): real parts of the normalized backward transform.
GridField from_spectra(const Grid& grid, std::vector<std::vector<std::complex<double>>> hat,
                       std::vector<double> weights = {});

}  // namespace ltrace
