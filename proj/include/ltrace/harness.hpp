#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ltrace/fields.hpp"
#include "ltrace/measures.hpp"
#include "ltrace/rational.hpp"
#include "ltrace/symbol.hpp"

namespace ltrace {

enum class Boundedness { bounded, diverging, inconclusive };
const char* to_string(Boundedness b);

struct GrowthRow {
  double parameter = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct InequalityReport {
  std::string test_id;
  std::string operator_name;
  int n = 0;
  int k = 0;
  double s = 0.0;
  std::string q_exact;     ///< (n - s) / (n - 1) or (n - s) / (n - alpha), as p/q
  std::string beta_exact;  ///< (1 - s)(n - 1) / (n - s), blow-up tests only
  std::optional<double> theta;
  std::optional<double> alpha;
  double morrey = 0.0;  ///< lower-bound estimate used as normalizer
  std::string morrey_family;
  std::vector<double> ratios;
  double sup_ratio = 0.0;
  double spread = 0.0;  ///< max / min
  std::vector<GrowthRow> growth;
  Boundedness verdict = Boundedness::inconclusive;
  std::vector<int> resolutions;
  std::vector<double> box_sizes;
  std::vector<std::uint64_t> seeds;
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;
  bool exploratory = false;
};

/// Exact exponents from rational s (doubles are converted exactly).
Rational exponent_q(int n, const Rational& s);
Rational exponent_beta(int n, const Rational& s);
Rational exponent_adams_q(int n, const Rational& s, const Rational& alpha);
/// Open lower end and upper end of the admissible theta interval.
std::pair<double, double> theta_range(int n, double s);

struct RatioTerms {
  double lhs = 0.0;     ///< numerator
  double morrey = 0.0;  ///< ||mu||_{L^{1,n-s}} estimate
  double rhs = 0.0;     ///< ||A[D]u||_{L^1}
  double middle = 0.0;  ///< ||D^{k-1}u||_{L^{n/(n-1)}}, multiplicative only
  double ratio = 0.0;
};

/// ||D^{k-1}u||_{L^q(mu)} / (||mu||^{1/q} ||A[D]u||_{L^1}), q = (n - s)/(n - 1).
/// The Morrey normalizer is estimated when not supplied.
RatioTerms trace_ratio(const HomogeneousSymbol& a, const GridField& u, const DiscreteMeasure& mu, double s,
                       std::optional<double> morrey = std::nullopt);
/// Interpolated denominator ||mu||^{1/q} ||D^{k-1}u||_{n/(n-1)}^{1-theta} ||A[D]u||_1^theta.
/// theta = 1 gives trace_ratio bitwise.
RatioTerms multiplicative_ratio(const HomogeneousSymbol& a, const GridField& u, const DiscreteMeasure& mu, double s,
                                double theta, std::optional<double> morrey = std::nullopt);
/// ||I_alpha A[D]u||_{L^q(mu)} / (||mu||^{1/q} ||A[D]u||_1), q = (n - s)/(n - alpha).
RatioTerms adams_ratio(const HomogeneousSymbol& a, const GridField& u, const DiscreteMeasure& mu, double s,
                       double alpha, std::optional<double> morrey = std::nullopt);

/// Seeded band-limited bumps: Gaussian coefficients on the modes
/// |m|_inf <= max_mode of period 2 radius, times exp(1 - 1/(1 - |x-c|^2/R^2)).
struct BumpFamily {
  int count = 16;
  int max_mode = 1;
  double radius = 1.0;
  std::vector<double> center;  ///< origin when empty
  std::uint64_t seed = 1;
};

GridField bump_member(const Grid& grid, int components, const BumpFamily& family, int index,
                      std::vector<double> weights = {});

struct SweepConfig {
  BumpFamily family;
  std::vector<int> resolutions{256, 512};
  double length = 4.0;           ///< centered periodic box side
  std::optional<double> theta;   ///< multiplicative ratio when set
  std::optional<double> alpha;   ///< Adams ratio when set
  int morrey_balls = 256;
  double max_spread = 2.0;
};

/// Ratios over the family at every resolution. Bounded when the spread within
/// each resolution and the sup ratio across resolutions stay within
/// max_spread; otherwise inconclusive.
InequalityReport sweep_sobolev(const HomogeneousSymbol& a, double s, const DiscreteMeasure& mu,
                               const SweepConfig& cfg = {});

enum class HalfspaceSide { both, positive };

/// ||D^{k-1}u||_{L^1(Sigma)} / ||A[D]u||_{L^1} over R^n or {x_axis > plane}.
/// Sigma = {x_axis = offset} must be a grid hyperplane.
RatioTerms halfspace_trace_ratio(const HomogeneousSymbol& a, const GridField& u, int axis, double offset,
                                 HalfspaceSide side);

struct HalfspaceConfig {
  BumpFamily family;
  std::vector<int> resolutions{256, 512};
  double length = 4.0;
  int axis = -1;  ///< last axis by default
  double offset = 0.0;
  HalfspaceSide side = HalfspaceSide::positive;
  double max_spread = 2.0;
  /// Label the output as exploratory evidence; the verdict stays inconclusive.
  bool exploratory = false;
};

InequalityReport halfspace_sweep(const HomogeneousSymbol& a, const HalfspaceConfig& cfg = {});

/// Growth-table verdicts.
/// diverging: lhs grows by >= min_growth per row over the last `window` rows
///            and rhs stays within max_rhs_spread of its median;
/// bounded:   lhs spread <= max_spread and the same rhs condition.
Boundedness growth_verdict(const std::vector<GrowthRow>& rows, int window = 4, double min_growth = 1.10,
                           double max_rhs_spread = 2.0, double max_spread = 2.0);

struct NonEllipticConfig {
  int levels = 5;
  double eps0 = 0.125;         ///< first mollification scale
  double eps_step = 16.0;      ///< eps_j = eps0 / eps_step^j
  double cantor_extent = 0.25; ///< the fractal factor lives on t in [0, extent]
  double perp_half_width = 0.5;
  double cutoff_singular = 0.5;  ///< chi_t vanishes for |t| >= this, equals 1 below 0.6 of it
  double cutoff_other = 1.0;
  int perp_res = 128;          ///< midpoint nodes per perpendicular axis across the cutoff support
  int t_panels = 64;           ///< uniform quadrature panels on [-4 eps, 4 eps]
  double grading = 1.25;       ///< panel growth ratio away from the singular plane
  double domain_scale = 1.0;   ///< integration domain relative to the cutoff support
  int perp_level = 7;          ///< level of the full axes of mu
  int max_cantor_level = 16;
  bool control = false;        ///< Lebesgue measure on t in [0.6, 1] * extent instead
};

/// u = g_eps(x . xi0) X(x_perp) v where g_eps is |t|^{k-1-beta} chi_t mollified
/// along xi0 (a 1-D bump at scale eps) and X a product cutoff. u is separable,
/// so every norm is a 1-D graded quadrature in t times a perpendicular grid;
/// no periodic box is involved. mu = box in xi0-perp times a cantor set of
/// dimension 1 - s along xi0, deep enough that its cells resolve eps / 4.
/// xi0 must be a coordinate axis. Throws DomainError when |A[xi0] v| fails
/// re-verification.
InequalityReport blowup_nonelliptic(const HomogeneousSymbol& a, std::span<const double> xi0, std::span<const double> v,
                                    double s, const NonEllipticConfig& cfg = {});

struct NonCancellingConfig {
  int levels = 5;
  double eps_step = 2.0;
  double measure_radius = 0.5;  ///< extent of the cone measure from the apex
  int resolution = 1024;
  double length = 4.0;
  double cutoff_radius = 1.0;  ///< chi = 1 up to 1.1 measure_radius, 0 beyond this
  int min_level = 4;
  /// Cone half-angle cap; the cone is where |D^{k-1}u| exceeds half its max.
  double max_half_angle = 0.7853981633974483;
};

/// u_eps = chi * (rho_eps * Phi w) with A[D] Phi = delta_0 w computed
/// spectrally from A^dagger[xi] w; mu = cone-cantor of dimension n - s.
/// Throws DomainError when w is not in every image A[xi].
InequalityReport blowup_noncancelling(const HomogeneousSymbol& a, std::span<const double> w, double s,
                                      const NonCancellingConfig& cfg = {});

struct ComplexWitnessConfig {
  int levels = 7;
  double eps0 = 0.25;  ///< eps_j = eps0 / 2^j
  int res_tangent = 8192;
  int res_normal = 512;
  double length = 4.0;
  double max_increment_drift = 0.30;
};

/// u_eps(x) = F_eps(x.eta + i x.nu) v with F_eps^{(k-1)}(z) = (z + i eps)^{-1},
/// cut off by rho in C_c(B_1). LHS = ||D^{k-1}(rho u)||_{L^1(Sigma)}, RHS =
/// ||A[D](rho u)||_{L^1(Sigma+)}, Sigma = {x . nu = 0}; derivatives of u are
/// evaluated analytically, those of rho spectrally. nu must be a coordinate
/// axis. Metrics include the oracle 2 asinh(1/eps) increments.
InequalityReport wirtinger_blowup(const HomogeneousSymbol& a, std::span<const double> eta,
                                  std::span<const double> nu, std::span<const std::complex<double>> v,
                                  const ComplexWitnessConfig& cfg = {});

/// Runs `run` at (N, L), (2N, L), (2N, 2L); verdict is diverging only when all
/// three are. `run(resolution_factor, length_factor)` returns one report.
InequalityReport robust_blowup(const std::function<InequalityReport(int, double)>& run);

}  // namespace ltrace
