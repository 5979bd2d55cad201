#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ltrace/certificate.hpp"
#include "ltrace/symbol.hpp"

namespace ltrace {

enum class Verdict { yes, no, inconclusive };
const char* to_string(Verdict v);

struct ClassifyConfig {
  int grid_density = 10000;       ///< sphere samples for the ellipticity sweep
  int polish_starts = 32;         ///< best samples refined by pattern search
  double ellipticity_tol = 1e-6;  ///< relative to max sigma_max over the sweep
  int stabilization_rounds = 20;
  double cancel_tol = 1e-12;      ///< keep principal directions with cos > 1 - tol
  int witness_samples = 200;
  int num_planes = 12;            ///< random planes on top of the coordinate planes
  std::optional<int> d_max;       ///< default k + 4
  int refute_starts = 48;         ///< random starts on S^{2n-1}, after the structured ones
  double refute_tol = 1e-8;       ///< relative to the symbol scale
  std::uint64_t seed = 20240601;
};

struct EllipticReport {
  Verdict verdict = Verdict::inconclusive;
  double margin = 0.0;            ///< min sigma_min found on the unit sphere
  double scale = 0.0;             ///< max sigma_max found on the unit sphere
  std::vector<double> witness;    ///< xi with sigma_min(A[xi]) < tol/10 when verdict is no
  double witness_sigma = 0.0;
  int samples = 0;
  double tol = 0.0;
};

struct CancellingReport {
  Verdict verdict = Verdict::inconclusive;
  int residual_dim = 0;
  std::vector<double> witness_w;  ///< unit for the W metric, storage coordinates
  double witness_distance = 0.0;  ///< max distance to im A[xi] over fresh samples
  int samples = 0;
  bool non_elliptic_input = false;
  double tol = 0.0;
};

struct StrongCancellingReport {
  Verdict verdict = Verdict::inconclusive;
  std::vector<double> plane_e1, plane_e2;
  std::vector<double> witness_w;
  double witness_distance = 0.0;
  int planes_checked = 0;
  std::string note;
};

struct CEllipticReport {
  Verdict verdict = Verdict::inconclusive;
  std::optional<int> certificate_degree;
  int d_max = 0;
  std::vector<double> eta, nu;
  std::vector<std::complex<double>> kernel;  ///< v with A[eta + i nu] v = 0, unit Euclidean
  double residual = 0.0;                     ///< |A[eta + i nu] v|
  double min_sigma = 0.0;                    ///< smallest sigma_min found by the refutation sweep
  int starts = 0;
  std::string source;                        ///< certificate | refutation | real-witness | first-order-rule
};

EllipticReport check_ellipticity(const HomogeneousSymbol& a, const ClassifyConfig& cfg = {});
CancellingReport check_cancellation(const HomogeneousSymbol& a, const ClassifyConfig& cfg = {});
StrongCancellingReport check_strong_cancellation(const HomogeneousSymbol& a,
                                                 const ClassifyConfig& cfg = {});
/// Certificate search first, then a complex refutation sweep. `cert_out`
/// receives the certificate when one is found.
CEllipticReport check_c_ellipticity(const HomogeneousSymbol& a, const ClassifyConfig& cfg = {},
                                    std::optional<Certificate>* cert_out = nullptr);

/// dim{p in P_j(R^n, V) : A[D] p = 0} for j = 0..m, exact.
std::vector<int> nullspace_dimension(const HomogeneousSymbol& a, int m);

/// Distance from a unit vector w (storage coordinates) to im A[xi] in the W
/// metric.
double distance_to_image(const HomogeneousSymbol& a, std::span<const double> xi,
                         std::span<const double> w);

struct ClassificationReport {
  std::string name;
  int n = 0, k = 0, dim_v = 0, dim_w = 0;
  EllipticReport elliptic;
  CancellingReport cancelling;
  StrongCancellingReport strongly_cancelling;
  CEllipticReport c_elliptic;
  std::optional<Certificate> certificate;
  ClassifyConfig config;
  std::vector<std::string> notes;  ///< closure rules that fired
};

ClassificationReport classify_full(const HomogeneousSymbol& a, const ClassifyConfig& cfg = {});

}  // namespace ltrace
