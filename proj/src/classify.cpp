#include "ltrace/classify.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ltrace/errors.hpp"
#include "ltrace/linalg.hpp"
#include "ltrace/parallel.hpp"
#include "ltrace/sampling.hpp"

namespace ltrace {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::yes:
      return "yes";
    case Verdict::no:
      return "no";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

/// Orthonormal basis of the column space, rank relative to 1e-9.
Eigen::MatrixXd range_basis(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int r = 0;
  if (sv.size() > 0 && sv(0) > 0) {
    while (r < sv.size() && sv(r) > 1e-9 * sv(0)) ++r;
  }
  return svd.matrixU().leftCols(r);
}

double dist_to_range(const Eigen::MatrixXd& q, const Eigen::VectorXd& w) {
  return (w - q * (q.transpose() * w)).norm();
}

Eigen::VectorXd to_orthonormal(const HomogeneousSymbol& a, std::span<const double> w) {
  if (static_cast<int>(w.size()) != a.dim_w()) throw DimensionError("W vector length", a.dim_w(), static_cast<long>(w.size()));
  Eigen::VectorXd v(a.dim_w());
  for (int i = 0; i < a.dim_w(); ++i) v(i) = a.metric_sqrt()(i) * w[static_cast<std::size_t>(i)];
  return v;
}

std::vector<double> from_orthonormal(const HomogeneousSymbol& a, const Eigen::VectorXd& v) {
  std::vector<double> w(static_cast<std::size_t>(a.dim_w()));
  for (int i = 0; i < a.dim_w(); ++i) w[static_cast<std::size_t>(i)] = v(i) / a.metric_sqrt()(i);
  return w;
}

double sigma_min_real(const HomogeneousSymbol& a, std::span<const double> xi) {
  return singular_range(a, xi).first;
}

}  // namespace

double distance_to_image(const HomogeneousSymbol& a, std::span<const double> xi, std::span<const double> w) {
  Eigen::VectorXd v = to_orthonormal(a, w);
  const double nv = v.norm();
  if (nv == 0) throw DomainError("distance_to_image: zero vector");
  v /= nv;
  return dist_to_range(range_basis(a.eval_orthonormal(xi)), v);
}

EllipticReport check_ellipticity(const HomogeneousSymbol& a, const ClassifyConfig& cfg) {
  EllipticReport rep;
  const int n = a.n();
  rep.tol = cfg.ellipticity_tol;
  if (a.dim_w() < a.dim_v()) {
    rep.verdict = Verdict::no;
    rep.margin = 0;
    rep.witness.assign(static_cast<std::size_t>(n), 0.0);
    rep.witness[0] = 1.0;
    rep.witness_sigma = 0;
    return rep;
  }
  const auto pts = sphere_samples(n, cfg.grid_density, shard_seed(cfg.seed, 1));
  std::vector<double> smin(pts.size()), smax(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const auto [lo, hi] = singular_range(a, pts[i]);
    smin[i] = lo;
    smax[i] = hi;
  });
  rep.samples = static_cast<int>(pts.size());
  rep.scale = *std::max_element(smax.begin(), smax.end());
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t starts = std::min<std::size_t>(static_cast<std::size_t>(std::max(cfg.polish_starts, 1)), pts.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(starts), order.end(),
                    [&](std::size_t x, std::size_t y) { return smin[x] < smin[y] || (smin[x] == smin[y] && x < y); });
  const double step = n == 1 ? 0.0 : 2.0 * std::pow(static_cast<double>(pts.size()), -1.0 / (n - 1));
  std::vector<SphereMinimum> polished(starts);
  parallel_for(starts, [&](std::size_t s) {
    polished[s] = minimize_on_sphere([&](std::span<const double> x) { return sigma_min_real(a, x); },
                                     pts[order[s]], step, 1e-12, 4000);
  });
  std::size_t best = 0;
  for (std::size_t s = 1; s < starts; ++s) {
    if (polished[s].value < polished[best].value) best = s;
  }
  rep.margin = polished[best].value;
  rep.samples += [&] {
    int e = 0;
    for (const auto& p : polished) e += p.evaluations;
    return e;
  }();
  const double tol_abs = cfg.ellipticity_tol * std::max(rep.scale, 1e-300);
  if (rep.margin > tol_abs) {
    rep.verdict = Verdict::yes;
  } else if (rep.margin < tol_abs / 10) {
    rep.verdict = Verdict::no;
    rep.witness = polished[best].x;
    rep.witness_sigma = sigma_min_real(a, rep.witness);
  } else {
    rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

CancellingReport check_cancellation(const HomogeneousSymbol& a, const ClassifyConfig& cfg) {
  CancellingReport rep;
  rep.tol = cfg.cancel_tol;
  const int n = a.n();
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(a.dim_w(), a.dim_w());
  Rng rng(shard_seed(cfg.seed, 2));
  int stable = 0;
  const int cap = cfg.stabilization_rounds * (a.dim_w() + 2) + 200;
  while (s.cols() > 0 && stable < cfg.stabilization_rounds && rep.samples < cap) {
    const auto xi = gaussian_unit(n, rng);
    ++rep.samples;
    const Eigen::MatrixXd q = range_basis(a.eval_orthonormal(xi));
    if (q.cols() < a.dim_v()) rep.non_elliptic_input = true;
    if (q.cols() == 0) {
      s.resize(a.dim_w(), 0);
      break;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(s.transpose() * q, Eigen::ComputeThinU);
    const auto& cosines = svd.singularValues();
    int keep = 0;
    while (keep < cosines.size() && cosines(keep) > 1 - cfg.cancel_tol) ++keep;
    if (keep < s.cols()) {
      s = s * svd.matrixU().leftCols(keep);
      stable = 0;
    } else {
      ++stable;
    }
  }
  rep.residual_dim = static_cast<int>(s.cols());
  if (s.cols() == 0) {
    rep.verdict = Verdict::yes;
    return rep;
  }
  if (stable < cfg.stabilization_rounds) {
    rep.verdict = Verdict::inconclusive;
    return rep;
  }
  Eigen::VectorXd w = s.col(0);
  w /= w.norm();
  // Fix the sign so the largest entry is positive.
  Eigen::Index imax = 0;
  w.cwiseAbs().maxCoeff(&imax);
  if (w(imax) < 0) w = -w;
  double worst = 0;
  for (int t = 0; t < cfg.witness_samples; ++t) {
    const auto xi = gaussian_unit(n, rng);
    worst = std::max(worst, dist_to_range(range_basis(a.eval_orthonormal(xi)), w));
  }
  rep.witness_w = from_orthonormal(a, w);
  rep.witness_distance = worst;
  rep.verdict = worst < std::min(std::sqrt(cfg.cancel_tol), 1e-6) ? Verdict::no : Verdict::inconclusive;
  return rep;
}

StrongCancellingReport check_strong_cancellation(const HomogeneousSymbol& a, const ClassifyConfig& cfg) {
  const int n = a.n();
  if (n < 2) throw DomainError("check_strong_cancellation: needs n >= 2");
  StrongCancellingReport rep;
  if (n == 2) {
    const CancellingReport c = check_cancellation(a, cfg);
    rep.verdict = c.verdict;
    rep.planes_checked = 1;
    rep.plane_e1 = {1.0, 0.0};
    rep.plane_e2 = {0.0, 1.0};
    rep.witness_w = c.witness_w;
    rep.witness_distance = c.witness_distance;
    return rep;
  }
  std::vector<std::pair<std::vector<double>, std::vector<double>>> planes;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::vector<double> e1(static_cast<std::size_t>(n), 0.0), e2(static_cast<std::size_t>(n), 0.0);
      e1[static_cast<std::size_t>(i)] = 1;
      e2[static_cast<std::size_t>(j)] = 1;
      planes.emplace_back(e1, e2);
    }
  }
  Rng rng(shard_seed(cfg.seed, 3));
  for (int p = 0; p < cfg.num_planes; ++p) planes.push_back(random_plane(n, rng));

  std::vector<std::optional<CancellingReport>> results(planes.size());
  parallel_for(planes.size(), [&](std::size_t p) {
    ClassifyConfig sub = cfg;
    sub.seed = shard_seed(cfg.seed, 100 + p);
    std::optional<HomogeneousSymbol> restricted;
    try {
      restricted = restrict_to_plane(a, std::span<const double>(planes[p].first), std::span<const double>(planes[p].second));
    } catch (const DomainError&) {
      // A vanishes on the plane: every image is {0}.
      CancellingReport trivial;
      trivial.verdict = Verdict::yes;
      results[p] = trivial;
      return;
    }
    results[p] = check_cancellation(*restricted, sub);
  });
  bool inconclusive = false;
  for (std::size_t p = 0; p < planes.size(); ++p) {
    ++rep.planes_checked;
    const CancellingReport& c = *results[p];
    if (c.verdict == Verdict::no) {
      rep.verdict = Verdict::no;
      rep.plane_e1 = planes[p].first;
      rep.plane_e2 = planes[p].second;
      rep.witness_w = c.witness_w;
      rep.witness_distance = c.witness_distance;
      return rep;
    }
    if (c.verdict == Verdict::inconclusive) inconclusive = true;
  }
  rep.verdict = inconclusive ? Verdict::inconclusive : Verdict::yes;
  return rep;
}

CEllipticReport check_c_ellipticity(const HomogeneousSymbol& a, const ClassifyConfig& cfg,
                                    std::optional<Certificate>* cert_out) {
  CEllipticReport rep;
  const int n = a.n(), k = a.order();
  rep.d_max = cfg.d_max.value_or(k + 4);
  const CertificateSearch search = search_certificate(a, std::max(rep.d_max, k));
  if (search.certificate) {
    rep.verdict = Verdict::yes;
    rep.certificate_degree = search.certificate->d;
    rep.source = "certificate";
    if (cert_out) *cert_out = search.certificate;
    return rep;
  }
  // Refutation: minimize sigma_min(A[eta + i nu]) over |eta|^2 + |nu|^2 = 1.
  auto f = [&](std::span<const double> z) {
    std::vector<std::complex<double>> xi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xi[static_cast<std::size_t>(i)] = {z[static_cast<std::size_t>(i)], z[static_cast<std::size_t>(n + i)]};
    return sigma_min_complex(a, xi);
  };
  std::vector<std::vector<double>> starts;
  const double h = 1 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    std::vector<double> z(static_cast<std::size_t>(2 * n), 0.0);
    z[static_cast<std::size_t>(i)] = 1;
    starts.push_back(z);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> y(static_cast<std::size_t>(2 * n), 0.0);
        y[static_cast<std::size_t>(i)] = h;
        y[static_cast<std::size_t>(n + j)] = sgn * h;
        starts.push_back(y);
      }
    }
  }
  Rng rng(shard_seed(cfg.seed, 4));
  for (int s = 0; s < cfg.refute_starts; ++s) starts.push_back(gaussian_unit(2 * n, rng));
  rep.starts = static_cast<int>(starts.size());
  std::vector<SphereMinimum> mins(starts.size());
  parallel_for(starts.size(), [&](std::size_t s) {
    const double v0 = f(starts[s]);
    if (v0 == 0) {
      mins[s] = {starts[s], 0.0, 1};
      return;
    }
    mins[s] = minimize_on_sphere(f, starts[s], 0.25, 1e-13, 3000);
  });
  std::size_t best = 0;
  for (std::size_t s = 1; s < mins.size(); ++s) {
    if (mins[s].value < mins[best].value) best = s;
  }
  rep.min_sigma = mins[best].value;
  double scale = 0;
  for (int i = 0; i < n; ++i) {
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(i)] = 1;
    scale = std::max(scale, singular_range(a, e).second);
  }
  if (rep.min_sigma < cfg.refute_tol * std::max(scale, 1e-300)) {
    const auto& z = mins[best].x;
    std::vector<double> eta(z.begin(), z.begin() + n), nu(z.begin() + n, z.end());
    double ne = 0;
    for (double x : eta) ne += x * x;
    ne = std::sqrt(ne);
    if (ne > 1e-3) {
      for (double& x : eta) x /= ne;
      for (double& x : nu) x /= ne;
    }
    std::vector<std::complex<double>> xi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xi[static_cast<std::size_t>(i)] = {eta[static_cast<std::size_t>(i)], nu[static_cast<std::size_t>(i)]};
    Eigen::VectorXcd v;
    sigma_min_complex(a, xi, &v);
    // Normalize the phase so the largest entry is real and positive.
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v *= std::conj(v(imax)) / std::abs(v(imax));
    rep.eta = eta;
    rep.nu = nu;
    rep.kernel.assign(v.data(), v.data() + v.size());
    rep.residual = (a.eval_orthonormal(std::span<const std::complex<double>>(xi)) * v).norm();
    rep.verdict = Verdict::no;
    rep.source = "refutation";
  } else {
    rep.verdict = Verdict::inconclusive;
    rep.source = "none";
  }
  return rep;
}

std::vector<int> nullspace_dimension(const HomogeneousSymbol& a, int m) {
  if (m < 0) throw DomainError("nullspace_dimension: m must be >= 0");
  const int n = a.n(), k = a.order(), dv = a.dim_v(), dw = a.dim_w();
  std::vector<int> out;
  int acc = 0;
  for (int i = 0; i <= m; ++i) {
    const auto gammas = multi_indices(n, i);
    const int cols = dv * static_cast<int>(gammas.size());
    if (i < k) {
      acc += cols;
      out.push_back(acc);
      continue;
    }
    const auto betas = multi_indices(n, i - k);
    std::map<MultiIndex, int> bidx;
    for (std::size_t b = 0; b < betas.size(); ++b) bidx.emplace(betas[b], static_cast<int>(b));
    RationalMatrix mat(dw * static_cast<int>(betas.size()), cols);
    for (std::size_t g = 0; g < gammas.size(); ++g) {
      for (const auto& [alpha, coef] : a.terms()) {
        if (!gammas[g].dominates(alpha)) continue;
        const long ff = falling_factorial(gammas[g], alpha);
        const int b = bidx.at(gammas[g] - alpha);
        for (int w = 0; w < dw; ++w) {
          for (int v = 0; v < dv; ++v) {
            if (coef(w, v) != 0) mat(w * static_cast<int>(betas.size()) + b, v * static_cast<int>(gammas.size()) + static_cast<int>(g)) += coef(w, v) * ff;
          }
        }
      }
    }
    acc += cols - exact_rank(mat);
    out.push_back(acc);
  }
  return out;
}

ClassificationReport classify_full(const HomogeneousSymbol& a, const ClassifyConfig& cfg) {
  ClassificationReport rep;
  rep.name = a.name();
  rep.n = a.n();
  rep.k = a.order();
  rep.dim_v = a.dim_v();
  rep.dim_w = a.dim_w();
  rep.config = cfg;
  rep.config.d_max = cfg.d_max.value_or(a.order() + 4);

  rep.elliptic = check_ellipticity(a, cfg);
  rep.cancelling = check_cancellation(a, cfg);
  if (a.n() >= 2) {
    rep.strongly_cancelling = check_strong_cancellation(a, cfg);
  } else {
    rep.strongly_cancelling.verdict = rep.cancelling.verdict;
    rep.strongly_cancelling.witness_w = rep.cancelling.witness_w;
    rep.strongly_cancelling.note = "n = 1 has no 2-planes; reported equal to cancellation";
    rep.notes.push_back("n = 1: strongly cancelling set equal to cancelling");
  }
  rep.c_elliptic = check_c_ellipticity(a, cfg, &rep.certificate);

  auto set = [&](Verdict& v, Verdict to, const std::string& why) {
    if (v != to) {
      rep.notes.push_back(why + ": " + to_string(v) + " -> " + to_string(to));
      v = to;
    }
  };

  if (rep.certificate) {
    set(rep.elliptic.verdict, Verdict::yes, "certificate implies elliptic");
    set(rep.strongly_cancelling.verdict, Verdict::yes, "certificate implies strongly cancelling");
    set(rep.cancelling.verdict, Verdict::yes, "certificate implies cancelling");
  }

  if (rep.elliptic.verdict == Verdict::no && rep.c_elliptic.verdict != Verdict::no) {
    // A real kernel vector is a complex one.
    rep.c_elliptic.verdict = Verdict::no;
    rep.c_elliptic.source = "real-witness";
    rep.c_elliptic.eta = rep.elliptic.witness;
    rep.c_elliptic.nu.assign(static_cast<std::size_t>(a.n()), 0.0);
    std::vector<std::complex<double>> xi;
    for (double x : rep.elliptic.witness) xi.emplace_back(x, 0.0);
    Eigen::VectorXcd v;
    sigma_min_complex(a, xi, &v);
    rep.c_elliptic.kernel.assign(v.data(), v.data() + v.size());
    rep.c_elliptic.residual = (a.eval_orthonormal(std::span<const std::complex<double>>(xi)) * v).norm();
    rep.notes.push_back("not elliptic implies not C-elliptic (real witness)");
  }

  if (rep.cancelling.verdict == Verdict::no && rep.strongly_cancelling.verdict != Verdict::no) {
    set(rep.strongly_cancelling.verdict, Verdict::no, "not cancelling implies not strongly cancelling");
    if (a.n() >= 2) {
      rep.strongly_cancelling.plane_e1.assign(static_cast<std::size_t>(a.n()), 0.0);
      rep.strongly_cancelling.plane_e2.assign(static_cast<std::size_t>(a.n()), 0.0);
      rep.strongly_cancelling.plane_e1[0] = 1;
      rep.strongly_cancelling.plane_e2[1] = 1;
    }
    rep.strongly_cancelling.witness_w = rep.cancelling.witness_w;
    rep.strongly_cancelling.witness_distance = rep.cancelling.witness_distance;
  }
  if (rep.strongly_cancelling.verdict == Verdict::yes) {
    set(rep.cancelling.verdict, Verdict::yes, "strongly cancelling implies cancelling");
  }

  if (a.order() == 1 && rep.elliptic.verdict == Verdict::yes && rep.strongly_cancelling.verdict == Verdict::yes) {
    if (rep.c_elliptic.verdict == Verdict::inconclusive) {
      rep.c_elliptic.verdict = Verdict::yes;
      rep.c_elliptic.source = "first-order-rule";
      rep.notes.push_back("k = 1, elliptic and strongly cancelling: C-elliptic by the first-order rule");
    } else if (rep.c_elliptic.verdict == Verdict::no && a.n() >= 2) {
      // The complex witness spans a plane on which cancellation must fail.
      std::vector<double> e1 = rep.c_elliptic.eta, e2 = rep.c_elliptic.nu;
      double d = 0, n1 = 0;
      for (std::size_t i = 0; i < e1.size(); ++i) n1 += e1[i] * e1[i];
      for (std::size_t i = 0; i < e1.size(); ++i) d += e1[i] * e2[i];
      for (std::size_t i = 0; i < e1.size(); ++i) e2[i] -= d / n1 * e1[i];
      Verdict plane = Verdict::inconclusive;
      try {
        const HomogeneousSymbol r = restrict_to_plane(a, std::span<const double>(e1), std::span<const double>(e2));
        const CancellingReport c = check_cancellation(r, cfg);
        plane = c.verdict;
        if (c.verdict == Verdict::no) {
          rep.strongly_cancelling.plane_e1 = e1;
          rep.strongly_cancelling.plane_e2 = e2;
          rep.strongly_cancelling.witness_w = c.witness_w;
          rep.strongly_cancelling.witness_distance = c.witness_distance;
        }
      } catch (const DomainError&) {
      }
      if (plane == Verdict::no) {
        set(rep.strongly_cancelling.verdict, Verdict::no, "complex witness plane is not cancelling");
      } else {
        set(rep.strongly_cancelling.verdict, Verdict::inconclusive,
            "complex witness conflicts with the plane sweep");
      }
    }
  }

  if (a.n() == 2 && rep.strongly_cancelling.verdict != rep.cancelling.verdict) {
    // Same single plane: keep whichever verdict is decisive.
    const Verdict v = rep.cancelling.verdict != Verdict::inconclusive ? rep.cancelling.verdict : rep.strongly_cancelling.verdict;
    set(rep.cancelling.verdict, v, "n = 2: cancelling equals strongly cancelling");
    set(rep.strongly_cancelling.verdict, v, "n = 2: strongly cancelling equals cancelling");
  }
  if (rep.c_elliptic.verdict == Verdict::yes) {
    // Only reached via the certificate or the first-order rule, both of which
    // already imply elliptic and strongly cancelling.
    if (rep.elliptic.verdict != Verdict::yes || rep.strongly_cancelling.verdict != Verdict::yes) {
      rep.notes.push_back("inconsistent: C-elliptic without elliptic and strongly cancelling");
    }
  }
  return rep;
}

}  // namespace ltrace
