// One PASS/FAIL line per acceptance criterion. Pass criterion numbers as
// arguments to run a subset.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "ltrace/catalog.hpp"
#include "ltrace/certificate.hpp"
#include "ltrace/classify.hpp"
#include "ltrace/demos.hpp"
#include "ltrace/errors.hpp"
#include "ltrace/fields.hpp"
#include "ltrace/harness.hpp"
#include "ltrace/measures.hpp"
#include "ltrace/sampling.hpp"

using namespace ltrace;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[FAIL " << what << "] ";
    }
  }
};

const char* yn(Verdict v) { return to_string(v); }

// ---- 1 --------------------------------------------------------------------

void criterion1(Outcome& o) {
  struct Row {
    std::string name;
    int n;
    std::optional<int> k;
    std::optional<Verdict> e, c, sc, ce;
  };
  const auto Y = Verdict::yes, N = Verdict::no;
  const std::vector<Row> table = {
      {"gradient", 2, {}, Y, Y, Y, Y},
      {"gradient", 3, {}, Y, Y, Y, Y},
      {"gradient", 4, {}, Y, Y, Y, Y},
      {"laplacian", 2, {}, Y, N, N, N},
      {"laplacian", 3, {}, Y, N, N, N},
      {"wirtinger", 2, {}, Y, N, {}, N},
      {"sym_gradient", 2, {}, Y, Y, Y, Y},
      {"sym_gradient", 3, {}, Y, Y, Y, Y},
      {"tracefree_sym_gradient", 2, {}, Y, N, {}, {}},
      {"tracefree_sym_gradient", 3, {}, Y, Y, Y, Y},
      {"escnotcell", 3, 2, Y, {}, Y, N},
  };
  int mismatches = 0;
  for (const auto& r : table) {
    const auto rep = classify_full(catalog(r.name, r.n, r.k));
    auto cmp = [&](const char* tag, std::optional<Verdict> want, Verdict got) {
      if (want && *want != got) {
        ++mismatches;
        o.check(false, r.name + " n=" + std::to_string(r.n) + " " + tag + " got " + yn(got));
      }
    };
    cmp("E", r.e, rep.elliptic.verdict);
    cmp("C", r.c, rep.cancelling.verdict);
    cmp("SC", r.sc, rep.strongly_cancelling.verdict);
    cmp("CE", r.ce, rep.c_elliptic.verdict);
  }
  o.detail << table.size() << " operators, " << mismatches << " mismatches";
}

// ---- 2 --------------------------------------------------------------------

void criterion2(Outcome& o) {
  struct Case {
    std::string name;
    int n;
    int d;
  };
  for (const Case& c : std::vector<Case>{{"gradient", 2, 1}, {"gradient", 3, 1}, {"sym_gradient", 2, 2},
                                         {"sym_gradient", 3, 2}, {"tracefree_sym_gradient", 3, 3}}) {
    const auto a = catalog(c.name, c.n);
    const auto s = search_certificate(a, c.d + 2);
    const std::string tag = c.name + " n=" + std::to_string(c.n);
    if (!s.certificate) {
      o.check(false, tag + " not found");
      continue;
    }
    o.check(s.certificate->d == c.d, tag + " degree " + std::to_string(s.certificate->d));
    const auto chk = verify_certificate(a, *s.certificate);
    o.check(chk.exact, tag + " exact");
    o.check(chk.grid_relative_error >= 0 && chk.grid_relative_error <= 1e-8,
            tag + " grid error " + std::to_string(chk.grid_relative_error));
    o.detail << tag << " d=" << s.certificate->d << " grid " << chk.grid_relative_error << "; ";
  }
  const auto w = catalog("wirtinger", 2);
  const auto s = search_certificate(w, 6);
  o.check(!s.certificate, "wirtinger certificate found");
  ClassifyConfig cfg;
  cfg.d_max = 6;
  const auto ce = check_c_ellipticity(w, cfg);
  o.check(ce.verdict == Verdict::no && !ce.kernel.empty() && ce.residual < 1e-10,
          "wirtinger witness residual " + std::to_string(ce.residual));
  o.detail << "wirtinger not found at d_max=6, witness residual " << ce.residual;
}

// ---- 3 --------------------------------------------------------------------

HomogeneousSymbol random_first_order(Rng& rng, int index) {
  std::uniform_int_distribution<int> nd(2, 3), vd(1, 2), extra(0, 2), coef(-2, 2), keep(0, 2);
  const int n = nd(rng), dv = vd(rng), dw = dv + extra(rng);
  HomogeneousSymbol::Terms t;
  for (int i = 0; i < n; ++i) {
    RationalMatrix m(dw, dv);
    for (int r = 0; r < dw; ++r) {
      for (int c = 0; c < dv; ++c) {
        if (keep(rng) != 0) m(r, c) = coef(rng);
      }
    }
    if (!m.is_zero()) t.emplace(MultiIndex::unit(n, i), m);
  }
  if (t.empty()) {
    RationalMatrix m(dw, dv);
    m(0, 0) = 1;
    t.emplace(MultiIndex::unit(n, 0), m);
  }
  return HomogeneousSymbol(n, 1, dv, dw, std::move(t), "random" + std::to_string(index));
}

void criterion3(Outcome& o) {
  std::vector<HomogeneousSymbol> ops;
  for (int n = 2; n <= 3; ++n) {
    for (const auto& name : catalog_names()) {
      if (name == "wirtinger" && n != 2) continue;
      ops.push_back(catalog(name, n));
    }
  }
  ops.push_back(catalog("escnotcell", 3, 2));
  ops.push_back(catalog("higher_gradient", 2, 3));
  Rng rng(shard_seed(2024, 3));
  for (int i = 0; i < 100; ++i) ops.push_back(random_first_order(rng, i));
  int violations = 0, decided = 0;
  const auto Y = Verdict::yes, N = Verdict::no;
  for (const auto& a : ops) {
    const auto r = classify_full(a);
    const Verdict e = r.elliptic.verdict, c = r.cancelling.verdict, sc = r.strongly_cancelling.verdict,
                  ce = r.c_elliptic.verdict;
    std::vector<std::string> bad;
    if (ce == Y && !(e == Y && sc == Y)) bad.push_back("CE => E and SC");
    if (sc == Y && c != Y) bad.push_back("SC => C");
    if (a.n() == 2 && ((sc == Y && c == N) || (sc == N && c == Y))) bad.push_back("n=2 SC <=> C");
    if (a.order() == 1 && ((e == Y && sc == Y && ce == N) || (ce == Y && (e == N || sc == N)))) {
      bad.push_back("k=1 E and SC vs CE");
    }
    if (e != Verdict::inconclusive && c != Verdict::inconclusive && sc != Verdict::inconclusive &&
        ce != Verdict::inconclusive) {
      ++decided;
    }
    for (const auto& b : bad) {
      ++violations;
      o.check(false, a.name() + ": " + b);
    }
  }
  o.detail << ops.size() << " symbols, " << decided << " fully decided, " << violations << " violations";
}

// ---- 4 --------------------------------------------------------------------

void criterion4(Outcome& o) {
  const double a3 = std::log(2.0) / std::log(3.0);
  {
    const int level = 10;
    const auto mu = build_cantor_product(a3, 1, level);
    std::vector<double> radii;
    for (int i = 0; i <= level - 2; ++i) radii.push_back(std::pow(3.0, -i));
    const std::vector<double> c = {0.0};
    const auto prof = ahlfors_profile(mu, a3, c, radii);
    double worst = 0;
    for (const auto& r : prof.rows) worst = std::max(worst, std::abs(r.ratio - 1.0));
    o.check(worst <= 1e-12, "ternary ratio deviation " + std::to_string(worst));
    o.detail << "ternary ratio max |r-1| " << worst << "; ";
  }
  struct Cat {
    double alpha;
    int n;
  };
  double worst_ratio = 0;
  for (const Cat& c : std::vector<Cat>{{a3, 1}, {0.5, 1}, {0.8, 1}, {1.0, 2}, {1.5, 2}, {std::log(3.0) / std::log(2.0), 2},
                                       {1.2619, 2}, {1.5, 3}, {2.5, 3}}) {
    for (int level : {6, 7}) {
      const auto mu = build_cantor_product(c.alpha, c.n, level);
      const auto prof = ahlfors_profile(mu, c.alpha, mu.point(mu.size() / 3));
      const double q = prof.M_hat / prof.m_hat;
      worst_ratio = std::max(worst_ratio, q);
      o.check(q <= 16, "M/m alpha=" + std::to_string(c.alpha) + " n=" + std::to_string(c.n) + " level " +
                           std::to_string(level) + " = " + std::to_string(q));
    }
  }
  o.detail << "worst M/m " << worst_ratio << "; ";
  {
    const auto mu = build_cantor_product(a3, 1, 13);
    const std::vector<double> c = {0.0};
    const auto sh = shell_divergence_sums(mu, a3, c, 10);
    std::vector<double> x1, y1, x2, y2;
    for (std::size_t i = 0; i < sh.j.size(); ++i) {
      const int j = sh.j[i];
      if (j >= 4 && j <= 7) {
        x1.push_back(j);
        y1.push_back(sh.partial[i]);
      }
      if (j >= 7 && j <= 10) {
        x2.push_back(j);
        y2.push_back(sh.partial[i]);
      }
    }
    const double s1 = ls_slope(x1, y1), s2 = ls_slope(x2, y2);
    const double stab = std::abs(s1 - s2) / std::max(s1, s2);
    o.check(sh.slope > 0 && s1 > 0 && s2 > 0, "shell slope not positive");
    o.check(stab <= 0.25, "shell slope drift " + std::to_string(stab));
    o.detail << "shell slope " << sh.slope << " (halves " << s1 << ", " << s2 << ")";
  }
}

// ---- 5 --------------------------------------------------------------------

DiscreteMeasure sufficiency_measure(double s) {
  const std::vector<double> lo = {-0.5, -0.5}, hi = {0.5, 0.5};
  return build_cantor_product(2 - s, 2, 7, lo, hi);
}

void criterion5(Outcome& o) {
  const auto a = catalog("sym_gradient", 2);
  for (double s : {0.0, 0.5}) {
    const auto mu = sufficiency_measure(s);
    SweepConfig cfg;
    cfg.resolutions = {256, 512};
    const auto rep = sweep_sobolev(a, s, mu, cfg);
    const double sp256 = rep.metrics.at("spread@256"), sp512 = rep.metrics.at("spread@512");
    const double across = rep.metrics.at("resolution_spread");
    o.check(sp256 <= 2 && sp512 <= 2, "family spread s=" + std::to_string(s));
    o.check(across <= 1.25, "resolution spread s=" + std::to_string(s) + " = " + std::to_string(across));
    o.detail << "s=" << s << ": family spread " << sp256 << "/" << sp512 << ", across " << across << "; ";
  }
  const auto mu = sufficiency_measure(0.5);
  const Grid grid = Grid::centered(2, 256, 4.0);
  bool bitwise = true;
  for (int i = 0; i < 4; ++i) {
    const auto u = bump_member(grid, 2, BumpFamily{}, i);
    const double m = estimate_morrey_norm(mu, 1.5).value;
    const auto t = trace_ratio(a, u, mu, 0.5, m);
    const auto mt = multiplicative_ratio(a, u, mu, 0.5, 1.0, m);
    bitwise = bitwise && t.ratio == mt.ratio;
  }
  o.check(bitwise, "theta=1 not bitwise");
  o.detail << "theta=1 bitwise " << (bitwise ? "yes" : "no");
}

// ---- 6 --------------------------------------------------------------------

void criterion6(Outcome& o) {
  {
    const auto d1 = make_partial(2, 0);
    const std::vector<double> xi0 = {0, 1}, v = {1};
    const auto rep = robust_blowup([&](int rf, double lf) {
      NonEllipticConfig c;
      c.perp_res *= rf;
      c.t_panels *= rf;
      c.grading = std::pow(c.grading, 1.0 / rf);
      c.domain_scale *= lf;
      return blowup_nonelliptic(d1, xi0, v, 0.5, c);
    });
    o.check(rep.verdict == Boundedness::diverging, std::string("d1 nonelliptic ") + to_string(rep.verdict));
    o.detail << "d1: " << to_string(rep.verdict) << " lhs";
    for (const auto& r : rep.growth) o.detail << " " << r.lhs;
    o.detail << " (" << rep.notes.back() << "); ";
  }
  for (const auto& [name, n] : std::vector<std::pair<std::string, int>>{{"wirtinger", 2}, {"laplacian", 2}}) {
    const auto a = catalog(name, n);
    const auto c = check_cancellation(a);
    if (c.verdict != Verdict::no) {
      o.check(false, name + " has no cancellation witness");
      continue;
    }
    const auto rep = robust_blowup([&](int rf, double lf) {
      NonCancellingConfig cfg;
      cfg.resolution *= rf;
      cfg.length *= lf;
      return blowup_noncancelling(a, c.witness_w, 0.5, cfg);
    });
    o.check(rep.verdict == Boundedness::diverging, name + " noncancelling " + to_string(rep.verdict));
    o.detail << name << ": " << to_string(rep.verdict) << " lhs";
    for (const auto& r : rep.growth) o.detail << " " << r.lhs;
    o.detail << "; ";
  }
}

// ---- 7 --------------------------------------------------------------------

void criterion7(Outcome& o) {
  {
    HalfspaceConfig cfg;
    const auto rep = halfspace_sweep(catalog("sym_gradient", 2), cfg);
    o.check(rep.spread <= 2, "halfspace spread " + std::to_string(rep.spread));
    o.detail << "halfspace spread " << rep.spread << ", across " << rep.metrics.at("resolution_spread") << "; ";
  }
  const std::vector<double> eta = {1, 0}, nu = {0, 1};
  const std::vector<std::complex<double>> v = {{1, 0}, {0, -1}};
  const auto rep = wirtinger_blowup(catalog("wirtinger", 2), eta, nu, v);
  o.check(rep.verdict == Boundedness::diverging, std::string("wirtinger ") + to_string(rep.verdict));
  o.detail << "wirtinger " << to_string(rep.verdict) << ", increment drift " << rep.metrics.at("increment_drift")
           << ", oracle deviation " << rep.metrics.at("oracle_deviation") << ", rhs spread "
           << rep.metrics.at("rhs_spread");
}

// ---- 8 --------------------------------------------------------------------

void criterion8(Outcome& o) {
  const auto d = strict_discontinuity_demo(8);
  double worst = 0;
  bool traces = true;
  for (const auto& r : d.rows) {
    worst = std::max(worst, std::abs(r.total_variation - 2 * std::numbers::pi * (1 + 1.0 / (2 * r.j))));
    traces = traces && r.trace == 1.0;
  }
  o.check(worst <= 1e-6, "total variation error " + std::to_string(worst));
  o.check(std::abs(d.rows[3].total_variation - 7.0686) <= 1e-4, "j=4 value");
  o.check(traces, "trace of rho_j not 1");
  o.check(d.limit_trace == 0.5 && d.rows.back().trace - d.limit_trace == 0.5, "trace gap");
  o.detail << "TV error " << worst << ", trace 1 vs limit " << d.limit_trace << "; ";
  const Grid grid = Grid::centered(2, 1024, 4.0);
  const std::vector<double> c = {0, 0};
  const auto u = disk_indicator(grid, c, 1.0);
  const auto r = mollification_strict_check(catalog("gradient", 2), u, {0.08, 0.04, 0.02, 0.01}, 2 * std::numbers::pi);
  const double err = r.rows.back().rel_error;
  o.check(err <= 0.02, "disk mass error " + std::to_string(err));
  o.detail << "disk at eps=0.01: " << r.rows.back().mass << " (rel error " << err << ")";
}

// ---- 9 --------------------------------------------------------------------

double max_diff(const GridField& a, const GridField& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

void criterion9(Outcome& o) {
  double riesz = 0;
  for (int n : {2, 3}) {
    const Grid g = Grid::cube(n, n == 2 ? 64 : 32, 2 * std::numbers::pi);
    const auto f = random_band_limited(g, 1, n == 2 ? 6 : 4, 17);
    const double scale = f.max_abs();
    for (auto [a1, a2] : std::vector<std::pair<double, double>>{{0.3, 0.5}, {0.7, 0.9}}) {
      const auto lhs = riesz_potential(riesz_potential(f, a1), a2);
      const auto rhs = riesz_potential(f, a1 + a2);
      riesz = std::max(riesz, max_diff(lhs, rhs) / scale);
      const auto back = riesz_potential(riesz_potential(f, a1), -a1);
      riesz = std::max(riesz, max_diff(back, f) / scale);
    }
  }
  o.check(riesz <= 1e-10, "riesz identity error " + std::to_string(riesz));
  o.detail << "riesz " << riesz << "; ";

  double fd = 0;
  {
    const Grid g = Grid::cube(2, 1024, 2 * std::numbers::pi);
    const auto u = random_band_limited(g, 1, 3, 5);
    const auto a = catalog("gradient", 2);
    const auto sp = apply_symbol(a, u);
    const auto f2 = apply_symbol(a, u, DiffMode::finite_difference, 2);
    fd = max_diff(sp, f2) / sp.max_abs();
    const Grid g4 = Grid::cube(2, 256, 2 * std::numbers::pi);
    const auto u4 = random_band_limited(g4, 1, 3, 5);
    const auto s4 = apply_symbol(a, u4);
    fd = std::max(fd, max_diff(s4, apply_symbol(a, u4, DiffMode::finite_difference, 4)) / s4.max_abs());
  }
  o.check(fd <= 1e-3, "spectral vs FD " + std::to_string(fd));
  o.detail << "spectral-vs-FD " << fd << "; ";

  double drift = 0;
  for (double p : {1.0, 1.5, 2.0, 4.0}) {
    const Grid g1 = Grid::cube(2, 64, 2 * std::numbers::pi), g2 = Grid::cube(2, 128, 2 * std::numbers::pi);
    const auto u1 = random_band_limited(g1, 2, 4, 9), u2 = random_band_limited(g2, 2, 4, 9);
    const double n1 = lebesgue_norm(u1, p), n2 = lebesgue_norm(u2, p);
    drift = std::max(drift, std::abs(n1 / n2 - 1));
    const std::vector<double> lo = {0.5, 0.5}, hi = {5.5, 5.5};
    const auto mu = build_cantor_product(1.5, 2, 6, lo, hi);
    const double m1 = measure_norm(u1, mu, p), m2 = measure_norm(u2, mu, p);
    drift = std::max(drift, std::abs(m1 / m2 - 1));
  }
  o.check(drift <= 0.01, "norm drift " + std::to_string(drift));
  o.detail << "norm drift " << drift;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<std::tuple<int, double, std::function<void(Outcome&)>>> criteria = {
      {1, 60, criterion1},   {2, 120, criterion2},  {3, 600, criterion3},
      {4, 60, criterion4},   {5, 900, criterion5},  {6, 1200, criterion6},
      {7, 600, criterion7},  {8, 300, criterion8},  {9, 120, criterion9},
  };
  bool all = true;
  for (const auto& [id, budget, fn] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(secs <= budget, "runtime over " + std::to_string(static_cast<int>(budget)) + " s");
    std::printf("%s criterion %d (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", id, secs, o.detail.str().c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
