#include "cli_commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "ltrace/catalog.hpp"
#include "ltrace/certificate.hpp"
#include "ltrace/classify.hpp"
#include "ltrace/demos.hpp"
#include "ltrace/errors.hpp"
#include "ltrace/harness.hpp"
#include "ltrace/inequality_io.hpp"
#include "ltrace/measure_io.hpp"
#include "ltrace/measures.hpp"
#include "ltrace/parallel.hpp"
#include "ltrace/report_io.hpp"
#include "ltrace/symbol_io.hpp"

namespace ltrace::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Bad flag combinations and the like; exit code 2.
struct UsageError : Error {
  using Error::Error;
};

struct OperatorSource {
  std::string catalog;
  std::string spec;
  int n = 2;
  std::optional<int> k;
  std::optional<int> components;

  void add_to(CLI::App* app) {
    app->add_option("--catalog", catalog, "built-in operator name");
    app->add_option("--spec", spec, "operator spec file");
    app->add_option("--n", n, "dimension")->check(CLI::PositiveNumber);
    app->add_option("--k", k, "order (catalog operators with variable order)");
    app->add_option("--components", components, "component count N (escnotcell)");
  }
  bool given() const { return !catalog.empty() || !spec.empty(); }
  HomogeneousSymbol load() const {
    if (!catalog.empty() && !spec.empty()) throw UsageError("give either --catalog or --spec, not both");
    if (!spec.empty()) return read_symbol_file(spec);
    if (catalog.empty()) throw UsageError("an operator is required: --catalog NAME or --spec FILE");
    return ltrace::catalog(catalog, n, k, components);
  }
  json to_json() const {
    json j{{"n", n}};
    if (!catalog.empty()) j["catalog"] = catalog;
    if (!spec.empty()) j["spec"] = spec;
    if (k) j["k"] = *k;
    if (components) j["components"] = *components;
    return j;
  }
};

struct Output {
  std::string dir;
  void add_to(CLI::App* app) { app->add_option("--out", dir, "output directory (default $LTRACE_OUTPUT_DIR or ./ltrace-out)"); }
  fs::path resolve() const {
    if (!dir.empty()) return dir;
    if (const char* env = std::getenv("LTRACE_OUTPUT_DIR"); env && *env) return env;
    return "ltrace-out";
  }
};

/// First free name among stem.ext, stem-2.ext, ...; existing files are never touched.
fs::path fresh_path(const fs::path& dir, const std::string& stem, const std::string& ext) {
  fs::path p = dir / (stem + ext);
  for (int i = 2; fs::exists(p); ++i) p = dir / (stem + "-" + std::to_string(i) + ext);
  return p;
}

fs::path emit(const fs::path& dir, const std::string& stem, const std::string& ext, const std::string& text) {
  const fs::path p = fresh_path(dir, stem, ext);
  write_new_file(p, text);
  std::cout << "wrote " << p.string() << "\n";
  return p;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("not a number list: '" + s + "'");
    }
  }
  return out;
}

/// "re:im" pairs separated by commas, or plain reals.
std::vector<std::complex<double>> parse_complex_list(const std::string& s) {
  std::vector<std::complex<double>> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.emplace_back(parse_list(item).at(0), 0.0);
    } else {
      out.emplace_back(parse_list(item.substr(0, colon)).at(0), parse_list(item.substr(colon + 1)).at(0));
    }
  }
  return out;
}

// ---- classify -------------------------------------------------------------

struct ClassifyArgs {
  OperatorSource op;
  Output out;
  std::string emit_spec;
  ClassifyConfig cfg;
  std::optional<int> d_max;
};

int cmd_classify(const ClassifyArgs& a) {
  const HomogeneousSymbol sym = a.op.load();
  if (!a.emit_spec.empty()) {
    write_new_file(a.emit_spec, symbol_to_json(sym));
    std::cout << "wrote " << a.emit_spec << "\n";
    return 0;
  }
  ClassifyConfig cfg = a.cfg;
  cfg.d_max = a.d_max;
  const ClassificationReport rep = classify_full(sym, cfg);
  json doc = report_to_json(rep);
  doc["source"] = a.op.to_json();
  std::cout << report_to_text(rep);
  emit(a.out.resolve(), "classify-" + sym.name() + "-n" + std::to_string(sym.n()), ".json", doc.dump(2) + "\n");
  return 0;
}

// ---- certificate ----------------------------------------------------------

struct CertificateArgs {
  OperatorSource op;
  Output out;
  std::string emit_spec;
  int d_max = -1;
};

int cmd_certificate(const CertificateArgs& a) {
  const HomogeneousSymbol sym = a.op.load();
  if (!a.emit_spec.empty()) {
    write_new_file(a.emit_spec, symbol_to_json(sym));
    std::cout << "wrote " << a.emit_spec << "\n";
    return 0;
  }
  const int d_max = a.d_max >= 0 ? a.d_max : sym.order() + 4;
  if (d_max < sym.order()) throw UsageError("--dmax must be >= k = " + std::to_string(sym.order()));
  const CertificateSearch s = search_certificate(sym, d_max);
  if (!s.certificate) {
    std::cout << "no certificate found up to degree " << d_max << " for " << sym.name() << " (last system "
              << s.equations << " x " << s.unknowns << ")\n";
    return 0;
  }
  const CertificateCheck chk = verify_certificate(sym, *s.certificate);
  std::cout << "certificate of degree " << s.certificate->d << " for " << sym.name()
            << ": exact " << (chk.exact ? "yes" : "no") << ", grid relative error " << chk.grid_relative_error << "\n";
  json doc = certificate_to_json(*s.certificate);
  doc["tool_version"] = LTRACE_VERSION;
  doc["operator"] = sym.name();
  doc["config"] = {{"source", a.op.to_json()}, {"d_max", d_max}};
  doc["verification"] = {{"exact", chk.exact}, {"max_defect", to_string(chk.max_defect)},
                         {"grid_relative_error", chk.grid_relative_error}};
  emit(a.out.resolve(), "certificate-" + sym.name() + "-n" + std::to_string(sym.n()) + "-d" + std::to_string(s.certificate->d),
       ".json", doc.dump(2) + "\n");
  return 0;
}

// ---- fractal --------------------------------------------------------------

struct FractalArgs {
  double alpha = 0;
  int n = 1;
  int level = 6;
  std::vector<std::string> cone;
  double box_side = 1.0;
  bool binary = false;
  int shells = 10;
  Output out;
};

Cone parse_cone(const std::vector<std::string>& items, int n) {
  Cone c;
  c.apex.assign(static_cast<std::size_t>(n), 0.0);
  for (const auto& it : items) {
    const auto eq = it.find('=');
    if (eq == std::string::npos) throw UsageError("--cone expects key=value items, got '" + it + "'");
    const std::string key = it.substr(0, eq), val = it.substr(eq + 1);
    if (key == "axis") {
      c.axis = parse_list(val);
    } else if (key == "apex") {
      c.apex = parse_list(val);
    } else if (key == "angle") {
      c.half_angle = parse_list(val).at(0);
    } else {
      throw UsageError("--cone: unknown key '" + key + "'");
    }
  }
  if (static_cast<int>(c.axis.size()) != n || static_cast<int>(c.apex.size()) != n) {
    throw UsageError("--cone: axis and apex need n = " + std::to_string(n) + " entries");
  }
  return c;
}

int cmd_fractal(const FractalArgs& a) {
  if (!(a.alpha > 0 && a.alpha <= a.n)) {
    throw DomainError("alpha = " + std::to_string(a.alpha) + " must lie in (0, n] with n = " + std::to_string(a.n));
  }
  DiscreteMeasure mu;
  if (a.cone.empty()) {
    std::vector<double> lo(static_cast<std::size_t>(a.n), 0.0), hi(static_cast<std::size_t>(a.n), a.box_side);
    mu = build_cantor_product(a.alpha, a.n, a.level, lo, hi);
  } else {
    mu = build_cone_cantor(a.alpha, a.n, a.level, parse_cone(a.cone, a.n), a.box_side);
  }
  std::cout << "atoms " << mu.size() << ", dimension " << mu.dimension_alpha << ", spacing " << mu.spacing << "\n";
  const auto center = mu.point(0);
  json stats;
  try {
    const AhlforsProfile prof = ahlfors_profile(mu, a.alpha, center);
    std::cout << "r,mass,ratio\n";
    json rows = json::array();
    for (const auto& r : prof.rows) {
      std::cout << r.r << "," << r.mass << "," << r.ratio << "\n";
      rows.push_back({{"r", r.r}, {"mass", r.mass}, {"ratio", r.ratio}});
    }
    std::cout << "m_hat " << prof.m_hat << ", M_hat " << prof.M_hat << "\n";
    stats["ahlfors"] = {{"center", std::vector<double>(center.begin(), center.end())}, {"rows", rows},
                        {"m_hat", prof.m_hat}, {"M_hat", prof.M_hat}};
  } catch (const DomainError& e) {
    std::cout << "ahlfors profile skipped: " << e.what() << "\n";
  }
  const MorreyEstimate est = estimate_morrey_norm(mu, a.alpha);
  std::cout << "morrey lower bound " << est.value << " (" << est.family << ")\n";
  stats["morrey"] = {{"value", est.value}, {"family", est.family}, {"radius", est.radius}};
  // shells down to the finest resolvable radius, 2^{-J-1} >= 4 spacings
  const int J = mu.spacing > 0 ? static_cast<int>(std::floor(std::log2(1.0 / (4.0 * mu.spacing)))) - 1 : 0;
  if (J >= 1) {
    try {
      const ShellSums sh = shell_divergence_sums(mu, a.alpha, center, J);
      stats["shells"] = {{"j", sh.j}, {"shell", sh.shell}, {"partial", sh.partial}, {"slope", sh.slope}};
      std::cout << "shell-sum slope " << sh.slope << " over j <= " << J << "\n";
    } catch (const DomainError& e) {
      std::cout << "shell sums skipped: " << e.what() << "\n";
    }
  }
  stats["config"] = {{"alpha", a.alpha}, {"n", a.n}, {"level", a.level}, {"cone", a.cone}, {"box_side", a.box_side}};
  stats["tool_version"] = LTRACE_VERSION;
  std::ostringstream stem;
  stem << "fractal-a" << a.alpha << "-n" << a.n << "-l" << a.level << (a.cone.empty() ? "" : "-cone");
  const fs::path dir = a.out.resolve();
  const fs::path mp = fresh_path(dir, stem.str(), a.binary ? ".msrb" : ".msr");
  write_measure_file(mu, mp);
  std::cout << "wrote " << mp.string() << "\n";
  stats["measure"] = {{"file", mp.filename().string()}, {"atoms", mu.size()}, {"total_mass", mu.total_mass()},
                      {"dimension", mu.dimension_alpha}, {"level", mu.level}, {"spacing", mu.spacing}};
  emit(dir, stem.str() + "-stats", ".json", stats.dump(2) + "\n");
  return 0;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
  std::string test;
  OperatorSource op;
  Output out;
  std::string measure;
  double s = 0.0;
  std::optional<double> theta, alpha;
  std::optional<int> levels;
  std::optional<int> resolution;
  std::uint64_t seed = 1;
  int family = 16;
  double length = 4.0;
  std::string xi0, v, w, eta, nu;
  bool robust = false;
  bool exploratory = false;
  bool control = false;
};

const std::vector<std::string> kTests = {"sobolev", "multiplicative", "adams", "halfspace",
                                         "blowup-nonelliptic", "blowup-noncancelling", "wirtinger-blowup"};

void validate_exponents(const VerifyArgs& a, int n) {
  if (a.test == "halfspace" || a.test == "wirtinger-blowup") return;
  if (!(a.s >= 0 && a.s < 1)) throw DomainError("s = " + std::to_string(a.s) + " outside [0, 1)");
  if (a.test == "multiplicative") {
    if (!a.theta) throw UsageError("multiplicative needs --theta");
    const auto [lo, hi] = theta_range(n, a.s);
    if (!(*a.theta > lo && *a.theta <= hi)) {
      std::ostringstream os;
      os << "theta = " << *a.theta << " outside the admissible interval (s(n-1)/(n-s), 1] = (" << lo << ", " << hi
         << "] for n = " << n << ", s = " << a.s;
      throw DomainError(os.str());
    }
  }
  if (a.test == "adams") {
    if (!a.alpha) throw UsageError("adams needs --alpha");
    if (!(a.s < *a.alpha && *a.alpha < n)) {
      throw DomainError("alpha must satisfy s < alpha < n (s = " + std::to_string(a.s) + ", n = " + std::to_string(n) + ")");
    }
  }
}

DiscreteMeasure default_measure(int n, double s) {
  std::vector<double> lo(static_cast<std::size_t>(n), -0.5), hi(static_cast<std::size_t>(n), 0.5);
  return build_cantor_product(n - s, n, n == 2 ? 7 : 4, lo, hi);
}

/// Kernel vector of A[xi] (smallest right singular vector), storage coordinates.
std::vector<double> real_kernel(const HomogeneousSymbol& a, std::span<const double> xi) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.eval_orthonormal(xi), Eigen::ComputeFullV);
  const Eigen::VectorXd v = svd.matrixV().col(a.dim_v() - 1);
  return std::vector<double>(v.data(), v.data() + v.size());
}

int cmd_verify(const VerifyArgs& a) {
  if (std::find(kTests.begin(), kTests.end(), a.test) == kTests.end()) {
    throw UsageError("unknown test '" + a.test + "'");
  }
  validate_exponents(a, a.op.spec.empty() ? a.op.n : read_symbol_file(a.op.spec).n());
  const HomogeneousSymbol sym = a.op.load();
  json config = {{"test", a.test}, {"source", a.op.to_json()}, {"s", a.s}, {"seed", a.seed}, {"family", a.family},
                 {"length", a.length}, {"robust", a.robust}, {"control", a.control}};
  if (a.theta) config["theta"] = *a.theta;
  if (a.alpha) config["alpha"] = *a.alpha;
  if (a.levels) config["levels"] = *a.levels;
  if (a.resolution) config["resolution"] = *a.resolution;
  if (!a.measure.empty()) config["measure"] = a.measure;

  InequalityReport rep;
  if (a.test == "sobolev" || a.test == "multiplicative" || a.test == "adams") {
    const DiscreteMeasure mu = a.measure.empty() ? default_measure(sym.n(), a.s) : read_measure_file(a.measure);
    SweepConfig cfg;
    cfg.family.count = a.family;
    cfg.family.seed = a.seed;
    cfg.length = a.length;
    if (a.resolution) cfg.resolutions = {*a.resolution, 2 * *a.resolution};
    if (a.test == "multiplicative") cfg.theta = a.theta;
    if (a.test == "adams") cfg.alpha = a.alpha;
    rep = sweep_sobolev(sym, a.s, mu, cfg);
  } else if (a.test == "halfspace") {
    HalfspaceConfig cfg;
    cfg.family.count = a.family;
    cfg.family.seed = a.seed;
    cfg.length = a.length;
    cfg.exploratory = a.exploratory;
    if (a.resolution) cfg.resolutions = {*a.resolution, 2 * *a.resolution};
    rep = halfspace_sweep(sym, cfg);
  } else if (a.test == "blowup-nonelliptic") {
    std::vector<double> xi0;
    if (!a.xi0.empty()) {
      xi0 = parse_list(a.xi0);
    } else {
      const EllipticReport e = check_ellipticity(sym);
      if (e.verdict != Verdict::no) throw DomainError("no real ellipticity witness; the operator looks elliptic");
      xi0 = e.witness;
    }
    const std::vector<double> v = a.v.empty() ? real_kernel(sym, xi0) : parse_list(a.v);
    NonEllipticConfig cfg;
    if (a.levels) cfg.levels = *a.levels;
    if (a.resolution) cfg.perp_res = *a.resolution;
    cfg.control = a.control;
    auto run = [&](int rf, double lf) {
      NonEllipticConfig c = cfg;
      c.perp_res *= rf;
      c.t_panels *= rf;
      c.grading = std::pow(c.grading, 1.0 / rf);
      c.domain_scale *= lf;
      return blowup_nonelliptic(sym, xi0, v, a.s, c);
    };
    rep = a.robust ? robust_blowup(run) : run(1, 1.0);
  } else if (a.test == "blowup-noncancelling") {
    std::vector<double> w;
    if (!a.w.empty()) {
      w = parse_list(a.w);
    } else {
      const CancellingReport c = check_cancellation(sym);
      if (c.verdict != Verdict::no) throw DomainError("no non-cancelling witness; the operator looks cancelling");
      w = c.witness_w;
    }
    NonCancellingConfig cfg;
    if (a.levels) cfg.levels = *a.levels;
    if (a.resolution) cfg.resolution = *a.resolution;
    auto run = [&](int rf, double lf) {
      NonCancellingConfig c = cfg;
      c.resolution *= rf;
      c.length *= lf;
      return blowup_noncancelling(sym, w, a.s, c);
    };
    rep = a.robust ? robust_blowup(run) : run(1, 1.0);
  } else {
    std::vector<double> eta, nu;
    std::vector<std::complex<double>> v;
    if (!a.eta.empty() || !a.nu.empty() || !a.v.empty()) {
      eta = parse_list(a.eta);
      nu = parse_list(a.nu);
      v = parse_complex_list(a.v);
    } else {
      const CEllipticReport c = check_c_ellipticity(sym);
      if (c.verdict != Verdict::no || c.kernel.empty()) throw DomainError("no complex witness: the operator looks C-elliptic");
      eta = c.eta;
      nu = c.nu;
      v = c.kernel;
      if (sym.n() == 2) {
        // rotate zeta by a phase so that nu lies on the second axis
        const double phi = std::atan2(-nu[0], eta[0]);
        std::vector<double> e2(2), n2(2);
        for (int i = 0; i < 2; ++i) {
          e2[static_cast<std::size_t>(i)] = std::cos(phi) * eta[static_cast<std::size_t>(i)] - std::sin(phi) * nu[static_cast<std::size_t>(i)];
          n2[static_cast<std::size_t>(i)] = std::sin(phi) * eta[static_cast<std::size_t>(i)] + std::cos(phi) * nu[static_cast<std::size_t>(i)];
        }
        const double scale = std::abs(n2[1]);
        for (int i = 0; i < 2; ++i) {
          e2[static_cast<std::size_t>(i)] /= scale;
          n2[static_cast<std::size_t>(i)] /= scale;
        }
        n2[0] = 0;
        eta = e2;
        nu = n2;
      }
    }
    ComplexWitnessConfig cfg;
    if (a.levels) cfg.levels = *a.levels;
    if (a.resolution) cfg.res_tangent = *a.resolution;
    rep = wirtinger_blowup(sym, eta, nu, v, cfg);
  }
  if (a.exploratory) rep.exploratory = true;
  std::cout << a.test << " " << sym.name() << ": verdict "
            << (rep.exploratory ? "exploratory — open conjecture" : to_string(rep.verdict)) << ", sup ratio " << rep.sup_ratio
            << ", spread " << rep.spread << "\n";
  std::cout << growth_csv(rep.growth);
  std::ostringstream stem;
  stem << a.test << "-" << sym.name() << "-n" << sym.n() << "-s" << a.s;
  const fs::path dir = a.out.resolve();
  emit(dir, stem.str(), ".json", inequality_to_json(rep, config).dump(2) + "\n");
  emit(dir, stem.str() + "-growth", ".csv", growth_csv(rep.growth));
  return 0;
}

// ---- demo -----------------------------------------------------------------

struct DemoArgs {
  std::string name;
  int j_levels = 8;
  int resolution = 1024;
  double length = 4.0;
  std::vector<double> eps = {0.08, 0.04, 0.02, 0.01};
  std::string shape = "disk";
  Output out;
};

int cmd_demo(const DemoArgs& a) {
  const fs::path dir = a.out.resolve();
  if (a.name == "strict-discontinuity") {
    const DiscontinuityReport r = strict_discontinuity_demo(a.j_levels);
    std::cout << discontinuity_csv(r);
    std::cout << "traces on the circle: inner " << r.inner_trace << ", outer " << r.outer_trace << ", limit "
              << r.limit_trace << " (each rho_j has trace 1)\n";
    json doc = discontinuity_to_json(r);
    doc["config"] = {{"j_levels", a.j_levels}};
    emit(dir, "demo-strict-discontinuity", ".json", doc.dump(2) + "\n");
    emit(dir, "demo-strict-discontinuity", ".csv", discontinuity_csv(r));
    return 0;
  }
  if (a.name == "mollification-strict") {
    const Grid grid = Grid::centered(2, a.resolution, a.length);
    const std::vector<double> c = {0.0, 0.0}, lo = {-0.5, -0.5}, hi = {0.5, 0.5};
    double target = 0;
    GridField u;
    if (a.shape == "disk") {
      u = disk_indicator(grid, c, 1.0);
      target = 2 * std::numbers::pi;
    } else if (a.shape == "square") {
      u = box_indicator(grid, lo, hi);
      target = 4.0;
    } else {
      throw UsageError("unknown shape '" + a.shape + "' (disk, square)");
    }
    const StrictReport r = mollification_strict_check(catalog("gradient", 2), u, a.eps, target);
    std::cout << strict_csv(r);
    json doc = strict_to_json(r);
    doc["config"] = {{"shape", a.shape}, {"resolution", a.resolution}, {"length", a.length}, {"eps", a.eps}};
    emit(dir, "demo-mollification-strict-" + a.shape, ".json", doc.dump(2) + "\n");
    emit(dir, "demo-mollification-strict-" + a.shape, ".csv", strict_csv(r));
    return 0;
  }
  if (a.name == "wirtinger-blowup") {
    const std::vector<double> eta = {1, 0}, nu = {0, 1};
    const std::vector<std::complex<double>> v = {{1, 0}, {0, -1}};
    const InequalityReport r = wirtinger_blowup(catalog("wirtinger", 2), eta, nu, v);
    std::cout << "verdict " << to_string(r.verdict) << "\n" << growth_csv(r.growth);
    for (const auto& [k, x] : r.metrics) {
      if (k.rfind("increment_", 0) == 0 || k.rfind("oracle_", 0) == 0) std::cout << k << " " << x << "\n";
    }
    emit(dir, "demo-wirtinger-blowup", ".json", inequality_to_json(r, {{"demo", "wirtinger-blowup"}}).dump(2) + "\n");
    emit(dir, "demo-wirtinger-blowup-growth", ".csv", growth_csv(r.growth));
    return 0;
  }
  throw UsageError("unknown demo '" + a.name + "' (strict-discontinuity, wirtinger-blowup, mollification-strict)");
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"ltrace: symbol classification, fractal measures and trace-inequality checks"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "cap on worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
  app.set_version_flag("--version", LTRACE_VERSION);

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "classify an operator");
  ca.op.add_to(classify);
  ca.out.add_to(classify);
  classify->add_option("--emit-spec", ca.emit_spec, "write the operator spec to this file and stop");
  classify->add_option("--samples", ca.cfg.grid_density, "sphere samples for the ellipticity sweep");
  classify->add_option("--tol", ca.cfg.ellipticity_tol, "relative ellipticity tolerance");
  classify->add_option("--planes", ca.cfg.num_planes, "random planes for strong cancellation");
  classify->add_option("--dmax", ca.d_max, "largest certificate degree tried");
  classify->add_option("--seed", ca.cfg.seed, "seed");

  CertificateArgs ce;
  auto* certificate = app.add_subcommand("certificate", "search and verify a C-ellipticity certificate");
  ce.op.add_to(certificate);
  ce.out.add_to(certificate);
  certificate->add_option("--emit-spec", ce.emit_spec, "write the operator spec to this file and stop");
  certificate->add_option("--dmax", ce.d_max, "largest degree tried (default k + 4)");

  FractalArgs fa;
  auto* fractal = app.add_subcommand("fractal", "build a fractal measure and its regularity statistics");
  fractal->add_option("--alpha", fa.alpha, "dimension")->required();
  fractal->add_option("--n", fa.n, "ambient dimension")->check(CLI::PositiveNumber);
  fractal->add_option("--level", fa.level, "generation level")->check(CLI::NonNegativeNumber);
  fractal->add_option("--cone", fa.cone, "axis=a,b,.. angle=t [apex=..]")->expected(1, 3);
  fractal->add_option("--box-side", fa.box_side, "side of the generator box");
  fractal->add_flag("--binary", fa.binary, "write the binary measure format");
  fa.out.add_to(fractal);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run an inequality test");
  verify->add_option("test", va.test, "sobolev | multiplicative | adams | halfspace | blowup-nonelliptic | "
                                      "blowup-noncancelling | wirtinger-blowup")
      ->required();
  va.op.add_to(verify);
  va.out.add_to(verify);
  verify->add_option("--measure", va.measure, "measure file (.msr text or .msrb binary)");
  verify->add_option("--s", va.s, "codimension parameter");
  verify->add_option("--theta", va.theta, "interpolation exponent (multiplicative)");
  verify->add_option("--alpha", va.alpha, "Riesz order (adams)");
  verify->add_option("--levels", va.levels, "eps levels (blow-up tests)");
  verify->add_option("--resolution", va.resolution, "grid resolution");
  verify->add_option("--seed", va.seed, "family seed");
  verify->add_option("--family", va.family, "family size")->check(CLI::PositiveNumber);
  verify->add_option("--length", va.length, "box side");
  verify->add_option("--xi0", va.xi0, "real witness xi0 (comma list)");
  verify->add_option("--v", va.v, "kernel vector (comma list; re:im for complex)");
  verify->add_option("--w", va.w, "non-cancelling witness w (comma list)");
  verify->add_option("--eta", va.eta, "real part of the complex witness");
  verify->add_option("--nu", va.nu, "imaginary part of the complex witness");
  verify->add_flag("--robust", va.robust, "repeat under resolution and box doubling");
  verify->add_flag("--exploratory", va.exploratory, "label as exploratory, no verdict");
  verify->add_flag("--control", va.control, "blowup-nonelliptic: Lebesgue measure away from the singular plane");

  DemoArgs da;
  auto* demo = app.add_subcommand("demo", "run a named demo");
  demo->add_option("name", da.name, "strict-discontinuity | wirtinger-blowup | mollification-strict")->required();
  demo->add_option("--j-levels", da.j_levels, "strict-discontinuity: largest j");
  demo->add_option("--resolution", da.resolution, "mollification-strict: grid resolution");
  demo->add_option("--eps", da.eps, "mollification-strict: eps levels");
  demo->add_option("--shape", da.shape, "mollification-strict: disk | square");
  da.out.add_to(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (jobs > 0) set_max_jobs(jobs);
    if (classify->parsed()) return cmd_classify(ca);
    if (certificate->parsed()) return cmd_certificate(ce);
    if (fractal->parsed()) return cmd_fractal(fa);
    if (verify->parsed()) return cmd_verify(va);
    if (demo->parsed()) return cmd_demo(da);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace ltrace::cli
