#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "ltrace/catalog.hpp"
#include "ltrace/certificate.hpp"
#include "ltrace/classify.hpp"
#include "ltrace/demos.hpp"
#include "ltrace/errors.hpp"
#include "ltrace/fields.hpp"
#include "ltrace/harness.hpp"
#include "ltrace/inequality_io.hpp"
#include "ltrace/measure_io.hpp"
#include "ltrace/measures.hpp"
#include "ltrace/parallel.hpp"
#include "ltrace/report_io.hpp"
#include "ltrace/symbol_io.hpp"

namespace py = pybind11;
using namespace ltrace;
using nlohmann::json;

namespace {

// documents cross the boundary as plain dicts
py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }
json from_py(const py::object& o) {
  return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

DiffMode diff_mode(const std::string& m) {
  if (m == "spectral") return DiffMode::spectral;
  if (m == "finite_difference" || m == "fd") return DiffMode::finite_difference;
  throw DomainError("mode must be 'spectral' or 'finite_difference', got '" + m + "'");
}

py::array_t<double> points_array(const DiscreteMeasure& mu) {
  py::array_t<double> out({static_cast<py::ssize_t>(mu.size()), static_cast<py::ssize_t>(mu.n)});
  std::copy(mu.points.begin(), mu.points.end(), out.mutable_data());
  return out;
}

std::vector<py::ssize_t> field_shape(const GridField& u) {
  std::vector<py::ssize_t> shape{u.components()};
  for (int r : u.grid().res) shape.push_back(r);
  return shape;
}

py::array_t<double> field_array(const GridField& u) {
  py::array_t<double> out(field_shape(u));
  std::copy(u.values().begin(), u.values().end(), out.mutable_data());
  return out;
}

GridField field_from_array(const Grid& grid, py::array_t<double, py::array::c_style | py::array::forcecast> a,
                           std::vector<double> weights) {
  const int comps = a.ndim() == grid.n ? 1 : static_cast<int>(a.shape(0));
  const py::ssize_t expect = static_cast<py::ssize_t>(comps) * static_cast<py::ssize_t>(grid.size());
  if (a.size() != expect) throw DimensionError("field array size", expect, a.size());
  GridField u(grid, comps, std::move(weights));
  std::copy(a.data(), a.data() + a.size(), u.values().begin());
  return u;
}

py::dict terms_dict(const RatioTerms& t) {
  py::dict d;
  d["lhs"] = t.lhs;
  d["morrey"] = t.morrey;
  d["rhs"] = t.rhs;
  d["middle"] = t.middle;
  d["ratio"] = t.ratio;
  return d;
}

py::object report(const InequalityReport& r) { return to_py(inequality_to_json(r)); }

}  // namespace

PYBIND11_MODULE(_ltrace, m) {
  m.doc() = "symbol classification, fractal measures and trace-inequality checks";
  m.attr("__version__") = LTRACE_VERSION;

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<DimensionError>(m, "DimensionError", base);
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<SingularError>(m, "SingularError", base);

  m.def("set_max_jobs", &set_max_jobs, py::arg("jobs"));

  // ---- symbols
  py::class_<HomogeneousSymbol>(m, "Symbol")
      .def_property_readonly("n", &HomogeneousSymbol::n)
      .def_property_readonly("order", &HomogeneousSymbol::order)
      .def_property_readonly("dim_v", &HomogeneousSymbol::dim_v)
      .def_property_readonly("dim_w", &HomogeneousSymbol::dim_w)
      .def_property_readonly("name", &HomogeneousSymbol::name)
      .def("eval_real", [](const HomogeneousSymbol& a, std::vector<double> xi) { return a.eval_real(xi); })
      .def("eval_complex",
           [](const HomogeneousSymbol& a, std::vector<std::complex<double>> xi) { return a.eval_complex(xi); })
      .def("scaled", [](const HomogeneousSymbol& a, const std::string& c) { return a.scaled(parse_rational(c)); })
      .def("to_json", [](const HomogeneousSymbol& a) { return symbol_to_json(a); })
      .def("__repr__", [](const HomogeneousSymbol& a) {
        return "<Symbol " + a.name() + " n=" + std::to_string(a.n()) + " k=" + std::to_string(a.order()) +
               " V=R^" + std::to_string(a.dim_v()) + " W=R^" + std::to_string(a.dim_w()) + ">";
      });

  m.def("catalog", &catalog, py::arg("name"), py::arg("n"), py::arg("k") = py::none(),
        py::arg("components") = py::none());
  m.def("catalog_names", &catalog_names);
  m.def("parse_symbol", [](const std::string& text) { return parse_symbol(text); });
  m.def("make_partial", &make_partial, py::arg("n"), py::arg("axis"));
  m.def("make_higher_gradient", &make_higher_gradient, py::arg("n"), py::arg("m"), py::arg("dim_v") = 1);
  m.def("restrict_to_plane",
        [](const HomogeneousSymbol& a, std::vector<double> e1, std::vector<double> e2) {
          return restrict_to_plane(a, std::span<const double>(e1), std::span<const double>(e2));
        });
  m.def(
      "pseudo_inverse_eval",
      [](const HomogeneousSymbol& a, std::vector<double> xi, double tol) {
        auto p = pseudo_inverse_eval(a, xi, tol);
        py::dict d;
        d["pinv"] = p.pinv;
        d["projector"] = p.projector;
        d["sigma_min"] = p.sigma_min;
        d["sigma_max"] = p.sigma_max;
        return d;
      },
      py::arg("a"), py::arg("xi"), py::arg("tol") = 1e-9);
  m.def("minor_polynomials", [](const HomogeneousSymbol& a) {
    std::vector<std::pair<std::vector<int>, std::string>> out;
    for (const auto& mp : minor_polynomials(a)) out.emplace_back(mp.rows, mp.det.to_string());
    return out;
  });

  // ---- classification
  m.def(
      "classify_full",
      [](const HomogeneousSymbol& a, std::optional<int> d_max, std::uint64_t seed, int grid_density) {
        ClassifyConfig cfg;
        cfg.d_max = d_max;
        cfg.seed = seed;
        cfg.grid_density = grid_density;
        ClassificationReport r;
        {
          py::gil_scoped_release nogil;
          r = classify_full(a, cfg);
        }
        return to_py(report_to_json(r));
      },
      py::arg("a"), py::arg("d_max") = py::none(), py::arg("seed") = ClassifyConfig{}.seed,
      py::arg("grid_density") = ClassifyConfig{}.grid_density);
  m.def("nullspace_dimension", &nullspace_dimension, py::arg("a"), py::arg("m"));
  m.def(
      "search_certificate",
      [](const HomogeneousSymbol& a, int d_max) -> py::object {
        auto s = search_certificate(a, d_max);
        if (!s.certificate) return py::none();
        return to_py(certificate_to_json(*s.certificate));
      },
      py::arg("a"), py::arg("d_max"));
  m.def(
      "verify_certificate",
      [](const HomogeneousSymbol& a, const py::object& cert, bool grid_check) {
        auto c = verify_certificate(a, certificate_from_json(from_py(cert)), grid_check);
        py::dict d;
        d["exact"] = c.exact;
        d["max_defect"] = to_string(c.max_defect);
        d["grid_relative_error"] = c.grid_relative_error;
        return d;
      },
      py::arg("a"), py::arg("certificate"), py::arg("grid_check") = true);

  // ---- measures
  py::class_<DiscreteMeasure>(m, "Measure")
      .def_readonly("n", &DiscreteMeasure::n)
      .def_readonly("dimension_alpha", &DiscreteMeasure::dimension_alpha)
      .def_readonly("level", &DiscreteMeasure::level)
      .def_readonly("spacing", &DiscreteMeasure::spacing)
      .def_property_readonly("points", &points_array)
      .def_property_readonly("weights",
                             [](const DiscreteMeasure& mu) { return py::array_t<double>(mu.weights.size(), mu.weights.data()); })
      .def("total_mass", &DiscreteMeasure::total_mass)
      .def("__len__", &DiscreteMeasure::size)
      .def("to_text", [](const DiscreteMeasure& mu) { return measure_to_text(mu); })
      .def("to_binary", [](const DiscreteMeasure& mu) { return py::bytes(measure_to_binary(mu)); });

  py::class_<Cone>(m, "Cone")
      .def(py::init([](std::vector<double> apex, std::vector<double> axis, double half_angle) {
             return Cone{std::move(apex), std::move(axis), half_angle};
           }),
           py::arg("apex"), py::arg("axis"), py::arg("half_angle"))
      .def_readonly("apex", &Cone::apex)
      .def_readonly("axis", &Cone::axis)
      .def_readonly("half_angle", &Cone::half_angle);

  m.def(
      "build_cantor_product",
      [](double alpha, int n, int level, std::optional<std::vector<double>> lo, std::optional<std::vector<double>> hi) {
        if (!lo && !hi) return build_cantor_product(alpha, n, level);
        std::vector<double> l = lo.value_or(std::vector<double>(static_cast<std::size_t>(n), 0.0));
        std::vector<double> h = hi.value_or(std::vector<double>(static_cast<std::size_t>(n), 1.0));
        return build_cantor_product(alpha, n, level, l, h);
      },
      py::arg("alpha"), py::arg("n"), py::arg("level"), py::arg("lo") = py::none(), py::arg("hi") = py::none());
  m.def("build_cone_cantor", &build_cone_cantor, py::arg("alpha"), py::arg("n"), py::arg("level"), py::arg("cone"),
        py::arg("box_side"));
  m.def(
      "map_into_cone",
      [](const DiscreteMeasure& mu, const Cone& c) {
        double dropped = 0.0;
        auto out = map_into_cone(mu, c, &dropped);
        return std::make_pair(out, dropped);
      },
      py::arg("mu"), py::arg("cone"));
  m.def("lebesgue_measure", [](std::vector<double> lo, std::vector<double> hi, int res) {
    return lebesgue_measure(lo, hi, res);
  });
  m.def("point_mass", [](std::vector<double> x, double mass) { return point_mass(x, mass); }, py::arg("x"),
        py::arg("mass") = 1.0);
  m.def("parse_measure", [](const std::string& text) { return parse_measure(text); });
  m.def("measure_from_binary", [](const py::bytes& b) { return measure_from_binary(std::string(b)); });
  m.def(
      "ahlfors_profile",
      [](const DiscreteMeasure& mu, double alpha, std::vector<double> center, std::vector<double> radii) {
        auto p = ahlfors_profile(mu, alpha, center, radii);
        py::list rows;
        for (const auto& r : p.rows) rows.append(py::make_tuple(r.r, r.mass, r.ratio));
        py::dict d;
        d["rows"] = rows;
        d["m_hat"] = p.m_hat;
        d["M_hat"] = p.M_hat;
        return d;
      },
      py::arg("mu"), py::arg("alpha"), py::arg("center"), py::arg("radii") = std::vector<double>{});
  m.def(
      "estimate_morrey_norm",
      [](const DiscreteMeasure& mu, double lambda, int balls, std::uint64_t seed) {
        auto e = estimate_morrey_norm(mu, lambda, balls, seed);
        py::dict d;
        d["value"] = e.value;
        d["center"] = e.center;
        d["radius"] = e.radius;
        d["balls"] = e.balls;
        d["family"] = e.family;
        return d;
      },
      py::arg("mu"), py::arg("lam"), py::arg("num_random_balls") = 256, py::arg("seed") = 11);
  m.def(
      "shell_divergence_sums",
      [](const DiscreteMeasure& mu, double alpha, std::vector<double> center, int J, int j_min) {
        auto s = shell_divergence_sums(mu, alpha, center, J, j_min);
        py::dict d;
        d["j"] = s.j;
        d["shell"] = s.shell;
        d["partial"] = s.partial;
        d["slope"] = s.slope;
        return d;
      },
      py::arg("mu"), py::arg("alpha"), py::arg("center"), py::arg("J"), py::arg("j_min") = 0);

  // ---- fields
  py::class_<Grid>(m, "Grid")
      .def_static("cube", &Grid::cube, py::arg("n"), py::arg("res"), py::arg("length"), py::arg("origin") = 0.0)
      .def_static("centered", &Grid::centered, py::arg("n"), py::arg("res"), py::arg("length"))
      .def_readonly("n", &Grid::n)
      .def_readonly("res", &Grid::res)
      .def_readonly("length", &Grid::length)
      .def_readonly("origin", &Grid::origin)
      .def("spacing", &Grid::spacing)
      .def("__len__", &Grid::size)
      .def("coordinates", [](const Grid& g) {
        py::array_t<double> out({static_cast<py::ssize_t>(g.size()), static_cast<py::ssize_t>(g.n)});
        double* p = out.mutable_data();
        for (std::size_t i = 0; i < g.size(); ++i) g.node(i, std::span<double>(p + i * g.n, static_cast<std::size_t>(g.n)));
        return out;
      });

  py::class_<GridField>(m, "Field")
      .def(py::init(&field_from_array), py::arg("grid"), py::arg("values"), py::arg("weights") = std::vector<double>{})
      .def_property_readonly("grid", &GridField::grid)
      .def_property_readonly("components", &GridField::components)
      .def_property_readonly("weights", &GridField::weights)
      .def_property_readonly("values", &field_array)
      .def("max_abs", &GridField::max_abs)
      .def("__add__", &GridField::operator+)
      .def("__sub__", &GridField::operator-)
      .def("scaled", &GridField::scaled);

  m.def("random_band_limited", &random_band_limited, py::arg("grid"), py::arg("components"), py::arg("max_mode"),
        py::arg("seed"));
  m.def(
      "apply_symbol",
      [](const HomogeneousSymbol& a, const GridField& u, const std::string& mode, int acc) {
        return apply_symbol(a, u, diff_mode(mode), acc);
      },
      py::arg("a"), py::arg("u"), py::arg("mode") = "spectral", py::arg("fd_accuracy") = 2);
  m.def(
      "derivative_tensor",
      [](const GridField& u, int order, const std::string& mode) { return derivative_tensor(u, order, diff_mode(mode)); },
      py::arg("u"), py::arg("order"), py::arg("mode") = "spectral");
  m.def("riesz_potential", &riesz_potential, py::arg("f"), py::arg("alpha"));
  m.def("mollify", &mollify, py::arg("u"), py::arg("eps"));
  m.def("lebesgue_norm", &lebesgue_norm, py::arg("u"), py::arg("p"));
  m.def("measure_norm", &measure_norm, py::arg("u"), py::arg("mu"), py::arg("q"));
  m.def("disk_indicator", [](const Grid& g, std::vector<double> c, double r) { return disk_indicator(g, c, r); });
  m.def("box_indicator",
        [](const Grid& g, std::vector<double> lo, std::vector<double> hi) { return box_indicator(g, lo, hi); });

  // ---- inequality harness
  m.def("exponent_q", [](int n, const std::string& s) { return to_string(exponent_q(n, parse_rational(s))); });
  m.def("exponent_beta", [](int n, const std::string& s) { return to_string(exponent_beta(n, parse_rational(s))); });
  m.def("theta_range", &theta_range, py::arg("n"), py::arg("s"));
  m.def(
      "trace_ratio",
      [](const HomogeneousSymbol& a, const GridField& u, const DiscreteMeasure& mu, double s,
         std::optional<double> morrey) { return terms_dict(trace_ratio(a, u, mu, s, morrey)); },
      py::arg("a"), py::arg("u"), py::arg("mu"), py::arg("s"), py::arg("morrey") = py::none());
  m.def(
      "multiplicative_ratio",
      [](const HomogeneousSymbol& a, const GridField& u, const DiscreteMeasure& mu, double s, double theta,
         std::optional<double> morrey) { return terms_dict(multiplicative_ratio(a, u, mu, s, theta, morrey)); },
      py::arg("a"), py::arg("u"), py::arg("mu"), py::arg("s"), py::arg("theta"), py::arg("morrey") = py::none());
  m.def(
      "adams_ratio",
      [](const HomogeneousSymbol& a, const GridField& u, const DiscreteMeasure& mu, double s, double alpha,
         std::optional<double> morrey) { return terms_dict(adams_ratio(a, u, mu, s, alpha, morrey)); },
      py::arg("a"), py::arg("u"), py::arg("mu"), py::arg("s"), py::arg("alpha"), py::arg("morrey") = py::none());
  m.def(
      "sweep_sobolev",
      [](const HomogeneousSymbol& a, double s, const DiscreteMeasure& mu, std::vector<int> resolutions, int count,
         std::uint64_t seed, std::optional<double> theta, std::optional<double> alpha) {
        SweepConfig cfg;
        cfg.resolutions = std::move(resolutions);
        cfg.family.count = count;
        cfg.family.seed = seed;
        cfg.theta = theta;
        cfg.alpha = alpha;
        InequalityReport r;
        {
          py::gil_scoped_release nogil;
          r = sweep_sobolev(a, s, mu, cfg);
        }
        return report(r);
      },
      py::arg("a"), py::arg("s"), py::arg("mu"), py::arg("resolutions") = std::vector<int>{256, 512},
      py::arg("family") = 16, py::arg("seed") = 1, py::arg("theta") = py::none(), py::arg("alpha") = py::none());
  m.def(
      "halfspace_sweep",
      [](const HomogeneousSymbol& a, std::vector<int> resolutions, int count, std::uint64_t seed, bool exploratory) {
        HalfspaceConfig cfg;
        cfg.resolutions = std::move(resolutions);
        cfg.family.count = count;
        cfg.family.seed = seed;
        cfg.exploratory = exploratory;
        InequalityReport r;
        {
          py::gil_scoped_release nogil;
          r = halfspace_sweep(a, cfg);
        }
        return report(r);
      },
      py::arg("a"), py::arg("resolutions") = std::vector<int>{256, 512}, py::arg("family") = 16,
      py::arg("seed") = 1, py::arg("exploratory") = false);
  m.def(
      "blowup_nonelliptic",
      [](const HomogeneousSymbol& a, std::vector<double> xi0, std::vector<double> v, double s, bool control) {
        NonEllipticConfig cfg;
        cfg.control = control;
        InequalityReport r;
        {
          py::gil_scoped_release nogil;
          r = blowup_nonelliptic(a, xi0, v, s, cfg);
        }
        return report(r);
      },
      py::arg("a"), py::arg("xi0"), py::arg("v"), py::arg("s"), py::arg("control") = false);
  m.def(
      "blowup_noncancelling",
      [](const HomogeneousSymbol& a, std::vector<double> w, double s, int resolution, int levels) {
        NonCancellingConfig cfg;
        cfg.resolution = resolution;
        cfg.levels = levels;
        InequalityReport r;
        {
          py::gil_scoped_release nogil;
          r = blowup_noncancelling(a, w, s, cfg);
        }
        return report(r);
      },
      py::arg("a"), py::arg("w"), py::arg("s"), py::arg("resolution") = 1024, py::arg("levels") = 5);
  m.def(
      "wirtinger_blowup",
      [](const HomogeneousSymbol& a, std::vector<double> eta, std::vector<double> nu,
         std::vector<std::complex<double>> v, int levels, int res_tangent, int res_normal) {
        ComplexWitnessConfig cfg;
        cfg.levels = levels;
        cfg.res_tangent = res_tangent;
        cfg.res_normal = res_normal;
        InequalityReport r;
        {
          py::gil_scoped_release nogil;
          r = wirtinger_blowup(a, eta, nu, v, cfg);
        }
        return report(r);
      },
      py::arg("a"), py::arg("eta"), py::arg("nu"), py::arg("v"), py::arg("levels") = 7,
      py::arg("res_tangent") = 8192, py::arg("res_normal") = 512);

  // ---- demos
  m.def("strict_discontinuity_demo", [](int j) { return to_py(discontinuity_to_json(strict_discontinuity_demo(j))); },
        py::arg("j_levels"));
  m.def(
      "mollification_strict_check",
      [](const HomogeneousSymbol& a, const GridField& u, std::vector<double> eps, std::optional<double> target,
         const std::string& mode) {
        return to_py(strict_to_json(mollification_strict_check(a, u, std::move(eps), target, diff_mode(mode))));
      },
      py::arg("a"), py::arg("u"), py::arg("eps_levels"), py::arg("target") = py::none(),
      py::arg("mode") = "finite_difference");
}
