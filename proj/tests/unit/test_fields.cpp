#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ltrace/catalog.hpp"
#include "ltrace/errors.hpp"
#include "ltrace/fields.hpp"
#include "ltrace/measures.hpp"

using namespace ltrace;

namespace {
constexpr double kPi = std::numbers::pi;

GridField scalar(const Grid& g, double (*f)(double, double)) {
  return sample_field(g, 1, [f](std::span<const double> x, std::span<double> out) { out[0] = f(x[0], x[1]); });
}
double sin1(double x, double) { return std::sin(2 * kPi * x); }
double sinsin(double x, double y) { return std::sin(2 * kPi * x) * std::sin(2 * kPi * y); }

double max_diff(const GridField& a, const GridField& b) { return (a - b).max_abs(); }
}  // namespace

TEST(Grid, NodesAndRavel) {
  auto g = Grid::cube(2, 8, 1.0);
  EXPECT_EQ(g.size(), 64u);
  std::vector<double> x(2);
  g.node(9, x);
  EXPECT_DOUBLE_EQ(x[0], 0.125);
  EXPECT_DOUBLE_EQ(x[1], 0.125);
  std::vector<int> idx(2);
  g.unravel(9, idx);
  EXPECT_EQ(g.ravel(idx), 9u);
  auto c = Grid::centered(2, 8, 2.0);
  c.node(0, x);
  EXPECT_DOUBLE_EQ(x[0], -1.0);
}

TEST(ApplySymbol, GradientOfSine) {
  auto g = Grid::cube(2, 64, 1.0);
  auto u = scalar(g, sin1);
  auto du = apply_symbol(catalog("gradient", 2), u);
  auto expect = sample_field(g, 2, [](std::span<const double> x, std::span<double> out) {
    out[0] = 2 * kPi * std::cos(2 * kPi * x[0]);
    out[1] = 0.0;
  });
  EXPECT_LE(max_diff(du, expect), 1e-11);
}

TEST(ApplySymbol, LaplacianOfProduct) {
  auto g = Grid::cube(2, 32, 1.0);
  auto u = scalar(g, sinsin);
  // catalog laplacian is -Delta
  auto lu = apply_symbol(catalog("laplacian", 2), u);
  EXPECT_LE(max_diff(lu, u.scaled(8 * kPi * kPi)), 1e-9);
}

TEST(ApplySymbol, SymGradientOffDiagonal) {
  auto g = Grid::cube(2, 32, 1.0);
  auto u = sample_field(g, 2, [](std::span<const double> x, std::span<double> out) {
    out[0] = std::sin(2 * kPi * x[1]);
    out[1] = 0.0;
  });
  auto e = apply_symbol(catalog("sym_gradient", 2), u);
  ASSERT_EQ(e.components(), 3);
  for (std::size_t i = 0; i < e.nodes(); ++i) {
    std::vector<double> x(2);
    g.node(i, x);
    EXPECT_NEAR(e.at(1, i), 0.5 * 2 * kPi * std::cos(2 * kPi * x[1]), 1e-10);
    EXPECT_NEAR(e.at(0, i), 0.0, 1e-10);
  }
}

TEST(ApplySymbol, FiniteDifferenceConverges) {
  auto g = Grid::cube(2, 256, 1.0);
  auto u = scalar(g, sinsin);
  auto a = catalog("gradient", 2);
  auto ref = apply_symbol(a, u);
  double e2 = max_diff(apply_symbol(a, u, DiffMode::finite_difference, 2), ref) / ref.max_abs();
  double e4 = max_diff(apply_symbol(a, u, DiffMode::finite_difference, 4), ref) / ref.max_abs();
  EXPECT_LT(e2, 1e-3);
  EXPECT_LT(e4, 1e-6);
}

TEST(ApplySymbol, ComponentMismatch) {
  auto g = Grid::cube(2, 8, 1.0);
  GridField u(g, 2);
  EXPECT_THROW(apply_symbol(catalog("gradient", 2), u), DimensionError);
}

TEST(DerivativeTensor, OrdersZeroOneTwo) {
  auto g = Grid::cube(2, 32, 1.0);
  auto u = scalar(g, sin1);
  EXPECT_LE(max_diff(derivative_tensor(u, 0), u), 0.0);
  auto d2 = derivative_tensor(u, 2);
  ASSERT_EQ(d2.components(), 3);
  for (std::size_t i = 0; i < d2.nodes(); ++i) {
    EXPECT_NEAR(d2.at(0, i), -4 * kPi * kPi * u.at(0, i), 1e-9);
    EXPECT_NEAR(d2.at(1, i), 0.0, 1e-9);
    EXPECT_NEAR(d2.at(2, i), 0.0, 1e-9);
  }
  EXPECT_DOUBLE_EQ(d2.weights()[1], 2.0);
}

TEST(Riesz, SingleModeAndSemigroup) {
  auto g = Grid::cube(2, 32, 1.0);
  auto u = scalar(g, sin1);
  EXPECT_LE(max_diff(riesz_potential(u, 1.0), u.scaled(1.0 / (2 * kPi))), 1e-12);
  auto f = random_band_limited(g, 1, 4, 3);
  EXPECT_LE(max_diff(riesz_potential(riesz_potential(f, 0.4), 0.7), riesz_potential(f, 1.1)), 1e-10);
  EXPECT_LE(max_diff(riesz_potential(riesz_potential(f, 0.8), -0.8), f), 1e-10);
}

TEST(Mollify, ConstantAndMean) {
  auto g = Grid::cube(2, 64, 1.0);
  GridField c(g, 1);
  for (auto& v : c.values()) v = 3.25;
  EXPECT_LE(max_diff(mollify(c, 0.1), c), 1e-12);
  auto f = random_band_limited(g, 1, 5, 9);
  for (auto& v : f.values()) v += 0.5;
  auto m = mollify(f, 0.08);
  double s0 = 0, s1 = 0;
  for (std::size_t i = 0; i < f.nodes(); ++i) {
    s0 += f.at(0, i);
    s1 += m.at(0, i);
  }
  EXPECT_NEAR(s0, s1, 1e-10);
}

TEST(Mollify, IndicatorDistanceDecreases) {
  auto g = Grid::centered(2, 256, 4.0);
  auto u = sample_field(g, 1, [](std::span<const double> x, std::span<double> out) {
    out[0] = x[0] * x[0] + x[1] * x[1] <= 1.0 ? 1.0 : 0.0;
  });
  double prev = 1e300;
  for (double eps : {0.4, 0.2, 0.1, 0.05}) {
    double d = lebesgue_norm(mollify(u, eps) - u, 1.0);
    EXPECT_LT(d, prev) << eps;
    prev = d;
  }
}

TEST(Norms, LebesgueExamples) {
  auto g = Grid::cube(2, 64, 1.0);
  GridField one(g, 1);
  for (auto& v : one.values()) v = 1.0;
  for (double p : {1.0, 1.5, 2.0, 4.0}) EXPECT_NEAR(lebesgue_norm(one, p), 1.0, 1e-13);
  auto u = scalar(g, sin1);
  EXPECT_NEAR(lebesgue_norm(u, 2.0), 1.0 / std::sqrt(2.0), 1e-10);
  const int n = 64;
  auto gn = Grid::cube(2, n, 1.0, 0.3 / n);  // no node on the crest
  double mx = lebesgue_norm(scalar(gn, sin1), INFINITY);
  EXPECT_LE(std::abs(mx - 1.0), std::pow(kPi / n, 2) / 2);
}

TEST(Norms, MeasureNorm) {
  auto g = Grid::cube(2, 64, 1.0);
  GridField one(g, 1);
  for (auto& v : one.values()) v = 1.0;
  auto mu = build_cantor_product(1.3, 2, 5);
  EXPECT_NEAR(measure_norm(one, mu, 1.7), 1.0, 1e-13);

  auto x1 = sample_field(g, 1, [](std::span<const double> x, std::span<double> out) { out[0] = x[0]; });
  std::vector<double> c{0.5, 0.5};
  EXPECT_NEAR(measure_norm(x1, point_mass(c), 1.0), 0.5, 1e-12);
}

TEST(Norms, MeasureNormMatchesLebesgueOnBump) {
  for (int res : {128, 256}) {
    auto g = Grid::centered(2, res, 2.0);
    auto u = sample_field(g, 1, [](std::span<const double> x, std::span<double> out) {
      double r2 = x[0] * x[0] + x[1] * x[1];
      out[0] = r2 < 0.64 ? std::exp(1.0 - 1.0 / (1.0 - r2 / 0.64)) : 0.0;
    });
    std::vector<double> lo{-1.0, -1.0}, hi{1.0, 1.0};
    auto mu = lebesgue_measure(lo, hi, res);
    for (double q : {1.0, 2.0}) EXPECT_NEAR(measure_norm(u, mu, q) / lebesgue_norm(u, q), 1.0, 0.01) << res;
  }
}

TEST(Planes, HyperplaneAndHalfspace) {
  auto g = Grid::centered(2, 64, 2.0);
  GridField one(g, 1);
  for (auto& v : one.values()) v = 1.0;
  EXPECT_NEAR(hyperplane_l1(one, 1, 32), 2.0, 1e-12);
  // half weight on the plane; the far edge is not a node of the periodic grid
  EXPECT_NEAR(halfspace_l1(one, 1, 32), 2.0 * 31.5 / 32.0, 1e-12);
}

TEST(Spectra, RoundTrip) {
  auto g = Grid::cube(3, 16, 1.0);
  auto f = random_band_limited(g, 2, 3, 5);
  EXPECT_LE(max_diff(from_spectra(g, spectra(f)), f), 1e-13);
  EXPECT_TRUE(f.band_limited());
}
