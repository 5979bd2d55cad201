#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ltrace/errors.hpp"
#include "ltrace/measures.hpp"

using namespace ltrace;

namespace {
const double kCantorDim = std::log(2.0) / std::log(3.0);
}

TEST(Cantor, TernaryLevelFive) {
  auto mu = build_cantor_product(kCantorDim, 1, 5);
  ASSERT_EQ(mu.size(), 32u);
  for (double w : mu.weights) EXPECT_DOUBLE_EQ(w, 1.0 / 32.0);
  EXPECT_NEAR(mu.total_mass(), 1.0, 1e-15);
  // middle thirds: nothing in (1/3, 2/3)
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double x = mu.point(i)[0];
    EXPECT_TRUE(x < 1.0 / 3.0 || x > 2.0 / 3.0) << x;
  }
  EXPECT_NEAR(mu.dimension_alpha, kCantorDim, 1e-9);
}

TEST(Cantor, ProductDimensionArithmetic) {
  ProductSpec spec;
  spec.axes = {AxisSpec{AxisSpec::Kind::full}, AxisSpec{AxisSpec::Kind::cantor, 0.5}};
  EXPECT_NEAR(spec.axes[1].ratio(), 0.25, 1e-15);
  EXPECT_NEAR(spec.dimension(), 1.5, 1e-15);
  auto mu = build_cantor_product(1.5, 2, 6);
  EXPECT_NEAR(mu.dimension_alpha, 1.5, 1e-9);
  ASSERT_TRUE(mu.generator.has_value());
  EXPECT_NEAR(mu.generator->dimension(), 1.5, 1e-9);
}

TEST(Cantor, FullDimensionIsLebesgue) {
  auto mu = build_cantor_product(2.0, 2, 4);
  EXPECT_EQ(mu.size(), 256u);
  EXPECT_NEAR(mu.total_mass(), 1.0, 1e-14);
}

TEST(Cantor, AlphaOutOfRange) {
  EXPECT_THROW(build_cantor_product(2.5, 2, 4), DomainError);
  EXPECT_THROW(build_cantor_product(0.0, 2, 4), DomainError);
}

TEST(Cone, AxisPointFixedAndBoundaryLimit) {
  Cone c{{0.0, 0.0}, {0.0, 1.0}, std::numbers::pi / 6};
  std::vector<double> on_axis{0.0, 0.7};
  auto m1 = map_into_cone(point_mass(on_axis), c);
  ASSERT_EQ(m1.size(), 1u);
  EXPECT_NEAR(m1.point(0)[0], 0.0, 1e-15);
  EXPECT_NEAR(m1.point(0)[1], 0.7, 1e-15);

  const double d = 1e-6;
  std::vector<double> near_plane{std::cos(d), std::sin(d)};
  auto m2 = map_into_cone(point_mass(near_plane), c);
  double polar = std::acos(m2.point(0)[1]);
  EXPECT_NEAR(polar, std::numbers::pi / 6, 1e-5);
  EXPECT_NEAR(std::hypot(m2.point(0)[0], m2.point(0)[1]), 1.0, 1e-14);
}

TEST(Cone, PreservesMassAndStaysInCone) {
  Cone c{{0.0, 0.0}, {0.0, 1.0}, 0.5};
  auto mu = build_cone_cantor(1.5, 2, 6, c, 0.5);
  EXPECT_NEAR(mu.total_mass(), 1.0, 1e-12);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto p = mu.point(i);
    double r = std::hypot(p[0], p[1]);
    if (r < 1e-12) continue;
    EXPECT_LE(std::acos(std::abs(p[1]) / r), 0.5 + 1e-9);
  }
}

TEST(Cone, CantorLineProfileDistortion) {
  // ternary cantor on the x1 axis, box [0,1] x {0}, pushed into a cone
  std::vector<double> lo{0.05, 0.0}, hi{1.05, 1.0};
  ProductSpec spec;
  spec.axes = {AxisSpec{AxisSpec::Kind::cantor, kCantorDim}, AxisSpec{AxisSpec::Kind::point, 1.0, 0.5}};
  spec.lo = {0.0, 0.05};
  spec.hi = {1.0, 1.05};
  spec.level = 10;
  auto mu = build_product(spec);
  Cone c{{0.0, 0.0}, {0.0, 1.0}, std::numbers::pi / 6};
  auto img = map_into_cone(mu, c);
  std::vector<double> apex{0.0, 0.0};
  std::vector<double> radii{1.0, 0.75, 0.6};
  auto before = ahlfors_profile(mu, kCantorDim, apex, radii);
  auto after = ahlfors_profile(img, kCantorDim, apex, radii);
  double q0 = before.M_hat / before.m_hat, q1 = after.M_hat / after.m_hat;
  EXPECT_LE(q1, 8.0 * q0);
}

TEST(Ahlfors, TernaryExactAtTriadicRadii) {
  auto mu = build_cantor_product(kCantorDim, 1, 10);
  std::vector<double> c{0.0}, radii;
  for (int i = 1; i <= 5; ++i) radii.push_back(std::pow(3.0, -i));
  auto p = ahlfors_profile(mu, kCantorDim, c, radii);
  for (const auto& row : p.rows) EXPECT_NEAR(row.ratio, 1.0, 1e-9) << row.r;
}

TEST(Ahlfors, LebesgueAndHyperplane) {
  std::vector<double> lo{0.0, 0.0}, hi{1.0, 1.0}, c{0.5, 0.5};
  auto leb = lebesgue_measure(lo, hi, 512);
  std::vector<double> radii{0.25, 0.125};
  for (const auto& row : ahlfors_profile(leb, 2.0, c, radii).rows)
    EXPECT_NEAR(row.ratio / std::numbers::pi, 1.0, 0.02) << row.r;

  auto hp = hyperplane_measure(2, 1, 0.5, lo, hi, 1024);
  for (const auto& row : ahlfors_profile(hp, 1.0, c, radii).rows) EXPECT_NEAR(row.ratio, 2.0, 0.02) << row.r;
}

TEST(Ahlfors, UnresolvableThrows) {
  auto mu = build_cantor_product(kCantorDim, 1, 1);
  std::vector<double> c{0.0};
  EXPECT_THROW(ahlfors_profile(mu, kCantorDim, c), DomainError);
}

TEST(Ahlfors, CatalogSpreadBound) {
  for (auto [alpha, n] : {std::pair{0.5, 1}, std::pair{1.5, 2}, std::pair{2.5, 3}}) {
    auto mu = build_cantor_product(alpha, n, 6);
    std::vector<double> c(static_cast<std::size_t>(n), 0.0);
    auto p = ahlfors_profile(mu, alpha, c);
    EXPECT_LE(p.M_hat / p.m_hat, 16.0) << alpha;
  }
}

TEST(Morrey, LebesgueIsPi) {
  std::vector<double> lo{0.0, 0.0}, hi{1.0, 1.0};
  auto est = estimate_morrey_norm(lebesgue_measure(lo, hi, 256), 2.0);
  EXPECT_NEAR(est.value / std::numbers::pi, 1.0, 0.02);
}

TEST(Morrey, PointMassLambdaZero) {
  std::vector<double> x{0.0, 0.0};
  EXPECT_DOUBLE_EQ(estimate_morrey_norm(point_mass(x, 2.5), 0.0).value, 2.5);
}

TEST(Morrey, CantorAtLeastOneAndMonotone) {
  auto mu = build_cantor_product(kCantorDim, 1, 10);
  double few = estimate_morrey_norm(mu, kCantorDim, 8).value;
  double many = estimate_morrey_norm(mu, kCantorDim, 512).value;
  EXPECT_GE(few, 1.0 - 1e-12);
  EXPECT_GE(many, few);
}

TEST(Shells, PointMassSingleShell) {
  std::vector<double> c{0.0, 0.0}, x{1.0, 0.0};
  for (double alpha : {0.5, 1.0, 2.0}) {
    auto s = shell_divergence_sums(point_mass(x), alpha, c, 6);
    for (double v : s.partial) EXPECT_EQ(v, 1.0);
  }
}

TEST(Shells, LebesgueGrowsLinearly) {
  std::vector<double> lo{-0.5, -0.5}, hi{0.5, 0.5}, c{0.0, 0.0};
  auto s = shell_divergence_sums(lebesgue_measure(lo, hi, 1024), 2.0, c, 5, 1);
  const double per_shell = 2 * std::numbers::pi * std::log(2.0);
  for (std::size_t i = 1; i < s.shell.size(); ++i) EXPECT_NEAR(s.shell[i] / per_shell, 1.0, 0.05);
  EXPECT_NEAR(s.slope / per_shell, 1.0, 0.05);
}

TEST(Shells, CantorSlopePositive) {
  auto mu = build_cantor_product(kCantorDim, 1, 13);
  std::vector<double> c{0.0};
  auto s = shell_divergence_sums(mu, kCantorDim, c, 10, 4);
  EXPECT_GT(s.slope, 0.0);
}

TEST(BallCounter, AgreesWithDirectCount) {
  auto mu = build_cantor_product(1.5, 2, 6);
  BallCounter bc(mu);
  std::vector<double> c{0.3, 0.6};
  for (double r : {0.05, 0.1, 0.3}) EXPECT_NEAR(bc.mass(c, r), ball_mass(mu, c, r), 1e-14);
}

TEST(Measure, ValidateRejectsBadWeights) {
  std::vector<double> x{0.0};
  auto mu = point_mass(x);
  mu.weights[0] = -1.0;
  EXPECT_THROW(mu.validate(), DomainError);
}
