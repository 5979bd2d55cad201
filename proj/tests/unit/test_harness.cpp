#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ltrace/catalog.hpp"
#include "ltrace/classify.hpp"
#include "ltrace/errors.hpp"
#include "ltrace/harness.hpp"

using namespace ltrace;

namespace {
constexpr double kPi = std::numbers::pi;

GridField bump(const Grid& g, int comps = 1) {
  BumpFamily f;
  f.radius = 0.8;
  return bump_member(g, comps, f, 0);
}
}  // namespace

TEST(Exponents, ExactValues) {
  EXPECT_EQ(exponent_q(2, Rational(1, 2)), Rational(3, 2));
  EXPECT_EQ(exponent_q(3, Rational(0)), Rational(3, 2));
  EXPECT_EQ(exponent_beta(2, Rational(1, 2)), Rational(1, 3));
  EXPECT_EQ(exponent_adams_q(3, Rational(1, 2), Rational(1)), Rational(5, 4));
  auto [lo, hi] = theta_range(2, 0.95);
  EXPECT_NEAR(lo, 0.95 / 1.05, 1e-15);
  EXPECT_EQ(hi, 1.0);
  EXPECT_THROW(exponent_q(1, Rational(0)), DomainError);
}

TEST(TraceRatio, ZeroFieldIsError) {
  auto g = Grid::centered(2, 32, 4.0);
  GridField u(g, 2);
  auto mu = build_cantor_product(1.5, 2, 5);
  EXPECT_THROW(trace_ratio(catalog("sym_gradient", 2), u, mu, 0.5), DomainError);
}

TEST(TraceRatio, BadInputs) {
  auto g = Grid::centered(2, 32, 4.0);
  auto u = bump(g);
  auto mu = build_cantor_product(1.5, 2, 5);
  auto a = catalog("gradient", 2);
  EXPECT_THROW(trace_ratio(a, u, mu, 1.0), DomainError);
  EXPECT_THROW(trace_ratio(catalog("sym_gradient", 2), u, mu, 0.5), DimensionError);
}

TEST(Multiplicative, ThetaOneIsTraceRatio) {
  auto g = Grid::centered(2, 64, 4.0);
  auto u = bump(g, 2);
  auto a = catalog("sym_gradient", 2);
  std::vector<double> lo{-0.5, -0.5}, hi{0.5, 0.5};
  auto mu = build_cantor_product(1.5, 2, 6, lo, hi);
  auto t = trace_ratio(a, u, mu, 0.5);
  auto m = multiplicative_ratio(a, u, mu, 0.5, 1.0, t.morrey);
  EXPECT_EQ(t.ratio, m.ratio);
}

TEST(Multiplicative, RangeError) {
  auto g = Grid::centered(2, 32, 4.0);
  auto u = bump(g);
  auto mu = build_cantor_product(1.05, 2, 5);
  try {
    multiplicative_ratio(catalog("gradient", 2), u, mu, 0.95, 0.9, 1.0);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("s(n-1)/(n-s)"), std::string::npos);
  }
}

TEST(Adams, SingleModeClosedForm) {
  // u = sin(2 pi x1) on [0,1)^2, A = gradient: I_1 A[D]u = cos(2 pi x1)
  const int N = 64;
  auto g = Grid::cube(2, N, 1.0);
  auto u = sample_field(g, 1, [](std::span<const double> x, std::span<double> out) { out[0] = std::sin(2 * kPi * x[0]); });
  std::vector<double> origin{0.0, 0.0}, len{1.0, 1.0};
  std::vector<int> res{N, N};
  auto mu = lebesgue_node_measure(origin, len, res);
  const double s = 0.5, alpha = 1.0, q = (2 - s) / (2 - alpha);
  double sq = 0, s1 = 0;
  for (int j = 0; j < N; ++j) {
    double c = std::abs(std::cos(2 * kPi * j / N));
    sq += std::pow(c, q) / N;
    s1 += c / N;
  }
  const double expect = std::pow(sq, 1 / q) / (2 * kPi * s1);
  auto r = adams_ratio(catalog("gradient", 2), u, mu, s, alpha, 1.0);
  EXPECT_NEAR(r.ratio, expect, 1e-6 * expect);
}

TEST(Adams, AlphaEqualToSIsError) {
  auto g = Grid::centered(2, 32, 4.0);
  auto mu = build_cantor_product(1.5, 2, 5);
  EXPECT_THROW(adams_ratio(catalog("gradient", 2), bump(g), mu, 0.5, 0.5, 1.0), DomainError);
}

TEST(Sweep, SymGradientLebesgueStable) {
  std::vector<double> lo{-0.5, -0.5}, hi{0.5, 0.5};
  auto mu = lebesgue_measure(lo, hi, 64);
  SweepConfig cfg;
  cfg.family.count = 4;
  cfg.resolutions = {64, 128};
  auto r = sweep_sobolev(catalog("sym_gradient", 2), 0.0, mu, cfg);
  EXPECT_EQ(r.verdict, Boundedness::bounded);
  EXPECT_EQ(r.ratios.size(), 8u);
  EXPECT_EQ(r.q_exact, "2");
}

TEST(Halfspace, SupportAwayFromPlaneGivesZero) {
  auto g = Grid::centered(2, 64, 4.0);
  BumpFamily f;
  f.radius = 0.5;
  f.center = {0.0, 1.0};
  auto u = bump_member(g, 1, f, 0);
  auto t = halfspace_trace_ratio(catalog("gradient", 2), u, 1, 0.0, HalfspaceSide::both);
  EXPECT_EQ(t.lhs, 0.0);
  EXPECT_EQ(t.ratio, 0.0);
}

TEST(Halfspace, MisalignedPlane) {
  auto g = Grid::centered(2, 64, 4.0);
  EXPECT_THROW(halfspace_trace_ratio(catalog("gradient", 2), bump(g), 1, 0.01, HalfspaceSide::both), DomainError);
}

TEST(Halfspace, ExploratoryLabel) {
  HalfspaceConfig cfg;
  cfg.family.count = 3;
  cfg.resolutions = {64};
  cfg.exploratory = true;
  auto r = halfspace_sweep(catalog("gradient", 2), cfg);
  EXPECT_TRUE(r.exploratory);
  EXPECT_EQ(r.verdict, Boundedness::inconclusive);
}

TEST(GrowthVerdict, Synthetic) {
  std::vector<GrowthRow> up, flat, mixed;
  for (int j = 0; j < 6; ++j) {
    up.push_back({double(j), std::pow(1.3, j), 1.0, 0});
    flat.push_back({double(j), 1.0 + 0.01 * j, 1.0, 0});
    mixed.push_back({double(j), std::pow(1.3, j), std::pow(3.0, j), 0});
  }
  EXPECT_EQ(growth_verdict(up), Boundedness::diverging);
  EXPECT_EQ(growth_verdict(flat), Boundedness::bounded);
  EXPECT_EQ(growth_verdict(mixed), Boundedness::inconclusive);
}

TEST(Blowup, EllipticOperatorsRejected) {
  std::vector<double> xi{0.0, 1.0}, v{1.0, 0.0};
  EXPECT_THROW(blowup_nonelliptic(catalog("sym_gradient", 2), xi, v, 0.5), DomainError);
  std::vector<double> w{1.0, 0.0, 0.0};
  EXPECT_THROW(blowup_noncancelling(catalog("sym_gradient", 2), w, 0.5), DomainError);
  std::vector<double> eta{1.0, 0.0}, nu{0.0, 1.0};
  std::vector<std::complex<double>> cv{{1.0, 0.0}, {0.0, -1.0}};
  EXPECT_THROW(wirtinger_blowup(catalog("sym_gradient", 2), eta, nu, cv), DomainError);
}

TEST(Blowup, PartialDivergesControlBounded) {
  auto a = make_partial(2, 0);
  std::vector<double> xi{0.0, 1.0}, v{1.0};
  auto r = blowup_nonelliptic(a, xi, v, 0.5);
  EXPECT_EQ(r.verdict, Boundedness::diverging);
  EXPECT_EQ(r.beta_exact, "1/3");
  NonEllipticConfig c;
  c.control = true;
  EXPECT_EQ(blowup_nonelliptic(a, xi, v, 0.5, c).verdict, Boundedness::bounded);
}

TEST(Blowup, WirtingerComplexWitnessLogGrowth) {
  ComplexWitnessConfig cfg;
  cfg.levels = 5;
  cfg.res_tangent = 4096;
  cfg.res_normal = 256;
  std::vector<double> eta{1.0, 0.0}, nu{0.0, 1.0};
  std::vector<std::complex<double>> v{{1.0, 0.0}, {0.0, -1.0}};
  auto r = wirtinger_blowup(catalog("wirtinger", 2), eta, nu, v, cfg);
  ASSERT_EQ(r.growth.size(), 5u);
  for (std::size_t j = 1; j < r.growth.size(); ++j) EXPECT_GT(r.growth[j].lhs, r.growth[j - 1].lhs);
  double lo = 1e300, hi = 0;
  for (const auto& row : r.growth) {
    lo = std::min(lo, row.rhs);
    hi = std::max(hi, row.rhs);
  }
  EXPECT_LE(hi / lo, 2.0);
}
