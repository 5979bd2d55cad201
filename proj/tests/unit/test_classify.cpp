#include <gtest/gtest.h>

#include <cmath>

#include "ltrace/catalog.hpp"
#include "ltrace/classify.hpp"
#include "ltrace/symbol.hpp"

using namespace ltrace;

TEST(Elliptic, GradientMarginOne) {
  for (int n = 1; n <= 4; ++n) {
    auto r = check_ellipticity(catalog("gradient", n));
    EXPECT_EQ(r.verdict, Verdict::yes) << n;
    EXPECT_NEAR(r.margin, 1.0, 1e-9) << n;
  }
}

TEST(Elliptic, PartialHasWitnessOnPerpAxis) {
  auto r = check_ellipticity(make_partial(2, 0));
  ASSERT_EQ(r.verdict, Verdict::no);
  ASSERT_EQ(r.witness.size(), 2u);
  EXPECT_NEAR(std::abs(r.witness[0]), 0.0, 1e-6);
  EXPECT_NEAR(std::abs(r.witness[1]), 1.0, 1e-6);
  EXPECT_LT(r.witness_sigma, 1e-6);
}

TEST(Elliptic, SymGradientMargin) {
  auto r = check_ellipticity(catalog("sym_gradient", 2));
  EXPECT_EQ(r.verdict, Verdict::yes);
  EXPECT_NEAR(r.margin, 1.0 / std::sqrt(2.0), 1e-6);
}

TEST(Cancelling, LaplacianResidualOne) {
  for (int n = 2; n <= 3; ++n) {
    auto r = check_cancellation(catalog("laplacian", n));
    EXPECT_EQ(r.verdict, Verdict::no);
    EXPECT_EQ(r.residual_dim, 1);
    ASSERT_EQ(r.witness_w.size(), 1u);
    EXPECT_NEAR(std::abs(r.witness_w[0]), 1.0, 1e-12);
    EXPECT_LT(r.witness_distance, 1e-6);
  }
}

TEST(Cancelling, WirtingerFullImage) {
  auto r = check_cancellation(catalog("wirtinger", 2));
  EXPECT_EQ(r.verdict, Verdict::no);
  EXPECT_EQ(r.residual_dim, 2);
}

TEST(Cancelling, SymGradientYes) {
  EXPECT_EQ(check_cancellation(catalog("sym_gradient", 2)).verdict, Verdict::yes);
}

TEST(StrongCancelling, Examples) {
  EXPECT_EQ(check_strong_cancellation(catalog("sym_gradient", 3)).verdict, Verdict::yes);
  EXPECT_EQ(check_strong_cancellation(catalog("tracefree_sym_gradient", 2)).verdict, Verdict::no);
  EXPECT_EQ(check_strong_cancellation(catalog("escnotcell", 3, 2, 2)).verdict, Verdict::yes);
}

TEST(StrongCancelling, EqualsCancellingInTwoD) {
  for (const char* name : {"gradient", "laplacian", "wirtinger", "divcurl", "sym_gradient", "tracefree_sym_gradient"}) {
    auto a = catalog(name, 2);
    EXPECT_EQ(check_strong_cancellation(a).verdict, check_cancellation(a).verdict) << name;
  }
}

TEST(CElliptic, Examples) {
  auto e = check_c_ellipticity(catalog("sym_gradient", 2));
  EXPECT_EQ(e.verdict, Verdict::yes);
  ASSERT_TRUE(e.certificate_degree.has_value());
  EXPECT_EQ(*e.certificate_degree, 2);

  auto w = check_c_ellipticity(catalog("wirtinger", 2));
  EXPECT_EQ(w.verdict, Verdict::no);
  EXPECT_LT(w.residual, 1e-6);
  ASSERT_EQ(w.eta.size(), 2u);

  EXPECT_EQ(check_c_ellipticity(catalog("escnotcell", 3, 2, 2)).verdict, Verdict::no);
}

TEST(Nullspace, Examples) {
  EXPECT_EQ(nullspace_dimension(catalog("sym_gradient", 2), 1), (std::vector<int>{2, 3}));
  EXPECT_EQ(nullspace_dimension(catalog("gradient", 2), 5), std::vector<int>(6, 1));
  auto w = nullspace_dimension(catalog("wirtinger", 2), 4);
  for (int j = 0; j <= 4; ++j) EXPECT_EQ(w[static_cast<std::size_t>(j)], 2 * (j + 1));
}

TEST(Nullspace, StabilizesAfterCertificateDegree) {
  // sym_gradient has a degree 2 certificate: constant from m = 1 on
  auto d = nullspace_dimension(catalog("sym_gradient", 3), 4);
  for (std::size_t j = 1; j < d.size(); ++j) EXPECT_EQ(d[j], d[1]);
  EXPECT_EQ(d[1], 6);
}

TEST(ClassifyFull, Examples) {
  auto lap = classify_full(catalog("laplacian", 3));
  EXPECT_EQ(lap.elliptic.verdict, Verdict::yes);
  EXPECT_EQ(lap.cancelling.verdict, Verdict::no);
  EXPECT_EQ(lap.strongly_cancelling.verdict, Verdict::no);
  EXPECT_EQ(lap.c_elliptic.verdict, Verdict::no);

  auto tf = classify_full(catalog("tracefree_sym_gradient", 3));
  EXPECT_EQ(tf.elliptic.verdict, Verdict::yes);
  EXPECT_EQ(tf.cancelling.verdict, Verdict::yes);
  EXPECT_EQ(tf.strongly_cancelling.verdict, Verdict::yes);
  EXPECT_EQ(tf.c_elliptic.verdict, Verdict::yes);
}

TEST(ClassifyFull, DivCurlIsSquareEllipticNotCancelling) {
  // elliptic R^2 -> R^2, so im A[xi] = W everywhere; complex zero at (1, i)
  for (int n = 2; n <= 3; ++n) {
    auto r = classify_full(catalog("divcurl", n));
    EXPECT_EQ(r.elliptic.verdict, Verdict::yes) << n;
    EXPECT_EQ(r.cancelling.verdict, Verdict::no) << n;
    EXPECT_EQ(r.strongly_cancelling.verdict, Verdict::no) << n;
    EXPECT_EQ(r.c_elliptic.verdict, Verdict::no) << n;
    EXPECT_LT(r.c_elliptic.residual, 1e-10) << n;
  }
}

TEST(ClassifyFull, ScaleInvariance) {
  auto a = catalog("sym_gradient", 2);
  auto r1 = classify_full(a);
  auto r2 = classify_full(a.scaled(Rational(-3, 2)));
  EXPECT_EQ(r1.elliptic.verdict, r2.elliptic.verdict);
  EXPECT_EQ(r1.cancelling.verdict, r2.cancelling.verdict);
  EXPECT_EQ(r1.strongly_cancelling.verdict, r2.strongly_cancelling.verdict);
  EXPECT_EQ(r1.c_elliptic.verdict, r2.c_elliptic.verdict);
  EXPECT_NEAR(r2.elliptic.margin, 1.5 * r1.elliptic.margin, 1e-8);
}

TEST(ClassifyFull, ImplicationLattice) {
  for (const auto& name : catalog_names()) {
    auto r = classify_full(catalog(name, name == "wirtinger" ? 2 : 3));
    if (r.c_elliptic.verdict == Verdict::yes) {
      EXPECT_EQ(r.elliptic.verdict, Verdict::yes) << name;
      EXPECT_EQ(r.strongly_cancelling.verdict, Verdict::yes) << name;
    }
    if (r.strongly_cancelling.verdict == Verdict::yes) EXPECT_EQ(r.cancelling.verdict, Verdict::yes) << name;
  }
}
