#include <gtest/gtest.h>

#include "ltrace/catalog.hpp"
#include "ltrace/certificate.hpp"
#include "ltrace/errors.hpp"

using namespace ltrace;

TEST(Certificate, GradientDegreeOne) {
  auto a = catalog("gradient", 3);
  auto s = search_certificate(a, 3);
  ASSERT_TRUE(s.certificate.has_value());
  EXPECT_EQ(s.certificate->d, 1);
  EXPECT_EQ(s.certificate->alphas.size(), 3u);
  auto c = verify_certificate(a, *s.certificate);
  EXPECT_TRUE(c.exact);
  EXPECT_EQ(c.max_defect, Rational(0));
  EXPECT_LE(c.grid_relative_error, 1e-8);
}

TEST(Certificate, SymGradientDegreeTwo) {
  for (int n = 2; n <= 3; ++n) {
    auto a = catalog("sym_gradient", n);
    auto s = search_certificate(a, 4);
    ASSERT_TRUE(s.certificate.has_value());
    EXPECT_EQ(s.certificate->d, 2);
    auto c = verify_certificate(a, *s.certificate);
    EXPECT_TRUE(c.exact);
    EXPECT_LE(c.grid_relative_error, 1e-8);
  }
}

TEST(Certificate, PerturbedCoefficientFails) {
  auto a = catalog("sym_gradient", 2);
  auto cert = *search_certificate(a, 4).certificate;
  auto& p = cert.blocks[0](0, 0);
  p.add_term(MultiIndex({1, 0}), Rational(1));
  auto c = verify_certificate(a, cert, false);
  EXPECT_FALSE(c.exact);
  EXPECT_GT(c.max_defect, Rational(0));
}

TEST(Certificate, WirtingerNotFound) {
  auto s = search_certificate(catalog("wirtinger", 2), 6);
  EXPECT_FALSE(s.certificate.has_value());
  EXPECT_EQ(s.d_max, 6);
}

TEST(Certificate, NotFoundWhenComplexKernelExists) {
  // det [[x, y], [-y, x]] = x^2 + y^2 vanishes at (1, i)
  EXPECT_FALSE(search_certificate(catalog("divcurl", 2), 5).certificate.has_value());
  EXPECT_FALSE(search_certificate(catalog("laplacian", 2), 5).certificate.has_value());
}

TEST(Certificate, TracefreeDegreeThree) {
  auto a = catalog("tracefree_sym_gradient", 3);
  auto s = search_certificate(a, 5);
  ASSERT_TRUE(s.certificate.has_value());
  EXPECT_EQ(s.certificate->d, 3);
  EXPECT_TRUE(verify_certificate(a, *s.certificate, false).exact);
}

TEST(Certificate, StackedShape) {
  auto cert = *search_certificate(catalog("gradient", 2), 2).certificate;
  auto b = stacked_certificate(cert);
  EXPECT_EQ(b.rows(), 2);
  EXPECT_EQ(b.cols(), 2);
}

TEST(Certificate, DimensionMismatch) {
  auto cert = *search_certificate(catalog("gradient", 2), 2).certificate;
  EXPECT_THROW(verify_certificate(catalog("gradient", 3), cert), Error);
}
