#include <gtest/gtest.h>

#include "ltrace/errors.hpp"
#include "ltrace/rational.hpp"

using namespace ltrace;

TEST(Rational, ParsesFractionsIntegersDecimals) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-7"), Rational(-7));
  EXPECT_EQ(parse_rational("-0.25"), Rational(-1, 4));
  EXPECT_EQ(parse_rational("1.5"), Rational(3, 2));
}

TEST(Rational, RejectsGarbage) {
  EXPECT_THROW(parse_rational("abc"), Error);
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational(""), Error);
}

TEST(Rational, ToStringCanonical) {
  EXPECT_EQ(to_string(parse_rational("4/8")), "1/2");
  EXPECT_EQ(to_string(parse_rational("6/3")), "2");
  EXPECT_EQ(to_string(Rational(-1, 3)), "-1/3");
  EXPECT_EQ(to_string(Rational(1, 4) + Rational(1, 4)), "1/2");
}

TEST(Rational, FromDoubleIsExact) {
  EXPECT_EQ(rational_from_double(0.375), Rational(3, 8));
  const double x = 0.1;
  EXPECT_EQ(to_double(rational_from_double(x)), x);
  EXPECT_NE(rational_from_double(0.1), Rational(1, 10));
}

TEST(MultiIndex, OrderAndArithmetic) {
  MultiIndex a({2, 1, 0});
  EXPECT_EQ(a.order(), 3);
  EXPECT_EQ(a + MultiIndex::unit(3, 2), MultiIndex({2, 1, 1}));
  EXPECT_TRUE(a.dominates(MultiIndex({1, 1, 0})));
  EXPECT_FALSE(a.dominates(MultiIndex({0, 0, 1})));
  EXPECT_EQ(a - MultiIndex({1, 0, 0}), MultiIndex({1, 1, 0}));
}

TEST(MultiIndex, EnumerationIsDescendingLex) {
  auto m = multi_indices(2, 2);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0], MultiIndex({2, 0}));
  EXPECT_EQ(m[1], MultiIndex({1, 1}));
  EXPECT_EQ(m[2], MultiIndex({0, 2}));
  EXPECT_EQ(multi_indices(3, 3).size(), 10u);
  EXPECT_EQ(multi_indices(4, 0).size(), 1u);
}

TEST(MultiIndex, Combinatorics) {
  EXPECT_EQ(multinomial(MultiIndex({1, 1})), 2);
  EXPECT_EQ(multinomial(MultiIndex({2, 1, 1})), 12);
  EXPECT_EQ(falling_factorial(MultiIndex({3, 2}), MultiIndex({2, 1})), 6 * 2);
  EXPECT_EQ(binomial(6, 2), 15);
  EXPECT_EQ(binomial(5, 0), 1);
}
