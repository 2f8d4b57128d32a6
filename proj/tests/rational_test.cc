#include <gtest/gtest.h>

#include "altkit/errors.h"
#include "altkit/rational.h"

namespace altkit {
namespace {

TEST(Rational, ParsesFractionsAndIntegers) {
  EXPECT_EQ(parse_rational("3/4"), Rational(3, 4));
  EXPECT_EQ(parse_rational("-6/8"), Rational(-3, 4));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational(" -2 "), Rational(-2));
}

TEST(Rational, DecimalsAreExact) {
  EXPECT_EQ(parse_rational("1.1"), Rational(11, 10));
  EXPECT_EQ(parse_rational("-0.25"), Rational(-1, 4));
  EXPECT_EQ(parse_rational("3e-2"), Rational(3, 100));
  EXPECT_EQ(parse_rational("1.5E2"), Rational(150));
}

TEST(Rational, RejectsGarbage) {
  EXPECT_THROW(parse_rational("1/0"), InvalidArgument);
  EXPECT_THROW(parse_rational("abc"), InvalidArgument);
  EXPECT_THROW(parse_rational(""), InvalidArgument);
  EXPECT_THROW(parse_rational("1/2/3"), InvalidArgument);
}

TEST(Rational, ToStringDropsUnitDenominator) {
  EXPECT_EQ(to_string(Rational(6, 3)), "2");
  EXPECT_EQ(to_string(Rational(-1, 3)), "-1/3");
}

TEST(Rational, FromDoubleIsExact) {
  EXPECT_EQ(rational_from_double(0.5), Rational(1, 2));
  EXPECT_EQ(rational_from_double(0.1).get_d(), 0.1);
}

TEST(Rational, Factorial) {
  EXPECT_EQ(factorial(0), 1);
  EXPECT_EQ(factorial(5), 120);
  EXPECT_EQ(factorial(20), Integer("2432902008176640000"));
}

}  // namespace
}  // namespace altkit
