#include <gtest/gtest.h>

#include "manna/scalar.hpp"

namespace manna {
namespace {

TEST(Scalar, ParsesIntegersFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-1/4"), Rational(-1, 4));
  EXPECT_EQ(parse_rational("0.125"), Rational(1, 8));
  EXPECT_EQ(parse_rational("-2.5"), Rational(-5, 2));
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(parse_rational("-1e-3"), Rational(-1, 1000));
}

TEST(Scalar, LeadingZerosAreDecimalNotOctal) {
  EXPECT_EQ(parse_rational("010"), Rational(10));
  EXPECT_EQ(parse_rational("0.09"), Rational(9, 100));
  EXPECT_EQ(parse_rational("08/09"), Rational(8, 9));
}

TEST(Scalar, RejectsMalformedText) {
  for (const char* bad : {"", "abc", "1/0", "1//2", "1.2.3", "--1", "1e"})
    EXPECT_THROW(parse_rational(bad), std::invalid_argument) << bad;
}

TEST(Scalar, FormatRoundTrips) {
  for (const Rational& v : {Rational(0), Rational(7), Rational(-5, 6), Rational(33, 34)})
    EXPECT_EQ(parse_rational(format_rational(v)), v);
  EXPECT_EQ(format_rational(Rational(-5, 6)), "-5/6");
  EXPECT_EQ(format_rational(Rational(4)), "4");
}

TEST(Scalar, FromDoubleIsExactForDyadicsAndShortForDecimals) {
  EXPECT_EQ(rational_from_double(0.375), Rational(3, 8));
  EXPECT_EQ(rational_from_double(0.1), Rational(1, 10));
  EXPECT_EQ(rational_from_double(-3.5), Rational(-7, 2));
  EXPECT_EQ(rational_from_double(0.0), Rational(0));
  EXPECT_THROW(rational_from_double(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

}  // namespace
}  // namespace manna
