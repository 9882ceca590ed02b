#include <gtest/gtest.h>

#include "algpt/counting.hpp"
#include "algpt/geometry.hpp"

using namespace algpt;

namespace {

AlgebraicPoint point(const IntPolynomial& p, int i, int j) {
  auto shared = std::make_shared<const IntPolynomial>(p);
  auto r = isolate_real_roots(p);
  return {shared, i, j, r[static_cast<std::size_t>(i)], r[static_cast<std::size_t>(j)]};
}

RationalCurve minus_x(Rational shift, Rational a, Rational b) { return RationalCurve({shift, Rational(-1)}, a, b); }

}  // namespace

TEST(ValidateRegion, Examples) {
  EXPECT_TRUE(validate_region(Rectangle(1, 2, -2, -1), DiagonalExclusion(Rational(1))));
  EXPECT_FALSE(validate_region(Rectangle(0, 1, 0, 1), DiagonalExclusion(Rational(1, 2))));
  Strip s(minus_x(0, 1, 2), RealValue(Rational(1, 10)));
  EXPECT_TRUE(validate_region(s, DiagonalExclusion(Rational(1))));
  EXPECT_THROW(DiagonalExclusion(Rational(0)), domain_error);
}

TEST(Rectangle, RejectsEmptySides) { EXPECT_THROW(Rectangle(1, 1, 0, 2), domain_error); }

TEST(PointInRectangle, Examples) {
  auto pt = point(IntPolynomial{-2, 0, 1}, 1, 0);  // (sqrt2, -sqrt2)
  EXPECT_TRUE(point_in_rectangle(pt, Rectangle(1, 2, -2, -1)));
  EXPECT_FALSE(point_in_rectangle(pt, Rectangle(0, 1, -2, -1)));
  // Open convention: a coordinate on the boundary is outside.
  auto lin = isolate_real_roots(IntPolynomial{-3, 1})[0];
  AlgebraicPoint raw{lin.poly, 0, 0, lin, lin};
  EXPECT_FALSE(point_in_rectangle(raw, Rectangle(2, 3, 2, 4)));
  EXPECT_TRUE(point_in_rectangle(raw, Rectangle(2, 4, 2, 4)));
}

TEST(PointInRectangle, SwapSymmetry) {
  const IntPolynomial p{1, -3, 0, 1};
  const Rectangle rects[] = {Rectangle(Rational(-2), Rational(-1), Rational(0), Rational(1)),
                             Rectangle(Rational(1, 3), Rational(3, 2), Rational(3, 2), Rational(2))};
  for (const auto& r : rects)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        EXPECT_EQ(point_in_rectangle(point(p, i, j), r), point_in_rectangle(point(p, j, i), r.swapped()));
      }
}

TEST(PointInStrip, Examples) {
  auto pt = point(IntPolynomial{-2, 0, 1}, 1, 0);
  EXPECT_TRUE(point_in_strip(pt, Strip(minus_x(0, 1, 2), RealValue(Rational(1, 10)))));
  EXPECT_FALSE(point_in_strip(pt, Strip(minus_x(-1, 1, 2), RealValue(Rational(1, 10)))));
  auto golden = point(IntPolynomial{-1, -1, 1}, 1, 0);  // (phi, 1 - phi)
  EXPECT_FALSE(point_in_strip(golden, Strip(minus_x(0, 1, 2), RealValue(Rational(1, 10)))));
}

TEST(PointInStrip, ExactBoundaryTieIsOutside) {
  // |(-sqrt2) - (1 - sqrt2)| = 1 = w exactly.
  auto pt = point(IntPolynomial{-2, 0, 1}, 1, 0);
  EXPECT_FALSE(point_in_strip(pt, Strip(minus_x(1, 1, 2), RealValue(Rational(1)))));
}

TEST(PointInStrip, RefinementInvariance) {
  auto pt = point(IntPolynomial{-1, -1, 1}, 1, 0);
  Strip s(minus_x(Rational(-1), 1, 2), RealValue(Rational(1, 2)));
  bool base = point_in_strip(pt, s);
  for (int k = 0; k < 10; ++k) {
    pt.first = halve(pt.first);
    pt.second = halve(pt.second);
    EXPECT_EQ(point_in_strip(pt, s), base);
  }
}

TEST(Strip, RejectsIdentityCurve) {
  EXPECT_THROW(Strip(RationalCurve({Rational(0), Rational(1)}, 0, 1), RealValue(Rational(1, 10))), domain_error);
}

TEST(Strip, ProvenanceWidth) {
  auto s = Strip::from_provenance(minus_x(0, 1, 2), Rational(1), Rational(1, 2), Integer(16));
  // w = (1/2 + 1) * 16^{-1/2} = 3/8
  auto w = s.half_width.exact();
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, Rational(3, 8));
  EXPECT_THROW(Strip::from_provenance(minus_x(0, 1, 2), Rational(1), Rational(3, 4), Integer(16)), domain_error);
}

TEST(Curve, SupOfDerivative) {
  RationalCurve cubic({Rational(0), Rational(0), Rational(0), Rational(1)}, Rational(-1), Rational(2));
  EXPECT_NEAR(cubic.c5().approx(), 12.0, 1e-12);
  EXPECT_TRUE(cubic.is_monotone());
  RationalCurve parabola({Rational(0), Rational(0), Rational(1)}, Rational(-1), Rational(2));
  EXPECT_FALSE(parabola.is_monotone());
  RationalCurve wiggle({Rational(0), Rational(-3), Rational(0), Rational(1)}, Rational(-3), Rational(3));
  EXPECT_NEAR(wiggle.c5().approx(), 24.0, 1e-12);  // 3t^2 - 3 at t = +/-3
}

TEST(PointsOf, Examples) {
  EXPECT_EQ(points_of(IntPolynomial{-2, 0, 1}).size(), 2u);
  EXPECT_TRUE(points_of(IntPolynomial{1, 0, 1}).empty());
  EXPECT_EQ(points_of(IntPolynomial{1, -3, 0, 1}).size(), 6u);
}

TEST(Rational, ParseExactLiterals) {
  EXPECT_EQ(parse_rational("3/2"), Rational(3, 2));
  EXPECT_EQ(parse_rational("-1.25"), Rational(-5, 4));
  EXPECT_EQ(parse_rational("0.1"), Rational(1, 10));
  EXPECT_THROW(parse_rational("1e3"), config_error);
  EXPECT_THROW(parse_rational("1/0"), config_error);
}
