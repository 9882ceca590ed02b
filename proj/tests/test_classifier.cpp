#include <random>

#include <gtest/gtest.h>

#include "algpt/classifier.hpp"

using namespace algpt;

namespace {

SquareBox rational_box(const Rational& d1, const Rational& d2, const Rational& side) {
  return {RealValue(d1 - side / 2), RealValue(d1 + side / 2), RealValue(d2 - side / 2), RealValue(d2 + side / 2)};
}

// Full scan of (b2, b1, b0) in lexicographic order through sublevel sets;
// shares no search code with classify_box.
std::optional<QuadraticWitness> brute_force(const SquareBox& box, const ClassifierParams& p) {
  const long Q = p.Q.get_si();
  const Rational bound1 = *ScaledPower(p.C, p.Q, -p.u1).exact();
  const Rational bound2 = *ScaledPower(p.C, p.Q, -p.u2).exact();
  auto hits = [](const IntPolynomial& P, const Rational& bound, const RealValue& lo, const RealValue& hi) {
    for (const auto& iv : sublevel_intervals(P, bound)) {
      auto m = meets(iv, lo, hi);
      if (m && *m) return true;
    }
    return false;
  };
  for (long b2 = -Q; b2 <= Q; ++b2) {
    if (ScaledPower(Rational(1), p.Q, p.s - Rational(1, 2)).compare(Rational(std::labs(b2))) !=
        std::strong_ordering::less)
      continue;
    if (b2 == 0 && p.require_quadratic) continue;
    for (long b1 = -Q; b1 <= Q; ++b1)
      for (long b0 = -Q; b0 <= Q; ++b0) {
        IntPolynomial P{b0, b1, b2};
        if (P.is_zero()) continue;
        if (hits(P, bound1, box.lo1, box.hi1) && hits(P, bound2, box.lo2, box.hi2)) return QuadraticWitness{b2, b1, b0};
      }
  }
  return std::nullopt;
}

}  // namespace

TEST(Sublevel, Examples) {
  auto a = sublevel_intervals(IntPolynomial{0, 1}, Rational(1, 2));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(detail::root_value(*a[0].lo).exact(), Rational(-1, 2));
  EXPECT_EQ(detail::root_value(*a[0].hi).exact(), Rational(1, 2));
  EXPECT_TRUE(sublevel_intervals(IntPolynomial{1, 0, 1}, Rational(1, 2)).empty());
  auto c = sublevel_intervals(IntPolynomial{-2, 0, 1}, Rational(1));
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(detail::root_value(*c[0].lo).enclose(64).lo.get_d(), -std::sqrt(3.0), 1e-12);
  EXPECT_EQ(detail::root_value(*c[0].hi).exact(), Rational(-1));
  EXPECT_EQ(detail::root_value(*c[1].lo).exact(), Rational(1));
  EXPECT_NEAR(detail::root_value(*c[1].hi).enclose(64).hi.get_d(), std::sqrt(3.0), 1e-12);
}

TEST(Sublevel, ConstantAndErrors) {
  auto all = sublevel_intervals(IntPolynomial{1}, Rational(2));
  ASSERT_EQ(all.size(), 1u);
  EXPECT_FALSE(all[0].lo);
  EXPECT_FALSE(all[0].hi);
  EXPECT_TRUE(sublevel_intervals(IntPolynomial{3}, Rational(2)).empty());
  EXPECT_THROW(sublevel_intervals(IntPolynomial{}, Rational(1)), domain_error);
  EXPECT_THROW(sublevel_intervals(IntPolynomial{0, 1}, Rational(0)), domain_error);
}

TEST(Sublevel, Measure) {
  auto set = sublevel_intervals(IntPolynomial{0, 0, 1}, Rational(1, 100));
  auto m = sublevel_measure(set, Rational(0), Rational(1), Rational(1, 1000000));
  EXPECT_LE(m.lo, Rational(1, 10));
  EXPECT_GE(m.hi, Rational(1, 10));
}

TEST(B2Limit, ExactPowers) {
  EXPECT_EQ(detail::b2_limit(Integer(16), Rational(3, 4)), 1);  // 16^{1/4} = 2 excluded
  EXPECT_EQ(detail::b2_limit(Integer(81), Rational(3, 4)), 2);  // 81^{1/4} = 3 excluded
  EXPECT_EQ(detail::b2_limit(Integer(16), Rational(3, 5)), 1);
  EXPECT_EQ(detail::b2_limit(Integer(4), Rational(11, 20)), 1);
}

// Both squares are special: |b2| = 1 is admitted because Q^{s-1/2} > 1.
TEST(ClassifySquare, ReferenceSquares) {
  SquareSpec a{3, -3, RealValue(Rational(1, 10)), Rational(3, 5), Integer(16)};
  auto ca = classify_square(a);
  EXPECT_EQ(ca.verdict, Verdict::special);
  ASSERT_TRUE(ca.witness);
  EXPECT_EQ(*ca.witness, (QuadraticWitness{-1, 0, 9}));
  EXPECT_TRUE(witness_valid(a.box(), {a.Q, a.s}, *ca.witness));

  SquareSpec b{Rational(3, 10), Rational(-7, 10), RealValue(Rational(1, 20)), Rational(11, 20), Integer(4)};
  auto cb = classify_square(b);
  EXPECT_EQ(cb.verdict, Verdict::special);
  ASSERT_TRUE(cb.witness);
  EXPECT_EQ(*cb.witness, (QuadraticWitness{-1, -1, 0}));
  EXPECT_TRUE(witness_valid(b.box(), {b.Q, b.s}, *cb.witness));

  // Linear witnesses alone cannot serve the first square: t - 3 is 6 at -3.
  EXPECT_FALSE(witness_valid(a.box(), {a.Q, a.s}, QuadraticWitness{0, 1, -3}));
}

TEST(ClassifySquare, ZeroConstantIsOrdinary) {
  SquareSpec a{3, -3, RealValue(Rational(1, 10)), Rational(3, 5), Integer(16)};
  a.C = 0;
  EXPECT_EQ(classify_square(a).verdict, Verdict::ordinary);
}

TEST(ClassifySquare, Validation) {
  SquareSpec a{0, 0, RealValue(Rational(1, 10)), Rational(1, 2), Integer(16)};
  EXPECT_THROW(classify_square(a), config_error);
  a.s = Rational(3, 5);
  a.u1 = Rational(1, 3);
  EXPECT_THROW(classify_square(a), config_error);
}

TEST(ClassifyBox, MatchesBruteForce) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> centre(-250, 250);
  int special = 0, total = 0;
  for (long Q : {4L, 9L}) {
    for (int k = 0; k < 15; ++k) {
      const Rational d1 = make_rational(centre(rng), 100), d2 = make_rational(centre(rng), 100);
      const ClassifierParams p{Integer(Q), Rational(3, 5), Rational(1, 2), Rational(1, 2), Rational(1), false};
      auto box = rational_box(d1, d2, Rational(1, 10));
      auto got = classify_box(box, p, 2);
      auto want = brute_force(box, p);
      ++total;
      special += want.has_value();
      EXPECT_EQ(got.verdict == Verdict::special, want.has_value()) << to_string(d1) << "," << to_string(d2);
      if (want && got.witness) {
        EXPECT_EQ(*got.witness, *want);
      }
    }
  }
  EXPECT_GT(special, 0);
  EXPECT_LT(special, total);
}

TEST(ClassifyBox, WitnessesAreValid) {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<long> centre(-300, 300);
  for (int k = 0; k < 40; ++k) {
    const ClassifierParams p{Integer(25), Rational(13, 20), Rational(1, 2), Rational(1, 2), Rational(1), k % 2 == 1};
    auto box = rational_box(make_rational(centre(rng), 100), make_rational(centre(rng), 100), Rational(1, 8));
    auto c = classify_box(box, p);
    if (c.witness) {
      EXPECT_TRUE(witness_valid(box, p, *c.witness));
      if (p.require_quadratic) {
        EXPECT_NE(c.witness->b2, 0);
      }
    }
  }
}

TEST(ClassifyBox, MonotoneInC) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> centre(-300, 300);
  const Rational Cs[] = {Rational(2), Rational(1), Rational(1, 2), Rational(1, 4), Rational(1, 16)};
  for (int k = 0; k < 15; ++k) {
    auto box = rational_box(make_rational(centre(rng), 100), make_rational(centre(rng), 100), Rational(1, 10));
    bool ordinary_seen = false;
    for (const auto& C : Cs) {
      const ClassifierParams p{Integer(16), Rational(3, 5), Rational(1, 2), Rational(1, 2), C, false};
      bool ordinary = classify_box(box, p).verdict == Verdict::ordinary;
      if (ordinary_seen) {
        EXPECT_TRUE(ordinary);
      }
      ordinary_seen = ordinary_seen || ordinary;
    }
  }
}

// If P is a witness for a square, P(t - k) witnesses the square shifted by
// (k, k) whenever its height stays within Q.
TEST(ClassifyBox, IntegerShiftCarriesWitnesses) {
  const ClassifierParams p{Integer(16), Rational(3, 5), Rational(1, 2), Rational(1, 2), Rational(1), false};
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<long> centre(-200, 200);
  int carried = 0;
  for (int k = 0; k < 30; ++k) {
    const Rational d1 = make_rational(centre(rng), 100), d2 = make_rational(centre(rng), 100);
    auto c = classify_box(rational_box(d1, d2, Rational(1, 10)), p);
    if (!c.witness) continue;
    for (long shift : {-1L, 1L}) {
      const auto& w = *c.witness;
      // P(t - s) = b2 t^2 + (b1 - 2 b2 s) t + (b2 s^2 - b1 s + b0)
      QuadraticWitness moved{w.b2, w.b1 - 2 * w.b2 * shift, w.b2 * shift * shift - w.b1 * shift + w.b0};
      if (std::labs(moved.b1) > 16 || std::labs(moved.b0) > 16) continue;
      auto shifted = rational_box(d1 + shift, d2 + shift, Rational(1, 10));
      EXPECT_TRUE(witness_valid(shifted, p, moved));
      EXPECT_EQ(classify_box(shifted, p).verdict, Verdict::special);
      ++carried;
    }
  }
  EXPECT_GT(carried, 0);
}

TEST(ClassifyBox, ThreadCountIndependent) {
  const ClassifierParams p{Integer(64), Rational(7, 10), Rational(1, 2), Rational(1, 2), Rational(1), false};
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long> centre(-300, 300);
  for (int k = 0; k < 10; ++k) {
    auto box = rational_box(make_rational(centre(rng), 100), make_rational(centre(rng), 100), Rational(1, 20));
    auto a = classify_box(box, p, 1), b = classify_box(box, p, 4);
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_EQ(a.witness, b.witness);
  }
}

TEST(SpecialFraction, Families) {
  const ClassifierParams p{Integer(4), Rational(11, 20), Rational(1, 2), Rational(1, 2), Rational(1), false};
  EXPECT_THROW(special_fraction({}, p), domain_error);
  std::vector<SquareBox> far;
  for (int k = 0; k < 8; ++k) far.push_back(rational_box(10 + make_rational(k, 10), -10 - make_rational(k, 10), Rational(1, 20)));
  auto r = special_fraction(far, p, 2);
  EXPECT_EQ(r.fraction, 0);
  EXPECT_EQ(r.rows.size(), 8u);
}

TEST(SpecialFraction, MatchesIndividualClassifications) {
  RationalCurve f({Rational(0), Rational(-1)}, Rational(1), Rational(2));
  const Integer Q(20);
  auto family = strip_tiling(f, Rational(1), Rational(7, 10), Q);
  const ClassifierParams p{Q, Rational(7, 10)};
  auto r = special_fraction(family, p, 3);
  std::size_t special = 0;
  for (const auto& box : family) special += classify_box(box, p).verdict == Verdict::special;
  EXPECT_EQ(r.special, special);
  EXPECT_EQ(r.fraction, make_rational(static_cast<long>(special), static_cast<long>(family.size())));
}

TEST(StripTiling, CountAndMonotonicity) {
  RationalCurve f({Rational(0), Rational(-1)}, Rational(1), Rational(2));
  // |J| / side = 16^{1/2} = 4 exactly.
  EXPECT_EQ(strip_tiling(f, Rational(1), Rational(1, 2), Integer(16)).size(), 4u);
  EXPECT_EQ(strip_tiling(f, Rational(1), Rational(1, 2), Integer(17)).size(), 4u);
  RationalCurve parabola({Rational(0), Rational(0), Rational(1)}, Rational(-1), Rational(1));
  EXPECT_THROW(strip_tiling(parabola, Rational(1), Rational(1, 2), Integer(16)), domain_error);
}
