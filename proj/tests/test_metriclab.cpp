#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "algpt/metriclab.hpp"

using namespace algpt;

namespace {

const Rectangle kPi(1, Rational(3, 2), Rational(-3, 2), -1);

BadSetSpec spec_for(long Q, Rational delta, Rational h = 1) {
  return BadSetSpec{2, Integer(Q), Rational(1, 2), Rational(1, 2), std::move(h), std::move(delta), kPi, 1, std::nullopt};
}

// Does P certify (x1, x2) directly from the definition, in exact arithmetic
// (bounds are rational when Q is a perfect square)?
bool certifies(const IntPolynomial& P, const Rational& x1, const Rational& x2, const BadSetSpec& s) {
  auto b1 = ScaledPower(s.h, s.Q, -s.v1).exact(), b2 = ScaledPower(s.h, s.Q, -s.v2).exact();
  if (!b1 || !b2) return false;
  auto dp = derivative(P);
  const Rational dq = s.delta * Rational(s.Q);
  return abs_rat(evaluate(P, x1)) < *b1 && abs_rat(evaluate(P, x2)) < *b2 &&
         std::min(abs_rat(evaluate(dp, x1)), abs_rat(evaluate(dp, x2))) < dq;
}

}  // namespace

TEST(BadSet, Examples) {
  BadSetSpec a{2, Integer(2), Rational(1, 2), Rational(1, 2), Rational(1), Rational(1, 100), kPi, 1, std::nullopt};
  EXPECT_FALSE(in_bad_set(Rational(3, 2), Rational(-3, 2), a).hit);
  BadSetSpec b{2, Integer(2), Rational(1, 2), Rational(1, 2), Rational(1), Rational(10), Rectangle(1, 2, -2, -1), 1, std::nullopt};
  auto hit = in_bad_set(Rational(1414214, 1000000), Rational(-1414214, 1000000), b);
  ASSERT_TRUE(hit.hit);
  // The first witness in (a_n, ..., a_0) order; t^2 - 2 certifies as well.
  EXPECT_EQ(*hit.witness, (IntPolynomial{2, 0, -1}));
  BadSetSpec b4 = b;
  b4.Q = 4;
  EXPECT_TRUE(certifies(IntPolynomial{-2, 0, 1}, Rational(1414214, 1000000), Rational(-1414214, 1000000), b4));
}

TEST(BadSet, Validation) {
  auto s = spec_for(8, Rational(1, 4));
  s.v1 = Rational(1, 3);
  EXPECT_THROW(s.validate(), config_error);
  s = spec_for(8, Rational(1, 4));
  s.pi = Rectangle(0, 1, 0, 1);
  EXPECT_THROW(s.validate(), config_error);
}

TEST(BadSet, WitnessesCertifyAndScanIsComplete) {
  // Q = 16: all bounds rational, so witnesses can be re-checked exactly and
  // misses compared with a direct scan of the class.
  auto s = spec_for(16, Rational(1, 4));
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<long> u(0, 999);
  for (int k = 0; k < 60; ++k) {
    Rational x1 = 1 + make_rational(u(rng), 2000), x2 = -1 - make_rational(u(rng), 2000);
    auto hit = in_bad_set(x1, x2, s);
    if (hit.hit) {
      EXPECT_TRUE(certifies(*hit.witness, x1, x2, s));
      continue;
    }
    for (long a2 = -16; a2 <= 16; ++a2)
      for (long a1 = -16; a1 <= 16; ++a1)
        for (long a0 = -16; a0 <= 16; ++a0) {
          IntPolynomial P{a0, a1, a2};
          if (!P.is_zero()) {
            ASSERT_FALSE(certifies(P, x1, x2, s)) << P.to_string();
          }
        }
  }
}

TEST(BadSet, MonotoneInDeltaAndH) {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<long> u(0, 999);
  for (int k = 0; k < 200; ++k) {
    Rational x1 = 1 + make_rational(u(rng), 2000), x2 = -1 - make_rational(u(rng), 2000);
    bool lo = in_bad_set(x1, x2, spec_for(12, Rational(1, 8))).hit;
    bool mid = in_bad_set(x1, x2, spec_for(12, Rational(1, 4))).hit;
    bool hi_h = in_bad_set(x1, x2, spec_for(12, Rational(1, 4), Rational(2))).hit;
    if (lo) {
      EXPECT_TRUE(mid);
    }
    if (mid) {
      EXPECT_TRUE(hi_h);
    }
  }
  EXPECT_FALSE(in_bad_set(Rational(5, 4), Rational(-5, 4), spec_for(12, Rational(0))).hit);
}

TEST(BadMeasure, ExactBracketAgreesWithSampling) {
  auto s = spec_for(16, Rational(1, 4));
  auto exact = estimate_bad_measure(s, {Sampler::Kind::exact, 0, 1}, 2);
  EXPECT_LE(exact.lower, exact.upper);
  EXPECT_LT(exact.upper - exact.lower, Rational(1, 1000000));
  auto sampled = estimate_bad_measure(s, {Sampler::Kind::random, 3000, 5}, 4);
  EXPECT_EQ(sampled.samples, 3000u);
  EXPECT_NEAR(sampled.estimate.get_d(), exact.estimate.get_d(), 4 * sampled.stderr_ + 1e-9);
  // Frozen after the sampling cross-check above.
  EXPECT_NEAR(exact.estimate.get_d(), 0.0453051, 1e-6);
  EXPECT_TRUE(exact.pass);
}

TEST(BadMeasure, ThreadCountIndependent) {
  auto s = spec_for(8, Rational(1, 2));
  auto a = estimate_bad_measure(s, {Sampler::Kind::grid, 40, 1}, 1);
  auto b = estimate_bad_measure(s, {Sampler::Kind::grid, 40, 1}, 3);
  EXPECT_EQ(a.hits, b.hits);
  auto c = estimate_bad_measure(s, {Sampler::Kind::exact, 0, 1}, 1);
  auto d = estimate_bad_measure(s, {Sampler::Kind::exact, 0, 1}, 3);
  EXPECT_EQ(c.lower, d.lower);
  EXPECT_EQ(c.upper, d.upper);
}

TEST(Cells, SigmaCellContainsRoots) {
  auto c = sigma_cell(IntPolynomial{-2, 0, 1}, 1, 0, 2, Rational(1), Integer(16), Rational(1, 2), Rational(1, 2));
  // |x - sqrt2| < 2 * 16^{-1/2} / (2 sqrt2) = 1/(4 sqrt2) ~ 0.1768
  EXPECT_NEAR(c.x1.lo.get_d(), std::sqrt(2.0) - 0.1767767, 1e-6);
  EXPECT_NEAR(c.x1.hi.get_d(), std::sqrt(2.0) + 0.1767767, 1e-6);
  EXPECT_NEAR(c.x2.lo.get_d(), -std::sqrt(2.0) - 0.1767767, 1e-6);
  EXPECT_THROW(sigma_cell(IntPolynomial{-2, 0, 1}, 0, 0, 2, Rational(1), Integer(16), Rational(1, 2), Rational(1, 2)),
               domain_error);
}

TEST(Cells, EssentialSplit) {
  std::vector<Cell> cells{{IntPolynomial{1}, {0, 2}, {0, 2}}, {IntPolynomial{1}, {1, 2}, {1, 2}}};
  EXPECT_EQ(essential_split(cells), (std::vector<bool>{true, false}));
}

TEST(Cells, EssentialSplitOrderIndependent) {
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<long> pos(0, 40), len(1, 15);
  for (int round = 0; round < 20; ++round) {
    std::vector<Cell> cells;
    for (int k = 0; k < 12; ++k) {
      long x = pos(rng), y = pos(rng);
      cells.push_back({IntPolynomial{k + 1}, {Rational(x), Rational(x + len(rng))}, {Rational(y), Rational(y + len(rng))}});
    }
    auto base = essential_split(cells);
    std::vector<std::size_t> perm(cells.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Cell> shuffled;
    for (auto i : perm) shuffled.push_back(cells[i]);
    auto other = essential_split(shuffled);
    for (std::size_t k = 0; k < perm.size(); ++k) EXPECT_EQ(other[k], base[perm[k]]);
  }
}

TEST(Sprindzuk, QuadraticExample) {
  auto c = sprindzuk_classify(IntPolynomial{-2, 0, 1}, Integer(2), Rational(1, 2), 0, 1);
  // d = 2 sqrt2 = 2^{3/2} > Q^{-k/2} first at k = -2 (2^{1} < 2^{3/2}); u = 0.
  EXPECT_EQ(c.k1, (std::vector<std::int64_t>{-2}));
  EXPECT_EQ(c.k2, (std::vector<std::int64_t>{-2}));
  EXPECT_EQ(c.u, 0);
  EXPECT_FALSE(c.boundary_flag);
}

TEST(Sprindzuk, CensusIsAPartition) {
  for (long Q = 2; Q <= 6; ++Q) {
    auto c = sprindzuk_census(2, Q, Rational(1, 4));
    EXPECT_EQ(c.class_total(), c.classified);
    EXPECT_LE(Rational(static_cast<long>(c.classes.size())), c.key_bound);
  }
  auto cubic = sprindzuk_census(3, 3, Rational(1, 3));
  EXPECT_EQ(cubic.class_total(), cubic.classified);
  EXPECT_GT(cubic.classified, 0u);
  EXPECT_THROW(sprindzuk_census(5, 3, Rational(1, 3)), config_error);
}

TEST(Sprindzuk, Constants) {
  // c16 = sum_{i=2}^{n} (i/eps + 1)^{i-1}; n = 2, eps = 1/2: 5.
  EXPECT_EQ(sprindzuk_c16(2, Rational(1, 2)), 5);
  EXPECT_EQ(sprindzuk_c17(Rational(1, 4)), 5);
}

TEST(Lemma1, Suite) {
  auto r = lemma1_suite(2000, 3);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_GT(r.instances - r.skipped, 1500u);
}

TEST(Lemma2, ExamplesAndSuite) {
  auto a = lemma2_check(IntPolynomial{0, 1}, Rational(-1), Rational(1), Rational(1, 2));
  EXPECT_EQ(a.premise, 1);
  EXPECT_FALSE(a.violated);
  EXPECT_EQ(lemma2_check(IntPolynomial{0, 0, 1}, Rational(0), Rational(1), Rational(1, 100)).premise, 0);
  EXPECT_THROW(lemma2_check(IntPolynomial{}, Rational(0), Rational(1), Rational(1)), domain_error);
  auto r = lemma2_suite(300, 3);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_LT(r.vacuous, r.instances);
}

TEST(Lemma4, CalibrationMatchesIndependentOracle) {
  // Independent pass: GMP products over the same family.
  std::vector<IntPolynomial> fam;
  for (long a1 = 1; a1 <= 5; ++a1)
    for (long a0 = -5; a0 <= 5; ++a0)
      if (std::gcd(a1, a0) == 1) fam.push_back(IntPolynomial{a0, a1});
  for (long a2 = 1; a2 <= 5; ++a2)
    for (long a1 = -5; a1 <= 5; ++a1)
      for (long a0 = -5; a0 <= 5; ++a0)
        if (std::gcd(std::gcd(a2, a1), a0) == 1) fam.push_back(IntPolynomial{a0, a1, a2});
  Rational lo = 100, hi = 0;
  for (const auto& a : fam)
    for (const auto& b : fam) {
      Rational r = Rational(height(a) * height(b)) / Rational(height(a * b));
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  auto cal = lemma4_calibrate(2, 5);
  EXPECT_EQ(cal.pairs, fam.size() * fam.size());
  EXPECT_EQ(cal.min, lo);
  EXPECT_EQ(cal.max, hi);
  EXPECT_EQ(cal.min, Rational(1, 3));
  EXPECT_EQ(cal.max, Rational(3));
  EXPECT_EQ(lemma4_suite(cal, 2, 5).violations, 0u);
  auto again = lemma4_calibrate(2, 5);
  EXPECT_EQ(again.min, cal.min);
  EXPECT_EQ(again.max, cal.max);
}

TEST(Resultant, SeparationCheck) {
  auto a = resultant_separation_check(IntPolynomial{-2, 0, 1}, IntPolynomial{-3, 0, 1});
  EXPECT_EQ(a.resultant, 1);
  EXPECT_TRUE(a.at_least_one);
  EXPECT_TRUE(a.formula_matches);
  auto b = resultant_separation_check(IntPolynomial{-1, 0, 2}, IntPolynomial{-1, 0, 1});
  EXPECT_TRUE(b.formula_matches);
  EXPECT_THROW(resultant_separation_check(IntPolynomial{-2, 0, 1}, IntPolynomial{-2, 0, 1}), domain_error);
}
