#include <random>

#include <gtest/gtest.h>

#include "algpt/polyint.hpp"

using namespace algpt;

namespace {

IntPolynomial random_poly(std::mt19937_64& rng, int max_degree, long H) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<long> coef(-H, H);
  std::vector<Integer> c(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& v : c) v = coef(rng);
  if (c.back() == 0) c.back() = 1;
  return IntPolynomial(c);
}

// Euclid over Q on coefficient vectors, low to high.
using RatVec = std::vector<Rational>;

void trim(RatVec& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RatVec remainder(RatVec a, const RatVec& b) {
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

int rational_gcd_degree(const IntPolynomial& p, const IntPolynomial& q) {
  RatVec a, b;
  for (const auto& v : p.coefficients()) a.emplace_back(v);
  for (const auto& v : q.coefficients()) b.emplace_back(v);
  while (!b.empty()) {
    auto r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return static_cast<int>(a.size()) - 1;
}

}  // namespace

TEST(Height, Examples) {
  EXPECT_EQ(height(IntPolynomial{-2, 0, 1}), 2);
  EXPECT_EQ(height(IntPolynomial{7, -5, 0, 3}), 7);
  EXPECT_EQ(height(IntPolynomial{1, -4}), 4);
  EXPECT_THROW(height(IntPolynomial{}), domain_error);
}

TEST(Evaluate, Examples) {
  EXPECT_EQ(evaluate(IntPolynomial{-2, 0, 1}, Rational(1)), -1);
  EXPECT_EQ(evaluate(IntPolynomial{-2, 0, 1}, Rational(3, 2)), Rational(1, 4));
  EXPECT_EQ(evaluate(IntPolynomial{}, Rational(5)), 0);
}

TEST(Derivative, Examples) {
  EXPECT_EQ(derivative(IntPolynomial{-2, 0, 1}), (IntPolynomial{0, 2}));
  EXPECT_TRUE(derivative(IntPolynomial{7}).is_zero());
  EXPECT_EQ(derivative(IntPolynomial{0, -1, 0, 1}), (IntPolynomial{-1, 0, 3}));
}

TEST(PrimitiveNormalForm, Examples) {
  EXPECT_EQ(primitive_normal_form(IntPolynomial{2, 4, 6}), (IntPolynomial{1, 2, 3}));
  EXPECT_EQ(primitive_normal_form(IntPolynomial{1, -1}), (IntPolynomial{-1, 1}));
  EXPECT_EQ(primitive_normal_form(IntPolynomial{-2, 0, 1}), (IntPolynomial{-2, 0, 1}));
  EXPECT_THROW(primitive_normal_form(IntPolynomial{}), domain_error);
}

TEST(PrimitiveNormalForm, IdempotentAndRootPreserving) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    auto p = random_poly(rng, 4, 10);
    if (p.degree() < 1) continue;
    auto q = primitive_normal_form(p);
    EXPECT_EQ(primitive_normal_form(q), q);
    EXPECT_GT(q.coeff(q.degree()), 0);
    EXPECT_EQ(content(q), 1);
    EXPECT_EQ(rational_gcd_degree(p, q), p.degree());
  }
}

TEST(Discriminant, Examples) {
  EXPECT_EQ(discriminant(IntPolynomial{-2, 0, 1}), 8);
  EXPECT_EQ(discriminant(IntPolynomial{1, 0, 1}), -4);
  EXPECT_EQ(discriminant(IntPolynomial{1, 3, 2}), 1);
  EXPECT_THROW(discriminant(IntPolynomial{0, -1, 0, 1}), domain_error);
}

TEST(Resultant, Examples) {
  EXPECT_EQ(abs(resultant(IntPolynomial{-1, 1}, IntPolynomial{1, 1})), 2);
  EXPECT_EQ(resultant(IntPolynomial{-2, 0, 1}, IntPolynomial{-2, 0, 1}), 0);
  EXPECT_EQ(resultant(IntPolynomial{-2, 0, 1}, IntPolynomial{-3, 0, 1}), 1);
  EXPECT_THROW(resultant(IntPolynomial{}, IntPolynomial{1, 1}), domain_error);
}

TEST(Resultant, ZeroIffCommonFactor) {
  std::mt19937_64 rng(11);
  int zeros = 0;
  for (int k = 0; k < 400; ++k) {
    auto p = random_poly(rng, 4, 10), q = random_poly(rng, 4, 10);
    if (k % 4 == 0) {  // force shared factors regularly
      auto f = random_poly(rng, 2, 5);
      if (f.degree() >= 1) {
        p = p * f;
        q = q * f;
      }
    }
    if (p.degree() < 1 || q.degree() < 1) continue;
    bool zero = resultant(p, q) == 0;
    zeros += zero;
    EXPECT_EQ(zero, rational_gcd_degree(p, q) > 0) << p.to_string() << " / " << q.to_string();
  }
  EXPECT_GT(zeros, 20);
}

TEST(Discriminant, ResultantIdentityOnQuadratics) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> coef(-10, 10);
  for (int k = 0; k < 100; ++k) {
    long b2 = coef(rng);
    if (b2 == 0) b2 = 3;
    IntPolynomial p{coef(rng), coef(rng), b2};
    EXPECT_EQ(discriminant(p) * b2, -resultant(p, derivative(p))) << p.to_string();
  }
}

TEST(Arithmetic, Examples) {
  EXPECT_EQ((IntPolynomial{1, 1} * IntPolynomial{-1, 1}), (IntPolynomial{-1, 0, 1}));
  EXPECT_EQ((IntPolynomial{0, 1, 1} - IntPolynomial{0, 0, 1}), (IntPolynomial{0, 1}));
  EXPECT_EQ((IntPolynomial{1, 2} * IntPolynomial{1, 3}), (IntPolynomial{1, 5, 6}));
}

TEST(ExactDivide, Examples) {
  auto q = exact_divide(IntPolynomial{1, 5, 6}, IntPolynomial{1, 2});
  ASSERT_TRUE(q);
  EXPECT_EQ(*q, (IntPolynomial{1, 3}));
  EXPECT_FALSE(exact_divide(IntPolynomial{-2, 0, 1}, IntPolynomial{-1, 1}));
}

TEST(CheckedI128, OverflowThrows) {
  detail::CheckedI128 big(static_cast<__int128>(1) << 100);
  EXPECT_THROW(big * big, detail::overflow);
  EXPECT_EQ((detail::CheckedI128(std::int64_t{3}) * detail::CheckedI128(std::int64_t{4})).v, 12);
}

TEST(SmallPoly, RoundTrip) {
  IntPolynomial p{3, 0, -2, 5};
  auto s = SmallPoly::from(p);
  EXPECT_EQ(s.degree, 3);
  EXPECT_EQ(s.height(), 5);
  EXPECT_EQ(s.to_int_polynomial(), p);
}
