#pragma once

// Outward-rounded double interval arithmetic. Every operation computes the
// round-to-nearest result and then widens by one ulp in each direction, which
// encloses the exact result because the nearest-rounding error is at most half
// an ulp. Used for fast certified filters; exact rational arithmetic is the
// fallback whenever an interval result is inconclusive.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "algpt/rational.hpp"

namespace algpt {

namespace detail {
inline double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
}  // namespace detail

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  constexpr Interval(double v) : lo(v), hi(v) {}  // NOLINT(google-explicit-constructor)
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  /// Encloses an exact rational (mpq_get_d truncates, so widen both ways).
  static Interval enclosing(const Rational& r) {
    double d = r.get_d();
    if (Rational(d) == r) return {d, d};
    return {detail::down(d), detail::up(d)};
  }
  static Interval enclosing(const RationalInterval& r) {
    return {enclosing(r.lo).lo, enclosing(r.hi).hi};
  }

  bool contains_zero() const { return lo <= 0.0 && hi >= 0.0; }
  bool positive() const { return lo > 0.0; }
  bool negative() const { return hi < 0.0; }
  /// -1, +1, or 0 when the sign is not certified.
  int certain_sign() const { return lo > 0.0 ? 1 : (hi < 0.0 ? -1 : 0); }
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

inline Interval operator+(Interval a, Interval b) {
  return {detail::down(a.lo + b.lo), detail::up(a.hi + b.hi)};
}
inline Interval operator-(Interval a, Interval b) {
  return {detail::down(a.lo - b.hi), detail::up(a.hi - b.lo)};
}
inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }
inline Interval operator*(Interval a, Interval b) {
  double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {detail::down(*std::min_element(p, p + 4)), detail::up(*std::max_element(p, p + 4))};
}
inline Interval operator/(Interval a, Interval b) {
  if (b.contains_zero()) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {-inf, inf};
  }
  double p[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
  return {detail::down(*std::min_element(p, p + 4)), detail::up(*std::max_element(p, p + 4))};
}
inline Interval& operator+=(Interval& a, Interval b) { return a = a + b; }
inline Interval& operator*=(Interval& a, Interval b) { return a = a * b; }

inline Interval abs(Interval a) {
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return {-a.hi, -a.lo};
  return {0.0, std::max(-a.lo, a.hi)};
}
inline Interval sqr(Interval a) {
  Interval m = abs(a);
  return {detail::down(m.lo * m.lo), detail::up(m.hi * m.hi)};
}
inline Interval sqrt(Interval a) {
  double lo = a.lo <= 0.0 ? 0.0 : detail::down(std::sqrt(a.lo));
  return {std::max(0.0, lo), detail::up(std::sqrt(std::max(0.0, a.hi)))};
}
inline Interval hull(Interval a, Interval b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }
inline Interval pow_n(Interval a, int n) {
  Interval r(1.0);
  for (int i = 0; i < n; ++i) r *= a;
  return r;
}
/// x^(1/k) for x >= 0, widened by a few ulps since libm pow is not correctly rounded.
inline Interval root_k(Interval a, int k) {
  auto widen_down = [](double v) {
    for (int i = 0; i < 4; ++i) v = detail::down(v);
    return std::max(0.0, v);
  };
  auto widen_up = [](double v) {
    for (int i = 0; i < 4; ++i) v = detail::up(v);
    return v;
  };
  double lo = a.lo <= 0.0 ? 0.0 : widen_down(std::pow(a.lo, 1.0 / k));
  return {lo, widen_up(std::pow(std::max(0.0, a.hi), 1.0 / k))};
}

/// Horner evaluation of sum c[i] x^i with integer-valued double coefficients.
template <class Coeff>
Interval horner(std::span<const Coeff> c, Interval x) {
  if (c.empty()) return Interval(0.0);
  Interval acc(static_cast<double>(c.back()));
  for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * x + Interval(static_cast<double>(c[i]));
  return acc;
}

/// Range enclosure of a polynomial over x using the intersection of the
/// natural Horner form and the mean-value form around the midpoint.
template <class Coeff>
Interval range_over(std::span<const Coeff> c, Interval x) {
  Interval natural = horner(c, x);
  if (c.size() <= 1) return natural;
  double m = x.mid();
  Interval fm = horner(c, Interval(m));
  // derivative coefficients
  double dc[16];
  std::size_t dn = c.size() - 1;
  for (std::size_t i = 1; i < c.size(); ++i) dc[i - 1] = static_cast<double>(c[i]) * static_cast<double>(i);
  Interval dx = horner(std::span<const double>(dc, dn), x);
  Interval mv = fm + dx * (x - Interval(m));
  return {std::max(natural.lo, mv.lo), std::min(natural.hi, mv.hi)};
}

/// Rectangular complex interval.
struct CInterval {
  Interval re;
  Interval im;
};

inline CInterval operator+(const CInterval& a, const CInterval& b) { return {a.re + b.re, a.im + b.im}; }
inline CInterval operator-(const CInterval& a, const CInterval& b) { return {a.re - b.re, a.im - b.im}; }
inline CInterval operator*(const CInterval& a, const CInterval& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline CInterval operator/(const CInterval& a, const CInterval& b) {
  Interval den = sqr(b.re) + sqr(b.im);
  CInterval num{a.re * b.re + a.im * b.im, a.im * b.re - a.re * b.im};
  return {num.re / den, num.im / den};
}
inline Interval abs(const CInterval& z) { return sqrt(sqr(z.re) + sqr(z.im)); }

}  // namespace algpt
