#pragma once

// Floating-point reference pipeline for rectangle counts: naive enumeration,
// integer rational-root irreducibility test (degree <= 3), closed-form or
// bisection roots in double precision, plain double comparisons.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "algpt/geometry.hpp"

namespace oracle {

struct FloatRect {
  double x1_lo, x1_hi, x2_lo, x2_hi;
};

struct FloatCount {
  std::uint64_t count = 0;
  std::uint64_t near_boundary = 0;  // roots within 1e-9 of an edge
};

inline double eval(const std::vector<long>& c, double x) {
  double acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + static_cast<double>(c[i]);
  return acc;
}

inline bool has_rational_root(const std::vector<long>& c) {
  const long a0 = c.front(), ad = c.back();
  if (a0 == 0) return true;
  for (long p = 1; p <= std::labs(a0); ++p) {
    if (a0 % p) continue;
    for (long q = 1; q <= std::labs(ad); ++q) {
      if (ad % q || std::gcd(p, q) != 1) continue;
      for (long s : {p, -p}) {
        // sum c_i s^i q^{d-i} == 0 in integers
        __int128 acc = 0, sp = 1, qp = 1;
        for (std::size_t i = 1; i < c.size(); ++i) qp *= q;
        for (std::size_t i = 0; i < c.size(); ++i) {
          acc += static_cast<__int128>(c[i]) * sp * qp;
          sp *= s;
          if (i + 1 < c.size()) qp /= q;
        }
        if (acc == 0) return true;
      }
    }
  }
  return false;
}

inline double bisect(const std::vector<long>& c, double a, double b) {
  double fa = eval(c, a);
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    if (!(m > a && m < b)) break;
    double fm = eval(c, m);
    if (fm == 0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Real roots of an irreducible (hence squarefree) polynomial of degree 2 or 3.
inline std::vector<double> real_roots(const std::vector<long>& c) {
  std::vector<double> out;
  if (c.size() == 3) {
    const double a = static_cast<double>(c[2]), b = static_cast<double>(c[1]), k = static_cast<double>(c[0]);
    const double disc = b * b - 4 * a * k;
    if (disc <= 0) return out;
    const double s = std::sqrt(disc);
    const double q = -0.5 * (b + (b >= 0 ? s : -s));
    out = {q / a, k / q};
    std::sort(out.begin(), out.end());
    return out;
  }
  // Cubic: split at the critical points, bisect sign changes within the
  // Cauchy bound.
  long h = 0;
  for (long v : c) h = std::max(h, std::labs(v));
  const double B = 1.0 + static_cast<double>(h) / static_cast<double>(std::labs(c[3]));
  std::vector<double> cuts{-B};
  const double a = 3.0 * static_cast<double>(c[3]), b = 2.0 * static_cast<double>(c[2]), k = static_cast<double>(c[1]);
  const double disc = b * b - 4 * a * k;
  if (disc > 0) {
    const double s = std::sqrt(disc);
    for (double r : {(-b - s) / (2 * a), (-b + s) / (2 * a)})
      if (r > -B && r < B) cuts.push_back(r);
  }
  cuts.push_back(B);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    double fa = eval(c, cuts[i - 1]), fb = eval(c, cuts[i]);
    if (fa == 0 && i == 1) out.push_back(cuts[0]);
    if (fb == 0) {
      out.push_back(cuts[i]);
    } else if (fa != 0 && (fa > 0) != (fb > 0)) {
      out.push_back(bisect(c, cuts[i - 1], cuts[i]));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return std::fabs(x - y) < 1e-9; }), out.end());
  return out;
}

/// Ordered pairs of distinct conjugate roots in the open rectangle over all
/// minimal polynomials of degree 2..n <= 3 and height <= Q.
inline FloatCount count(int n, long Q, const FloatRect& r) {
  FloatCount out;
  auto near = [](double x, double e) { return std::fabs(x - e) < 1e-9; };
  for (int d = 2; d <= n; ++d) {
    std::vector<long> c(static_cast<std::size_t>(d) + 1, -Q);
    c[static_cast<std::size_t>(d)] = 1;
    while (true) {
      long g = 0;
      for (long v : c) g = std::gcd(g, v);
      if (g == 1 && !has_rational_root(c)) {
        auto roots = real_roots(c);
        for (std::size_t i = 0; i < roots.size(); ++i)
          for (std::size_t j = 0; j < roots.size(); ++j) {
            if (i == j) continue;
            const double x = roots[i], y = roots[j];
            if (near(x, r.x1_lo) || near(x, r.x1_hi) || near(y, r.x2_lo) || near(y, r.x2_hi)) ++out.near_boundary;
            if (x > r.x1_lo && x < r.x1_hi && y > r.x2_lo && y < r.x2_hi) ++out.count;
          }
      }
      std::size_t k = 0;
      while (k <= static_cast<std::size_t>(d)) {
        const long cap = Q;
        if (c[k] < cap) {
          ++c[k];
          break;
        }
        c[k] = k == static_cast<std::size_t>(d) ? 1 : -Q;
        ++k;
      }
      if (k > static_cast<std::size_t>(d)) break;
    }
  }
  return out;
}

struct Instance {
  int n;
  long Q;
  algpt::Rectangle rect;
};

/// Seeded admissible rectangles (gap >= eps) with endpoints in (1/100)Z.
inline std::vector<Instance> random_instances(std::size_t count, std::uint64_t seed, const algpt::Rational& eps) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> centre(-300, 300), width(10, 150);
  std::uniform_int_distribution<int> deg(2, 3);
  std::uniform_int_distribution<long> height(2, 15);
  std::vector<Instance> out;
  while (out.size() < count) {
    long a = centre(rng), b = a + width(rng), c = centre(rng), d = c + width(rng);
    algpt::Rectangle rect(algpt::make_rational(a, 100), algpt::make_rational(b, 100), algpt::make_rational(c, 100),
                          algpt::make_rational(d, 100));
    if (!algpt::validate_region(rect, algpt::DiagonalExclusion(eps))) continue;
    out.push_back({deg(rng), height(rng), rect});
  }
  return out;
}

inline FloatRect to_float(const algpt::Rectangle& r) {
  return {r.x1_lo.get_d(), r.x1_hi.get_d(), r.x2_lo.get_d(), r.x2_hi.get_d()};
}

}  // namespace oracle
