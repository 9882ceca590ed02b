#pragma once

// Certified enclosures of all complex roots of a squarefree integer
// polynomial: Aberth iteration in double precision, then inclusion disks
// |z - z_i| <= n |W_i| where W_i = P(z_i) / (a_n prod_{j!=i} (z_i - z_j)) is
// the Weierstrass correction evaluated in interval arithmetic. When the disks
// are pairwise disjoint each holds exactly one root.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "algpt/interval.hpp"
#include "algpt/realroots.hpp"

namespace algpt {

struct RootDisk {
  std::complex<double> center;
  double radius = 0.0;
  bool real = false;  // certified: the enclosed root is real

  Interval re() const { return {detail::down(center.real() - radius), detail::up(center.real() + radius)}; }
  Interval im() const { return {detail::down(center.imag() - radius), detail::up(center.imag() + radius)}; }
  CInterval box() const { return {re(), im()}; }
};

namespace detail {

inline std::complex<double> horner_c(const std::vector<double>& a, std::complex<double> z) {
  std::complex<double> acc = a.back();
  for (std::size_t i = a.size() - 1; i-- > 0;) acc = acc * z + a[i];
  return acc;
}

inline CInterval horner_ci(const std::vector<double>& a, const CInterval& z) {
  CInterval acc{Interval(a.back()), Interval(0.0)};
  for (std::size_t i = a.size() - 1; i-- > 0;) acc = acc * z + CInterval{Interval(a[i]), Interval(0.0)};
  return acc;
}

inline std::vector<std::complex<double>> aberth(const std::vector<double>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<double> da(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) da[static_cast<std::size_t>(i - 1)] = a[static_cast<std::size_t>(i)] * i;
  double bound = 0.0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, std::abs(a[static_cast<std::size_t>(i)]));
  bound = 1.0 + bound / std::abs(a.back());
  std::vector<std::complex<double>> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    z[static_cast<std::size_t>(k)] = std::polar(0.5 * bound, 2.0 * std::numbers::pi * k / n + 0.4);
  for (int iter = 0, quiet = 0; iter < 2000 && quiet < 3; ++iter) {
    double step = 0.0;
    for (int k = 0; k < n; ++k) {
      auto zk = z[static_cast<std::size_t>(k)];
      auto p = horner_c(a, zk);
      if (p == 0.0) continue;
      auto ratio = p / horner_c(da, zk);
      std::complex<double> s = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != k) s += 1.0 / (zk - z[static_cast<std::size_t>(j)]);
      auto w = ratio / (1.0 - ratio * s);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
      z[static_cast<std::size_t>(k)] = zk - w;
      step = std::max(step, std::abs(w) / std::max(1.0, std::abs(zk)));
    }
    quiet = step < 1e-15 ? quiet + 1 : 0;
  }
  return z;
}

inline bool disks_meet(const RootDisk& a, std::complex<double> c, double r) {
  // Conservative: treat near-touching as meeting.
  double d = std::abs(a.center - c);
  return d <= (a.radius + r) * (1.0 + 1e-12) + 1e-300;
}

}  // namespace detail

/// Pairwise disjoint disks, one per complex root, or nullopt when the double
/// precision approximation cannot be certified. Real disks come first in
/// ascending order (matching isolate_real_roots), then the rest by center.
inline std::optional<std::vector<RootDisk>> certified_complex_roots(const IntPolynomial& p) {
  if (p.is_zero()) throw domain_error("complex roots of the zero polynomial");
  const int n = p.degree();
  if (n <= 0) return std::vector<RootDisk>{};
  std::vector<double> a(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    const Integer c = p.coeff(i);
    if (abs(c) > Integer(1) << 52) return std::nullopt;
    a[static_cast<std::size_t>(i)] = c.get_d();
  }
  if (n == 1) {
    Interval r = Interval(-a[0]) / Interval(a[1]);
    double m = r.mid();
    return std::vector<RootDisk>{{{m, 0.0}, std::max(detail::up(r.hi - m), detail::up(m - r.lo)), true}};
  }
  auto z = detail::aberth(a);
  std::vector<RootDisk> disks(static_cast<std::size_t>(n));
  const CInterval lead{Interval(a.back()), Interval(0.0)};
  for (int i = 0; i < n; ++i) {
    CInterval zi{Interval(z[static_cast<std::size_t>(i)].real()), Interval(z[static_cast<std::size_t>(i)].imag())};
    CInterval den = lead;
    for (int j = 0; j < n; ++j)
      if (j != i) {
        CInterval zj{Interval(z[static_cast<std::size_t>(j)].real()), Interval(z[static_cast<std::size_t>(j)].imag())};
        den = den * (zi - zj);
      }
    CInterval w = detail::horner_ci(a, zi) / den;
    double wabs = abs(w).hi;
    if (!std::isfinite(wabs)) return std::nullopt;
    disks[static_cast<std::size_t>(i)] = {z[static_cast<std::size_t>(i)], detail::up(wabs * n), false};
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (detail::disks_meet(disks[static_cast<std::size_t>(i)], disks[static_cast<std::size_t>(j)].center,
                             disks[static_cast<std::size_t>(j)].radius))
        return std::nullopt;
  // The conjugate of each root is a root; if the mirror disk meets no other
  // disk, the conjugate lies in the same disk, so the root is real.
  int real_count = 0;
  for (int i = 0; i < n; ++i) {
    auto& d = disks[static_cast<std::size_t>(i)];
    auto mirror = std::conj(d.center);
    bool self = std::abs(d.center.imag()) <= d.radius;
    bool other = false;
    for (int j = 0; j < n; ++j)
      if (j != i && detail::disks_meet(disks[static_cast<std::size_t>(j)], mirror, d.radius)) other = true;
    if (self && !other) {
      d.real = true;
      d.center = {d.center.real(), 0.0};
      d.radius = detail::up(d.radius + std::abs(z[static_cast<std::size_t>(i)].imag()));
      ++real_count;
    } else if (self) {
      return std::nullopt;
    }
  }
  if (real_count != static_cast<int>(isolate_real_roots(p).size())) return std::nullopt;
  std::stable_sort(disks.begin(), disks.end(), [](const RootDisk& x, const RootDisk& y) {
    if (x.real != y.real) return x.real;
    if (x.center.real() != y.center.real()) return x.center.real() < y.center.real();
    return x.center.imag() < y.center.imag();
  });
  return disks;
}

/// Enclosure of |z_a - z_b| for roots in two disks.
inline Interval distance(const RootDisk& a, const RootDisk& b) {
  CInterval diff{Interval(a.center.real()) - Interval(b.center.real()),
                 Interval(a.center.imag()) - Interval(b.center.imag())};
  Interval d = abs(diff);
  double r = detail::up(a.radius + b.radius);
  return {std::max(0.0, detail::down(d.lo - r)), detail::up(d.hi + r)};
}

/// Enclosure of |x - z| for a real x.
inline Interval distance(const RootDisk& a, Interval x) {
  CInterval diff{x - Interval(a.center.real()), Interval(-a.center.imag())};
  Interval d = abs(diff);
  return {std::max(0.0, detail::down(d.lo - a.radius)), detail::up(d.hi + a.radius)};
}

}  // namespace algpt
