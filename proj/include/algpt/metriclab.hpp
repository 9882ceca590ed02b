#pragma once

// Measures of the bad set L(Q, delta, v, Pi) and the diagnostic objects of the
// metric argument: cells, essential/non-essential splits, Sprindzuk classes,
// and property harnesses for the root-distance, sublevel and height-product
// lemmas.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "algpt/classifier.hpp"
#include "algpt/complexroots.hpp"
#include "algpt/geometry.hpp"
#include "algpt/interval.hpp"
#include "algpt/parallel.hpp"
#include "algpt/polyint.hpp"
#include "algpt/rational.hpp"
#include "algpt/realroots.hpp"

namespace algpt {

// ---------------------------------------------------------------------------
// Bad set.

struct BadSetSpec {
  int n = 2;
  Integer Q;
  Rational v1, v2;
  Rational h = 1;
  Rational delta = Rational(1, 4);
  Rectangle pi;
  Rational eps = 1;
  /// When set, only polynomials with |a_n| < Q^{lead_exponent} are scanned.
  std::optional<Rational> lead_exponent;

  void validate() const {
    if (n < 2 || n > 5) throw config_error("bad set requires 2 <= n <= 5");
    if (Q < 1 || Q > 1000) throw config_error("bad set requires 1 <= Q <= 1000");
    if (v1 <= 0 || v2 <= 0 || v1 + v2 != n - 1) throw config_error("bad set requires v1, v2 > 0 with v1 + v2 = n - 1");
    if (h <= 0) throw config_error("bad set requires h_n > 0");
    if (delta < 0) throw config_error("bad set requires delta_n >= 0");
    if (!validate_region(pi, DiagonalExclusion(eps))) throw config_error("bad set rectangle meets the diagonal band");
    if (pi.provenance) {
      const auto& pr = *pi.provenance;
      if (pr.s1 >= 1 || pr.s2 >= 1 || pr.s1 + pr.s2 <= 0 || pr.s1 + pr.s2 > 1)
        throw config_error("bad set rectangle requires s_i < 1 and 0 < s1 + s2 <= 1");
    }
  }
};

struct BadSetHit {
  bool hit = false;
  std::optional<IntPolynomial> witness;
};

/// Per-spec constants of the bad-set test, computed once.
struct BadSetContext {
  const BadSetSpec* spec;
  ScaledPower bound[2];
  Interval ibound[2];
  Rational dq;
  Interval idq;
  std::int64_t lead_cap;

  explicit BadSetContext(const BadSetSpec& s)
      : spec(&s),
        bound{ScaledPower(s.h, s.Q, -s.v1), ScaledPower(s.h, s.Q, -s.v2)},
        ibound{Interval::enclosing(bound[0].enclose(60)), Interval::enclosing(bound[1].enclose(60))},
        dq(s.delta * Rational(s.Q)),
        idq(Interval::enclosing(dq)),
        lead_cap(s.Q.get_si()) {
    if (s.lead_exponent) {
      ScaledPower lim(Rational(1), s.Q, *s.lead_exponent);
      lead_cap = std::min<std::int64_t>(lead_cap, static_cast<std::int64_t>(std::floor(lim.approx())) + 1);
      while (lead_cap >= 0 && lim.compare(Rational(lead_cap)) != std::strong_ordering::less) --lead_cap;
    }
  }
};

/// Whether some P of degree <= n and height <= Q, P != 0, has
/// |P(x_i)| < h Q^{-v_i} for both i and min_i |P'(x_i)| < delta Q. The first
/// witness in (a_n, ..., a_0) lexicographic order is returned.
inline BadSetHit in_bad_set(const Rational& x1, const Rational& x2, const BadSetContext& ctx) {
  const BadSetSpec& spec = *ctx.spec;
  if (spec.delta == 0 || ctx.lead_cap < 0) return {};
  const int n = spec.n;
  const std::int64_t Q = spec.Q.get_si();
  const std::int64_t lead_cap = ctx.lead_cap;
  const Rational& dq = ctx.dq;
  const Interval idq = ctx.idq;
  struct Point {
    std::vector<Rational> pow;  // x^0 .. x^n
    std::vector<Interval> ipow;
    const ScaledPower* bound;
    Interval ibound;
  };
  Point pts[2] = {{{}, {}, &ctx.bound[0], ctx.ibound[0]}, {{}, {}, &ctx.bound[1], ctx.ibound[1]}};
  for (int i = 0; i < 2; ++i) {
    Rational acc = 1;
    for (int k = 0; k <= n; ++k) {
      pts[i].pow.push_back(acc);
      pts[i].ipow.push_back(Interval::enclosing(acc));
      acc *= i == 0 ? x1 : x2;
    }
  }
  std::vector<std::int64_t> a(static_cast<std::size_t>(n + 1), -Q);  // a[1..n]
  a[static_cast<std::size_t>(n)] = -lead_cap;
  auto exact_r = [&](int i) {
    Rational r = 0;
    for (int k = 1; k <= n; ++k) r += Rational(a[static_cast<std::size_t>(k)]) * pts[i].pow[static_cast<std::size_t>(k)];
    return r;
  };
  for (;;) {
    // Derivative condition depends only on a_1..a_n.
    bool deriv_small = false, deriv_unsure = false;
    for (int i = 0; i < 2 && !deriv_small; ++i) {
      Interval d(0.0);
      for (int k = 1; k <= n; ++k)
        d += Interval(static_cast<double>(k * a[static_cast<std::size_t>(k)])) * pts[i].ipow[static_cast<std::size_t>(k - 1)];
      Interval ad = abs(d);
      if (ad.hi < idq.lo) deriv_small = true;
      else if (ad.lo < idq.hi) deriv_unsure = true;
    }
    if (!deriv_small && deriv_unsure) {
      for (int i = 0; i < 2 && !deriv_small; ++i) {
        Rational d = 0;
        for (int k = 1; k <= n; ++k)
          d += Rational(k * a[static_cast<std::size_t>(k)]) * pts[i].pow[static_cast<std::size_t>(k - 1)];
        deriv_small = abs_rat(d) < dq;
      }
    }
    if (deriv_small) {
      Interval r[2];
      std::int64_t lo = -Q, hi = Q;
      for (int i = 0; i < 2; ++i) {
        r[i] = Interval(0.0);
        for (int k = 1; k <= n; ++k)
          r[i] += Interval(static_cast<double>(a[static_cast<std::size_t>(k)])) * pts[i].ipow[static_cast<std::size_t>(k)];
        double wlo = std::floor(detail::down(-r[i].hi - pts[i].ibound.hi));
        double whi = std::ceil(detail::up(-r[i].lo + pts[i].ibound.hi));
        lo = std::max(lo, static_cast<std::int64_t>(std::max(wlo, static_cast<double>(-Q - 1))));
        hi = std::min(hi, static_cast<std::int64_t>(std::min(whi, static_cast<double>(Q + 1))));
      }
      std::optional<Rational> er[2];
      for (std::int64_t a0 = lo; a0 <= hi; ++a0) {
        bool nonzero = a0 != 0;
        for (int k = 1; k <= n; ++k) nonzero = nonzero || a[static_cast<std::size_t>(k)] != 0;
        if (!nonzero) continue;
        bool ok = true;
        for (int i = 0; i < 2 && ok; ++i) {
          Interval v = abs(r[i] + Interval(static_cast<double>(a0)));
          if (v.hi < pts[i].ibound.lo) continue;
          if (v.lo >= pts[i].ibound.hi) {
            ok = false;
            continue;
          }
          if (!er[i]) er[i] = exact_r(i);
          ok = pts[i].bound->compare(abs_rat(*er[i] + a0)) == std::strong_ordering::less;
        }
        if (ok) {
          std::vector<Integer> c(static_cast<std::size_t>(n + 1));
          c[0] = Integer(static_cast<long>(a0));
          for (int k = 1; k <= n; ++k) c[static_cast<std::size_t>(k)] = Integer(static_cast<long>(a[static_cast<std::size_t>(k)]));
          return {true, IntPolynomial(std::move(c))};
        }
      }
    }
    // odometer: a_n most significant, a_1 least
    int k = 1;
    while (k <= n) {
      std::int64_t cap = k == n ? lead_cap : Q;
      if (a[static_cast<std::size_t>(k)] < cap) {
        ++a[static_cast<std::size_t>(k)];
        break;
      }
      a[static_cast<std::size_t>(k)] = -cap;
      ++k;
    }
    if (k > n) break;
  }
  return {};
}

inline BadSetHit in_bad_set(const Rational& x1, const Rational& x2, const BadSetSpec& spec) {
  return in_bad_set(x1, x2, BadSetContext(spec));
}

struct Sampler {
  enum class Kind { grid, random, exact };
  Kind kind = Kind::grid;
  std::uint64_t size = 0;  // m for an m x m grid, N for random
  std::uint64_t seed = 1;
};

inline const char* to_string(Sampler::Kind k) {
  switch (k) {
    case Sampler::Kind::grid: return "grid";
    case Sampler::Kind::random: return "random";
    case Sampler::Kind::exact: return "exact";
  }
  return "?";
}

struct MeasureEstimate {
  std::string mode;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  /// Sampling: hits / samples * mu2 Pi. Exact: midpoint of [lo, hi].
  Rational estimate;
  /// Sampling: binomial standard error. Exact: half-width of [lo, hi].
  double stderr_ = 0.0;
  Rational lower, upper;  // exact mode bracket; equal to estimate otherwise
  Rational quarter_mu2;
  bool pass = false;
};

namespace detail {

struct GridBox {
  std::int64_t x0, x1, y0, y1;
};

inline constexpr int kGridBits = 40;

inline std::int64_t to_grid(const Rational& r, bool round_up) {
  Rational s = r;
  mpz_mul_2exp(s.get_num_mpz_t(), s.get_num_mpz_t(), kGridBits);
  s.canonicalize();
  Integer v = round_up ? ceil_of(s) : floor_of(s);
  return v.get_si();
}

/// Area of a union of axis-parallel boxes on the integer grid.
inline Integer union_area(const std::vector<GridBox>& boxes) {
  struct Event {
    std::int64_t x;
    int delta;
    std::int64_t y0, y1;
  };
  std::vector<Event> ev;
  std::vector<std::int64_t> ys;
  for (const auto& b : boxes) {
    if (b.x0 >= b.x1 || b.y0 >= b.y1) continue;
    ev.push_back({b.x0, 1, b.y0, b.y1});
    ev.push_back({b.x1, -1, b.y0, b.y1});
    ys.push_back(b.y0);
    ys.push_back(b.y1);
  }
  if (ev.empty()) return Integer(0);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.x < b.x; });
  const std::size_t segs = ys.size() - 1;
  std::vector<int> cover(4 * segs + 4, 0);
  std::vector<std::int64_t> len(4 * segs + 4, 0);
  auto update = [&](auto&& self, std::size_t node, std::size_t l, std::size_t r, std::size_t ql, std::size_t qr,
                    int d) -> void {
    if (qr <= l || r <= ql) return;
    if (ql <= l && r <= qr) {
      cover[node] += d;
    } else {
      std::size_t m = (l + r) / 2;
      self(self, 2 * node, l, m, ql, qr, d);
      self(self, 2 * node + 1, m, r, ql, qr, d);
    }
    if (cover[node] > 0)
      len[node] = ys[r] - ys[l];
    else if (r - l == 1)
      len[node] = 0;
    else
      len[node] = len[2 * node] + len[2 * node + 1];
  };
  __int128 area = 0;
  std::int64_t prev_x = ev.front().x;
  for (const auto& e : ev) {
    area += static_cast<__int128>(len[1]) * (e.x - prev_x);
    prev_x = e.x;
    auto l = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), e.y0) - ys.begin());
    auto r = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), e.y1) - ys.begin());
    update(update, 1, 0, segs, l, r, e.delta);
  }
  auto hi = static_cast<unsigned long>(static_cast<unsigned __int128>(area) >> 64);
  auto lo = static_cast<unsigned long>(static_cast<unsigned __int128>(area) & ~0UL);
  Integer out(hi);
  out <<= 64;
  out += Integer(lo);
  return out;
}

/// Rational intervals inside [a, b] approximating {|p| < bound} from inside
/// (inner) or outside (outer).
inline std::vector<RationalInterval> sublevel_pieces(const IntPolynomial& p, const Rational& bound, const Rational& a,
                                                     const Rational& b, bool inner) {
  std::vector<RationalInterval> out;
  Rational tol(1);
  mpz_mul_2exp(tol.get_den_mpz_t(), tol.get_den_mpz_t(), kGridBits + 4);
  tol.canonicalize();
  for (const auto& iv : sublevel_intervals(p, bound)) {
    Rational lo = a, hi = b;
    if (iv.lo) {
      auto e = refine(*iv.lo, tol);
      lo = std::max(a, inner ? e.hi : e.lo);
    }
    if (iv.hi) {
      auto e = refine(*iv.hi, tol);
      hi = std::min(b, inner ? e.lo : e.hi);
    }
    if (lo < hi) out.push_back({lo, hi});
  }
  return out;
}

inline std::vector<RationalInterval> intersect(const std::vector<RationalInterval>& xs, const RationalInterval& d) {
  std::vector<RationalInterval> out;
  for (const auto& x : xs) {
    Rational lo = std::max(x.lo, d.lo), hi = std::min(x.hi, d.hi);
    if (lo < hi) out.push_back({lo, hi});
  }
  return out;
}

/// Inner and outer grid boxes of the solution set of one quadratic.
inline void quadratic_boxes(const SmallPoly& sp, const BadSetSpec& spec, const RationalInterval (&bounds)[2],
                            std::vector<GridBox>& inner, std::vector<GridBox>& outer) {
  const RationalInterval sides[2] = {spec.pi.I1(), spec.pi.I2()};
  const IntPolynomial p = sp.to_int_polynomial();
  const Rational dq = spec.delta * Rational(spec.Q);
  // {x in side : |P'(x)| < delta Q}; P' = 2 b2 x + b1.
  std::optional<RationalInterval> dset[2];
  for (int i = 0; i < 2; ++i) {
    const std::int64_t b2 = sp.degree >= 2 ? sp.c[2] : 0, b1 = sp.degree >= 1 ? sp.c[1] : 0;
    if (b2 == 0) {
      if (abs_rat(Rational(b1)) < dq) dset[i] = sides[i];
      continue;
    }
    Rational e1 = (Rational(-b1) - dq) / Rational(2 * b2), e2 = (Rational(-b1) + dq) / Rational(2 * b2);
    if (e1 > e2) std::swap(e1, e2);
    Rational lo = std::max(e1, sides[i].lo), hi = std::min(e2, sides[i].hi);
    if (lo < hi) dset[i] = RationalInterval{lo, hi};
  }
  if (!dset[0] && !dset[1]) return;
  for (const bool in : {true, false}) {
    std::vector<RationalInterval> a[2];
    for (int i = 0; i < 2; ++i) a[i] = sublevel_pieces(p, in ? bounds[i].lo : bounds[i].hi, sides[i].lo, sides[i].hi, in);
    auto emit = [&](const std::vector<RationalInterval>& xs, const std::vector<RationalInterval>& ys) {
      for (const auto& x : xs)
        for (const auto& y : ys)
          (in ? inner : outer).push_back({to_grid(x.lo, in), to_grid(x.hi, !in), to_grid(y.lo, in), to_grid(y.hi, !in)});
    };
    if (dset[0]) emit(intersect(a[0], *dset[0]), a[1]);
    if (dset[1]) emit(a[0], intersect(a[1], *dset[1]));
  }
}

}  // namespace detail

/// Exact-mode bracket [lo, hi] of mu2 L for n = 2: union of the per-polynomial
/// solution boxes, with endpoints rounded inward (lo) and outward (hi) onto a
/// dyadic grid.
inline RationalInterval bad_measure_exact(const BadSetSpec& spec, unsigned threads = 1) {
  spec.validate();
  if (spec.n != 2) throw config_error("exact bad-set measure requires n = 2");
  if (spec.delta == 0 || spec.lead_exponent) {
    if (spec.delta == 0) return {Rational(0), Rational(0)};
    throw config_error("exact bad-set measure does not support a leading-coefficient filter");
  }
  const std::int64_t Q = spec.Q.get_si();
  RationalInterval bounds[2] = {ScaledPower(spec.h, spec.Q, -spec.v1).enclose(60),
                                ScaledPower(spec.h, spec.Q, -spec.v2).enclose(60)};
  const Interval side_iv[2] = {Interval::enclosing(spec.pi.I1()), Interval::enclosing(spec.pi.I2())};
  const Interval ib[2] = {Interval::enclosing(bounds[0]), Interval::enclosing(bounds[1])};
  const Interval idq = Interval::enclosing(Rational(spec.delta * Rational(spec.Q)));
  struct Part {
    std::vector<detail::GridBox> inner, outer;
  };
  auto parts = parallel_map<Part>(static_cast<std::size_t>(2 * Q + 1), threads, [&](std::size_t k) {
    Part part;
    SmallPoly sp;
    sp.c[2] = static_cast<std::int64_t>(k) - Q;
    for (std::int64_t b1 = -Q; b1 <= Q; ++b1)
      for (std::int64_t b0 = -Q; b0 <= Q; ++b0) {
        sp.c[1] = b1;
        sp.c[0] = b0;
        sp.degree = sp.c[2] != 0 ? 2 : (b1 != 0 ? 1 : (b0 != 0 ? 0 : -1));
        if (sp.degree < 0) continue;
        bool skip = false;
        for (int i = 0; i < 2 && !skip; ++i) skip = abs(range_over(sp.coeffs(), side_iv[i])).lo >= ib[i].hi;
        if (skip) continue;
        std::array<std::int64_t, 2> dc{sp.c[1], 2 * sp.c[2]};
        bool deriv_big = true;
        for (int i = 0; i < 2; ++i)
          deriv_big = deriv_big && abs(range_over(std::span<const std::int64_t>(dc), side_iv[i])).lo >= idq.hi;
        if (deriv_big) continue;
        detail::quadratic_boxes(sp, spec, bounds, part.inner, part.outer);
      }
    return part;
  });
  std::vector<detail::GridBox> inner, outer;
  for (auto& p : parts) {
    inner.insert(inner.end(), p.inner.begin(), p.inner.end());
    outer.insert(outer.end(), p.outer.begin(), p.outer.end());
  }
  Rational scale(1);
  mpz_mul_2exp(scale.get_den_mpz_t(), scale.get_den_mpz_t(), 2 * detail::kGridBits);
  scale.canonicalize();
  return {Rational(detail::union_area(inner)) * scale, Rational(detail::union_area(outer)) * scale};
}

inline MeasureEstimate estimate_bad_measure(const BadSetSpec& spec, const Sampler& sampler, unsigned threads = 1) {
  spec.validate();
  MeasureEstimate out;
  out.mode = to_string(sampler.kind);
  const Rational mu2 = spec.pi.mu2();
  out.quarter_mu2 = mu2 / 4;
  if (sampler.kind == Sampler::Kind::exact) {
    auto b = bad_measure_exact(spec, threads);
    out.lower = b.lo;
    out.upper = b.hi;
    out.estimate = (b.lo + b.hi) / 2;
    out.stderr_ = Rational((b.hi - b.lo) / 2).get_d();
    out.pass = b.hi < out.quarter_mu2;
    return out;
  }
  if (sampler.size == 0) throw config_error("sampler size must be positive");
  std::vector<std::pair<Rational, Rational>> points;
  const auto& pi = spec.pi;
  if (sampler.kind == Sampler::Kind::grid) {
    const auto m = sampler.size;
    if (m > 4096) throw config_error("grid side must be at most 4096");
    for (std::uint64_t i = 0; i < m; ++i)
      for (std::uint64_t j = 0; j < m; ++j) {
        Rational fx = make_rational(static_cast<long>(2 * i + 1), static_cast<long>(2 * m));
        Rational fy = make_rational(static_cast<long>(2 * j + 1), static_cast<long>(2 * m));
        points.emplace_back(pi.x1_lo + fx * (pi.x1_hi - pi.x1_lo), pi.x2_lo + fy * (pi.x2_hi - pi.x2_lo));
      }
  } else {
    if (sampler.size > 10'000'000) throw config_error("random sample size must be at most 10^7");
    std::mt19937_64 rng(sampler.seed);
    const Rational scale = make_rational(1, 1L << 32);
    for (std::uint64_t k = 0; k < sampler.size; ++k) {
      Rational fx = Rational(static_cast<unsigned long>(rng() >> 32)) * scale;
      Rational fy = Rational(static_cast<unsigned long>(rng() >> 32)) * scale;
      points.emplace_back(pi.x1_lo + fx * (pi.x1_hi - pi.x1_lo), pi.x2_lo + fy * (pi.x2_hi - pi.x2_lo));
    }
  }
  const BadSetContext ctx(spec);
  constexpr std::size_t chunk = 256;
  const std::size_t chunks = (points.size() + chunk - 1) / chunk;
  auto hits = parallel_map<std::uint64_t>(chunks, threads, [&](std::size_t c) {
    std::uint64_t h = 0;
    for (std::size_t k = c * chunk; k < std::min(points.size(), (c + 1) * chunk); ++k)
      h += in_bad_set(points[k].first, points[k].second, ctx).hit;
    return h;
  });
  for (auto h : hits) out.hits += h;
  out.samples = points.size();
  Rational frac = make_rational(static_cast<long>(out.hits), static_cast<long>(out.samples));
  out.estimate = frac * mu2;
  out.lower = out.upper = out.estimate;
  const double p = frac.get_d();
  out.stderr_ = mu2.get_d() * std::sqrt(p * (1.0 - p) / static_cast<double>(out.samples));
  out.pass = out.estimate < out.quarter_mu2;
  return out;
}

// ---------------------------------------------------------------------------
// Cells and essential sets.

/// Axis-parallel rational rectangle around a pair of roots of one polynomial.
struct Cell {
  IntPolynomial poly;
  RationalInterval x1, x2;

  Rational area() const { return (x1.hi - x1.lo) * (x2.hi - x2.lo); }
};

namespace detail {

/// Lower bound of |p'(root)| over a refined enclosure, and the enclosure.
inline std::pair<Rational, RootEnclosure> derivative_at_root(const IntPolynomial& p, RootEnclosure e) {
  auto dp = derivative(p);
  std::vector<Rational> dc;
  for (auto c : dp.coefficients()) dc.emplace_back(c);
  Rational w(1, 1 << 20);
  for (int it = 0; it < 40; ++it) {
    e = refine(e, w);
    auto v = abs(detail::horner(dc, RationalInterval{e.lo, e.hi}));
    if (v.lo > 0) return {v.lo, e};
    w /= 1 << 10;
  }
  throw undecided_error("derivative at a root does not separate from zero", p.to_string());
}

inline Cell make_cell(const IntPolynomial& p, int i1, int i2, const ScaledPower& num1, const ScaledPower& num2) {
  auto sf = squarefree_part(p);
  if (sf.degree() != p.degree()) throw domain_error("cell requires a squarefree polynomial");
  auto roots = isolate_real_roots(p);
  const auto r = static_cast<int>(roots.size());
  if (i1 < 0 || i2 < 0 || i1 >= r || i2 >= r || i1 == i2) throw domain_error("cell anchors must be distinct real roots");
  Cell c{p, {}, {}};
  const ScaledPower* nums[2] = {&num1, &num2};
  RationalInterval* out[2] = {&c.x1, &c.x2};
  const int idx[2] = {i1, i2};
  for (int i = 0; i < 2; ++i) {
    auto [dlo, e] = derivative_at_root(p, roots[static_cast<std::size_t>(idx[i])]);
    Rational half = nums[i]->enclose(60).hi / dlo;
    *out[i] = {e.lo - half, e.hi + half};
  }
  return c;
}

}  // namespace detail

/// sigma_P: |x_i - alpha_i| < 2^{n-1} h Q^{-v_i} / |P'(alpha_i)|, outward.
inline Cell sigma_cell(const IntPolynomial& p, int i1, int i2, int n, const Rational& h, const Integer& Q,
                       const Rational& v1, const Rational& v2) {
  Rational k = h * Rational(pow_int(Integer(2), static_cast<unsigned long>(n - 1)));
  return detail::make_cell(p, i1, i2, ScaledPower(k, Q, -v1), ScaledPower(k, Q, -v2));
}

/// sigma'_P: |x_i - alpha_i| < c12 Q^{-gamma_i} / |P'(alpha_i)|, outward.
inline Cell sigma_prime_cell(const IntPolynomial& p, int i1, int i2, const Rational& c12, const Integer& Q,
                             const Rational& gamma1, const Rational& gamma2) {
  return detail::make_cell(p, i1, i2, ScaledPower(c12, Q, -gamma1), ScaledPower(c12, Q, -gamma2));
}

inline Cell clip(const Cell& c, const Rectangle& r) {
  Cell out = c;
  out.x1 = {std::max(c.x1.lo, r.x1_lo), std::min(c.x1.hi, r.x1_hi)};
  out.x2 = {std::max(c.x2.lo, r.x2_lo), std::min(c.x2.hi, r.x2_hi)};
  if (out.x1.lo > out.x1.hi) out.x1.hi = out.x1.lo;
  if (out.x2.lo > out.x2.hi) out.x2.hi = out.x2.lo;
  return out;
}

inline Rational intersection_area(const Cell& a, const Cell& b) {
  Rational w = std::min(a.x1.hi, b.x1.hi) - std::max(a.x1.lo, b.x1.lo);
  Rational h = std::min(a.x2.hi, b.x2.hi) - std::max(a.x2.lo, b.x2.lo);
  if (w <= 0 || h <= 0) return 0;
  return w * h;
}

/// essential[k] iff every other cell overlaps cell k in less than half its area.
inline std::vector<bool> essential_split(const std::vector<Cell>& cells) {
  std::vector<bool> out(cells.size(), true);
  for (std::size_t a = 0; a < cells.size(); ++a) {
    const Rational half = cells[a].area() / 2;
    for (std::size_t b = 0; b < cells.size() && out[a]; ++b)
      if (b != a && intersection_area(cells[a], cells[b]) >= half) out[a] = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sprindzuk classes.

struct SprindzukClass {
  int m = 0;
  Rational eps;
  std::vector<std::int64_t> k1, k2;  // k_{i,2} .. k_{i,m}
  Rational u;
  std::vector<Rational> p1, p2;  // p_{i,1} .. p_{i,m}
  /// A grid boundary could not be separated; the lower cell was assigned.
  bool boundary_flag = false;
  /// |a_m| >= Q^{1}: u was clamped to 1 - eps.
  bool u_clamped = false;
  bool k_out_of_range = false;

  std::string key() const {
    std::string s = std::to_string(m) + "|";
    for (auto k : k1) s += std::to_string(k) + ",";
    s += "|";
    for (auto k : k2) s += std::to_string(k) + ",";
    return s + "|" + to_string(u);
  }
};

namespace detail {

/// Distance between two roots, refinable when both are real.
struct RootDistance {
  Interval approx;
  std::optional<RootEnclosure> a, b;     // both real
  std::optional<Rational> squared;       // exact square when known
};

/// Tri-state d > Q^{-k eps}: 1 true, 0 false, -1 undecided.
inline int exceeds(const RootDistance& d, const Integer& Q, const Rational& e) {
  ScaledPower g(Rational(1), Q, -e);
  if (d.squared) {
    ScaledPower g2(Rational(1), Q, -2 * e);
    return g2.compare(*d.squared) == std::strong_ordering::greater ? 1 : 0;
  }
  Interval gi = Interval::enclosing(g.enclose(60));
  if (d.approx.lo > gi.hi) return 1;
  if (d.approx.hi <= gi.lo) return 0;
  if (!d.a || !d.b) return -1;
  Rational w(1, 1 << 16);
  for (unsigned bits = 64; bits <= 512; bits *= 2) {
    w /= Rational(pow_int(Integer(2), 32));
    auto x = refine(*d.a, w), y = refine(*d.b, w);
    auto diff = abs(RationalInterval{x.lo, x.hi} - RationalInterval{y.lo, y.hi});
    auto ge = g.enclose(bits);
    if (diff.lo > ge.hi) return 1;
    if (diff.hi <= ge.lo) return 0;
  }
  return -1;
}

/// k = min{k : d > Q^{-k eps}}, so k eps - eps <= rho < k eps.
inline std::int64_t k_of(const RootDistance& d, const Integer& Q, const Rational& eps, bool& flag) {
  double rho = -std::log(std::max(d.approx.mid(), 1e-300)) / std::log(Q.get_d());
  auto k = static_cast<std::int64_t>(std::floor(rho / eps.get_d())) + 1;
  auto pred = [&](std::int64_t kk) {
    int r = exceeds(d, Q, eps * Rational(kk));
    if (r < 0) {
      flag = true;
      return true;  // lower cell
    }
    return r == 1;
  };
  while (!pred(k)) ++k;
  while (pred(k - 1)) --k;
  return k;
}

}  // namespace detail

inline SprindzukClass sprindzuk_classify(const IntPolynomial& p, const Integer& Q, const Rational& eps, int anchor1,
                                         int anchor2) {
  const int m = p.degree();
  if (m < 2) throw domain_error("Sprindzuk class requires degree >= 2");
  if (Q < 2) throw domain_error("Sprindzuk class requires Q >= 2");
  if (eps <= 0 || eps >= 1) throw domain_error("Sprindzuk class requires 0 < eps < 1");
  if (squarefree_part(p).degree() != m) throw domain_error("Sprindzuk class requires a squarefree polynomial");
  auto disks = certified_complex_roots(p);
  if (!disks) throw undecided_error("complex roots could not be certified", p.to_string());
  auto reals = isolate_real_roots(p);
  const int r = static_cast<int>(reals.size());
  if (anchor1 < 0 || anchor2 < 0 || anchor1 >= r || anchor2 >= r || anchor1 == anchor2)
    throw domain_error("Sprindzuk anchors must be distinct real roots");
  SprindzukClass out;
  out.m = m;
  out.eps = eps;
  const int anchors[2] = {anchor1, anchor2};
  std::vector<std::int64_t>* ks[2] = {&out.k1, &out.k2};
  for (int i = 0; i < 2; ++i) {
    const int a = anchors[i];
    std::vector<detail::RootDistance> ds;
    for (int j = 0; j < m; ++j) {
      if (j == a) continue;
      detail::RootDistance d{distance((*disks)[static_cast<std::size_t>(a)], (*disks)[static_cast<std::size_t>(j)]), {}, {}, {}};
      if (j < r) {
        d.a = reals[static_cast<std::size_t>(a)];
        d.b = reals[static_cast<std::size_t>(j)];
        if (m == 2) d.squared = Rational(discriminant(p)) / Rational(p.leading() * p.leading());
      }
      ds.push_back(std::move(d));
    }
    std::stable_sort(ds.begin(), ds.end(), [](const auto& x, const auto& y) { return x.approx.mid() < y.approx.mid(); });
    for (const auto& d : ds) ks[i]->push_back(detail::k_of(d, Q, eps, out.boundary_flag));
  }
  // u = eps * t, the largest with Q^u <= |a_m|.
  const Rational lead = abs_rat(Rational(p.leading()));
  auto t = static_cast<std::int64_t>(std::floor(std::log(lead.get_d()) / std::log(Q.get_d()) / eps.get_d())) + 1;
  while (t > 0 && ScaledPower(Rational(1), Q, eps * Rational(t)).compare(lead) == std::strong_ordering::less) --t;
  const auto t_max = static_cast<std::int64_t>(floor_of((1 - eps) / eps).get_si());
  if (t > t_max) {
    t = t_max;
    out.u_clamped = true;
  }
  out.u = eps * Rational(t);
  const Rational k_lo = -1 / eps, k_hi = Rational(m - 1) / eps + 1;
  for (auto* kv : ks)
    for (auto k : *kv) out.k_out_of_range = out.k_out_of_range || Rational(k) < k_lo || Rational(k) > k_hi;
  std::vector<Rational>* ps[2] = {&out.p1, &out.p2};
  for (int i = 0; i < 2; ++i) {
    // p_{i,j} = eps (k_{i,j+1} + ... + k_{i,m}); k_{i,l} lives at index l - 2.
    for (int j = 1; j <= m; ++j) {
      std::int64_t s = 0;
      for (int l = j + 1; l <= m; ++l) s += (*ks[i])[static_cast<std::size_t>(l - 2)];
      ps[i]->push_back(eps * Rational(s));
    }
  }
  return out;
}

/// c16 = sum_{i=2}^{n} (i/eps + 1)^{i-1}.
inline Rational sprindzuk_c16(int n, const Rational& eps) {
  Rational s = 0;
  for (int i = 2; i <= n; ++i) s += pow_rat(Rational(i) / eps + 1, static_cast<unsigned long>(i - 1));
  return s;
}
inline Rational sprindzuk_c17(const Rational& eps) { return 1 / eps + 1; }

struct SprindzukCensus {
  int m = 0;
  std::int64_t Q = 0;
  Rational eps;
  std::uint64_t classified = 0;
  std::uint64_t excluded = 0;  // fewer than two real roots or not squarefree
  std::uint64_t flagged = 0;
  std::map<std::string, std::uint64_t> classes;
  Rational key_bound;  // m c16^2 c17

  std::uint64_t class_total() const {
    std::uint64_t t = 0;
    for (const auto& [k, v] : classes) t += v;
    return t;
  }
};

/// Classifies every P of degree exactly m and height <= Q with at least two
/// real roots, anchored at its two smallest real roots.
inline SprindzukCensus sprindzuk_census(int m, std::int64_t Q, const Rational& eps) {
  if (m < 2 || m > 4) throw config_error("census requires 2 <= m <= 4");
  if (Q < 2 || Q > 16) throw config_error("census requires 2 <= Q <= 16");
  SprindzukCensus c;
  c.m = m;
  c.Q = Q;
  c.eps = eps;
  const Rational c16 = sprindzuk_c16(m, eps);
  c.key_bound = Rational(m) * c16 * c16 * sprindzuk_c17(eps);
  std::vector<std::int64_t> a(static_cast<std::size_t>(m + 1), -Q);
  for (;;) {
    if (a[static_cast<std::size_t>(m)] != 0) {
      auto p = IntPolynomial::from_coefficients(a);
      if (squarefree_part(p).degree() == m && isolate_real_roots(p).size() >= 2) {
        try {
          auto cls = sprindzuk_classify(p, Integer(static_cast<long>(Q)), eps, 0, 1);
          ++c.classes[cls.key()];
          ++c.classified;
          c.flagged += cls.boundary_flag;
        } catch (const undecided_error&) {
          ++c.excluded;
        }
      } else {
        ++c.excluded;
      }
    }
    std::size_t k = 0;
    while (k <= static_cast<std::size_t>(m) && a[k] == Q) a[k++] = -Q;
    if (k > static_cast<std::size_t>(m)) break;
    ++a[k];
  }
  return c;
}

// ---------------------------------------------------------------------------
// Property harnesses.

struct SuiteResult {
  std::string name;
  std::uint64_t instances = 0;  // checked instances
  std::uint64_t skipped = 0;    // draws rejected because certification failed
  std::uint64_t vacuous = 0;    // premise false (implication checks)
  std::uint64_t violations = 0;
  std::vector<std::string> failures;  // first few violating instances

  bool pass() const { return violations == 0; }
  void fail(std::string what) {
    ++violations;
    if (failures.size() < 8) failures.push_back(std::move(what));
  }
};

struct Lemma1Check {
  bool decided = false;  // the nearest root was certified
  bool violated[3] = {false, false, false};
};

/// Root-distance inequalities for x in S(alpha_i), where alpha_i is the
/// (complex) root nearest to x. A violation is reported only when it is
/// certain under outward rounding.
inline Lemma1Check lemma1_check(const IntPolynomial& p, const Rational& x) {
  Lemma1Check out;
  const int n = p.degree();
  if (n < 1) throw domain_error("root-distance check requires degree >= 1");
  auto disks = certified_complex_roots(p);
  if (!disks) return out;
  const Interval ix = Interval::enclosing(x);
  std::vector<Interval> dist;
  for (const auto& d : *disks) dist.push_back(distance(d, ix));
  std::size_t i = 0;
  for (std::size_t k = 1; k < dist.size(); ++k)
    if (dist[k].hi < dist[i].hi) i = k;
  // A conjugate partner is exactly as far from a real x; either root will do.
  auto partner = [&](std::size_t k) {
    const auto& a = (*disks)[i];
    const auto& b = (*disks)[k];
    return !a.real && std::abs(b.center - std::conj(a.center)) <= a.radius + b.radius;
  };
  for (std::size_t k = 0; k < dist.size(); ++k)
    if (k != i && !partner(k) && !(dist[i].hi < dist[k].lo)) return out;
  const Rational px = evaluate(p, x);
  if (px == 0) return out;
  const Interval apx = abs(Interval::enclosing(px));
  const IntPolynomial dp = derivative(p);
  const Rational dpx = evaluate(dp, x);
  std::vector<double> dc;
  for (const auto& c : dp.coefficients()) dc.push_back(c.get_d());
  const auto& root = (*disks)[i];
  CInterval z = root.box();
  CInterval acc{Interval(dc.back()), Interval(0.0)};
  for (std::size_t k = dc.size() - 1; k-- > 0;) acc = acc * z + CInterval{Interval(dc[k]), Interval(0.0)};
  const Interval dpa = abs(acc);
  if (dpa.lo <= 0.0) return out;
  out.decided = true;
  const Interval lhs = dist[i];
  if (dpx != 0) {
    Interval rhs = Interval(static_cast<double>(n)) * apx / abs(Interval::enclosing(dpx));
    out.violated[0] = lhs.lo > rhs.hi;
  }
  const Interval base = apx / dpa;
  out.violated[1] = lhs.lo > (Interval(std::ldexp(1.0, n - 1)) * base).hi;
  // Upper bounds of the j-1 smallest distances from alpha_i to other roots.
  std::vector<double> others;
  for (std::size_t k = 0; k < disks->size(); ++k)
    if (k != i) others.push_back(distance(root, (*disks)[k]).hi);
  std::sort(others.begin(), others.end());
  Interval prod(1.0);
  for (int j = 1; j <= n; ++j) {
    if (j >= 2) prod = prod * Interval(others[static_cast<std::size_t>(j - 2)]);
    Interval rhs = root_k(Interval(std::ldexp(1.0, n - j)) * base * prod, j);
    out.violated[2] = out.violated[2] || lhs.lo > rhs.hi;
  }
  return out;
}

namespace detail {

inline IntPolynomial random_polynomial(std::mt19937_64& rng, int max_degree, std::int64_t H) {
  std::uniform_int_distribution<int> deg(1, max_degree);
  std::uniform_int_distribution<std::int64_t> coef(-H, H);
  const int d = deg(rng);
  std::vector<Integer> c(static_cast<std::size_t>(d + 1));
  for (auto& v : c) v = Integer(static_cast<long>(coef(rng)));
  while (c.back() == 0) c.back() = Integer(static_cast<long>(coef(rng)));
  return IntPolynomial(std::move(c));
}

}  // namespace detail

inline SuiteResult lemma1_suite(std::uint64_t count, std::uint64_t seed, int max_degree = 5, std::int64_t H = 50) {
  SuiteResult r;
  r.name = "root-distance";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> expo(0, 8);
  std::uint64_t attempts = 0;
  while (r.instances < count && attempts < 20 * count) {
    ++attempts;
    auto p = detail::random_polynomial(rng, max_degree, H);
    if (squarefree_part(p).degree() != p.degree()) continue;
    auto disks = certified_complex_roots(p);
    if (!disks) {
      ++r.skipped;
      continue;
    }
    const auto& d = (*disks)[static_cast<std::size_t>(rng() % disks->size())];
    double offset = (unit(rng) - 0.5) * std::pow(10.0, -expo(rng));
    Rational x(d.center.real() + offset);
    auto c = lemma1_check(p, x);
    if (!c.decided) {
      ++r.skipped;
      continue;
    }
    ++r.instances;
    for (int k = 0; k < 3; ++k)
      if (c.violated[k]) r.fail("inequality " + std::to_string(k + 1) + " P=" + p.to_string() + " x=" + to_string(x));
  }
  return r;
}

struct Lemma2Check {
  /// 1: mu A >= mu I / 2 certainly; 0: certainly not; -1 undecided.
  int premise = -1;
  bool violated = false;
};

/// If |P| < bound on a subset A of I = [a, b] with mu A >= mu I / 2, then
/// |P| < 6^n (n+1)^{n+1} bound on all of I (n = deg P).
inline Lemma2Check lemma2_check(const IntPolynomial& p, const Rational& a, const Rational& b, const Rational& bound) {
  if (p.is_zero()) throw domain_error("sublevel lemma requires P != 0");
  if (!(a < b) || bound <= 0) throw domain_error("sublevel lemma requires a < b and bound > 0");
  Lemma2Check out;
  const int n = std::max(0, p.degree());
  Rational tol = (b - a) / Rational(pow_int(Integer(2), 60));
  auto mu = sublevel_measure(sublevel_intervals(p, bound), a, b, tol);
  const Rational half = (b - a) / 2;
  if (mu.hi < half) {
    out.premise = 0;
    return out;
  }
  out.premise = mu.lo >= half ? 1 : -1;
  const Rational K = Rational(pow_int(Integer(6), static_cast<unsigned long>(n)) *
                              pow_int(Integer(n + 1), static_cast<unsigned long>(n + 1))) *
                     bound;
  // Lower bound of max |P| on [a, b]: endpoints and critical points.
  Rational max_lo = std::max(abs_rat(evaluate(p, a)), abs_rat(evaluate(p, b)));
  if (p.degree() >= 2) {
    std::vector<Rational> pc;
    for (auto c : p.coefficients()) pc.emplace_back(c);
    for (auto e : isolate_real_roots(squarefree_part(derivative(p)))) {
      if (compare_to_rational(e, a) != std::strong_ordering::greater) continue;
      if (compare_to_rational(e, b) != std::strong_ordering::less) continue;
      e = refine(e, tol);
      max_lo = std::max(max_lo, abs(detail::horner(pc, RationalInterval{e.lo, e.hi})).lo);
    }
  }
  out.violated = out.premise == 1 && max_lo >= K;
  return out;
}

inline SuiteResult lemma2_suite(std::uint64_t count, std::uint64_t seed, int max_degree = 5, std::int64_t H = 20) {
  SuiteResult r;
  r.name = "half-interval";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> start(-32, 32), length(1, 64), shrink(0, 4);
  for (std::uint64_t k = 0; k < count; ++k) {
    auto p = detail::random_polynomial(rng, max_degree, H);
    Rational a = make_rational(start(rng), 16);
    Rational b = a + make_rational(length(rng), 32);
    double mx = 0.0;
    for (int s = 0; s <= 64; ++s) {
      Rational t = a + (b - a) * make_rational(s, 64);
      mx = std::max(mx, std::abs(evaluate(p, t).get_d()));
    }
    Rational bound(std::ldexp(std::max(mx, 1e-6), -shrink(rng)));
    auto c = lemma2_check(p, a, b, bound);
    ++r.instances;
    if (c.premise == 0) ++r.vacuous;
    if (c.violated)
      r.fail("P=" + p.to_string() + " I=[" + to_string(a) + "," + to_string(b) + "] bound=" + to_string(bound));
  }
  return r;
}

struct Lemma4Calibration {
  Rational min, max;
  std::uint64_t pairs = 0;
};

namespace detail {

/// Primitive polynomials with 1 <= degree <= max_degree, height <= H and
/// positive leading coefficient (signs do not change heights).
inline std::vector<SmallPoly> primitive_family(int max_degree, std::int64_t H) {
  std::vector<SmallPoly> out;
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(d + 1), -H);
    c[static_cast<std::size_t>(d)] = 1;
    for (;;) {
      auto sp = SmallPoly::from(c);
      if (sp.content() == 1) out.push_back(sp);
      std::size_t k = 0;
      while (k < static_cast<std::size_t>(d) && c[k] == H) c[k++] = -H;
      if (k == static_cast<std::size_t>(d)) {
        if (c[k] == H) break;
        ++c[k];
      } else {
        ++c[k];
      }
    }
  }
  return out;
}

inline std::int64_t product_height(const SmallPoly& a, const SmallPoly& b) {
  std::int64_t h = 0;
  for (int k = 0; k <= a.degree + b.degree; ++k) {
    std::int64_t s = 0;
    for (int i = std::max(0, k - b.degree); i <= std::min(k, a.degree); ++i)
      s += a.c[static_cast<std::size_t>(i)] * b.c[static_cast<std::size_t>(k - i)];
    h = std::max(h, s < 0 ? -s : s);
  }
  return h;
}

}  // namespace detail

/// Observed min and max of H(P1) H(P2) / H(P1 P2) over all ordered pairs.
inline Lemma4Calibration lemma4_calibrate(int max_degree = 2, std::int64_t H = 5) {
  auto fam = detail::primitive_family(max_degree, H);
  Lemma4Calibration c;
  bool first = true;
  for (const auto& a : fam)
    for (const auto& b : fam) {
      Rational r = make_rational(static_cast<long>(a.height() * b.height()), static_cast<long>(detail::product_height(a, b)));
      if (first || r < c.min) c.min = r;
      if (first || r > c.max) c.max = r;
      first = false;
      ++c.pairs;
    }
  return c;
}

/// Every pair lies in [cal.min, cal.max] and in [4^{-n}, 4^n], n = deg(P1 P2).
inline SuiteResult lemma4_suite(const Lemma4Calibration& cal, int max_degree = 2, std::int64_t H = 5) {
  SuiteResult r;
  r.name = "height-product";
  auto fam = detail::primitive_family(max_degree, H);
  for (const auto& a : fam)
    for (const auto& b : fam) {
      ++r.instances;
      Rational ratio = make_rational(static_cast<long>(a.height() * b.height()), static_cast<long>(detail::product_height(a, b)));
      Rational four_n = Rational(pow_int(Integer(4), static_cast<unsigned long>(a.degree + b.degree)));
      if (ratio < cal.min || ratio > cal.max || ratio < 1 / four_n || ratio > four_n)
        r.fail(a.to_int_polynomial().to_string() + " * " + b.to_int_polynomial().to_string());
    }
  return r;
}

struct ResultantCheck {
  Integer resultant;
  Interval product;  // |lead1|^{deg2} |lead2|^{deg1} prod |alpha_i - beta_j|
  bool at_least_one = false;
  bool formula_matches = false;
};

/// |Res(P1, P2)| >= 1 for coprime integer polynomials, and |Res| equals the
/// root-difference product within certified enclosures.
inline ResultantCheck resultant_separation_check(const IntPolynomial& p1, const IntPolynomial& p2) {
  ResultantCheck c;
  c.resultant = resultant(p1, p2);
  if (c.resultant == 0) throw domain_error("resultant check requires coprime polynomials");
  auto d1 = certified_complex_roots(p1), d2 = certified_complex_roots(p2);
  if (!d1 || !d2) throw undecided_error("complex roots could not be certified", p1.to_string() + " ; " + p2.to_string());
  Interval prod = pow_n(abs(Interval::enclosing(Rational(p1.leading()))), p2.degree()) *
                  pow_n(abs(Interval::enclosing(Rational(p2.leading()))), p1.degree());
  for (const auto& a : *d1)
    for (const auto& b : *d2) prod = prod * distance(a, b);
  c.product = prod;
  const Interval res = abs(Interval::enclosing(Rational(c.resultant)));
  c.at_least_one = abs(c.resultant) >= 1;
  c.formula_matches = res.hi >= prod.lo && res.lo <= prod.hi;
  return c;
}

}  // namespace algpt
