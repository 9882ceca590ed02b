#pragma once

// Counting algebraic points with conjugate coordinates in rectangles and
// strips.
//
// Streaming counts never materialize the database. For a coefficient prefix
// (a_d, ..., a_1) the polynomial R = P - a_0 is fixed, and P can only have a
// root in an interval X when a_0 lies in -R(X); an outward-rounded range
// enclosure of R over X therefore bounds the admissible a_0 exactly.
//
// A rectangle disjoint from the diagonal band has disjoint sides I1, I2, so
// the ordered pairs of distinct roots in I1 x I2 number N(I1) * N(I2), both
// Sturm counts. Strip membership is decided on certified double enclosures,
// with the exact rational path as fallback.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "algpt/geometry.hpp"
#include "algpt/minpoly.hpp"
#include "algpt/parallel.hpp"

namespace algpt {

/// All ordered pairs of distinct real roots of p (r real roots give r(r-1)).
inline std::vector<AlgebraicPoint> points_of(const IntPolynomial& p) {
  if (p.degree() < 2) return {};
  auto roots = isolate_real_roots(p);
  std::vector<AlgebraicPoint> out;
  auto shared = roots.empty() ? std::make_shared<const IntPolynomial>(p) : roots.front().poly;
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = 0; j < roots.size(); ++j)
      if (i != j) out.push_back({shared, static_cast<int>(i), static_cast<int>(j), roots[i], roots[j]});
  return out;
}

struct CountResult {
  int n = 0;
  std::int64_t Q = 0;
  std::string region;
  std::uint64_t count = 0;
  std::vector<std::uint64_t> count_by_degree;  // index = degree
  RealValue mu2;
  /// count / (Q^{n+1} mu2)
  double ratio = 0.0;
  /// Strips only: lambda and count / Q^{n+1-lambda}.
  std::optional<Rational> lambda;
  double ratio_theorem = 0.0;
};

namespace detail {

/// Rational endpoint with a machine-word form when it fits.
struct Endpoint {
  Rational q;
  Interval iv;
  bool small = false;
  CheckedI128 num, den;

  explicit Endpoint(const Rational& v) : q(v), iv(Interval::enclosing(v)) {
    if (fits_int64(v.get_num()) && fits_int64(v.get_den())) {
      small = true;
      num = CheckedI128(static_cast<std::int64_t>(v.get_num().get_si()));
      den = CheckedI128(static_cast<std::int64_t>(v.get_den().get_si()));
    }
  }
};

struct OpenSpan {
  Endpoint lo, hi;
  Interval iv() const { return {lo.iv.lo, hi.iv.hi}; }
};

/// Distinct real roots of p in (lo, hi).
inline int sturm_count(const SmallPoly& p, const OpenSpan& s) {
  if (s.lo.small && s.hi.small) {
    try {
      SturmChain<CheckedI128> ch(to_i128_vector(p.coeffs()));
      return ch.count_open(s.lo.num, s.lo.den, s.hi.num, s.hi.den);
    } catch (const overflow&) {
    }
  }
  return count_roots_open(p.to_int_polynomial(), s.lo.q, s.hi.q);
}

enum class Tri { no, yes, unknown };

/// Is the root enclosed in r inside the open interval s?
inline Tri inside(Interval r, const OpenSpan& s) {
  if (r.lo > s.lo.iv.hi && r.hi < s.hi.iv.lo) return Tri::yes;
  if (r.hi < s.lo.iv.lo || r.lo > s.hi.iv.hi) return Tri::no;
  return Tri::unknown;
}

inline bool content_is_one(const SmallPoly& p) { return std::abs(p.content()) == 1; }

/// Certified disjoint double enclosures of all real roots, ascending, or
/// nullopt when certification fails.
inline std::optional<std::vector<Interval>> fast_real_roots(const SmallPoly& p) {
  std::vector<Interval> out;
  if (p.degree == 2) {
    const __int128 b2 = p.c[2], b1 = p.c[1], b0 = p.c[0];
    const __int128 disc = b1 * b1 - 4 * b2 * b0;
    if (disc < 0) return out;
    if (disc > (static_cast<__int128>(1) << 52)) return std::nullopt;
    if (disc == 0) return std::nullopt;
    Interval sd = sqrt(Interval(static_cast<double>(disc)));
    Interval den(2.0 * static_cast<double>(b2));
    Interval mb(-static_cast<double>(b1));
    Interval r1 = (mb - sd) / den, r2 = (mb + sd) / den;
    if (b2 < 0) std::swap(r1, r2);
    if (!(r1.hi < r2.lo)) return std::nullopt;
    out = {r1, r2};
    return out;
  }
  std::vector<DyadicRoot<CheckedI128>> roots;
  try {
    SturmChain<CheckedI128> ch(to_i128_vector(p.coeffs()));
    roots = isolate_dyadic(ch, CheckedI128(cauchy_bound(p)));
  } catch (const overflow&) {
    return std::nullopt;
  }
  auto coeffs = p.coeffs();
  auto to_iv = [](const CheckedI128& num, unsigned exp) {
    double d = static_cast<double>(num.v);
    Interval v(down(d), up(d));
    double scale = std::ldexp(1.0, -static_cast<int>(exp));
    return Interval(down(v.lo * scale), up(v.hi * scale));
  };
  for (const auto& r : roots) {
    if (r.exact) {
      out.push_back(to_iv(r.lo_num, r.exp));
      continue;
    }
    Interval lo = to_iv(r.lo_num, r.exp), hi = to_iv(r.hi_num, r.exp);
    double a = lo.lo, b = hi.hi;
    if (horner(coeffs, Interval(a)).certain_sign() != r.sign_left) return std::nullopt;
    if (horner(coeffs, Interval(b)).certain_sign() != -r.sign_left) return std::nullopt;
    for (int it = 0; it < 80; ++it) {
      double m = 0.5 * (a + b);
      if (!(m > a && m < b)) break;
      int s = horner(coeffs, Interval(m)).certain_sign();
      if (s == 0) break;
      (s == r.sign_left ? a : b) = m;
    }
    out.push_back({a, b});
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(out[i - 1].hi < out[i].lo)) return std::nullopt;
  return out;
}

/// Largest admissible a_0 range: P = R + a_0 has a root in X only when
/// a_0 in -R(X). `p` carries the prefix with c[0] = 0.
inline void restrict_a0(const SmallPoly& p, Interval x, std::int64_t& lo, std::int64_t& hi) {
  Interval r = range_over(p.coeffs(), x);
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) return;
  double nlo = std::ceil(-r.hi), nhi = std::floor(-r.lo);
  if (nlo > static_cast<double>(lo)) lo = nlo > 9e18 ? hi + 1 : static_cast<std::int64_t>(nlo);
  if (nhi < static_cast<double>(hi)) hi = nhi < -9e18 ? lo - 1 : static_cast<std::int64_t>(nhi);
}

inline std::int64_t gcd_prefix(const SmallPoly& p) {
  std::int64_t g = 0;
  for (int i = 1; i <= p.degree; ++i) g = std::gcd(g, p.c[static_cast<std::size_t>(i)]);
  return g;
}

struct DegreeCounts {
  std::array<std::uint64_t, kMaxSmallDegree + 1> by_degree{};
};

// ---------------------------------------------------------------------------
// Rectangles.

struct RectContext {
  OpenSpan s1, s2;
};

/// Ordered pairs of p's roots in I1 x I2 (I1, I2 disjoint).
inline std::uint64_t rect_pairs(const SmallPoly& p, const RectContext& ctx) {
  if (p.degree == 2) {
    if (auto roots = fast_real_roots(p)) {
      if (roots->size() < 2) return 0;
      Tri a1 = inside((*roots)[0], ctx.s1), b2 = inside((*roots)[1], ctx.s2);
      Tri b1 = inside((*roots)[1], ctx.s1), a2 = inside((*roots)[0], ctx.s2);
      if (a1 != Tri::unknown && b2 != Tri::unknown && b1 != Tri::unknown && a2 != Tri::unknown)
        return static_cast<std::uint64_t>((a1 == Tri::yes && b2 == Tri::yes) + (b1 == Tri::yes && a2 == Tri::yes));
    }
  }
  int n1 = sturm_count(p, ctx.s1);
  if (n1 == 0) return 0;
  int n2 = sturm_count(p, ctx.s2);
  return static_cast<std::uint64_t>(n1) * static_cast<std::uint64_t>(n2);
}

// ---------------------------------------------------------------------------
// Strips.

struct StripContext {
  const Strip* strip;
  OpenSpan J;
  OpenSpan J2;  // open hull of possible x2 values, inclusive of the strip
  Interval w;   // enclosure of the half-width
};

inline StripContext make_strip_context(const Strip& s) {
  auto hull = strip_x2_hull(s);
  auto we = s.half_width.enclose(80);
  return {&s,
          {Endpoint(s.curve.a()), Endpoint(s.curve.b())},
          {Endpoint(hull.lo), Endpoint(hull.hi)},
          Interval::enclosing(we)};
}

// Boundary-tie detection needs an irreducible P; streaming reaches this
// before its own irreducibility filter.
inline std::uint64_t strip_pairs_exact(const SmallPoly& p, const StripContext& ctx) {
  if (!is_irreducible(p)) return 0;
  std::uint64_t count = 0;
  for (const auto& pt : points_of(p.to_int_polynomial()))
    if (point_in_strip(pt, *ctx.strip)) ++count;
  return count;
}

inline std::uint64_t strip_pairs(const SmallPoly& p, const StripContext& ctx) {
  if (p.degree >= 3) {
    if (sturm_count(p, ctx.J) == 0 || sturm_count(p, ctx.J2) == 0) return 0;
  }
  auto roots = fast_real_roots(p);
  if (!roots) return strip_pairs_exact(p, ctx);
  const auto& r = *roots;
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    Tri in1 = inside(r[i], ctx.J);
    if (in1 == Tri::unknown) return strip_pairs_exact(p, ctx);
    if (in1 == Tri::no) continue;
    Interval fx = (*ctx.strip).curve(r[i]);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j == i) continue;
      Interval d = abs(r[j] - fx);
      if (d.hi < ctx.w.lo) {
        ++count;
      } else if (d.lo > ctx.w.hi) {
        continue;
      } else {
        return strip_pairs_exact(p, ctx);
      }
    }
  }
  return count;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public counting entry points.

namespace detail {

/// Streams primitive candidates with a_0 restricted to the intersection of
/// the pushdown ranges over `spans`; fn(p) returns the point contribution
/// before the irreducibility check.
template <class Fn>
DegreeCounts stream_shard(const EnumerationShard& shard, std::int64_t Q, const std::vector<Interval>& spans, Fn&& fn) {
  DegreeCounts out;
  for_each_prefix(shard, Q, [&](SmallPoly& p) {
    std::int64_t lo = -Q, hi = Q;
    for (const auto& x : spans) restrict_a0(p, x, lo, hi);
    if (lo > hi) return;
    const std::int64_t g = gcd_prefix(p);
    for (std::int64_t a0 = lo; a0 <= hi; ++a0) {
      if (std::gcd(g, a0) != 1) continue;
      p.c[0] = a0;
      std::uint64_t k = fn(static_cast<const SmallPoly&>(p));
      if (k != 0 && is_irreducible(p)) out.by_degree[static_cast<std::size_t>(p.degree)] += k;
    }
    p.c[0] = 0;
  });
  return out;
}

template <class Fn>
DegreeCounts stream_class(const PolyClassParams& params, int min_degree, const std::vector<Interval>& spans,
                          unsigned threads, Fn&& fn) {
  std::vector<EnumerationShard> shards;
  for (const auto& s : make_shards(params))
    if (s.degree >= min_degree) shards.push_back(s);
  auto parts = parallel_map<DegreeCounts>(shards.size(), threads,
                                          [&](std::size_t i) { return stream_shard(shards[i], params.Q, spans, fn); });
  DegreeCounts total;
  for (const auto& part : parts)
    for (std::size_t d = 0; d < total.by_degree.size(); ++d) total.by_degree[d] += part.by_degree[d];
  return total;
}

template <class Fn>
DegreeCounts scan_db(const MinimalPolynomialDB& db, unsigned threads, Fn&& fn) {
  constexpr std::size_t kChunk = 4096;
  struct Job {
    int degree;
    std::size_t begin, end;
  };
  std::vector<Job> jobs;
  for (int d = 2; d <= db.params().n; ++d)
    for (std::size_t b = 0; b < db.count_of_degree(d); b += kChunk)
      jobs.push_back({d, b, std::min(db.count_of_degree(d), b + kChunk)});
  auto parts = parallel_map<DegreeCounts>(jobs.size(), threads, [&](std::size_t k) {
    DegreeCounts out;
    for (std::size_t i = jobs[k].begin; i < jobs[k].end; ++i)
      out.by_degree[static_cast<std::size_t>(jobs[k].degree)] += fn(db.small(jobs[k].degree, i));
    return out;
  });
  DegreeCounts total;
  for (const auto& part : parts)
    for (std::size_t d = 0; d < total.by_degree.size(); ++d) total.by_degree[d] += part.by_degree[d];
  return total;
}

inline CountResult finish(const PolyClassParams& params, std::string region, const DegreeCounts& dc, RealValue mu2) {
  CountResult r;
  r.n = params.n;
  r.Q = params.Q;
  r.region = std::move(region);
  r.count_by_degree.assign(static_cast<std::size_t>(params.n) + 1, 0);
  for (int d = 0; d <= params.n; ++d) {
    r.count_by_degree[static_cast<std::size_t>(d)] = dc.by_degree[static_cast<std::size_t>(d)];
    r.count += dc.by_degree[static_cast<std::size_t>(d)];
  }
  r.mu2 = std::move(mu2);
  const double qn = std::pow(static_cast<double>(params.Q), params.n + 1);
  r.ratio = static_cast<double>(r.count) / (qn * r.mu2.approx());
  return r;
}

inline void require_valid(bool ok) {
  if (!ok) throw domain_error("region violates the diagonal exclusion");
}

}  // namespace detail

/// Exact count of the points of all db entries inside an open rectangle.
inline CountResult count_in_region(const MinimalPolynomialDB& db, const Rectangle& rect, const DiagonalExclusion& ex,
                                   unsigned threads = 1) {
  detail::require_valid(validate_region(rect, ex));
  detail::RectContext ctx{{detail::Endpoint(rect.x1_lo), detail::Endpoint(rect.x1_hi)},
                          {detail::Endpoint(rect.x2_lo), detail::Endpoint(rect.x2_hi)}};
  auto dc = detail::scan_db(db, threads, [&](const SmallPoly& p) { return detail::rect_pairs(p, ctx); });
  return detail::finish(db.params(), rect.describe(), dc, RealValue(rect.mu2()));
}

/// Same count streamed over the class without materializing the database.
inline CountResult count_in_region(const PolyClassParams& params, const Rectangle& rect, const DiagonalExclusion& ex,
                                   unsigned threads = 1) {
  detail::require_valid(validate_region(rect, ex));
  detail::RectContext ctx{{detail::Endpoint(rect.x1_lo), detail::Endpoint(rect.x1_hi)},
                          {detail::Endpoint(rect.x2_lo), detail::Endpoint(rect.x2_hi)}};
  std::vector<Interval> spans{ctx.s1.iv(), ctx.s2.iv()};
  auto dc = detail::stream_class(params, 2, spans, threads, [&](const SmallPoly& p) { return detail::rect_pairs(p, ctx); });
  return detail::finish(params, rect.describe(), dc, RealValue(rect.mu2()));
}

namespace detail {
inline void add_strip_normalization(CountResult& r, const Strip& s) {
  if (!s.provenance) return;
  r.lambda = s.provenance->lambda;
  const double e = r.n + 1 - s.provenance->lambda.get_d();
  r.ratio_theorem = static_cast<double>(r.count) / std::pow(static_cast<double>(r.Q), e);
}
}  // namespace detail

inline CountResult count_in_strip(const MinimalPolynomialDB& db, const Strip& strip, const DiagonalExclusion& ex,
                                  unsigned threads = 1) {
  detail::require_valid(validate_region(strip, ex));
  auto ctx = detail::make_strip_context(strip);
  auto dc = detail::scan_db(db, threads, [&](const SmallPoly& p) { return detail::strip_pairs(p, ctx); });
  auto r = detail::finish(db.params(), strip.describe(), dc, strip.mu2());
  detail::add_strip_normalization(r, strip);
  return r;
}

inline CountResult count_in_strip(const PolyClassParams& params, const Strip& strip, const DiagonalExclusion& ex,
                                  unsigned threads = 1) {
  detail::require_valid(validate_region(strip, ex));
  auto ctx = detail::make_strip_context(strip);
  std::vector<Interval> spans{ctx.J.iv(), ctx.J2.iv()};
  auto dc =
      detail::stream_class(params, 2, spans, threads, [&](const SmallPoly& p) { return detail::strip_pairs(p, ctx); });
  auto r = detail::finish(params, strip.describe(), dc, strip.mu2());
  detail::add_strip_normalization(r, strip);
  return r;
}

// ---------------------------------------------------------------------------
// Empty interval near zero.

struct EmptyIntervalResult {
  PolyClassParams params;
  Rational upper;
  bool empty = true;
  std::optional<IntPolynomial> witness;  // canonically first minimal polynomial with a root inside
};

/// Whether no minimal polynomial of the class has a real root in (0, upper).
inline EmptyIntervalResult empty_interval_check(const PolyClassParams& params, const Rational& upper,
                                                unsigned threads = 1) {
  if (upper <= 0) throw domain_error("empty_interval_check requires a positive upper end");
  detail::OpenSpan span{detail::Endpoint(Rational(0)), detail::Endpoint(upper)};
  auto shards = make_shards(params);
  std::vector<Interval> spans{span.iv()};
  auto parts = parallel_map<std::optional<SmallPoly>>(shards.size(), threads, [&](std::size_t i) {
    std::optional<SmallPoly> found;
    for_each_prefix(shards[i], params.Q, [&](SmallPoly& p) {
      if (found) return;
      std::int64_t lo = -params.Q, hi = params.Q;
      detail::restrict_a0(p, span.iv(), lo, hi);
      const std::int64_t g = detail::gcd_prefix(p);
      for (std::int64_t a0 = lo; a0 <= hi && !found; ++a0) {
        if (std::gcd(g, a0) != 1) continue;
        p.c[0] = a0;
        if (detail::sturm_count(p, span) > 0 && is_irreducible(p)) found = p;
      }
      p.c[0] = 0;
    });
    return found;
  });
  EmptyIntervalResult r{params, upper, true, std::nullopt};
  for (const auto& f : parts)
    if (f) {
      r.empty = false;
      r.witness = f->to_int_polynomial();
      break;
    }
  return r;
}

/// The classical interval (0, 1/(2Q)).
inline EmptyIntervalResult empty_interval_check(const PolyClassParams& params, unsigned threads = 1) {
  return empty_interval_check(params, make_rational(1, 2 * params.Q), threads);
}

}  // namespace algpt
