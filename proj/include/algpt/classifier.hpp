#pragma once

// Sublevel sets {x : |P(x)| < B} and the ordinary/special classification of
// squares by quadratics b2 t^2 + b1 t + b0 with |b2| < Q^{s-1/2} that are
// smaller than C Q^{-u_i} somewhere in each side interval.

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "algpt/geometry.hpp"
#include "algpt/interval.hpp"
#include "algpt/parallel.hpp"
#include "algpt/polyint.hpp"
#include "algpt/rational.hpp"
#include "algpt/realroots.hpp"

namespace algpt {

// ---------------------------------------------------------------------------
// Sublevel sets.

/// Open interval with algebraic endpoints; a missing endpoint is infinite.
struct SublevelInterval {
  std::optional<RootEnclosure> lo;
  std::optional<RootEnclosure> hi;
};

namespace detail {

/// Sorts enclosures of pairwise distinct reals and refines until the closed
/// hulls are strictly ordered.
inline void separate(std::vector<RootEnclosure>& v) {
  for (;;) {
    std::sort(v.begin(), v.end(), [](const RootEnclosure& a, const RootEnclosure& b) { return a.lo < b.lo; });
    bool done = true;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      if (v[k].hi < v[k + 1].lo) continue;
      done = false;
      v[k] = halve(v[k]);
      v[k + 1] = halve(v[k + 1]);
    }
    if (done) return;
  }
}

inline IntPolynomial constant_poly(const Integer& c) { return IntPolynomial(std::vector<Integer>{c}); }

/// Real root enclosure as a refinable value.
inline RealValue root_value(const RootEnclosure& e) {
  if (e.is_exact()) return RealValue(e.lo);
  return RealValue::from_encloser(
      [e](unsigned bits) {
        Rational w(1);
        mpz_mul_2exp(w.get_den_mpz_t(), w.get_den_mpz_t(), bits);
        w.canonicalize();
        auto r = refine(e, w);
        return RationalInterval{r.lo, r.hi};
      },
      Rational((e.lo + e.hi) / 2).get_d());
}

}  // namespace detail

/// {x : |p(x)| < bound} as disjoint open intervals in ascending order.
/// Endpoints are roots of den*p -+ num where bound = num/den.
inline std::vector<SublevelInterval> sublevel_intervals(const IntPolynomial& p, const Rational& bound) {
  if (p.is_zero()) throw domain_error("sublevel set of the zero polynomial");
  if (bound <= 0) throw domain_error("sublevel bound must be positive");
  if (p.degree() == 0) {
    if (abs_rat(Rational(p.coeff(0))) < bound) return {SublevelInterval{}};
    return {};
  }
  IntPolynomial base = Integer(bound.get_den()) * p;
  std::vector<RootEnclosure> cuts;
  for (const auto& shifted : {base - detail::constant_poly(bound.get_num()), base + detail::constant_poly(bound.get_num())})
    for (auto& e : isolate_real_roots(squarefree_part(shifted))) cuts.push_back(std::move(e));
  detail::separate(cuts);
  const std::size_t m = cuts.size();
  std::vector<SublevelInterval> out;
  for (std::size_t g = 0; g <= m; ++g) {
    Rational sample;
    if (m == 0)
      sample = 0;
    else if (g == 0)
      sample = cuts[0].lo - 1;
    else if (g == m)
      sample = cuts[m - 1].hi + 1;
    else
      sample = (cuts[g - 1].hi + cuts[g].lo) / 2;
    if (abs_rat(evaluate(p, sample)) >= bound) continue;
    SublevelInterval iv;
    if (g > 0) iv.lo = cuts[g - 1];
    if (g < m) iv.hi = cuts[g];
    out.push_back(std::move(iv));
  }
  return out;
}

/// Enclosure of the length of (union of intervals) intersected with [a, b];
/// endpoints are refined to width tol.
inline RationalInterval sublevel_measure(const std::vector<SublevelInterval>& set, const Rational& a,
                                         const Rational& b, const Rational& tol) {
  RationalInterval total{Rational(0), Rational(0)};
  auto clip = [&](Rational lo, Rational hi) {
    lo = std::max(lo, a);
    hi = std::min(hi, b);
    return hi > lo ? Rational(hi - lo) : Rational(0);
  };
  for (const auto& iv : set) {
    Rational inner_lo = a, outer_lo = a, inner_hi = b, outer_hi = b;
    if (iv.lo) {
      auto e = refine(*iv.lo, tol);
      inner_lo = std::max(a, e.hi);
      outer_lo = std::max(a, e.lo);
    }
    if (iv.hi) {
      auto e = refine(*iv.hi, tol);
      inner_hi = std::min(b, e.lo);
      outer_hi = std::min(b, e.hi);
    }
    total.lo += clip(inner_lo, inner_hi);
    total.hi += clip(outer_lo, outer_hi);
  }
  return total;
}

/// True when the open interval meets the closed interval [lo, hi]; nullopt
/// when an endpoint comparison stays undecided after refinement.
inline std::optional<bool> meets(const SublevelInterval& iv, const RealValue& lo, const RealValue& hi) {
  // (alpha, beta) meets [lo, hi] iff alpha < hi and beta > lo.
  auto less = [](const RealValue& x, const RealValue& y) -> std::optional<bool> {
    for (unsigned bits = 16; bits <= 512; bits *= 2) {
      auto ex = x.enclose(bits), ey = y.enclose(bits);
      if (ex.hi < ey.lo) return true;
      if (ex.lo >= ey.hi) return false;
    }
    return std::nullopt;
  };
  if (iv.lo) {
    auto r = less(detail::root_value(*iv.lo), hi);
    if (!r || !*r) return r;
  }
  if (iv.hi) {
    auto r = less(lo, detail::root_value(*iv.hi));
    if (!r || !*r) return r;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Squares.

/// Closed box lo1 <= x1 <= hi1, lo2 <= x2 <= hi2 with real endpoints.
struct SquareBox {
  RealValue lo1, hi1, lo2, hi2;
};

struct SquareSpec {
  Rational d1, d2;
  RealValue side;  // c3 Q^{-s}
  Rational s;
  Integer Q;
  Rational u1 = Rational(1, 2);
  Rational u2 = Rational(1, 2);
  Rational C = 1;
  bool require_quadratic = false;  // exclusive reading b2 != 0

  static RealValue side_from(const Rational& c3, const Rational& s, const Integer& Q) {
    if (c3 <= 0) throw config_error("square requires c3 > 0");
    return RealValue(ScaledPower(c3, Q, -s));
  }

  void validate() const {
    if (!(s > Rational(1, 2) && s < Rational(3, 4))) throw config_error("square requires 1/2 < s < 3/4");
    if (Q < 1) throw config_error("square requires Q >= 1");
    if (u1 <= 0 || u2 <= 0 || u1 + u2 != 1) throw config_error("square requires u1, u2 > 0 with u1 + u2 = 1");
    if (C < 0) throw config_error("square requires C >= 0");
    auto c = side.compare(Rational(0));
    if (!c || *c != std::strong_ordering::less) throw config_error("square requires a positive side");
  }

  SquareBox box() const {
    RealValue half = RealValue(Rational(1, 2)) * side;
    return {RealValue(d1) - half, RealValue(d1) + half, RealValue(d2) - half, RealValue(d2) + half};
  }
};

enum class Verdict { ordinary, special };

inline const char* to_string(Verdict v) { return v == Verdict::special ? "special" : "ordinary"; }

struct QuadraticWitness {
  std::int64_t b2 = 0, b1 = 0, b0 = 0;
  IntPolynomial poly() const { return IntPolynomial{static_cast<long>(b0), static_cast<long>(b1), static_cast<long>(b2)}; }
  auto operator<=>(const QuadraticWitness&) const = default;
};

struct Classification {
  Verdict verdict = Verdict::ordinary;
  std::optional<QuadraticWitness> witness;
};

/// Search parameters shared by every square of a family.
struct ClassifierParams {
  Integer Q;
  Rational s;
  Rational u1 = Rational(1, 2);
  Rational u2 = Rational(1, 2);
  Rational C = 1;
  bool require_quadratic = false;
};

namespace detail {

/// Largest integer m with m < Q^{s-1/2}.
inline std::int64_t b2_limit(const Integer& Q, const Rational& s) {
  ScaledPower t(Rational(1), Q, s - Rational(1, 2));
  auto m = static_cast<std::int64_t>(std::floor(t.approx())) + 2;
  while (m > 0 && t.compare(Rational(m)) != std::strong_ordering::less) --m;
  return m;
}

inline Interval enclose_value(const RealValue& v) { return Interval::enclosing(v.enclose(64)); }

/// One side of the box: endpoints and the sublevel bound B = C Q^{-u}.
struct SideContext {
  RealValue lo, hi;
  Interval ilo, ihi;
  RealValue bound;
  Interval ibound;
};

/// A point of the closed side interval where -R = -(b2 t^2 + b1 t) is
/// extremal: an endpoint or the vertex.
struct Candidate {
  RealValue point;
  Interval value;  // enclosure of -R(point)
};

inline std::vector<Candidate> candidates(const SideContext& side, std::int64_t b2, std::int64_t b1) {
  auto neg_r = [&](Interval t) { return -(Interval(static_cast<double>(b2)) * sqr(t) + Interval(static_cast<double>(b1)) * t); };
  std::vector<Candidate> out{{side.lo, neg_r(side.ilo)}, {side.hi, neg_r(side.ihi)}};
  if (b2 != 0) {
    Rational v = make_rational(-b1, 2 * b2);
    Interval iv = Interval::enclosing(v);
    bool outside = iv.hi < side.ilo.lo || iv.lo > side.ihi.hi;
    if (!outside && (iv.lo <= side.ilo.hi || iv.hi >= side.ihi.lo)) {
      // Near an endpoint: decide exactly; a tie is harmless either way.
      auto a = side.lo.compare(v), b = side.hi.compare(v);
      outside = (a && *a == std::strong_ordering::less) || (b && *b == std::strong_ordering::greater);
    }
    if (!outside) out.push_back({RealValue(v), neg_r(iv)});
  }
  return out;
}

/// Exact value of -R(t) + offset.
inline RealValue shifted_value(const RealValue& t, std::int64_t b2, std::int64_t b1, const RealValue& offset) {
  RealValue r = RealValue(Rational(-b2)) * t * t + RealValue(Rational(-b1)) * t;
  return r + offset;
}

/// Some candidate p has -R(p) - B < b0 (lower) or -R(p) + B > b0 (upper).
inline bool side_condition(const SideContext& side, const std::vector<Candidate>& cand, std::int64_t b2,
                           std::int64_t b1, std::int64_t b0, bool lower) {
  const double x = static_cast<double>(b0);
  std::vector<const Candidate*> unsure;
  for (const auto& c : cand) {
    Interval v = lower ? c.value - side.ibound : c.value + side.ibound;
    if (lower ? v.hi < x : v.lo > x) return true;
    if (lower ? v.lo < x : v.hi > x) unsure.push_back(&c);
  }
  for (const auto* c : unsure) {
    RealValue off = lower ? -side.bound : side.bound;
    auto cmp = shifted_value(c->point, b2, b1, off).compare(Rational(b0));
    // An undecided comparison is a tie, which fails the strict inequality.
    if (cmp && *cmp == (lower ? std::strong_ordering::greater : std::strong_ordering::less)) return true;
  }
  return false;
}

inline SideContext make_side(const RealValue& lo, const RealValue& hi, const Integer& Q, const Rational& C,
                             const Rational& u) {
  RealValue bound(ScaledPower(C, Q, -u));
  return {lo, hi, enclose_value(lo), enclose_value(hi), bound, enclose_value(bound)};
}

/// Least b0 (ascending) making (b2, b1, b0) a witness, if any.
inline std::optional<std::int64_t> find_b0(const SideContext (&sides)[2], std::int64_t b2, std::int64_t b1,
                                           std::int64_t Q) {
  std::int64_t lo = -Q, hi = Q;
  std::vector<Candidate> cand[2];
  for (int i = 0; i < 2; ++i) {
    cand[i] = candidates(sides[i], b2, b1);
    double mn = cand[i][0].value.lo, mx = cand[i][0].value.hi;
    for (const auto& c : cand[i]) {
      mn = std::min(mn, c.value.lo);
      mx = std::max(mx, c.value.hi);
    }
    double a = std::floor(down(mn - sides[i].ibound.hi)), b = std::ceil(up(mx + sides[i].ibound.hi));
    if (a > static_cast<double>(Q) || b < static_cast<double>(-Q)) return std::nullopt;
    lo = std::max(lo, static_cast<std::int64_t>(std::max(a, static_cast<double>(-Q))));
    hi = std::min(hi, static_cast<std::int64_t>(std::min(b, static_cast<double>(Q))));
  }
  for (std::int64_t b0 = lo; b0 <= hi; ++b0) {
    if (b2 == 0 && b1 == 0 && b0 == 0) continue;
    bool ok = true;
    for (int i = 0; i < 2 && ok; ++i)
      ok = side_condition(sides[i], cand[i], b2, b1, b0, true) && side_condition(sides[i], cand[i], b2, b1, b0, false);
    if (ok) return b0;
  }
  return std::nullopt;
}

}  // namespace detail

/// Exhaustive search in lexicographic (b2, b1, b0) order, sharded by b2. The
/// returned witness is the lexicographically least one regardless of the
/// thread count.
inline Classification classify_box(const SquareBox& box, const ClassifierParams& p, unsigned threads = 1) {
  if (p.C == 0) return {};
  if (!fits_int64(p.Q) || p.Q > Integer(1) << 30) throw config_error("classifier requires Q < 2^30");
  const std::int64_t Q = p.Q.get_si();
  const detail::SideContext sides[2] = {detail::make_side(box.lo1, box.hi1, p.Q, p.C, p.u1),
                                        detail::make_side(box.lo2, box.hi2, p.Q, p.C, p.u2)};
  const std::int64_t m = std::min<std::int64_t>(detail::b2_limit(p.Q, p.s), Q);
  std::vector<std::int64_t> b2s;
  for (std::int64_t b2 = -m; b2 <= m; ++b2)
    if (b2 != 0 || !p.require_quadratic) b2s.push_back(b2);
  std::atomic<std::size_t> first_hit{b2s.size()};
  auto found = parallel_map<std::optional<QuadraticWitness>>(b2s.size(), threads, [&](std::size_t k) {
    std::optional<QuadraticWitness> w;
    for (std::int64_t b1 = -Q; b1 <= Q; ++b1) {
      if (first_hit.load() < k) return w;
      if (auto b0 = detail::find_b0(sides, b2s[k], b1, Q)) {
        w = QuadraticWitness{b2s[k], b1, *b0};
        std::size_t cur = first_hit.load();
        while (k < cur && !first_hit.compare_exchange_weak(cur, k)) {
        }
        return w;
      }
    }
    return w;
  });
  for (auto& w : found)
    if (w) return {Verdict::special, w};
  return {};
}

inline Classification classify_square(const SquareSpec& spec, unsigned threads = 1) {
  spec.validate();
  return classify_box(spec.box(), {spec.Q, spec.s, spec.u1, spec.u2, spec.C, spec.require_quadratic}, threads);
}

/// Independent re-check of a witness through sublevel_intervals. Requires the
/// bounds C Q^{-u_i} to be rational.
inline bool witness_valid(const SquareBox& box, const ClassifierParams& p, const QuadraticWitness& w) {
  if (w.b2 == 0 && w.b1 == 0 && w.b0 == 0) return false;
  auto lim = ScaledPower(Rational(1), p.Q, p.s - Rational(1, 2));
  if (lim.compare(Rational(w.b2 < 0 ? -w.b2 : w.b2)) != std::strong_ordering::less) return false;
  if (Integer(w.b1 < 0 ? -w.b1 : w.b1) > p.Q || Integer(w.b0 < 0 ? -w.b0 : w.b0) > p.Q) return false;
  const RealValue* ends[2][2] = {{&box.lo1, &box.hi1}, {&box.lo2, &box.hi2}};
  const Rational* us[2] = {&p.u1, &p.u2};
  for (int i = 0; i < 2; ++i) {
    auto bound = ScaledPower(p.C, p.Q, -*us[i]).exact();
    if (!bound) throw domain_error("witness re-check requires rational bounds");
    bool hit = false;
    for (const auto& iv : sublevel_intervals(w.poly(), *bound)) {
      auto r = meets(iv, *ends[i][0], *ends[i][1]);
      hit = hit || (r && *r);
    }
    if (!hit) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Families of boxes along a strip.

/// Boxes Pi_j = [x_{j-1}, x_j] x [fbar_j - c5 side/2, fbar_j + c5 side/2] with
/// x_j = a + j side, side = c3 Q^{-lambda}, j = 1..floor(|J|/side), and fbar_j
/// the midrange of f on the j-th segment. Requires f monotone on J.
inline std::vector<SquareBox> strip_tiling(const RationalCurve& f, const Rational& c3, const Rational& lambda,
                                           const Integer& Q) {
  if (!f.is_monotone()) throw domain_error("strip tiling requires f monotone on J");
  if (c3 <= 0) throw config_error("strip tiling requires c3 > 0");
  ScaledPower count_value((f.b() - f.a()) / c3, Q, lambda);  // |J| / side
  auto t = static_cast<std::int64_t>(std::floor(count_value.approx())) + 2;
  while (t > 0 && count_value.compare(Rational(t)) == std::strong_ordering::greater) --t;
  RealValue side(ScaledPower(c3, Q, -lambda));
  RealValue half_height = RealValue(Rational(1, 2)) * f.c5() * side;
  auto eval = [&](const RealValue& x) {
    const auto& c = f.coefficients();
    RealValue acc(Rational(0));
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + RealValue(c[i]);
    return acc;
  };
  std::vector<SquareBox> out;
  for (std::int64_t j = 1; j <= t; ++j) {
    RealValue lo = RealValue(f.a()) + RealValue(Rational(j - 1)) * side;
    RealValue hi = RealValue(f.a()) + RealValue(Rational(j)) * side;
    RealValue mid = RealValue(Rational(1, 2)) * (eval(lo) + eval(hi));
    out.push_back({lo, hi, mid - half_height, mid + half_height});
  }
  return out;
}

struct FractionResult {
  std::vector<Classification> rows;
  std::size_t special = 0;
  Rational fraction;
};

inline FractionResult special_fraction(const std::vector<SquareBox>& family, const ClassifierParams& p,
                                       unsigned threads = 1) {
  if (family.empty()) throw domain_error("special fraction of an empty family");
  FractionResult r;
  r.rows = parallel_map<Classification>(family.size(), threads,
                                        [&](std::size_t k) { return classify_box(family[k], p, 1); });
  for (const auto& c : r.rows) r.special += c.verdict == Verdict::special;
  r.fraction = make_rational(static_cast<long>(r.special), static_cast<long>(family.size()));
  return r;
}

}  // namespace algpt
