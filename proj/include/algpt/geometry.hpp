#pragma once

// Plane regions and exact membership of algebraic points. All regions are
// open: rectangle sides and the strip inequality are strict.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "algpt/interval.hpp"
#include "algpt/realroots.hpp"

namespace algpt {

/// Ordered pair (alpha_i, alpha_j), i != j, of real roots of one minimal polynomial.
struct AlgebraicPoint {
  std::shared_ptr<const IntPolynomial> minpoly;
  int i = 0;
  int j = 1;
  RootEnclosure first;
  RootEnclosure second;

  AlgebraicNumber alpha1() const { return {first}; }
  AlgebraicNumber alpha2() const { return {second}; }
  int degree() const { return minpoly->degree(); }
  Integer height() const { return algpt::height(*minpoly); }
};

struct DiagonalExclusion {
  Rational eps;

  explicit DiagonalExclusion(Rational e) : eps(std::move(e)) {
    if (eps <= 0) throw domain_error("diagonal exclusion requires eps > 0");
  }
};

// ---------------------------------------------------------------------------
// Rectangles.

/// Records mu_1 I_i = c_{1,i} Q^{-s_i}.
struct RectangleProvenance {
  Rational c11, s1, c12, s2;
  Integer Q;
};

struct Rectangle {
  Rational x1_lo, x1_hi, x2_lo, x2_hi;
  std::optional<RectangleProvenance> provenance;

  Rectangle(Rational a, Rational b, Rational c, Rational d)
      : x1_lo(std::move(a)), x1_hi(std::move(b)), x2_lo(std::move(c)), x2_hi(std::move(d)) {
    validate();
  }

  /// Rectangle centered at (d1, d2) with sides c_{1,i} Q^{-s_i}; the sides
  /// must be rational.
  static Rectangle from_provenance(const Rational& d1, const Rational& d2, const RectangleProvenance& p) {
    auto side1 = ScaledPower(p.c11, p.Q, -p.s1).exact();
    auto side2 = ScaledPower(p.c12, p.Q, -p.s2).exact();
    if (!side1 || !side2) throw domain_error("rectangle provenance gives irrational side lengths");
    Rectangle r(d1 - *side1 / 2, d1 + *side1 / 2, d2 - *side2 / 2, d2 + *side2 / 2);
    r.provenance = p;
    return r;
  }

  void validate() const {
    if (!(x1_lo < x1_hi) || !(x2_lo < x2_hi)) throw domain_error("rectangle requires lo < hi on both axes");
    if (provenance) {
      auto side1 = ScaledPower(provenance->c11, provenance->Q, -provenance->s1).exact();
      auto side2 = ScaledPower(provenance->c12, provenance->Q, -provenance->s2).exact();
      if (!side1 || !side2 || *side1 != x1_hi - x1_lo || *side2 != x2_hi - x2_lo)
        throw domain_error("rectangle sides disagree with their provenance");
    }
  }

  RationalInterval I1() const { return {x1_lo, x1_hi}; }
  RationalInterval I2() const { return {x2_lo, x2_hi}; }
  Rational mu2() const { return (x1_hi - x1_lo) * (x2_hi - x2_lo); }
  Rectangle swapped() const { return Rectangle(x2_lo, x2_hi, x1_lo, x1_hi); }
  Rectangle negated() const { return Rectangle(-x1_hi, -x1_lo, -x2_hi, -x2_lo); }

  std::string describe() const {
    return "[" + to_string(x1_lo) + "," + to_string(x1_hi) + "]x[" + to_string(x2_lo) + "," + to_string(x2_hi) + "]";
  }
};

/// inf over the rectangle of |x1 - x2| >= eps.
inline bool validate_region(const Rectangle& r, const DiagonalExclusion& ex) {
  Rational lo = r.x1_lo - r.x2_hi, hi = r.x1_hi - r.x2_lo;
  Rational gap = (lo <= 0 && hi >= 0) ? Rational(0) : std::min(abs_rat(lo), abs_rat(hi));
  return gap >= ex.eps;
}

inline bool point_in_rectangle(const AlgebraicPoint& pt, const Rectangle& r) {
  using so = std::strong_ordering;
  return compare_to_rational(pt.first, r.x1_lo) == so::greater && compare_to_rational(pt.first, r.x1_hi) == so::less &&
         compare_to_rational(pt.second, r.x2_lo) == so::greater && compare_to_rational(pt.second, r.x2_hi) == so::less;
}

// ---------------------------------------------------------------------------
// Rational polynomials and curves.

namespace detail {

using RatPoly = std::vector<Rational>;  // low to high

inline void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline RatPoly add(const RatPoly& a, const RatPoly& b) {
  RatPoly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i < a.size()) out[i] += a[i];
    if (i < b.size()) out[i] += b[i];
  }
  trim(out);
  return out;
}

inline RatPoly mul(const RatPoly& a, const RatPoly& b) {
  if (a.empty() || b.empty()) return {};
  RatPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

/// p(q(t)) with integer p.
inline RatPoly compose(const IntPolynomial& p, const RatPoly& q) {
  RatPoly acc;
  for (int i = p.degree(); i >= 0; --i) acc = add(mul(acc, q), RatPoly{Rational(p.coeff(i))});
  return acc;
}

/// Positive multiple with integer coefficients.
inline IntPolynomial clear_denominators(const RatPoly& p) {
  Integer l = 1;
  for (const auto& c : p) l = lcm(l, c.get_den());
  std::vector<Integer> out;
  out.reserve(p.size());
  for (const auto& c : p) out.push_back(c.get_num() * (l / c.get_den()));
  return IntPolynomial(std::move(out));
}

inline RationalInterval horner(const RatPoly& c, const RationalInterval& x) {
  if (c.empty()) return {Rational(0), Rational(0)};
  RationalInterval acc{c.back(), c.back()};
  for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * x + RationalInterval{c[i], c[i]};
  return acc;
}

}  // namespace detail

/// y = f(x), f with rational coefficients (low to high), on J = [a, b].
class RationalCurve {
 public:
  RationalCurve(std::vector<Rational> coeffs, Rational a, Rational b)
      : c_(std::move(coeffs)), a_(std::move(a)), b_(std::move(b)) {
    detail::trim(c_);
    if (!(a_ < b_)) throw domain_error("curve domain requires a < b");
    for (const auto& v : c_) ic_.push_back(Interval::enclosing(v));
  }

  const std::vector<Rational>& coefficients() const { return c_; }
  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }
  RationalInterval operator()(const RationalInterval& x) const { return detail::horner(c_, x); }
  Interval operator()(Interval x) const {
    if (ic_.empty()) return Interval(0.0);
    Interval acc = ic_.back();
    for (std::size_t i = ic_.size() - 1; i-- > 0;) acc = acc * x + ic_[i];
    return acc;
  }

  RationalCurve derivative() const {
    std::vector<Rational> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<unsigned long>(i));
    return RationalCurve(std::move(d), a_, b_);
  }

  /// True when f(x) = x identically.
  bool is_identity() const { return c_.size() == 2 && c_[0] == 0 && c_[1] == 1; }

  /// Enclosure of f over [a, b] (rational interval Horner).
  RationalInterval range() const { return (*this)(RationalInterval{a_, b_}); }

  /// sup |f'| over J, exact: endpoints and roots of f'' inside J.
  RealValue c5() const { return sup_abs_on_J(derivative()); }

  /// Monotone on J iff f' has no sign change inside (a, b).
  bool is_monotone() const {
    auto d = derivative();
    auto ip = detail::clear_denominators(d.c_);
    if (ip.degree() <= 0) return true;
    // Sample f' strictly between consecutive critical points inside J.
    std::vector<Rational> cuts{a_};
    for (auto e : isolate_real_roots(squarefree_part(ip))) {
      if (compare_to_rational(e, a_) != std::strong_ordering::greater) continue;
      if (compare_to_rational(e, b_) != std::strong_ordering::less) continue;
      while (!e.is_exact() && (e.lo < a_ || e.hi > b_)) e = halve(e);
      cuts.push_back(e.lo);
      cuts.push_back(e.hi);
    }
    cuts.push_back(b_);
    int s_ref = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); k += 2) {
      int s = sign(Rational(d((cuts[k] + cuts[k + 1]) / 2)));
      if (s == 0) continue;
      if (s_ref == 0) s_ref = s;
      if (s != s_ref) return false;
    }
    return true;
  }

  std::string describe() const {
    std::string s = "f=[";
    for (std::size_t i = 0; i < c_.size(); ++i) s += (i ? "," : "") + to_string(c_[i]);
    return s + "] on [" + to_string(a_) + "," + to_string(b_) + "]";
  }

 private:
  /// sup |g| over J as a refinable real.
  static RealValue sup_abs_on_J(const RationalCurve& g) {
    Rational endpoint_max = std::max(abs_rat(g(g.a_)), abs_rat(g(g.b_)));
    auto dg = g.derivative();
    std::vector<RootEnclosure> crit;
    if (!dg.c_.empty()) {
      auto ip = detail::clear_denominators(dg.c_);
      if (ip.degree() >= 1) {
        for (auto e : isolate_real_roots(squarefree_part(ip)))
          if (compare_to_rational(e, g.a_) == std::strong_ordering::greater &&
              compare_to_rational(e, g.b_) == std::strong_ordering::less)
            crit.push_back(e);
      }
    }
    std::vector<Rational> exact_vals{endpoint_max};
    std::vector<RootEnclosure> irrational;
    for (const auto& e : crit) {
      if (e.is_exact())
        exact_vals.push_back(abs_rat(g(e.lo)));
      else
        irrational.push_back(e);
    }
    Rational best = *std::max_element(exact_vals.begin(), exact_vals.end());
    if (irrational.empty()) return RealValue(best);
    auto encl = [g, best, irrational](unsigned bits) mutable {
      Rational target(1);
      mpz_mul_2exp(target.get_den_mpz_t(), target.get_den_mpz_t(), bits);
      while (true) {
        RationalInterval out{best, best};
        for (auto& e : irrational) {
          auto v = abs(g(RationalInterval{e.lo, e.hi}));
          out.lo = std::max(out.lo, v.lo);
          out.hi = std::max(out.hi, v.hi);
        }
        if (out.hi - out.lo <= target) return out;
        for (auto& e : irrational) e = halve(e);
      }
    };
    double approx = best.get_d();
    {
      auto e = encl(30);
      approx = e.hi.get_d();
    }
    return RealValue::from_encloser(encl, approx);
  }

  std::vector<Rational> c_;
  std::vector<Interval> ic_;
  Rational a_, b_;
};

// ---------------------------------------------------------------------------
// Strips.

/// Records w = (1/2 + c5) c3 Q^{-lambda}.
struct StripProvenance {
  Rational c3;
  RealValue c5;
  Rational lambda;
  Integer Q;
};

/// L = {(x1, x2) : a < x1 < b, |x2 - f(x1)| < w}.
struct Strip {
  RationalCurve curve;
  RealValue half_width;
  std::optional<StripProvenance> provenance;

  Strip(RationalCurve f, RealValue w) : curve(std::move(f)), half_width(std::move(w)) { validate(); }

  static Strip from_provenance(RationalCurve f, const Rational& c3, const Rational& lambda, const Integer& Q) {
    if (c3 <= 0) throw domain_error("strip requires c3 > 0");
    if (Q < 1) throw domain_error("strip requires Q >= 1");
    RealValue c5 = f.c5();
    RealValue w = (RealValue(Rational(1, 2)) + c5) * RealValue(ScaledPower(c3, Q, -lambda));
    Strip s(std::move(f), w);
    s.provenance = StripProvenance{c3, c5, lambda, Q};
    s.validate();
    return s;
  }

  void validate() const {
    if (curve.is_identity()) throw domain_error("strip curve f(x) = x has infinitely many fixed points");
    auto c = half_width.compare(Rational(0));
    if (!c || *c != std::strong_ordering::less) throw domain_error("strip requires a positive half-width");
    if (provenance && (provenance->lambda <= 0 || provenance->lambda >= Rational(3, 4)))
      throw domain_error("strip requires 0 < lambda < 3/4");
  }

  /// Area proxy 2 w (b - a).
  RealValue mu2() const { return RealValue(Rational(2) * (curve.b() - curve.a())) * half_width; }

  std::string describe() const { return "strip " + curve.describe() + " w~" + format_double(half_width.approx()); }
};

namespace detail {

/// Outer rational bound of a real value from above / below.
inline Rational upper_bound(const RealValue& v, unsigned bits = 64) { return v.enclose(bits).hi; }
inline Rational lower_bound(const RealValue& v, unsigned bits = 64) { return v.enclose(bits).lo; }

}  // namespace detail

/// inf over the strip of |x1 - x2| >= eps, i.e. |x - f(x)| >= eps + w on J.
inline bool validate_region(const Strip& s, const DiagonalExclusion& ex) {
  const auto& f = s.curve;
  if (f.is_identity()) return false;
  // g(x) = x - f(x)
  std::vector<Rational> gc = f.coefficients();
  if (gc.size() < 2) gc.resize(2);
  gc[1] -= 1;
  for (auto& v : gc) v = -v;
  RationalCurve g(gc, f.a(), f.b());
  // min |g| over J: zero if g changes sign or vanishes; otherwise attained at
  // an endpoint or a critical point of g.
  auto gi = detail::clear_denominators(gc);
  if (gi.degree() >= 1) {
    auto sf = squarefree_part(gi);
    if (sign_at(gi, f.a()) == 0 || sign_at(gi, f.b()) == 0 || count_roots_open(sf, f.a(), f.b()) > 0) return false;
  }
  Rational end_min = std::min(abs_rat(g(f.a())), abs_rat(g(f.b())));
  std::vector<RootEnclosure> crit;
  auto dg = g.derivative();
  auto dgi = detail::clear_denominators(dg.coefficients());
  if (dgi.degree() >= 1)
    for (auto e : isolate_real_roots(squarefree_part(dgi)))
      if (compare_to_rational(e, f.a()) == std::strong_ordering::greater &&
          compare_to_rational(e, f.b()) == std::strong_ordering::less)
        crit.push_back(e);
  // Need min|g| - eps >= w; refine until decided. An exact tie counts as >=.
  for (unsigned bits = 8; bits <= 512; bits *= 2) {
    Rational lo = end_min, hi = end_min;
    bool exact = true;
    for (auto& e : crit) {
      auto v = abs(g(RationalInterval{e.lo, e.hi}));
      lo = std::min(lo, v.lo);
      hi = std::min(hi, v.hi);
      exact = exact && e.is_exact();
    }
    auto w = s.half_width.enclose(bits);
    if (lo - ex.eps >= w.hi) return true;
    if (hi - ex.eps < w.lo) return false;
    if (exact && w.is_point()) return lo - ex.eps >= w.lo;
    for (auto& e : crit) e = refine(e, Rational(1, 1) / (Rational(Integer(1) << bits)));
  }
  return true;
}

/// Inclusive bounds (lo, hi) on x2 over the strip: f(J) -/+ w.
inline RationalInterval strip_x2_hull(const Strip& s) {
  auto fr = s.curve.range();
  Rational w = detail::upper_bound(s.half_width);
  return {fr.lo - w, fr.hi + w};
}

inline constexpr int kStripRefinementCap = 256;

/// True when |alpha2 - f(alpha1)| = w exactly for a rational w: then
/// f(alpha1) +/- w is a root of P at alpha1, i.e. P divides P(f(t) +/- w).
inline bool strip_boundary_tie(const AlgebraicPoint& pt, const Strip& s) {
  auto w = s.half_width.exact();
  if (!w) return false;
  const auto& P = *pt.minpoly;
  for (int sg : {1, -1}) {
    detail::RatPoly shifted = s.curve.coefficients();
    if (shifted.empty()) shifted.resize(1);
    shifted[0] += sg * *w;
    detail::trim(shifted);
    auto G = detail::clear_denominators(detail::compose(P, shifted));
    if (G.is_zero()) return true;
    if (!exact_divide(G, P)) continue;
    // alpha1 is a root of G, so f(alpha1) + sg*w is some root of P; check it is alpha2.
    auto e1 = pt.first, e2 = pt.second;
    for (int k = 0; k < kStripRefinementCap; ++k) {
      auto fv = s.curve(RationalInterval{e1.lo, e1.hi});
      RationalInterval target{fv.lo + sg * *w, fv.hi + sg * *w};
      if (target.hi < e2.lo || target.lo > e2.hi) break;
      if (e1.is_exact() && e2.is_exact()) return true;
      e1 = halve(e1);
      e2 = halve(e2);
      if (k == kStripRefinementCap - 1) return true;
    }
  }
  return false;
}

/// Exact membership: a < alpha1 < b and |alpha2 - f(alpha1)| < w.
inline bool point_in_strip(const AlgebraicPoint& pt, const Strip& s) {
  using so = std::strong_ordering;
  if (compare_to_rational(pt.first, s.curve.a()) != so::greater) return false;
  if (compare_to_rational(pt.first, s.curve.b()) != so::less) return false;
  auto e1 = pt.first, e2 = pt.second;
  for (int round = 0; round <= kStripRefinementCap; ++round) {
    auto fv = s.curve(RationalInterval{e1.lo, e1.hi});
    auto d = abs(RationalInterval{e2.lo, e2.hi} - fv);
    auto hi_cmp = s.half_width.compare(d.hi, 64 + 2 * static_cast<unsigned>(round));
    if (hi_cmp && *hi_cmp == so::less) return true;
    auto lo_cmp = s.half_width.compare(d.lo, 64 + 2 * static_cast<unsigned>(round));
    if (lo_cmp && *lo_cmp != so::less) return false;
    if (e1.is_exact() && e2.is_exact()) break;
    e1 = halve(e1);
    e2 = halve(e2);
  }
  if (strip_boundary_tie(pt, s)) return false;
  throw undecided_error("strip membership undecided", pt.minpoly->to_string() + " roots " + std::to_string(pt.i) +
                                                          "," + std::to_string(pt.j));
}

}  // namespace algpt
