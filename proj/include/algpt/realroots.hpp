#pragma once

// Certified real-root isolation with Sturm sequences.
//
// Sturm chains are templated over the coefficient ring so the same code runs
// on overflow-checked 128-bit integers (fast path) and on GMP integers (exact
// fallback). Each chain member after P and P' is the negated remainder of a
// pseudo-division whose multiplier is |lc|^k > 0, divided by its positive
// content, so the sign structure is that of the classical Sturm sequence.

#include <memory>
#include <optional>
#include <vector>

#include "algpt/interval.hpp"
#include "algpt/polyint.hpp"

namespace algpt {

namespace detail {

template <class Int>
void trim_poly(std::vector<Int>& p) {
  while (!p.empty() && sgn_of(p.back()) == 0) p.pop_back();
}

template <class Int>
void make_primitive_positive_scale(std::vector<Int>& p) {
  Int g = Int(0);
  for (const auto& a : p) g = gcd_of(g, a);
  if (sgn_of(g) == 0 || g == Int(1)) return;
  for (auto& a : p) a = exact_div(a, g);
}

/// Remainder of (|lc(b)|^(deg a - deg b + 1)) * a divided by b.
template <class Int>
std::vector<Int> positive_pseudo_remainder(std::vector<Int> a, const std::vector<Int>& b) {
  const int db = static_cast<int>(b.size()) - 1;
  const Int lead = b.back();
  const Int c = abs_of(lead);
  const bool neg = sgn_of(lead) < 0;
  for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
    Int top = a[static_cast<std::size_t>(i)];
    if (neg) top = -top;
    for (auto& v : a) v = v * c;
    for (int j = 0; j <= db; ++j)
      a[static_cast<std::size_t>(i - db + j)] = a[static_cast<std::size_t>(i - db + j)] - top * b[static_cast<std::size_t>(j)];
    a[static_cast<std::size_t>(i)] = Int(0);
  }
  a.resize(static_cast<std::size_t>(std::max(db, 0)));
  trim_poly(a);
  return a;
}

template <class Int>
int eval_sign(const std::vector<Int>& p, const Int& num, const Int& den) {
  if (p.empty()) return 0;
  Int acc = p.back();
  Int dpow = Int(1);
  for (std::size_t i = p.size() - 1; i-- > 0;) {
    dpow = dpow * den;
    acc = acc * num + p[i] * dpow;
  }
  return sgn_of(acc);
}

}  // namespace detail

/// Sturm sequence of a polynomial over the integer type Int.
template <class Int>
class SturmChain {
 public:
  explicit SturmChain(std::vector<Int> p) {
    detail::trim_poly(p);
    if (p.empty()) throw domain_error("Sturm chain of the zero polynomial");
    seq_.push_back(p);
    if (p.size() <= 1) return;
    std::vector<Int> d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * Int(static_cast<int>(i));
    detail::make_primitive_positive_scale(d);
    seq_.push_back(std::move(d));
    while (seq_.back().size() > 1) {
      auto r = detail::positive_pseudo_remainder(seq_[seq_.size() - 2], seq_.back());
      if (r.empty()) break;
      for (auto& v : r) v = -v;
      detail::make_primitive_positive_scale(r);
      seq_.push_back(std::move(r));
    }
  }

  const std::vector<Int>& poly() const { return seq_.front(); }
  std::size_t length() const { return seq_.size(); }

  /// Sign variations at num/den (den > 0), zeros skipped.
  int variations(const Int& num, const Int& den) const {
    int count = 0, last = 0;
    for (const auto& q : seq_) {
      int s = detail::eval_sign(q, num, den);
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  }

  int sign_at(const Int& num, const Int& den) const { return detail::eval_sign(seq_.front(), num, den); }

  /// Sign of P' at num/den.
  int derivative_sign_at(const Int& num, const Int& den) const {
    if (seq_.size() < 2) return 0;
    return detail::eval_sign(seq_[1], num, den);
  }

  /// Number of distinct real roots in the open interval (a, b), a < b.
  int count_open(const Int& an, const Int& ad, const Int& bn, const Int& bd) const {
    int v = variations(an, ad) - variations(bn, bd);
    if (sign_at(bn, bd) == 0) --v;
    return v;
  }

 private:
  std::vector<std::vector<Int>> seq_;
};

namespace detail {

inline std::vector<Integer> to_mpz_vector(const IntPolynomial& p) {
  return {p.coefficients().begin(), p.coefficients().end()};
}

inline std::vector<CheckedI128> to_i128_vector(std::span<const std::int64_t> c) {
  std::vector<CheckedI128> out;
  out.reserve(c.size());
  for (auto v : c) out.emplace_back(v);
  return out;
}

/// Integer Cauchy bound: every root z satisfies |z| < bound.
inline Integer cauchy_bound(const IntPolynomial& p) {
  Integer h = 0;
  for (int i = 0; i < p.degree(); ++i) h = std::max(h, Integer(abs(p.coeff(i))));
  Integer a = abs(p.leading());
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), h.get_mpz_t(), a.get_mpz_t());
  return q + 1;
}

inline std::int64_t cauchy_bound(const SmallPoly& p) {
  std::int64_t h = 0;
  for (int i = 0; i < p.degree; ++i) h = std::max(h, std::abs(p.c[static_cast<std::size_t>(i)]));
  std::int64_t a = std::abs(p.c[static_cast<std::size_t>(p.degree)]);
  return (h + a - 1) / a + 1;
}

/// A root isolated on the dyadic grid: (lo, hi) = (lo_num, hi_num) / 2^exp.
template <class Int>
struct DyadicRoot {
  Int lo_num, hi_num;
  unsigned exp = 0;
  bool exact = false;  // lo_num == hi_num and the point is a root
  int sign_left = 0;   // sign of P on (lo, root)
};

template <class Int>
Int pow2(unsigned e) {
  Int r(1);
  for (unsigned i = 0; i < e; ++i) r = r * Int(2);
  return r;
}

/// Bisection on dyadic points starting from (-bound, bound).
template <class Int>
std::vector<DyadicRoot<Int>> isolate_dyadic(const SturmChain<Int>& chain, const Int& bound) {
  struct Job {
    Int lo, hi;
    unsigned exp;
    int count;
  };
  std::vector<DyadicRoot<Int>> out;
  const Int one(1);
  int total = chain.count_open(-bound, one, bound, one);
  if (total <= 0) return out;
  std::vector<Job> stack{{-bound, bound, 0u, total}};
  while (!stack.empty()) {
    Job j = stack.back();
    stack.pop_back();
    Int den = pow2<Int>(j.exp);
    if (j.count == 1) {
      int s = chain.sign_at(j.lo, den);
      if (s == 0) s = chain.derivative_sign_at(j.lo, den);
      out.push_back({j.lo, j.hi, j.exp, false, s});
      continue;
    }
    Int lo = j.lo * Int(2), hi = j.hi * Int(2);
    unsigned exp = j.exp + 1;
    Int mid = (lo + hi) / Int(2);
    Int den2 = den * Int(2);
    int left = chain.count_open(lo, den2, mid, den2);
    bool mid_root = chain.sign_at(mid, den2) == 0;
    int right = j.count - left - (mid_root ? 1 : 0);
    if (mid_root) out.push_back({mid, mid, exp, true, 0});
    if (right > 0) stack.push_back({mid, hi, exp, right});
    if (left > 0) stack.push_back({lo, mid, exp, left});
  }
  std::sort(out.begin(), out.end(), [](const DyadicRoot<Int>& a, const DyadicRoot<Int>& b) {
    // compare a.lo/2^a.exp with b.lo/2^b.exp
    unsigned e = std::max(a.exp, b.exp);
    Int x = a.lo_num * pow2<Int>(e - a.exp), y = b.lo_num * pow2<Int>(e - b.exp);
    if (x == y) return a.exact && !b.exact;
    return x < y;
  });
  return out;
}

inline Rational dyadic_to_rational(const Integer& num, unsigned exp) {
  Rational r(num);
  mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), exp);
  r.canonicalize();
  return r;
}

inline Integer i128_to_mpz(const CheckedI128& v) {
  unsigned __int128 mag = v.v < 0 ? static_cast<unsigned __int128>(-(v.v + 1)) + 1 : static_cast<unsigned __int128>(v.v);
  Integer hi(static_cast<unsigned long>(mag >> 64));
  Integer lo(static_cast<unsigned long>(mag & 0xFFFFFFFFFFFFFFFFull));
  Integer out = (hi << 64) + lo;
  return v.v < 0 ? Integer(-out) : out;
}

}  // namespace detail

/// Open interval (lo, hi) containing exactly one real root of a squarefree
/// polynomial, or the exact rational root lo == hi.
struct RootEnclosure {
  std::shared_ptr<const IntPolynomial> poly;
  Rational lo;
  Rational hi;
  int root_index = 0;
  /// Sign of poly on (lo, root); 0 for exact enclosures.
  int sign_left = 0;

  bool is_exact() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  Interval to_interval() const { return Interval::enclosing(RationalInterval{lo, hi}); }
};

/// Real algebraic number given by an enclosure over its minimal polynomial.
struct AlgebraicNumber {
  RootEnclosure enclosure;
};

/// p / gcd(p, p'), primitive with positive leading coefficient.
inline IntPolynomial squarefree_part(const IntPolynomial& p) {
  if (p.is_zero()) throw domain_error("squarefree_part of the zero polynomial");
  if (p.degree() <= 1) return primitive_normal_form(p);
  auto a = detail::to_mpz_vector(primitive_normal_form(p));
  auto b = detail::to_mpz_vector(primitive_normal_form(derivative(p)));
  while (!b.empty()) {
    auto r = detail::positive_pseudo_remainder(a, b);
    a = std::move(b);
    detail::make_primitive_positive_scale(r);
    b = std::move(r);
  }
  IntPolynomial g = primitive_normal_form(IntPolynomial(std::move(a)));
  if (g.degree() == 0) return primitive_normal_form(p);
  auto q = exact_divide(p, g);
  if (!q) throw domain_error("internal: gcd does not divide polynomial");
  return primitive_normal_form(*q);
}

namespace detail {
inline std::vector<RootEnclosure> enclosures_from_dyadic(const std::vector<DyadicRoot<Integer>>& roots,
                                                         std::shared_ptr<const IntPolynomial> poly) {
  std::vector<RootEnclosure> out;
  out.reserve(roots.size());
  int idx = 0;
  for (const auto& r : roots) {
    RootEnclosure e;
    e.poly = poly;
    e.lo = dyadic_to_rational(r.lo_num, r.exp);
    e.hi = dyadic_to_rational(r.hi_num, r.exp);
    e.root_index = idx++;
    e.sign_left = r.exact ? 0 : r.sign_left;
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<DyadicRoot<Integer>> widen(const std::vector<DyadicRoot<CheckedI128>>& roots) {
  std::vector<DyadicRoot<Integer>> out;
  out.reserve(roots.size());
  for (const auto& r : roots)
    out.push_back({i128_to_mpz(r.lo_num), i128_to_mpz(r.hi_num), r.exp, r.exact, r.sign_left});
  return out;
}
}  // namespace detail

/// One enclosure per distinct real root, ascending. Requires p squarefree.
inline std::vector<RootEnclosure> isolate_real_roots(const IntPolynomial& p) {
  if (p.is_zero()) throw domain_error("isolate_real_roots of the zero polynomial");
  auto shared = std::make_shared<const IntPolynomial>(p);
  if (p.degree() == 0) return {};
  if (p.degree() <= kMaxSmallDegree) {
    bool small = true;
    for (const auto& a : p.coefficients()) small = small && fits_int64(a);
    if (small) {
      try {
        auto sp = SmallPoly::from(p);
        SturmChain<detail::CheckedI128> chain(detail::to_i128_vector(sp.coeffs()));
        auto roots = detail::isolate_dyadic(chain, detail::CheckedI128(detail::cauchy_bound(sp)));
        return detail::enclosures_from_dyadic(detail::widen(roots), shared);
      } catch (const detail::overflow&) {
      }
    }
  }
  SturmChain<Integer> chain(detail::to_mpz_vector(p));
  auto roots = detail::isolate_dyadic(chain, detail::cauchy_bound(p));
  return detail::enclosures_from_dyadic(roots, shared);
}

/// Number of distinct real roots of p in the open interval (a, b).
inline int count_roots_open(const IntPolynomial& p, const Rational& a, const Rational& b) {
  SturmChain<Integer> chain(detail::to_mpz_vector(p));
  return chain.count_open(a.get_num(), a.get_den(), b.get_num(), b.get_den());
}

/// Bisects until hi - lo <= width; collapses onto exact rational roots.
inline RootEnclosure refine(RootEnclosure enc, const Rational& width) {
  while (!enc.is_exact() && enc.hi - enc.lo > width) {
    Rational mid = (enc.lo + enc.hi) / 2;
    int s = sign_at(*enc.poly, mid);
    if (s == 0) {
      enc.lo = enc.hi = mid;
      enc.sign_left = 0;
    } else if (s == enc.sign_left) {
      enc.lo = mid;
    } else {
      enc.hi = mid;
    }
  }
  return enc;
}

/// One bisection step.
inline RootEnclosure halve(RootEnclosure enc) {
  if (enc.is_exact()) return enc;
  return refine(std::move(enc), (enc.hi - enc.lo) / 2);
}

/// Exact trichotomy of a root against a rational.
inline std::strong_ordering compare_to_rational(const RootEnclosure& e, const Rational& q) {
  if (e.is_exact()) return order(e.lo, q);
  if (q <= e.lo) return std::strong_ordering::greater;
  if (q >= e.hi) return std::strong_ordering::less;
  int s = sign_at(*e.poly, q);
  if (s == 0) return std::strong_ordering::equal;
  return s == e.sign_left ? std::strong_ordering::greater : std::strong_ordering::less;
}
inline std::strong_ordering compare_to_rational(const AlgebraicNumber& a, const Rational& q) {
  return compare_to_rational(a.enclosure, q);
}

/// Enclosure of |root - x|.
inline RationalInterval distance_enclosure(const RootEnclosure& e, const Rational& x) {
  if (x <= e.lo) return {e.lo - x, e.hi - x};
  if (x >= e.hi) return {x - e.hi, x - e.lo};
  return {Rational(0), std::max(Rational(x - e.lo), Rational(e.hi - x))};
}

/// The real root of p closest to x. Exact ties (and near-ties unresolved after
/// the refinement cap) go to the lower root index.
inline RootEnclosure nearest_root(const IntPolynomial& p, const Rational& x, int max_rounds = 200) {
  auto roots = isolate_real_roots(squarefree_part(p));
  if (roots.empty()) throw domain_error("nearest_root: polynomial has no real roots");
  std::vector<std::size_t> candidates(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) candidates[i] = i;
  for (int round = 0; round <= max_rounds; ++round) {
    Rational best_hi;
    bool first = true;
    for (auto i : candidates) {
      auto d = distance_enclosure(roots[i], x);
      if (first || d.hi < best_hi) best_hi = d.hi;
      first = false;
    }
    std::vector<std::size_t> next;
    for (auto i : candidates)
      if (distance_enclosure(roots[i], x).lo <= best_hi) next.push_back(i);
    candidates = std::move(next);
    if (candidates.size() == 1) break;
    // Exact rational roots at equal distance are a genuine tie.
    bool all_exact = true;
    for (auto i : candidates) all_exact = all_exact && roots[i].is_exact();
    if (all_exact) break;
    for (auto i : candidates) roots[i] = halve(roots[i]);
  }
  return roots[candidates.front()];
}

}  // namespace algpt
