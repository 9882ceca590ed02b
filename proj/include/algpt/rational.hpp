#pragma once

// Exact integers and rationals (GMP), exact rational literals, and refinable
// real values of the form c * Q^e used for widths and thresholds such as
// Q^{-lambda} that are irrational in general.

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "algpt/errors.hpp"

namespace algpt {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Three-way comparison (gmpxx has no operator<=>).
inline std::strong_ordering order(const Rational& a, const Rational& b) {
  int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}
inline std::strong_ordering order(const Integer& a, const Integer& b) {
  int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

inline int sign(const Integer& v) { return sgn(v); }
inline int sign(const Rational& v) { return sgn(v); }

inline Integer floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Integer ceil_of(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Integer pow_int(const Integer& base, unsigned long e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

inline Rational pow_rat(const Rational& base, unsigned long e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  return out;
}

inline Rational abs_rat(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline std::string to_string(const Integer& v) { return v.get_str(); }

/// "p/q" or "p" (canonical form).
inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Shortest-round-trip-free but deterministic decimal rendering used in reports.
inline std::string format_double(double v, int digits = 12) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline bool fits_int64(const Integer& v) { return mpz_fits_slong_p(v.get_mpz_t()) != 0; }

/// Parses an exact rational literal: "p/q", an integer, or a finite decimal
/// such as "-1.25". Floats with exponents are rejected.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw config_error("invalid rational literal '" + std::string(text) + "'");
  };
  std::string s;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') s.push_back(ch);
  if (s.empty()) return fail();
  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    pos = 1;
  }
  std::string body = s.substr(pos);
  if (body.empty()) return fail();
  auto all_digits = [](std::string_view v) {
    if (v.empty()) return false;
    for (char ch : v)
      if (ch < '0' || ch > '9') return false;
    return true;
  };
  Rational out;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    std::string num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return fail();
    Integer d(den);
    if (d == 0) throw config_error("zero denominator in '" + std::string(text) + "'");
    out = Rational(Integer(num), d);
  } else if (auto dot = body.find('.'); dot != std::string::npos) {
    std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!all_digits(ip) || (!fp.empty() && !all_digits(fp))) return fail();
    Integer scale = pow_int(Integer(10), fp.size());
    out = Rational(Integer(ip + fp), scale);
  } else {
    if (!all_digits(body)) return fail();
    out = Rational(Integer(body));
  }
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

/// Closed rational interval [lo, hi].
struct RationalInterval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool is_point() const { return lo == hi; }
};

inline RationalInterval operator+(const RationalInterval& a, const RationalInterval& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}
inline RationalInterval operator-(const RationalInterval& a, const RationalInterval& b) {
  return {a.lo - b.hi, a.hi - b.lo};
}
inline RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  Rational lo = p[0], hi = p[0];
  for (const auto& v : p) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return {lo, hi};
}
inline RationalInterval abs(const RationalInterval& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return {-a.hi, -a.lo};
  return {Rational(0), std::max(Rational(-a.lo), a.hi)};
}

/// The positive real number coeff * base^exponent with rational coeff and
/// exponent and positive integer base. Comparisons against rationals are exact.
class ScaledPower {
 public:
  ScaledPower(Rational coeff, Integer base, Rational exponent)
      : coeff_(std::move(coeff)), base_(std::move(base)), exponent_(std::move(exponent)) {
    coeff_.canonicalize();
    exponent_.canonicalize();
    if (coeff_ < 0) throw domain_error("ScaledPower requires a nonnegative coefficient");
    if (base_ < 1) throw domain_error("ScaledPower requires base >= 1");
  }

  const Rational& coeff() const { return coeff_; }
  const Integer& base() const { return base_; }
  const Rational& exponent() const { return exponent_; }

  double approx() const {
    return coeff_.get_d() * std::pow(base_.get_d(), exponent_.get_d());
  }

  /// Exact ordering of r relative to this value.
  std::strong_ordering compare(const Rational& r) const {
    if (coeff_ == 0) return order(r, Rational(0));
    if (r <= 0) return std::strong_ordering::less;
    if (base_ == 1 || exponent_ == 0) return order(r, coeff_);
    Rational t = r / coeff_;
    const Integer& p = exponent_.get_num();
    unsigned long q = exponent_.get_den().get_ui();
    Rational lhs = pow_rat(t, q);
    Integer abs_p = p < 0 ? Integer(-p) : p;
    Integer bp = pow_int(base_, abs_p.get_ui());
    if (p > 0) return order(lhs, Rational(bp));
    return order(Rational(lhs * bp), Rational(1));
  }

  /// Returns the value when it is rational.
  std::optional<Rational> exact() const {
    if (coeff_ == 0) return Rational(0);
    if (base_ == 1 || exponent_ == 0) return coeff_;
    const Integer& p = exponent_.get_num();
    unsigned long q = exponent_.get_den().get_ui();
    Integer abs_p = p < 0 ? Integer(-p) : p;
    Integer bp = pow_int(base_, abs_p.get_ui());
    Integer root;
    if (mpz_root(root.get_mpz_t(), bp.get_mpz_t(), q) == 0) return std::nullopt;
    return p > 0 ? Rational(coeff_ * root) : Rational(coeff_ / root);
  }

  /// Rational enclosure [lo, hi] of width at most 2^-bits * max(1, value).
  RationalInterval enclose(unsigned bits) const {
    if (auto e = exact()) return {*e, *e};
    double d = approx();
    Rational lo(d * (1.0 - 1e-12)), hi(d * (1.0 + 1e-12));
    while (compare(lo) != std::strong_ordering::less) lo /= 2;
    while (compare(hi) != std::strong_ordering::greater) hi *= 2;
    Rational scale = d > 1.0 ? Rational(d) : Rational(1);
    Rational target = scale;
    mpz_mul_2exp(target.get_den_mpz_t(), target.get_den_mpz_t(), bits);
    target.canonicalize();
    while (hi - lo > target) {
      Rational mid = (lo + hi) / 2;
      if (compare(mid) == std::strong_ordering::less)
        lo = mid;
      else
        hi = mid;
    }
    return {lo, hi};
  }

 private:
  Rational coeff_;
  Integer base_;
  Rational exponent_;
};

/// A real number known exactly (rational), as a ScaledPower, or through a
/// refinable enclosure function. Immutable; cheap to copy.
class RealValue {
 public:
  using Encloser = std::function<RationalInterval(unsigned bits)>;

  RealValue() : repr_(Rational(0)) {}
  RealValue(Rational r) : repr_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  RealValue(ScaledPower p) : repr_(std::move(p)) {}  // NOLINT(google-explicit-constructor)

  static RealValue from_encloser(Encloser f, double approx) {
    RealValue v;
    v.repr_ = Computed{std::make_shared<Encloser>(std::move(f)), approx};
    return v;
  }

  std::optional<Rational> exact() const {
    if (auto r = std::get_if<Rational>(&repr_)) return *r;
    if (auto p = std::get_if<ScaledPower>(&repr_)) return p->exact();
    return std::nullopt;
  }

  double approx() const {
    if (auto r = std::get_if<Rational>(&repr_)) return r->get_d();
    if (auto p = std::get_if<ScaledPower>(&repr_)) return p->approx();
    return std::get<Computed>(repr_).approx;
  }

  RationalInterval enclose(unsigned bits) const {
    if (auto r = std::get_if<Rational>(&repr_)) return {*r, *r};
    if (auto p = std::get_if<ScaledPower>(&repr_)) return p->enclose(bits);
    return (*std::get<Computed>(repr_).fn)(bits);
  }

  /// Exact comparison when available; otherwise refines up to max_bits.
  /// Returns nullopt when the enclosures never separate (a tie or near-tie).
  std::optional<std::strong_ordering> compare(const Rational& r, unsigned max_bits = 256) const {
    if (auto v = std::get_if<Rational>(&repr_)) return order(r, *v);
    if (auto p = std::get_if<ScaledPower>(&repr_)) return p->compare(r);
    for (unsigned bits = 16; bits <= max_bits; bits *= 2) {
      auto e = enclose(bits);
      if (r < e.lo) return std::strong_ordering::less;
      if (r > e.hi) return std::strong_ordering::greater;
      if (e.is_point()) return std::strong_ordering::equal;
    }
    return std::nullopt;
  }

  friend RealValue operator+(const RealValue& a, const RealValue& b) {
    auto ea = a.exact(), eb = b.exact();
    if (ea && eb) return RealValue(*ea + *eb);
    return from_encloser([a, b](unsigned bits) { return a.enclose(bits + 1) + b.enclose(bits + 1); },
                         a.approx() + b.approx());
  }

  friend RealValue operator-(const RealValue& a) { return RealValue(Rational(-1)) * a; }
  friend RealValue operator-(const RealValue& a, const RealValue& b) { return a + (-b); }

  friend RealValue operator*(const RealValue& a, const RealValue& b) {
    auto ea = a.exact(), eb = b.exact();
    if (ea && eb) return RealValue(*ea * *eb);
    if (ea) {
      if (auto p = std::get_if<ScaledPower>(&b.repr_); p && *ea >= 0)
        return RealValue(ScaledPower(*ea * p->coeff(), p->base(), p->exponent()));
    }
    if (eb) {
      if (auto p = std::get_if<ScaledPower>(&a.repr_); p && *eb >= 0)
        return RealValue(ScaledPower(*eb * p->coeff(), p->base(), p->exponent()));
    }
    return from_encloser(
        [a, b](unsigned bits) {
          unsigned extra = 8 + static_cast<unsigned>(std::max(
                                   0.0, std::log2(1.0 + std::abs(a.approx()) + std::abs(b.approx()))));
          return a.enclose(bits + extra) * b.enclose(bits + extra);
        },
        a.approx() * b.approx());
  }

 private:
  struct Computed {
    std::shared_ptr<const Encloser> fn;
    double approx = 0.0;
  };
  std::variant<Rational, ScaledPower, Computed> repr_;
};

}  // namespace algpt
