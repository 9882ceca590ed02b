#pragma once

// Exact univariate integer polynomials.
//
// IntPolynomial is the arbitrary-precision value type used by the public API.
// SmallPoly is a fixed-capacity machine-word representation for the hot
// enumeration loops; it converts losslessly to IntPolynomial.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "algpt/errors.hpp"
#include "algpt/rational.hpp"

namespace algpt {

class IntPolynomial {
 public:
  IntPolynomial() = default;

  /// Coefficients a0..ad, low to high. Trailing zeros are dropped.
  explicit IntPolynomial(std::vector<Integer> coeffs) : c_(std::move(coeffs)) { trim(); }

  IntPolynomial(std::initializer_list<long> coeffs) {
    c_.reserve(coeffs.size());
    for (long v : coeffs) c_.emplace_back(v);
    trim();
  }

  static IntPolynomial from_coefficients(std::span<const std::int64_t> coeffs) {
    std::vector<Integer> c;
    c.reserve(coeffs.size());
    for (auto v : coeffs) c.emplace_back(static_cast<long>(v));
    return IntPolynomial(std::move(c));
  }

  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  /// Coefficient of t^i (zero above the degree).
  Integer coeff(int i) const {
    if (i < 0 || i > degree()) return Integer(0);
    return c_[static_cast<std::size_t>(i)];
  }
  const Integer& leading() const {
    if (c_.empty()) throw domain_error("leading coefficient of the zero polynomial");
    return c_.back();
  }
  std::span<const Integer> coefficients() const { return c_; }

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  /// Canonical order: ascending degree, then lexicographic on (a_d, ..., a_0).
  friend std::strong_ordering operator<=>(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.degree() != b.degree()) return a.degree() <=> b.degree();
    for (int i = a.degree(); i >= 0; --i) {
      int c = cmp(a.c_[static_cast<std::size_t>(i)], b.c_[static_cast<std::size_t>(i)]);
      if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
  }

  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<Integer> out(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (i < a.c_.size()) out[i] += a.c_[i];
      if (i < b.c_.size()) out[i] += b.c_[i];
    }
    return IntPolynomial(std::move(out));
  }
  friend IntPolynomial operator-(const IntPolynomial& a) {
    std::vector<Integer> out(a.c_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -a.c_[i];
    return IntPolynomial(std::move(out));
  }
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) { return a + (-b); }
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Integer> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return IntPolynomial(std::move(out));
  }
  friend IntPolynomial operator*(const Integer& k, const IntPolynomial& a) {
    std::vector<Integer> out(a.c_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = k * a.c_[i];
    return IntPolynomial(std::move(out));
  }

  /// Human-readable form, e.g. "3t^2 - 5t + 7".
  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      const Integer& a = c_[static_cast<std::size_t>(i)];
      if (a == 0) continue;
      Integer mag = abs(a);
      if (first) {
        if (a < 0) os << "-";
      } else {
        os << (a < 0 ? " - " : " + ");
      }
      if (mag != 1 || i == 0) os << mag.get_str();
      if (i >= 1) os << "t";
      if (i >= 2) os << "^" << i;
      first = false;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Integer> c_;
};

/// Maximum absolute value of the coefficients.
inline Integer height(const IntPolynomial& p) {
  if (p.is_zero()) throw domain_error("height of the zero polynomial");
  Integer h = 0;
  for (const auto& a : p.coefficients()) h = std::max(h, Integer(abs(a)));
  return h;
}

inline Rational evaluate(const IntPolynomial& p, const Rational& x) {
  Rational acc = 0;
  auto c = p.coefficients();
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + Rational(c[i]);
  return acc;
}

/// Sign of p(num/den) for den > 0, computed as sum a_i num^i den^(d-i).
inline int sign_at(const IntPolynomial& p, const Integer& num, const Integer& den) {
  if (p.is_zero()) return 0;
  auto c = p.coefficients();
  Integer acc = c.back();
  Integer dpow = 1;
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    dpow *= den;
    acc = acc * num + c[i] * dpow;
  }
  return sgn(acc);
}
inline int sign_at(const IntPolynomial& p, const Rational& x) {
  return sign_at(p, x.get_num(), x.get_den());
}

inline IntPolynomial derivative(const IntPolynomial& p) {
  if (p.degree() <= 0) return {};
  std::vector<Integer> out(static_cast<std::size_t>(p.degree()));
  auto c = p.coefficients();
  for (std::size_t i = 1; i < c.size(); ++i) out[i - 1] = c[i] * static_cast<unsigned long>(i);
  return IntPolynomial(std::move(out));
}

/// gcd of the coefficients (nonnegative; 0 for the zero polynomial).
inline Integer content(const IntPolynomial& p) {
  Integer g = 0;
  for (const auto& a : p.coefficients()) g = gcd(g, a);
  return g;
}

/// Divides out the content and makes the leading coefficient positive.
inline IntPolynomial primitive_normal_form(const IntPolynomial& p) {
  if (p.is_zero()) throw domain_error("primitive_normal_form of the zero polynomial");
  Integer g = content(p);
  if (p.leading() < 0) g = -g;
  std::vector<Integer> out(p.coefficients().begin(), p.coefficients().end());
  for (auto& a : out) mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
  return IntPolynomial(std::move(out));
}

/// b1^2 - 4 b2 b0 for a quadratic.
inline Integer discriminant(const IntPolynomial& p) {
  if (p.degree() != 2) throw domain_error("discriminant requires a polynomial of degree exactly 2");
  return p.coeff(1) * p.coeff(1) - 4 * p.coeff(2) * p.coeff(0);
}

namespace detail {
/// Determinant of a square integer matrix by fraction-free (Bareiss) elimination.
inline Integer bareiss_determinant(std::vector<std::vector<Integer>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  int sign_flip = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(m[k], m[swap_row]);
      sign_flip = -sign_flip;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = v;
      }
    }
    prev = m[k][k];
  }
  return sign_flip * m[n - 1][n - 1];
}
}  // namespace detail

/// Resultant via the Sylvester determinant. Zero iff p and q share a complex root.
inline Integer resultant(const IntPolynomial& p, const IntPolynomial& q) {
  if (p.is_zero() || q.is_zero()) throw domain_error("resultant of the zero polynomial");
  const int m = p.degree(), n = q.degree();
  if (m == 0 && n == 0) return 1;
  if (m == 0) return pow_int(p.coeff(0), static_cast<unsigned long>(n));
  if (n == 0) return pow_int(q.coeff(0), static_cast<unsigned long>(m));
  const std::size_t size = static_cast<std::size_t>(m + n);
  std::vector<std::vector<Integer>> s(size, std::vector<Integer>(size, Integer(0)));
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) s[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + i)] = p.coeff(m - i);
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i)
      s[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(r + i)] = q.coeff(n - i);
  return detail::bareiss_determinant(std::move(s));
}

/// Exact quotient p / d in Z[t], or nullopt when d does not divide p.
inline std::optional<IntPolynomial> exact_divide(const IntPolynomial& p, const IntPolynomial& d) {
  if (d.is_zero()) throw domain_error("division by the zero polynomial");
  if (p.is_zero()) return IntPolynomial{};
  if (p.degree() < d.degree()) return std::nullopt;
  std::vector<Integer> rem(p.coefficients().begin(), p.coefficients().end());
  std::vector<Integer> quot(static_cast<std::size_t>(p.degree() - d.degree() + 1));
  const Integer& lead = d.leading();
  for (int i = p.degree() - d.degree(); i >= 0; --i) {
    Integer& top = rem[static_cast<std::size_t>(i + d.degree())];
    if (!mpz_divisible_p(top.get_mpz_t(), lead.get_mpz_t())) return std::nullopt;
    Integer qc;
    mpz_divexact(qc.get_mpz_t(), top.get_mpz_t(), lead.get_mpz_t());
    quot[static_cast<std::size_t>(i)] = qc;
    for (int j = 0; j <= d.degree(); ++j) rem[static_cast<std::size_t>(i + j)] -= qc * d.coeff(j);
  }
  for (const auto& r : rem)
    if (r != 0) return std::nullopt;
  return IntPolynomial(std::move(quot));
}

// ---------------------------------------------------------------------------
// Machine-word polynomials for enumeration hot loops.

inline constexpr int kMaxSmallDegree = 8;

struct SmallPoly {
  std::array<std::int64_t, kMaxSmallDegree + 1> c{};
  int degree = -1;

  static SmallPoly from(std::span<const std::int64_t> coeffs) {
    SmallPoly p;
    if (coeffs.size() > c_capacity()) throw domain_error("SmallPoly degree exceeds capacity");
    std::copy(coeffs.begin(), coeffs.end(), p.c.begin());
    p.degree = static_cast<int>(coeffs.size()) - 1;
    while (p.degree >= 0 && p.c[static_cast<std::size_t>(p.degree)] == 0) --p.degree;
    return p;
  }
  static SmallPoly from(const IntPolynomial& q) {
    SmallPoly p;
    if (q.degree() > kMaxSmallDegree) throw domain_error("SmallPoly degree exceeds capacity");
    for (int i = 0; i <= q.degree(); ++i) {
      Integer v = q.coeff(i);
      if (!fits_int64(v)) throw domain_error("coefficient does not fit a machine word");
      p.c[static_cast<std::size_t>(i)] = v.get_si();
    }
    p.degree = q.degree();
    return p;
  }
  static constexpr std::size_t c_capacity() { return kMaxSmallDegree + 1; }

  std::span<const std::int64_t> coeffs() const {
    return {c.data(), static_cast<std::size_t>(degree + 1)};
  }
  std::int64_t height() const {
    std::int64_t h = 0;
    for (int i = 0; i <= degree; ++i) h = std::max(h, c[static_cast<std::size_t>(i)] < 0 ? -c[static_cast<std::size_t>(i)] : c[static_cast<std::size_t>(i)]);
    return h;
  }
  std::int64_t content() const {
    std::int64_t g = 0;
    for (int i = 0; i <= degree; ++i) g = std::gcd(g, c[static_cast<std::size_t>(i)]);
    return g;
  }
  IntPolynomial to_int_polynomial() const { return IntPolynomial::from_coefficients(coeffs()); }

  friend bool operator==(const SmallPoly& a, const SmallPoly& b) {
    if (a.degree != b.degree) return false;
    for (int i = 0; i <= a.degree; ++i)
      if (a.c[static_cast<std::size_t>(i)] != b.c[static_cast<std::size_t>(i)]) return false;
    return true;
  }
  friend std::strong_ordering operator<=>(const SmallPoly& a, const SmallPoly& b) {
    if (a.degree != b.degree) return a.degree <=> b.degree;
    for (int i = a.degree; i >= 0; --i)
      if (a.c[static_cast<std::size_t>(i)] != b.c[static_cast<std::size_t>(i)])
        return a.c[static_cast<std::size_t>(i)] <=> b.c[static_cast<std::size_t>(i)];
    return std::strong_ordering::equal;
  }
};

namespace detail {

struct overflow {};

/// 128-bit integer that throws detail::overflow instead of wrapping.
struct CheckedI128 {
  __int128 v = 0;
  CheckedI128() = default;
  CheckedI128(__int128 x) : v(x) {}  // NOLINT(google-explicit-constructor)
  CheckedI128(std::int64_t x) : v(x) {}  // NOLINT(google-explicit-constructor)
  CheckedI128(int x) : v(x) {}  // NOLINT(google-explicit-constructor)

  friend CheckedI128 operator+(CheckedI128 a, CheckedI128 b) {
    __int128 r;
    if (__builtin_add_overflow(a.v, b.v, &r)) throw overflow{};
    return r;
  }
  friend CheckedI128 operator-(CheckedI128 a, CheckedI128 b) {
    __int128 r;
    if (__builtin_sub_overflow(a.v, b.v, &r)) throw overflow{};
    return r;
  }
  friend CheckedI128 operator*(CheckedI128 a, CheckedI128 b) {
    __int128 r;
    if (__builtin_mul_overflow(a.v, b.v, &r)) throw overflow{};
    return r;
  }
  friend CheckedI128 operator-(CheckedI128 a) {
    if (a.v == static_cast<__int128>(static_cast<unsigned __int128>(1) << 127)) throw overflow{};
    return -a.v;
  }
  friend CheckedI128 operator/(CheckedI128 a, CheckedI128 b) { return a.v / b.v; }
  friend CheckedI128 operator%(CheckedI128 a, CheckedI128 b) { return a.v % b.v; }
  friend bool operator==(CheckedI128 a, CheckedI128 b) { return a.v == b.v; }
  friend auto operator<=>(CheckedI128 a, CheckedI128 b) { return a.v <=> b.v; }
};

inline int sgn_of(const CheckedI128& x) { return x.v > 0 ? 1 : (x.v < 0 ? -1 : 0); }
inline int sgn_of(const Integer& x) { return sgn(x); }
inline CheckedI128 abs_of(const CheckedI128& x) { return x.v < 0 ? -x : x; }
inline Integer abs_of(const Integer& x) { return abs(x); }
inline CheckedI128 gcd_of(CheckedI128 a, CheckedI128 b) {
  unsigned __int128 x = a.v < 0 ? static_cast<unsigned __int128>(-(a.v + 1)) + 1 : static_cast<unsigned __int128>(a.v);
  unsigned __int128 y = b.v < 0 ? static_cast<unsigned __int128>(-(b.v + 1)) + 1 : static_cast<unsigned __int128>(b.v);
  while (y != 0) {
    unsigned __int128 t = x % y;
    x = y;
    y = t;
  }
  if (x > static_cast<unsigned __int128>(~static_cast<unsigned __int128>(0) >> 1)) throw overflow{};
  return static_cast<__int128>(x);
}
inline Integer gcd_of(const Integer& a, const Integer& b) { return gcd(a, b); }
inline CheckedI128 exact_div(const CheckedI128& a, const CheckedI128& b) { return a.v / b.v; }
inline Integer exact_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace detail

}  // namespace algpt
