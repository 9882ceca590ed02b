#pragma once

// Minimal polynomials of bounded degree and height: irreducibility testing,
// sharded exhaustive enumeration, and the on-disk database.
//
// A minimal polynomial here is primitive, irreducible over Q, has degree
// >= 1 and a positive leading coefficient. Enumeration order is canonical:
// ascending degree, then lexicographic on (a_d, ..., a_0).

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "algpt/complexroots.hpp"
#include "algpt/parallel.hpp"
#include "algpt/polyint.hpp"
#include "algpt/realroots.hpp"

namespace algpt {

inline constexpr int kMaxEnumerationDegree = 5;

struct PolyClassParams {
  int n = 1;
  std::int64_t Q = 1;

  void validate() const {
    if (n < 1) throw config_error("degree bound n must be >= 1");
    if (Q < 1) throw config_error("height bound Q must be >= 1");
    if (n > kMaxEnumerationDegree) throw config_error("degree bound n must be <= 5");
    if (Q > 100000) throw config_error("height bound Q is too large for exhaustive enumeration");
  }
  friend bool operator==(const PolyClassParams&, const PolyClassParams&) = default;
};

namespace detail {

inline std::vector<std::int64_t> positive_divisors(std::int64_t v) {
  v = v < 0 ? -v : v;
  std::vector<std::int64_t> small, large;
  for (std::int64_t d = 1; d * d <= v; ++d)
    if (v % d == 0) {
      small.push_back(d);
      if (d != v / d) large.push_back(v / d);
    }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

inline std::vector<Integer> positive_divisors(const Integer& v) {
  if (fits_int64(v)) {
    std::vector<Integer> out;
    for (auto d : positive_divisors(static_cast<std::int64_t>(v.get_si()))) out.emplace_back(static_cast<long>(d));
    return out;
  }
  Integer a = abs(v);
  std::vector<Integer> small, large;
  for (Integer d = 1; d * d <= a; ++d)
    if (mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t())) {
      small.push_back(d);
      Integer q = a / d;
      if (q != d) large.push_back(q);
    }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

inline bool is_perfect_square(__int128 v) {
  if (v < 0) return false;
  auto r = static_cast<__int128>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r * r == v;
}

/// Sign of sum a_i p^i q^(d-i).
inline int homogeneous_sign(const SmallPoly& poly, std::int64_t p, std::int64_t q) {
  try {
    CheckedI128 acc(poly.c[static_cast<std::size_t>(poly.degree)]);
    CheckedI128 qpow(1);
    for (int i = poly.degree - 1; i >= 0; --i) {
      qpow = qpow * CheckedI128(q);
      acc = acc * CheckedI128(p) + CheckedI128(poly.c[static_cast<std::size_t>(i)]) * qpow;
    }
    return sgn_of(acc);
  } catch (const overflow&) {
    return sign_at(poly.to_int_polynomial(), Integer(static_cast<long>(p)), Integer(static_cast<long>(q)));
  }
}

inline bool has_rational_root(const SmallPoly& poly) {
  if (poly.c[0] == 0) return true;
  const auto qs = positive_divisors(poly.c[static_cast<std::size_t>(poly.degree)]);
  const auto ps = positive_divisors(poly.c[0]);
  for (auto q : qs)
    for (auto p : ps) {
      if (std::gcd(p, q) != 1) continue;
      if (homogeneous_sign(poly, p, q) == 0 || homogeneous_sign(poly, -p, q) == 0) return true;
    }
  return false;
}

/// Rational-root test for arbitrary coefficients: a rational root has
/// denominator dividing a_d of the squarefree part, so refine every real root
/// to width 1/(2 a_d) and test the nearest fraction with that denominator.
inline bool has_rational_root(const IntPolynomial& poly) {
  if (poly.coeff(0) == 0) return true;
  IntPolynomial sf = squarefree_part(poly);
  const Integer ad = sf.leading();
  const Rational width(Integer(1), 2 * ad);
  for (auto enc : isolate_real_roots(sf)) {
    enc = refine(enc, width);
    if (enc.is_exact()) return true;
    Rational mid = (enc.lo + enc.hi) / 2 * ad;
    Integer num = floor_of(mid + Rational(1, 2));
    if (sign_at(sf, num, ad) == 0) return true;
  }
  return false;
}

/// Integers inside a closed double interval.
inline std::vector<Integer> integers_in(Interval v) {
  std::vector<Integer> out;
  if (!std::isfinite(v.lo) || !std::isfinite(v.hi)) return out;
  for (double k = std::ceil(v.lo); k <= std::floor(v.hi); k += 1.0) out.emplace_back(k);
  return out;
}

/// Quadratic factor search for degree 4 and 5 without rational roots. The
/// candidate b2 t^2 + b1 t + b0 is built from each pair of certified complex
/// root disks (real pairs or conjugate pairs) and each b2 | a_d, and verified
/// by exact division. Falls back to a bounded brute-force search when the
/// roots cannot be certified (for example repeated roots).
inline bool has_quadratic_factor(const IntPolynomial& poly) {
  const auto b2s = positive_divisors(poly.leading());
  auto try_factor = [&](const Integer& b2, const Integer& b1, const Integer& b0) {
    if (b0 == 0) return false;
    return exact_divide(poly, IntPolynomial(std::vector<Integer>{b0, b1, b2})).has_value();
  };
  if (auto disks = certified_complex_roots(poly)) {
    const auto& z = *disks;
    for (std::size_t i = 0; i < z.size(); ++i)
      for (std::size_t j = i + 1; j < z.size(); ++j) {
        CInterval s = z[i].box() + z[j].box();
        CInterval pr = z[i].box() * z[j].box();
        if (!s.im.contains_zero() || !pr.im.contains_zero()) continue;
        for (const auto& b2 : b2s) {
          Interval b2i = Interval::enclosing(Rational(b2));
          auto b1s = integers_in(-(b2i * s.re));
          if (b1s.empty()) continue;
          auto b0s = integers_in(b2i * pr.re);
          for (const auto& b1 : b1s)
            for (const auto& b0 : b0s)
              if (try_factor(b2, b1, b0)) return true;
        }
      }
    return false;
  }
  // Every factor g of P satisfies M(g) <= M(P) <= ||P||_2, so |b1| <= 2 ||P||_2.
  Integer norm2 = 0;
  for (const auto& a : poly.coefficients()) norm2 += a * a;
  Integer root = sqrt(norm2) + 1;
  const Integer bound = 2 * root;
  const auto b0s = positive_divisors(poly.coeff(0));
  for (const auto& b2 : b2s)
    for (const auto& b0abs : b0s)
      for (int sgn0 : {1, -1})
        for (Integer b1 = -bound; b1 <= bound; ++b1)
          if (try_factor(b2, b1, Integer(sgn0 * b0abs))) return true;
  return false;
}

}  // namespace detail

/// Irreducibility over Q of a primitive polynomial of degree 1..5.
inline bool is_irreducible(const SmallPoly& p) {
  if (p.degree < 1) throw domain_error("is_irreducible requires degree >= 1");
  if (std::abs(p.content()) != 1) throw domain_error("is_irreducible requires a primitive polynomial");
  if (p.degree > kMaxEnumerationDegree) throw domain_error("is_irreducible supports degree <= 5");
  if (p.degree == 1) return true;
  if (p.c[0] == 0) return false;
  if (p.degree == 2) {
    __int128 b1 = p.c[1], b2 = p.c[2], b0 = p.c[0];
    return !detail::is_perfect_square(b1 * b1 - 4 * b2 * b0);
  }
  if (detail::has_rational_root(p)) return false;
  if (p.degree == 3) return true;
  return !detail::has_quadratic_factor(p.to_int_polynomial());
}

inline bool is_irreducible(const IntPolynomial& p) {
  if (p.degree() < 1) throw domain_error("is_irreducible requires degree >= 1");
  if (content(p) != 1) throw domain_error("is_irreducible requires a primitive polynomial");
  if (p.degree() > kMaxEnumerationDegree) throw domain_error("is_irreducible supports degree <= 5");
  bool small = true;
  for (const auto& a : p.coefficients()) small = small && fits_int64(a) && abs(a) < (Integer(1) << 40);
  if (small) return is_irreducible(SmallPoly::from(p));
  if (p.degree() == 1) return true;
  if (p.coeff(0) == 0) return false;
  if (p.degree() == 2) {
    Integer d = discriminant(p);
    return d < 0 || !mpz_perfect_square_p(d.get_mpz_t());
  }
  if (detail::has_rational_root(p)) return false;
  if (p.degree() == 3) return true;
  return !detail::has_quadratic_factor(p);
}

/// Primitive and irreducible with a positive leading coefficient.
inline bool is_minimal_polynomial(const SmallPoly& p) {
  if (p.degree < 1 || p.c[static_cast<std::size_t>(p.degree)] <= 0) return false;
  if (p.content() != 1) return false;
  return is_irreducible(p);
}

// ---------------------------------------------------------------------------
// Sharding.

/// Fixes (degree, a_d, a_{d-1}); for degree 1 only a_1 is fixed and
/// `next` is unused. The lower coefficients range over [-Q, Q].
struct EnumerationShard {
  int degree = 1;
  std::int64_t lead = 1;
  std::int64_t next = 0;

  friend bool operator==(const EnumerationShard&, const EnumerationShard&) = default;
};

/// All shards in canonical order; they partition the coefficient box.
inline std::vector<EnumerationShard> make_shards(const PolyClassParams& params) {
  params.validate();
  std::vector<EnumerationShard> out;
  for (int d = 1; d <= params.n; ++d)
    for (std::int64_t ad = 1; ad <= params.Q; ++ad) {
      if (d == 1) {
        out.push_back({1, ad, 0});
        continue;
      }
      for (std::int64_t an = -params.Q; an <= params.Q; ++an) out.push_back({d, ad, an});
    }
  return out;
}

/// Calls fn(SmallPoly&) for every (a_d..a_1) prefix in the shard, in
/// lexicographic order; c[0] is zero and is for the caller to fill in.
template <class Fn>
void for_each_prefix(const EnumerationShard& shard, std::int64_t Q, Fn&& fn) {
  SmallPoly p;
  p.degree = shard.degree;
  const auto d = static_cast<std::size_t>(shard.degree);
  p.c[d] = shard.lead;
  if (d == 1) {
    fn(p);
    return;
  }
  p.c[d - 1] = shard.next;
  // odometer over c[d-2] .. c[1], c[d-2] most significant
  if (d == 2) {
    fn(p);
    return;
  }
  for (std::size_t i = 1; i <= d - 2; ++i) p.c[i] = -Q;
  while (true) {
    fn(p);
    std::size_t i = 1;
    while (i <= d - 2 && p.c[i] == Q) p.c[i++] = -Q;
    if (i > d - 2) break;
    ++p.c[i];
  }
}

/// Every coefficient vector of the shard (before filtering).
template <class Fn>
void for_each_candidate(const EnumerationShard& shard, std::int64_t Q, Fn&& fn) {
  for_each_prefix(shard, Q, [&](SmallPoly& p) {
    for (std::int64_t a0 = -Q; a0 <= Q; ++a0) {
      p.c[0] = a0;
      fn(static_cast<const SmallPoly&>(p));
    }
    p.c[0] = 0;
  });
}

/// Number of coefficient vectors scanned: sum_{d=1..n} Q (2Q+1)^d.
inline Integer candidate_count(const PolyClassParams& params) {
  Integer total = 0;
  for (int d = 1; d <= params.n; ++d)
    total += Integer(static_cast<long>(params.Q)) * pow_int(Integer(static_cast<long>(2 * params.Q + 1)), static_cast<unsigned long>(d));
  return total;
}

// ---------------------------------------------------------------------------
// Database.

/// Load/validation failure of a cache file.
class db_error : public std::runtime_error {
 public:
  enum class kind { io, version, corrupt, validation };
  db_error(kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
  kind error_kind() const noexcept { return kind_; }

 private:
  kind kind_;
};

/// Canonically ordered minimal polynomials, stored as packed 32-bit
/// coefficient blocks per degree.
class MinimalPolynomialDB {
 public:
  MinimalPolynomialDB() = default;
  explicit MinimalPolynomialDB(PolyClassParams params) : params_(params), packed_(static_cast<std::size_t>(params.n) + 1) {}

  const PolyClassParams& params() const { return params_; }

  std::size_t size() const {
    std::size_t total = 0;
    for (int d = 1; d <= params_.n; ++d) total += count_of_degree(d);
    return total;
  }
  std::size_t count_of_degree(int d) const {
    if (d < 1 || d > params_.n) return 0;
    return packed_[static_cast<std::size_t>(d)].size() / static_cast<std::size_t>(d + 1);
  }

  SmallPoly small(int d, std::size_t i) const {
    SmallPoly p;
    p.degree = d;
    const auto* base = packed_[static_cast<std::size_t>(d)].data() + i * static_cast<std::size_t>(d + 1);
    for (int k = 0; k <= d; ++k) p.c[static_cast<std::size_t>(k)] = base[k];
    return p;
  }

  SmallPoly small(std::size_t index) const {
    for (int d = 1; d <= params_.n; ++d) {
      if (index < count_of_degree(d)) return small(d, index);
      index -= count_of_degree(d);
    }
    throw std::out_of_range("MinimalPolynomialDB index out of range");
  }
  IntPolynomial entry(std::size_t index) const { return small(index).to_int_polynomial(); }

  std::vector<IntPolynomial> entries() const {
    std::vector<IntPolynomial> out;
    out.reserve(size());
    for (int d = 1; d <= params_.n; ++d)
      for (std::size_t i = 0; i < count_of_degree(d); ++i) out.push_back(small(d, i).to_int_polynomial());
    return out;
  }

  /// Appends in canonical order; throws if the order would be violated.
  void append(const SmallPoly& p) {
    if (p.degree < 1 || p.degree > params_.n) throw domain_error("entry degree outside the database class");
    if (has_last_ && !(last_ < p)) throw domain_error("entries must be appended in canonical order");
    auto& block = packed_[static_cast<std::size_t>(p.degree)];
    for (int k = 0; k <= p.degree; ++k) block.push_back(static_cast<std::int32_t>(p.c[static_cast<std::size_t>(k)]));
    last_ = p;
    has_last_ = true;
  }

  /// Calls fn(const SmallPoly&) for every entry in canonical order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (int d = 1; d <= params_.n; ++d)
      for (std::size_t i = 0; i < count_of_degree(d); ++i) fn(small(d, i));
  }

  friend bool operator==(const MinimalPolynomialDB& a, const MinimalPolynomialDB& b) {
    return a.params_ == b.params_ && a.packed_ == b.packed_;
  }

 private:
  PolyClassParams params_;
  std::vector<std::vector<std::int32_t>> packed_;
  SmallPoly last_;
  bool has_last_ = false;
};

/// Minimal polynomials of one shard, canonical order.
inline std::vector<SmallPoly> enumerate_shard(const EnumerationShard& shard, std::int64_t Q) {
  std::vector<SmallPoly> out;
  for_each_candidate(shard, Q, [&](const SmallPoly& p) {
    if (is_minimal_polynomial(p)) out.push_back(p);
  });
  return out;
}

/// Exhaustive enumeration of the class; output is independent of `threads`.
inline MinimalPolynomialDB enumerate_minimal_polynomials(const PolyClassParams& params, unsigned threads = 1) {
  auto shards = make_shards(params);
  auto parts = parallel_map<std::vector<SmallPoly>>(shards.size(), threads,
                                                    [&](std::size_t i) { return enumerate_shard(shards[i], params.Q); });
  MinimalPolynomialDB db(params);
  for (const auto& part : parts)
    for (const auto& p : part) db.append(p);
  return db;
}

/// Merges shard outputs given in any order into the canonical database.
inline MinimalPolynomialDB merge_shards(const PolyClassParams& params, std::vector<std::vector<SmallPoly>> parts) {
  std::vector<SmallPoly> all;
  for (auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  MinimalPolynomialDB db(params);
  for (const auto& p : all) db.append(p);
  return db;
}

inline constexpr int kDbFormatVersion = 1;

inline std::string db_file_name(const PolyClassParams& params) {
  return "mpdb_n" + std::to_string(params.n) + "_Q" + std::to_string(params.Q) + ".txt";
}

inline void save_db(const MinimalPolynomialDB& db, std::ostream& os) {
  os << "MPDB " << kDbFormatVersion << " n=" << db.params().n << " Q=" << db.params().Q << " count=" << db.size()
     << "\n";
  db.for_each([&](const SmallPoly& p) {
    os << p.degree;
    for (int k = 0; k <= p.degree; ++k) os << ' ' << p.c[static_cast<std::size_t>(k)];
    os << '\n';
  });
}

inline void save_db(const MinimalPolynomialDB& db, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw db_error(db_error::kind::io, "cannot open '" + path + "' for writing");
  save_db(db, os);
  if (!os) throw db_error(db_error::kind::io, "write to '" + path + "' failed");
}

namespace detail {
inline std::int64_t parse_field(const std::string& token, const std::string& key) {
  if (token.rfind(key + "=", 0) != 0) throw db_error(db_error::kind::corrupt, "malformed header field '" + token + "'");
  try {
    std::size_t used = 0;
    auto v = std::stoll(token.substr(key.size() + 1), &used);
    if (used != token.size() - key.size() - 1) throw std::invalid_argument(token);
    return v;
  } catch (const std::logic_error&) {
    throw db_error(db_error::kind::corrupt, "malformed header field '" + token + "'");
  }
}
}  // namespace detail

/// Loads and validates a cache: header, line syntax, class bounds, canonical
/// order, entry count, and irreducibility of a deterministic ~1% sample.
inline MinimalPolynomialDB load_db(std::istream& is, std::uint64_t sample_seed = 1) {
  using K = db_error::kind;
  std::string line;
  if (!std::getline(is, line)) throw db_error(K::corrupt, "empty database file");
  std::istringstream hs(line);
  std::string magic, version, nf, qf, cf, extra;
  hs >> magic >> version >> nf >> qf >> cf;
  if (magic != "MPDB") throw db_error(K::corrupt, "missing MPDB header");
  if (version != std::to_string(kDbFormatVersion))
    throw db_error(K::version, "unsupported database format version '" + version + "'");
  if (hs >> extra) throw db_error(K::corrupt, "trailing header data");
  PolyClassParams params{static_cast<int>(detail::parse_field(nf, "n")), detail::parse_field(qf, "Q")};
  const std::int64_t count = detail::parse_field(cf, "count");
  try {
    params.validate();
  } catch (const config_error& e) {
    throw db_error(K::corrupt, std::string("invalid header class: ") + e.what());
  }
  if (count < 0) throw db_error(K::corrupt, "negative entry count");
  MinimalPolynomialDB db(params);
  std::mt19937_64 rng(sample_seed);
  std::int64_t seen = 0;
  while (std::getline(is, line)) {
    if (line.empty()) throw db_error(K::corrupt, "blank line at entry " + std::to_string(seen));
    std::istringstream ls(line);
    int d = 0;
    if (!(ls >> d) || d < 1 || d > params.n) throw db_error(K::corrupt, "bad degree at entry " + std::to_string(seen));
    SmallPoly p;
    p.degree = d;
    for (int k = 0; k <= d; ++k) {
      long long v;
      if (!(ls >> v)) throw db_error(K::corrupt, "truncated entry " + std::to_string(seen));
      if (v < -params.Q || v > params.Q) throw db_error(K::corrupt, "height bound exceeded at entry " + std::to_string(seen));
      p.c[static_cast<std::size_t>(k)] = v;
    }
    if (ls >> extra) throw db_error(K::corrupt, "extra data at entry " + std::to_string(seen));
    if (p.c[static_cast<std::size_t>(d)] <= 0)
      throw db_error(K::corrupt, "non-positive leading coefficient at entry " + std::to_string(seen));
    try {
      db.append(p);
    } catch (const domain_error&) {
      throw db_error(K::corrupt, "entries out of canonical order at entry " + std::to_string(seen));
    }
    if (rng() % 100 == 0 && !is_minimal_polynomial(p))
      throw db_error(K::validation, "sampled entry " + std::to_string(seen) + " is not a minimal polynomial");
    ++seen;
  }
  if (seen != count)
    throw db_error(K::corrupt, "entry count mismatch: header says " + std::to_string(count) + ", found " + std::to_string(seen));
  return db;
}

inline MinimalPolynomialDB load_db(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw db_error(db_error::kind::io, "cannot open '" + path + "'");
  return load_db(is);
}

}  // namespace algpt
