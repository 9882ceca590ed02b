#pragma once

// Experiment plumbing: configs, report tables, log-log slope fits, CSV/JSON
// emission, database caching and the self-test gate.
//
// Reports never carry wall-clock times, so two runs with the same config are
// byte-identical whatever the thread count.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "algpt/classifier.hpp"
#include "algpt/counting.hpp"
#include "algpt/metriclab.hpp"

namespace algpt {

// ---------------------------------------------------------------------------
// Tables.

enum class Format { csv, json };

/// Header plus rows of already formatted cells.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw domain_error("table row width differs from the header");
    rows.push_back(std::move(row));
  }
};

namespace detail {
inline std::string csv_cell(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}
}  // namespace detail

inline std::string to_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + detail::csv_cell(cells[i]);
    out += '\n';
  };
  line(t.columns);
  for (const auto& r : t.rows) line(r);
  return out;
}

/// Array of objects, one per row, keys in column order; cells stay strings so
/// exact rationals survive.
inline std::string to_json(const Table& t) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < r.size(); ++i) obj[t.columns[i]] = r[i];
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

inline std::string emit(const Table& t, Format f) { return f == Format::csv ? to_csv(t) : to_json(t); }

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw config_error("unknown output format '" + s + "'");
}

// ---------------------------------------------------------------------------
// Slope fit.

/// Ordinary least squares of log2(count) on log2(Q) over rows with a
/// positive count; undefined with fewer than two such rows.
struct SlopeFit {
  bool defined = false;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // sum of squared residuals
  std::size_t points = 0;
};

inline SlopeFit fit_loglog(const std::vector<std::pair<std::int64_t, std::uint64_t>>& data) {
  std::vector<double> xs, ys;
  for (const auto& [q, c] : data)
    if (c > 0) {
      xs.push_back(std::log2(static_cast<double>(q)));
      ys.push_back(std::log2(static_cast<double>(c)));
    }
  SlopeFit f;
  f.points = xs.size();
  if (xs.size() < 2) return f;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) return f;
  f.defined = true;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (f.intercept + f.slope * xs[i]);
    f.residual += r * r;
  }
  return f;
}

inline std::string format_fit(const SlopeFit& f) {
  if (!f.defined) return "undefined";
  return format_double(f.slope, 10);
}

// ---------------------------------------------------------------------------
// Configuration.

/// Comma-separated list of exact rationals ("1,3/2,-1.5").
inline std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw config_error("empty rational list");
  return out;
}

inline std::vector<std::int64_t> parse_ladder(const std::string& text) {
  std::vector<std::int64_t> out;
  for (const auto& r : parse_rational_list(text)) {
    if (r.get_den() != 1 || !fits_int64(r.get_num())) throw config_error("Q-ladder entries must be integers");
    out.push_back(r.get_num().get_si());
  }
  return out;
}

struct ExperimentConfig {
  enum class Mode { rectangle, strip };

  int n = 2;
  std::vector<std::int64_t> ladder;
  Mode mode = Mode::rectangle;
  std::vector<Rational> rect;           // x1_lo, x1_hi, x2_lo, x2_hi
  std::vector<Rational> curve;          // f coefficients, low to high
  std::vector<Rational> interval;       // J = [a, b]
  Rational c3 = 1;
  Rational lambda = Rational(1, 2);
  Rational eps = 1;
  unsigned threads = 1;
  std::string cache_dir;                // empty: stream without a database
  Format format = Format::csv;
  std::uint64_t seed = 1;

  void validate() const {
    if (ladder.empty()) throw config_error("Q-ladder must not be empty");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      if (ladder[i] < 1) throw config_error("Q-ladder entries must be positive");
      if (i > 0 && ladder[i] <= ladder[i - 1]) throw config_error("Q-ladder must be strictly increasing");
    }
    PolyClassParams{n, ladder.back()}.validate();
    if (eps <= 0) throw config_error("eps must be positive");
    if (mode == Mode::rectangle && rect.size() != 4) throw config_error("rectangle needs four rationals");
    if (mode == Mode::strip) {
      if (curve.empty()) throw config_error("strip needs curve coefficients");
      if (interval.size() != 2) throw config_error("strip needs J as two rationals");
      if (c3 <= 0) throw config_error("strip requires c3 > 0");
      if (lambda <= 0 || lambda >= Rational(3, 4)) throw config_error("strip requires 0 < lambda < 3/4");
    }
  }

  Rectangle rectangle() const { return Rectangle(rect[0], rect[1], rect[2], rect[3]); }
  RationalCurve rational_curve() const { return RationalCurve(curve, interval[0], interval[1]); }
};

// ---------------------------------------------------------------------------
// Database cache.

/// Loads `<dir>/mpdb_n<N>_Q<Q>.txt` or enumerates and writes it. A cache that
/// fails to load is reported through `note` and replaced.
inline MinimalPolynomialDB obtain_db(const PolyClassParams& params, const std::string& dir, unsigned threads,
                                     std::string* note = nullptr) {
  params.validate();
  namespace fs = std::filesystem;
  const fs::path path = fs::path(dir) / db_file_name(params);
  if (fs::exists(path)) {
    try {
      auto db = load_db(path.string());
      if (db.params() == params) return db;
      if (note) *note = "cache " + path.string() + " holds a different class; re-enumerating";
    } catch (const db_error& e) {
      if (note) *note = std::string("cache load failed (") + e.what() + "); re-enumerating";
    }
  }
  auto db = enumerate_minimal_polynomials(params, threads);
  fs::create_directories(dir);
  save_db(db, path.string());
  return db;
}

// ---------------------------------------------------------------------------
// Count reports.

inline Table count_table_header() {
  return Table{{"n", "Q", "region", "eps", "lambda", "count", "count_by_degree", "mu2", "ratio", "ratio_theorem"}, {}};
}

inline std::vector<std::string> count_row(const CountResult& r, const Rational& eps) {
  std::string by_degree;
  for (std::size_t d = 2; d < r.count_by_degree.size(); ++d)
    by_degree += (d > 2 ? ";" : "") + std::to_string(r.count_by_degree[d]);
  auto mu = r.mu2.exact();
  return {std::to_string(r.n),
          std::to_string(r.Q),
          r.region,
          to_string(eps),
          r.lambda ? to_string(*r.lambda) : "",
          std::to_string(r.count),
          by_degree,
          mu ? to_string(*mu) : format_double(r.mu2.approx(), 17),
          format_double(r.ratio, 12),
          r.lambda ? format_double(r.ratio_theorem, 12) : ""};
}

struct ExperimentReport {
  std::vector<CountResult> rows;
  Rational eps = 1;
  SlopeFit fit;
  std::vector<std::string> notes;  // cache recovery messages

  /// Rows plus the fit repeated on each row, recomputable from the counts.
  Table table() const {
    Table t = count_table_header();
    t.columns.insert(t.columns.end(), {"fit_slope", "fit_residual"});
    for (const auto& r : rows) {
      auto row = count_row(r, eps);
      row.push_back(format_fit(fit));
      row.push_back(fit.defined ? format_double(fit.residual, 10) : "undefined");
      t.add(std::move(row));
    }
    return t;
  }
};

inline CountResult run_count(const ExperimentConfig& cfg, std::int64_t Q, std::vector<std::string>* notes = nullptr) {
  const PolyClassParams params{cfg.n, Q};
  params.validate();
  const DiagonalExclusion ex(cfg.eps);
  std::optional<MinimalPolynomialDB> db;
  if (!cfg.cache_dir.empty()) {
    std::string note;
    db = obtain_db(params, cfg.cache_dir, cfg.threads, &note);
    if (!note.empty() && notes) notes->push_back(note);
  }
  if (cfg.mode == ExperimentConfig::Mode::rectangle) {
    auto rect = cfg.rectangle();
    if (!validate_region(rect, ex)) throw config_error("rectangle meets the diagonal band");
    return db ? count_in_region(*db, rect, ex, cfg.threads) : count_in_region(params, rect, ex, cfg.threads);
  }
  auto strip = Strip::from_provenance(cfg.rational_curve(), cfg.c3, cfg.lambda, Integer(static_cast<long>(Q)));
  if (!validate_region(strip, ex)) throw config_error("strip meets the diagonal band");
  return db ? count_in_strip(*db, strip, ex, cfg.threads) : count_in_strip(params, strip, ex, cfg.threads);
}

inline ExperimentReport run_scaling_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport rep;
  rep.eps = cfg.eps;
  std::vector<std::pair<std::int64_t, std::uint64_t>> data;
  for (auto Q : cfg.ladder) {
    rep.rows.push_back(run_count(cfg, Q, &rep.notes));
    data.emplace_back(Q, rep.rows.back().count);
  }
  rep.fit = fit_loglog(data);
  return rep;
}

// ---------------------------------------------------------------------------
// Classifier and measure reports.

struct ClassificationRow {
  Integer Q;
  Rational s, u1, u2, C;
  std::string center1, center2;
  Classification result;
};

inline Table classification_table(const std::vector<ClassificationRow>& rows) {
  Table t{{"Q", "s", "u1", "u2", "C", "center1", "center2", "verdict", "witness_b2", "witness_b1", "witness_b0"}, {}};
  for (const auto& r : rows) {
    const auto& w = r.result.witness;
    t.add({to_string(r.Q), to_string(r.s), to_string(r.u1), to_string(r.u2), to_string(r.C), r.center1, r.center2,
           to_string(r.result.verdict), w ? std::to_string(w->b2) : "", w ? std::to_string(w->b1) : "",
           w ? std::to_string(w->b0) : ""});
  }
  return t;
}

/// Center of a box as decimal approximations (endpoints may be irrational).
inline std::pair<std::string, std::string> box_center(const SquareBox& b) {
  RealValue half(Rational(1, 2));
  return {format_double((half * (b.lo1 + b.hi1)).approx(), 15), format_double((half * (b.lo2 + b.hi2)).approx(), 15)};
}

inline Table measure_table(const std::vector<std::pair<BadSetSpec, MeasureEstimate>>& rows) {
  Table t{{"Q", "n", "v1", "v2", "h_n", "delta_n", "mode", "samples", "estimate", "stderr", "quarter_mu2", "pass"}, {}};
  for (const auto& [spec, m] : rows)
    t.add({to_string(spec.Q), std::to_string(spec.n), to_string(spec.v1), to_string(spec.v2), to_string(spec.h),
           to_string(spec.delta), m.mode, std::to_string(m.samples),
           m.mode == "exact" ? "[" + to_string(m.lower) + "," + to_string(m.upper) + "]" : to_string(m.estimate),
           format_double(m.stderr_, 10), to_string(m.quarter_mu2), m.pass ? "true" : "false"});
  return t;
}

inline Table suite_table(const std::vector<SuiteResult>& suites) {
  Table t{{"suite", "instances", "skipped", "vacuous", "violations", "pass"}, {}};
  for (const auto& s : suites)
    t.add({s.name, std::to_string(s.instances), std::to_string(s.skipped), std::to_string(s.vacuous),
           std::to_string(s.violations), s.pass() ? "true" : "false"});
  return t;
}

// ---------------------------------------------------------------------------
// Self-test.

struct SelftestResult {
  std::vector<SuiteResult> suites;
  bool pass() const {
    for (const auto& s : suites)
      if (!s.pass()) return false;
    return true;
  }
};

namespace detail {

/// Rectangle count three ways: database scan, streaming, and per-point exact
/// membership over the database.
inline SuiteResult count_oracle_suite(unsigned threads) {
  SuiteResult r;
  r.name = "count-oracle";
  const Rectangle rects[] = {Rectangle(1, Rational(3, 2), Rational(-3, 2), -1),
                             Rectangle(Rational(-1, 3), Rational(1, 2), Rational(3, 2), Rational(7, 2)),
                             Rectangle(-3, -1, 0, 2)};
  for (int n = 2; n <= 3; ++n)
    for (std::int64_t Q : {4, 9}) {
      const PolyClassParams params{n, Q};
      auto db = enumerate_minimal_polynomials(params, threads);
      for (const auto& rect : rects) {
        const DiagonalExclusion ex(Rational(1, 2));
        if (!validate_region(rect, ex)) continue;
        auto a = count_in_region(db, rect, ex, threads).count;
        auto b = count_in_region(params, rect, ex, threads).count;
        std::uint64_t c = 0;
        for (const auto& p : db.entries())
          for (const auto& pt : points_of(p)) c += point_in_rectangle(pt, rect);
        ++r.instances;
        if (a != b || a != c)
          r.fail("n=" + std::to_string(n) + " Q=" + std::to_string(Q) + " " + rect.describe() + ": " +
                 std::to_string(a) + "/" + std::to_string(b) + "/" + std::to_string(c));
      }
    }
  return r;
}

inline SuiteResult empty_interval_suite(unsigned threads) {
  SuiteResult r;
  r.name = "empty-interval";
  for (int n = 1; n <= 3; ++n)
    for (std::int64_t Q = 1; Q <= 20; ++Q) {
      ++r.instances;
      auto e = empty_interval_check({n, Q}, threads);
      if (!e.empty) r.fail("n=" + std::to_string(n) + " Q=" + std::to_string(Q) + " witness " + e.witness->to_string());
    }
  return r;
}

/// A corrupted cache must fail to load and be replaced by an identical
/// re-enumeration.
inline SuiteResult cache_recovery_suite(unsigned threads) {
  SuiteResult r;
  r.name = "cache-recovery";
  namespace fs = std::filesystem;
  const PolyClassParams params{2, 6};
  const fs::path dir = fs::temp_directory_path() / ("algpt-selftest-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path file = dir / db_file_name(params);
  auto reference = enumerate_minimal_polynomials(params, threads);
  save_db(reference, file.string());
  {
    std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-3, std::ios::end);
    f.put('x');
  }
  ++r.instances;
  bool surfaced = false;
  try {
    (void)load_db(file.string());
  } catch (const db_error&) {
    surfaced = true;
  }
  if (!surfaced) r.fail("corrupted cache loaded without error");
  std::string note;
  auto recovered = obtain_db(params, dir.string(), threads, &note);
  ++r.instances;
  if (note.empty() || !(recovered == reference)) r.fail("re-enumeration after corruption differs");
  ++r.instances;
  if (!(load_db(file.string()) == reference)) r.fail("rewritten cache differs");
  std::error_code ec;
  fs::remove_all(dir, ec);
  return r;
}

inline SuiteResult resultant_suite() {
  SuiteResult r;
  r.name = "resultant-separation";
  const std::pair<IntPolynomial, IntPolynomial> pairs[] = {
      {IntPolynomial{-2, 0, 1}, IntPolynomial{-3, 0, 1}},
      {IntPolynomial{-1, 0, 2}, IntPolynomial{-1, 0, 1}},
      {IntPolynomial{-1, -1, 1}, IntPolynomial{-5, 0, 1}},
      {IntPolynomial{-2, 0, 0, 1}, IntPolynomial{-3, 1, 1}}};
  for (const auto& [a, b] : pairs) {
    ++r.instances;
    auto c = resultant_separation_check(a, b);
    if (!c.at_least_one || !c.formula_matches) r.fail(a.to_string() + " vs " + b.to_string());
  }
  return r;
}

}  // namespace detail

/// Property suites, oracle equivalences, counterexample and cache checks.
inline SelftestResult run_selftest(std::uint64_t seed = 1, unsigned threads = 1) {
  SelftestResult out;
  out.suites.push_back(lemma1_suite(10000, seed));
  out.suites.push_back(lemma2_suite(1000, seed));
  auto cal = lemma4_calibrate(2, 5);
  out.suites.push_back(lemma4_suite(cal, 2, 5));
  out.suites.push_back(detail::resultant_suite());
  out.suites.push_back(detail::count_oracle_suite(threads));
  out.suites.push_back(detail::empty_interval_suite(threads));
  out.suites.push_back(detail::cache_recovery_suite(threads));
  return out;
}

}  // namespace algpt
