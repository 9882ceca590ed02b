// Command-line front end. Exit codes: 0 success, 1 check failure, 2 invalid
// configuration, 3 undecided membership.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "algpt/experiment.hpp"

using namespace algpt;

namespace {

struct Globals {
  int degree = 2;
  std::int64_t height = 10;
  unsigned threads = 0;
  std::string cache_dir;
  std::string format = "csv";
  std::uint64_t seed = 1;
  std::string output;
};

struct Options {
  std::string rect, curve = "0,-1", J = "1,2", c3 = "1", lambda = "1/2", eps = "1";
  std::string center, s = "3/5", u = "1/2,1/2", C = "1";
  bool require_quadratic = false;
  std::string v = "1/2,1/2", h = "1", delta = "1/4", sampler = "exact";
  std::uint64_t samples = 100;
  std::string ladder, upper;
};

void write(const Globals& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(g.output, std::ios::binary);
  if (!os) throw config_error("cannot open output '" + g.output + "'");
  os << text;
}

std::pair<Rational, Rational> pair_of(const std::string& text, const char* what) {
  auto v = parse_rational_list(text);
  if (v.size() != 2) throw config_error(std::string(what) + " needs two rationals");
  return {v[0], v[1]};
}

PolyClassParams class_params(const Globals& g) {
  PolyClassParams p{g.degree, g.height};
  p.validate();
  return p;
}

ExperimentConfig experiment_config(const Globals& g, const Options& o, bool strip) {
  ExperimentConfig c;
  c.n = g.degree;
  c.threads = g.threads;
  c.cache_dir = g.cache_dir;
  c.format = parse_format(g.format);
  c.seed = g.seed;
  c.eps = parse_rational(o.eps);
  c.ladder = o.ladder.empty() ? std::vector<std::int64_t>{g.height} : parse_ladder(o.ladder);
  if (strip) {
    c.mode = ExperimentConfig::Mode::strip;
    c.curve = parse_rational_list(o.curve);
    auto [a, b] = pair_of(o.J, "--J");
    c.interval = {a, b};
    c.c3 = parse_rational(o.c3);
    c.lambda = parse_rational(o.lambda);
  } else {
    if (o.rect.empty()) throw config_error("--rect is required");
    c.rect = parse_rational_list(o.rect);
  }
  c.validate();
  return c;
}

ClassifierParams classifier_params(const Globals& g, const Options& o, const Rational& s) {
  auto [u1, u2] = pair_of(o.u, "--u");
  ClassifierParams p{Integer(static_cast<long>(g.height)), s, u1, u2, parse_rational(o.C), o.require_quadratic};
  if (u1 <= 0 || u2 <= 0 || u1 + u2 != 1) throw config_error("--u requires u1, u2 > 0 with u1 + u2 = 1");
  if (p.C < 0) throw config_error("--C must be non-negative");
  return p;
}

int cmd_enumerate(const Globals& g) {
  auto params = class_params(g);
  std::string note;
  auto db = g.cache_dir.empty() ? enumerate_minimal_polynomials(params, g.threads)
                                : obtain_db(params, g.cache_dir, g.threads, &note);
  if (!note.empty()) std::cerr << note << "\n";
  Table t{{"n", "Q", "degree", "count"}, {}};
  for (int d = 1; d <= params.n; ++d)
    t.add({std::to_string(params.n), std::to_string(params.Q), std::to_string(d),
           std::to_string(db.count_of_degree(d))});
  write(g, emit(t, parse_format(g.format)));
  return 0;
}

int cmd_scaling(const Globals& g, const Options& o, bool strip) {
  auto cfg = experiment_config(g, o, strip);
  auto rep = run_scaling_experiment(cfg);
  for (const auto& n : rep.notes) std::cerr << n << "\n";
  write(g, emit(rep.table(), cfg.format));
  return 0;
}

int cmd_classify_square(const Globals& g, const Options& o) {
  if (o.center.empty()) throw config_error("--center is required");
  auto [d1, d2] = pair_of(o.center, "--center");
  const Rational s = parse_rational(o.s);
  auto p = classifier_params(g, o, s);
  const Integer Q(static_cast<long>(g.height));
  SquareSpec spec{d1, d2, SquareSpec::side_from(parse_rational(o.c3), s, Q), s, Q, p.u1, p.u2, p.C, p.require_quadratic};
  auto c = classify_square(spec, g.threads);
  write(g, emit(classification_table({{Q, s, p.u1, p.u2, p.C, to_string(d1), to_string(d2), c}}), parse_format(g.format)));
  return 0;
}

int cmd_special_fraction(const Globals& g, const Options& o) {
  auto [a, b] = pair_of(o.J, "--J");
  RationalCurve f(parse_rational_list(o.curve), a, b);
  const Rational lambda = parse_rational(o.lambda);
  const Integer Q(static_cast<long>(g.height));
  auto p = classifier_params(g, o, lambda);
  auto family = strip_tiling(f, parse_rational(o.c3), lambda, Q);
  auto r = special_fraction(family, p, g.threads);
  std::vector<ClassificationRow> rows;
  for (std::size_t k = 0; k < family.size(); ++k) {
    auto [x, y] = box_center(family[k]);
    rows.push_back({Q, lambda, p.u1, p.u2, p.C, x, y, r.rows[k]});
  }
  std::cerr << "special " << r.special << "/" << family.size() << " fraction " << to_string(r.fraction) << "\n";
  write(g, emit(classification_table(rows), parse_format(g.format)));
  return 0;
}

int cmd_measure(const Globals& g, const Options& o) {
  if (o.rect.empty()) throw config_error("--rect is required");
  auto rv = parse_rational_list(o.rect);
  if (rv.size() != 4) throw config_error("--rect needs four rationals");
  auto [v1, v2] = pair_of(o.v, "--v");
  BadSetSpec spec{g.degree, Integer(static_cast<long>(g.height)), v1, v2, parse_rational(o.h), parse_rational(o.delta),
                  Rectangle(rv[0], rv[1], rv[2], rv[3]), parse_rational(o.eps), std::nullopt};
  Sampler sm;
  if (o.sampler == "grid") sm.kind = Sampler::Kind::grid;
  else if (o.sampler == "random") sm.kind = Sampler::Kind::random;
  else if (o.sampler == "exact") sm.kind = Sampler::Kind::exact;
  else throw config_error("unknown sampler '" + o.sampler + "'");
  sm.size = o.samples;
  sm.seed = g.seed;
  auto m = estimate_bad_measure(spec, sm, g.threads);
  write(g, emit(measure_table({{spec, m}}), parse_format(g.format)));
  return 0;
}

int cmd_empty_interval(const Globals& g, const Options& o) {
  auto params = class_params(g);
  auto r = o.upper.empty() ? empty_interval_check(params, g.threads)
                           : empty_interval_check(params, parse_rational(o.upper), g.threads);
  Table t{{"n", "Q", "upper", "empty", "witness"}, {}};
  t.add({std::to_string(params.n), std::to_string(params.Q), to_string(r.upper), r.empty ? "true" : "false",
         r.witness ? r.witness->to_string() : ""});
  write(g, emit(t, parse_format(g.format)));
  return r.empty ? 0 : 1;
}

int cmd_selftest(const Globals& g) {
  auto r = run_selftest(g.seed, g.threads);
  write(g, emit(suite_table(r.suites), parse_format(g.format)));
  for (const auto& s : r.suites)
    for (const auto& f : s.failures) std::cerr << s.name << ": " << f << "\n";
  return r.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Algebraic points with conjugate coordinates: counts, classifiers and measure checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  Options o;
  app.add_option("--degree", g.degree, "degree bound n")->capture_default_str();
  app.add_option("--height", g.height, "height bound Q")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (0 = logical cores)")->capture_default_str();
  app.add_option("--cache-dir", g.cache_dir, "directory of mpdb_n<N>_Q<Q>.txt caches");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--seed", g.seed, "seed for random suites and samplers")->capture_default_str();
  app.add_option("--output", g.output, "write the report here instead of stdout");

  auto rect_opt = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--rect", o.rect, "x1_lo,x1_hi,x2_lo,x2_hi");
    if (required) opt->required();
    c->add_option("--eps", o.eps, "diagonal exclusion")->capture_default_str();
  };
  auto strip_opts = [&](CLI::App* c) {
    c->add_option("--curve", o.curve, "f coefficients, low to high")->capture_default_str();
    c->add_option("--J", o.J, "a,b")->capture_default_str();
    c->add_option("--c3", o.c3, "side constant")->capture_default_str();
    c->add_option("--lambda", o.lambda, "width exponent")->capture_default_str();
  };
  auto classifier_opts = [&](CLI::App* c) {
    c->add_option("--u", o.u, "u1,u2")->capture_default_str();
    c->add_option("--C", o.C, "bound constant")->capture_default_str();
    c->add_flag("--require-quadratic", o.require_quadratic, "exclude b2 = 0");
  };

  auto* enumerate = app.add_subcommand("enumerate", "enumerate minimal polynomials");
  auto* count = app.add_subcommand("count", "count points in a rectangle");
  rect_opt(count, true);
  auto* strip_count = app.add_subcommand("strip-count", "count points in a strip");
  strip_opts(strip_count);
  strip_count->add_option("--eps", o.eps, "diagonal exclusion")->capture_default_str();
  auto* classify = app.add_subcommand("classify-square", "classify one square");
  classify->add_option("--center", o.center, "d1,d2")->required();
  classify->add_option("--s", o.s, "side exponent")->capture_default_str();
  classify->add_option("--c3", o.c3, "side constant")->capture_default_str();
  classifier_opts(classify);
  auto* fraction = app.add_subcommand("special-fraction", "special fraction of a strip tiling");
  strip_opts(fraction);
  classifier_opts(fraction);
  auto* measure = app.add_subcommand("measure", "bad-set measure");
  rect_opt(measure, true);
  measure->add_option("--v", o.v, "v1,v2")->capture_default_str();
  measure->add_option("--h-n", o.h, "h_n")->capture_default_str();
  measure->add_option("--delta-n", o.delta, "delta_n")->capture_default_str();
  measure->add_option("--sampler", o.sampler, "grid, random or exact")->capture_default_str();
  measure->add_option("--samples", o.samples, "grid side or random sample count")->capture_default_str();
  auto* scaling = app.add_subcommand("scaling", "count over a Q-ladder and fit the log-log slope");
  scaling->add_option("--ladder", o.ladder, "strictly increasing Q values")->required();
  rect_opt(scaling, false);
  strip_opts(scaling);
  bool scaling_strip = false;
  scaling->add_flag("--strip", scaling_strip, "count in the strip instead of the rectangle");
  auto* empty = app.add_subcommand("empty-interval", "check that (0, upper) holds no root");
  empty->add_option("--upper", o.upper, "upper end (default 1/(2Q))");
  auto* selftest = app.add_subcommand("selftest", "run the property suites and oracles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (enumerate->parsed()) return cmd_enumerate(g);
    if (count->parsed()) return cmd_scaling(g, o, false);
    if (strip_count->parsed()) return cmd_scaling(g, o, true);
    if (classify->parsed()) return cmd_classify_square(g, o);
    if (fraction->parsed()) return cmd_special_fraction(g, o);
    if (measure->parsed()) return cmd_measure(g, o);
    if (scaling->parsed()) return cmd_scaling(g, o, scaling_strip);
    if (empty->parsed()) return cmd_empty_interval(g, o);
    if (selftest->parsed()) return cmd_selftest(g);
  } catch (const undecided_error& e) {
    std::cerr << "undecided: " << e.what() << "\n";
    return 3;
  } catch (const config_error& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
