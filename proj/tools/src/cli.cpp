#include "crem/cli.hpp"

#include "crem/convexity_checks.hpp"
#include "crem/counterexample.hpp"
#include "crem/errors.hpp"
#include "crem/extension.hpp"
#include "crem/format.hpp"
#include "crem/koch_bounds.hpp"
#include "crem/sampling.hpp"
#include "crem/thinness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>

namespace crem::cli {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_double(part));
  return out;
}

Direction parse_direction(std::string_view text) {
  const Point2 p = parse_point(text);
  if (!(norm(p) > 0.0)) throw std::invalid_argument("direction must be non-zero");
  return Direction(p.x, p.y);
}

Verdict worst_of(Verdict a, Verdict b) {
  if (a == Verdict::Violation || b == Verdict::Violation) return Verdict::Violation;
  if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
  return Verdict::Pass;
}

// Flags shared by every subcommand.
struct Common {
  std::uint64_t seed = 1;
  std::optional<unsigned> depth;
  std::optional<double> tol;
  std::optional<unsigned> budget;
  std::string out;
  std::string csv;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "RNG seed (deterministic output per seed)");
  sub->add_option("--depth", c.depth, "cover depth / level count");
  sub->add_option("--tol", c.tol, "tolerance");
  sub->add_option("--budget", c.budget, "sample budget");
  sub->add_option("--out", c.out, "write the JSON report here instead of stdout");
  sub->add_option("--csv", c.csv, "write plot data here");
}

// Opens --csv lazily; throws with path context.
class CsvSink {
 public:
  explicit CsvSink(const std::string& path) : path_(path) {}
  bool wanted() const { return !path_.empty(); }
  std::ostream& stream() {
    if (!file_.is_open()) {
      file_.open(path_);
      if (!file_) throw std::runtime_error("cannot open CSV output '" + path_ + "'");
    }
    return file_;
  }

 private:
  std::string path_;
  std::ofstream file_;
};

CounterexampleParams load_params(const std::string& params_path, const std::string& gaps, const std::string& betas) {
  if (!params_path.empty()) {
    std::ifstream in(params_path);
    if (!in) throw std::runtime_error("cannot read params file '" + params_path + "'");
    const Json j = Json::parse(in);
    // Accept either raw params or a cx-build report.
    if (j.contains("metrics") && j["metrics"].contains("params")) {
      return CounterexampleParams::from_json(j["metrics"]["params"]);
    }
    return CounterexampleParams::from_json(j);
  }
  return build_params(parse_gaps(gaps), parse_betas(betas));
}

// --- subcommands -----------------------------------------------------------------

struct SetArgs {
  std::string set = "holey";
};

Report cmd_set_build(const SetArgs& a, const Common& c, CsvSink& csv) {
  const unsigned depth = c.depth.value_or(4);
  const PlaneSetPtr set = parse_set(a.set, depth);
  Report rep;
  rep.inputs = Json{{"set", a.set}, {"depth", depth}};
  const unsigned d = set->cover_is_exact() ? 0 : depth;
  const auto pieces = set->cover(d);
  const Box bb = set->bounding_box();
  rep.metrics = Json{{"name", set->name()},
                     {"kind", to_string(set->kind())},
                     {"pieces", pieces->size()},
                     {"haus_bound", number_json(set->haus_bound(d))},
                     {"cover_is_exact", set->cover_is_exact()},
                     {"bounding_box", Json::array({number_json(bb.xmin), number_json(bb.ymin), number_json(bb.xmax),
                                                   number_json(bb.ymax)})}};
  if (csv.wanted()) write_cover_csv(csv.stream(), *pieces);
  rep.verdict = Verdict::Pass;
  return rep;
}

struct ThinArgs {
  std::string set = "holey";
  std::string v = "0,1";
  unsigned n = 50;
  std::string eps = "0.05";
};

Report cmd_thinness_scan(const ThinArgs& a, const Common& c, CsvSink& csv) {
  const PlaneSetPtr set = parse_set(a.set, c.depth.value_or(4));
  const Direction v = parse_direction(a.v);
  const auto eps = parse_list(a.eps);
  SearchOptions opt;
  opt.max_depth = c.depth.value_or(10);
  const unsigned budget = c.budget.value_or(256);
  const ThinnessScan scan = directional_thinness_scan(*set, v, a.n, eps, c.seed, budget, opt);
  Report rep;
  rep.inputs = Json{{"set", a.set}, {"v", point_json(v.vec())}, {"n", a.n}, {"eps", eps}};
  rep.settings = Json{{"max_depth", opt.max_depth}, {"budget", budget}};
  rep.verdict = scan.verdict;
  Json j = scan.to_json();
  rep.metrics = Json{{"witnesses", scan.witnesses}, {"unknowns", scan.unknowns}, {"depth_max", scan.depth_max}};
  rep.witnesses = j["queries"];
  if (scan.unknowns > 0) rep.notes.push_back("an unknown query is not evidence of non-thinness");
  if (csv.wanted()) {
    auto& o = csv.stream();
    o << "x0,y0,x1,y1,clearance,depth\n";
    for (const auto& q : scan.outcomes) {
      if (!q.witness) continue;
      const auto& w = *q.witness;
      o << format_double(w.x_prime.x) << ',' << format_double(w.x_prime.y) << ',' << format_double(w.y_prime.x) << ','
        << format_double(w.y_prime.y) << ',' << format_double(w.clearance) << ',' << w.depth << '\n';
    }
  }
  return rep;
}

struct DisconnectArgs {
  std::string set = "holey";
  std::string v = "0,1";
  unsigned lines = 50;
};

Report cmd_disconnect_scan(const DisconnectArgs& a, const Common& c, CsvSink& csv) {
  const PlaneSetPtr set = parse_set(a.set, c.depth.value_or(4));
  const Direction v = parse_direction(a.v);
  const double resolution = c.tol.value_or(1e-3);
  const DisconnectScan scan = totally_disconnected_scan(*set, v, resolution, a.lines, c.depth.value_or(10));
  Report rep;
  rep.inputs = Json{{"set", a.set}, {"v", point_json(v.vec())}, {"lines", a.lines}};
  rep.settings = Json{{"resolution", number_json(resolution)}, {"max_depth", c.depth.value_or(10)}};
  rep.verdict = scan.verdict;
  rep.metrics = scan.to_json();
  if (csv.wanted()) {
    auto& o = csv.stream();
    o << "offset,depth,longest_run\n";
    for (const auto& l : scan.lines) {
      for (std::size_t i = 0; i < l.longest_runs.size(); ++i) {
        o << format_double(l.offset) << ',' << scan.depths[i] << ',' << format_double(l.longest_runs[i]) << '\n';
      }
    }
  }
  return rep;
}

struct LineArgs {
  std::string set = "holey";
  std::string line = "0,0.25,1,0.25";
};

Report cmd_line_count(const LineArgs& a, const Common& c, CsvSink&) {
  const unsigned depth = c.depth.value_or(6);
  const PlaneSetPtr set = parse_set(a.set, depth);
  const auto v = parse_list(a.line);
  if (v.size() != 4) throw std::invalid_argument("--line expects x0,y0,x1,y1");
  const Segment2 seg{{v[0], v[1]}, {v[2], v[3]}};
  const IntersectionCount cnt = line_intersection_count(seg, *set, depth);
  Report rep;
  rep.inputs = Json{{"set", a.set}, {"line", v}, {"depth", depth}};
  rep.metrics = Json{{"lower", cnt.lower}, {"upper", cnt.upper}};
  rep.verdict = Verdict::Pass;
  return rep;
}

struct CxArgs {
  std::string gaps = "fat:1/12:5";
  std::string betas = "uniform";
  std::string params;
};

Report cmd_cx_build(const CxArgs& a, const Common&, CsvSink&) {
  const CounterexampleParams p = load_params(a.params, a.gaps, a.betas);
  Report rep;
  rep.inputs = Json{{"gaps", a.gaps}, {"betas", a.betas}};
  Rational beta_sum = 0;
  for (const auto& b : p.betas()) beta_sum += b;
  rep.metrics = Json{{"n", p.size()},
                     {"beta_sum", rational_json(beta_sum)},
                     {"eps_sum", rational_json(p.gaps().eps_sum())},
                     {"params", p.to_json()}};
  rep.verdict = Verdict::Pass;
  return rep;
}

struct CxEvalArgs {
  CxArgs cx;
  std::string point = "0,0";
  std::string direction = "1,1";
  unsigned slice_points = 201;
};

Json hessian_json(const HessianResult& h) {
  if (const auto* m = std::get_if<Hessian2>(&h)) {
    return Json{{"fxx", number_json(m->fxx)},
                {"fxy", number_json(m->fxy)},
                {"fyy", number_json(m->fyy)},
                {"det", number_json(m->det())},
                {"psd", m->is_psd()}};
  }
  Json hits = Json::array();
  for (const auto& b : std::get<OnBoundary>(h).hits) {
    static const char* names[] = {"stripe-vertical", "stripe-horizontal", "outer-vertical", "outer-horizontal"};
    hits.push_back(Json{{"line", names[static_cast<int>(b.line)]}, {"index", b.index}, {"at", rational_json(b.at)}});
  }
  return Json{{"on_boundary", std::move(hits)}};
}

Report cmd_cx_eval(const CxEvalArgs& a, const Common&, CsvSink& csv) {
  const CounterexampleParams p = load_params(a.cx.params, a.cx.gaps, a.cx.betas);
  const Point2 q = parse_point(a.point);
  Report rep;
  rep.inputs = Json{{"gaps", a.cx.gaps}, {"betas", a.cx.betas}, {"point", point_json(q)}};
  rep.metrics = Json{{"value", number_json(eval_f(p, q))},
                     {"value_exact", rational_json(eval_f_exact(p, exact(q.x), exact(q.y)))},
                     {"in_obstacle", in_obstacle(p, q)},
                     {"hessian", hessian_json(hessian_at(p, q))}};
  if (csv.wanted()) {
    const Point2 v = parse_point(a.direction);
    std::vector<double> ts;
    const unsigned m = std::max(2u, a.slice_points);
    for (unsigned i = 0; i < m; ++i) ts.push_back(-1.0 + 2.0 * i / (m - 1));
    write_slice_csv(csv.stream(), p, q, v, ts);
  }
  rep.verdict = Verdict::Pass;
  return rep;
}

struct CxCertifyArgs {
  CxArgs cx;
  unsigned n = 1000;
  unsigned ball_samples = 20;
};

Report cmd_cx_certify(const CxCertifyArgs& a, const Common& c, CsvSink& csv) {
  const CounterexampleParams p = load_params(a.cx.params, a.cx.gaps, a.cx.betas);
  const unsigned n = c.budget.value_or(a.n);
  Report rep;
  rep.inputs = Json{{"gaps", a.cx.gaps}, {"betas", a.cx.betas}, {"n", n}, {"region", "[-2,2]^2 minus K^2"}};
  rep.settings = Json{{"ball_samples", a.ball_samples}};
  std::map<std::string, std::size_t> histogram;
  std::size_t issued = 0, failures = 0, errors = 0, rejected = 0;
  Rational min_det;
  bool have_min = false;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  if (csv.wanted()) csv.stream() << "x,y,case,radius,det_bound\n";
  while (issued + errors < n) {
    const Point2 q{u(rng), u(rng)};
    if (in_obstacle(p, q)) {
      ++rejected;
      continue;
    }
    try {
      const ConvexityCertificate cert = certify_local_convexity(p, q);
      ++issued;
      ++histogram[to_string(cert.kase)];
      if (!have_min || cert.det_bound < min_det) {
        min_det = cert.det_bound;
        have_min = true;
      }
      const CertificateCheck chk = check_certificate(p, cert, a.ball_samples, mix_seed(c.seed, issued));
      if (chk.failures > 0) {
        ++failures;
        if (rep.witnesses.size() < 10) {
          rep.witnesses.push_back(Json{{"certificate", cert.to_json()}, {"failing_sample", point_json(*chk.witness)}});
        }
      }
      if (csv.wanted()) {
        csv.stream() << format_double(q.x) << ',' << format_double(q.y) << ',' << to_string(cert.kase) << ','
                     << format_double(cert.radius) << ',' << to_string(cert.det_bound) << '\n';
      }
    } catch (const UnsatisfiableF& e) {
      ++errors;
      rep.notes.push_back(e.what());
    }
  }
  Json hist = Json::object();
  for (const auto& [k, v] : histogram) hist[k] = v;
  rep.metrics = Json{{"issued", issued},
                     {"rejected_in_obstacle", rejected},
                     {"unsatisfiable", errors},
                     {"check_failures", failures},
                     {"min_det_bound", have_min ? rational_json(min_det) : Json(nullptr)},
                     {"histogram", std::move(hist)}};
  if (failures > 0) {
    rep.verdict = Verdict::Violation;
  } else if (errors > 0 || issued == 0) {
    rep.verdict = Verdict::Inconclusive;
  } else {
    rep.verdict = Verdict::Pass;
  }
  return rep;
}

Report cmd_cx_gap(const CxArgs& a, const Common&, CsvSink&) {
  const CounterexampleParams p = load_params(a.params, a.gaps, a.betas);
  const NonconvexityGap g = nonconvexity_gap(p);
  Report rep;
  rep.inputs = Json{{"gaps", a.gaps}, {"betas", a.betas}};
  rep.metrics = Json{{"n", p.size()},
                     {"G", rational_json(g.direct)},
                     {"G_approx", number_json(to_double(g.direct))},
                     {"closed_form", rational_json(g.closed_form)},
                     {"delta_sum", rational_json(g.delta_sum)},
                     {"equal", g.direct == g.closed_form}};
  rep.witnesses.push_back(Json{{"p", point_json({-1.0, -1.0})},
                               {"q", point_json({1.0, 1.0})},
                               {"midpoint", point_json({0.0, 0.0})},
                               {"violation", rational_json(-g.direct / 2)}});
  rep.verdict = g.direct < 0 && g.direct == g.closed_form ? Verdict::Pass : Verdict::Violation;
  return rep;
}

struct SverakArgs {
  std::string fn = "neg-xy";
  std::string xs = "0";
  unsigned per_window = 32;
};

Report cmd_sverak(const SverakArgs& a, const Common& c, CsvSink& csv) {
  const Fn2 f = builtin_function(a.fn);
  SverakOptions opt;
  opt.levels = c.depth.value_or(20);
  opt.per_window = a.per_window;
  opt.tol = c.tol.value_or(1e-6);
  Report rep;
  const auto xs = parse_list(a.xs);
  rep.inputs = Json{{"fn", a.fn}, {"x", xs}};
  rep.settings = Json{{"levels", opt.levels}, {"per_window", opt.per_window}, {"tol", number_json(opt.tol)}};
  rep.verdict = xs.empty() ? Verdict::Inconclusive : Verdict::Pass;
  Json probes = Json::array();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const SverakProbe probe = sverak_probe(f, xs[i], opt);
    rep.verdict = worst_of(rep.verdict, probe.verdict);
    if (probe.verdict == Verdict::Violation) rep.witnesses.push_back(probe.to_json());
    probes.push_back(probe.to_json());
    if (i == 0 && csv.wanted()) probe.write_csv(csv.stream());
  }
  rep.metrics = Json{{"probes", std::move(probes)}};
  rep.notes.push_back("finite-window evidence for a liminf statement, not a proof");
  return rep;
}

struct KochArgs {
  unsigned k = 10;
};

Report cmd_koch_bounds(const KochArgs& a, const Common&, CsvSink& csv) {
  const auto rows = koch_table(a.k);
  Report rep;
  rep.inputs = Json{{"k", a.k}};
  bool ok = !rows.empty();
  for (const auto& r : rows) ok = ok && r.at_least_2k && r.reconciled;
  for (unsigned k = 0; k <= a.k; ++k) {
    if (koch_product(k) != koch_product_closed_form(k)) ok = false;
  }
  rep.metrics = Json{{"rows", koch_table_json(rows)}, {"landmarks_0", landmarks(0).to_json()}};
  rep.verdict = ok ? Verdict::Pass : Verdict::Violation;
  if (csv.wanted()) write_bounds_csv(csv.stream(), rows);
  return rep;
}

struct ExtendArgs {
  std::string set = "holey";
  std::string fn = "sum-sq";
  std::string v = "0,1";
  unsigned n = 20;
  unsigned seeds = 3;
};

Report cmd_extend(const ExtendArgs& a, const Common& c, CsvSink& csv) {
  const PlaneSetPtr set = parse_set(a.set, c.depth.value_or(6));
  PartialFn pf{builtin_function(a.fn), set, parse_direction(a.v)};
  const double tol = c.tol.value_or(1e-5);
  const auto points = sample_set_points(*set, a.n, c.seed);
  std::vector<std::uint64_t> seeds;
  for (unsigned s = 0; s < a.seeds; ++s) seeds.push_back(s + 1);
  ExtensionReportOptions opt;
  opt.seeds = seeds;
  opt.extend.samples = c.budget.value_or(64);
  Report rep = extension_report(pf, points, tol, c.seed, opt);
  rep.inputs["fn"] = a.fn;
  rep.inputs["set"] = a.set;
  if (csv.wanted()) write_extension_grid_csv(csv.stream(), pf, set->bounding_box(), 41, 41, tol, c.seed);
  return rep;
}

Report cmd_all_checks(const Common& c) {
  Report rep;
  rep.inputs = Json{{"suite", "default"}};
  rep.verdict = Verdict::Pass;
  CsvSink none("");
  auto add = [&](const std::string& name, const Report& r) {
    rep.verdict = worst_of(rep.verdict, r.verdict);
    rep.metrics[name] = Json{{"verdict", to_string(r.verdict)}, {"metrics", r.metrics}};
    for (const auto& w : r.witnesses) {
      if (r.verdict == Verdict::Violation) rep.witnesses.push_back(Json{{"check", name}, {"witness", w}});
    }
  };
  Common sub = c;
  sub.depth.reset();
  sub.tol.reset();
  sub.budget.reset();
  add("cx-gap", cmd_cx_gap(CxArgs{}, sub, none));
  add("koch-bounds", cmd_koch_bounds(KochArgs{30}, sub, none));
  for (const char* fn : {"neg-xy", "sum-sq", "abs-sum"}) {
    add(std::string("sverak:") + fn, cmd_sverak(SverakArgs{fn, "-0.5,0,0.5", 32}, sub, none));
  }
  ThinArgs thin;
  thin.n = 10;
  for (const char* v : {"1,0", "0,1"}) {
    thin.v = v;
    add(std::string("thinness-scan:") + v, cmd_thinness_scan(thin, sub, none));
  }
  CxCertifyArgs cert;
  cert.n = 500;
  add("cx-certify", cmd_cx_certify(cert, sub, none));
  return rep;
}

}  // namespace

Point2 parse_point(std::string_view text) {
  const auto v = parse_list(text);
  if (v.size() != 2) throw std::invalid_argument("expected 'x,y', got '" + std::string(text) + "'");
  return {v[0], v[1]};
}

PlaneSetPtr parse_set(std::string_view text, unsigned depth) {
  if (text == "holey") return holey_staircase();
  if (text == "koch") return koch_curve();
  if (text == "cantor-dust") {
    const IntervalSet c = ternary_cantor(std::min(depth, 12u));
    return product_approx(c, c);
  }
  if (text == "square") return rect_union({Box{0.0, 0.0, 1.0, 1.0}}, "square");
  throw std::invalid_argument("unknown set '" + std::string(text) + "' (holey, koch, cantor-dust, square)");
}

GapList parse_gaps(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() == 3 && parts[0] == "fat") {
    const Rational budget = parse_rational(parts[1]);
    const double d = parse_double(parts[2]);
    if (d < 1 || d > 20 || d != std::floor(d)) throw std::invalid_argument("fat depth must be an integer in 1..20");
    return fat_cantor(budget, static_cast<unsigned>(d)).gaps;
  }
  throw std::invalid_argument("unknown gap list '" + std::string(text) + "' (expected fat:<budget>:<depth>)");
}

BetaPolicy parse_betas(std::string_view text) {
  if (text == "uniform") return BetaPolicy::Uniform;
  if (text == "proportional") return BetaPolicy::ProportionalCapped;
  throw std::invalid_argument("unknown beta policy '" + std::string(text) + "' (uniform, proportional)");
}

Fn2 builtin_function(std::string_view name) {
  if (name == "neg-xy") return [](Point2 p) { return -p.x * p.y; };
  if (name == "sum-sq") return [](Point2 p) { return p.x * p.x + p.y * p.y; };
  if (name == "abs-sum") return [](Point2 p) { return std::abs(p.x) + std::abs(p.y); };
  if (name == "hinge") return [](Point2 p) { return std::max(p.x + p.y - 1.0, 0.0); };
  if (name == "quad") return [](Point2 p) { return p.x * p.x + 3.0 * p.y * p.y - p.x * p.y + p.x; };
  if (name == "x2-minus-y2") return [](Point2 p) { return p.x * p.x - p.y * p.y; };
  throw std::invalid_argument("unknown function '" + std::string(name) + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification pipelines for c-removable sets", "crem"};
  app.require_subcommand(1);
  Common common;

  SetArgs set_args;
  auto* set_build = app.add_subcommand("set-build", "build a set and its outer cover");
  set_build->add_option("--set", set_args.set, "holey | koch | cantor-dust | square");

  ThinArgs thin;
  auto* thinness = app.add_subcommand("thinness-scan", "directional interval-thinness scan");
  thinness->add_option("--set", thin.set);
  thinness->add_option("--v", thin.v, "direction 'x,y'");
  thinness->add_option("--n", thin.n, "queries");
  thinness->add_option("--eps", thin.eps, "comma-separated eps grid");

  DisconnectArgs disc;
  auto* disconnect = app.add_subcommand("disconnect-scan", "longest run of line traces (--tol is the resolution)");
  disconnect->add_option("--set", disc.set);
  disconnect->add_option("--v", disc.v);
  disconnect->add_option("--lines", disc.lines);

  LineArgs line;
  auto* line_count = app.add_subcommand("line-count", "bounds on the number of points of the set on a line");
  line_count->add_option("--set", line.set);
  line_count->add_option("--line", line.line, "x0,y0,x1,y1");

  auto add_cx = [](CLI::App* sub, CxArgs& a) {
    sub->add_option("--gaps", a.gaps, "fat:<budget>:<depth>");
    sub->add_option("--betas", a.betas, "uniform | proportional");
    sub->add_option("--params", a.params, "params JSON (overrides --gaps/--betas)");
  };
  CxArgs cx;
  auto* cx_build = app.add_subcommand("cx-build", "build counterexample parameters");
  add_cx(cx_build, cx);
  CxEvalArgs cx_eval_args;
  auto* cx_eval = app.add_subcommand("cx-eval", "evaluate f and its Hessian at a point");
  add_cx(cx_eval, cx_eval_args.cx);
  cx_eval->add_option("--point", cx_eval_args.point, "x,y");
  cx_eval->add_option("--direction", cx_eval_args.direction, "slice direction for --csv");
  cx_eval->add_option("--slice-points", cx_eval_args.slice_points);
  CxCertifyArgs cert;
  auto* cx_certify = app.add_subcommand("cx-certify", "issue and check local convexity certificates");
  add_cx(cx_certify, cert.cx);
  cx_certify->add_option("--n", cert.n, "points (--budget overrides)");
  cx_certify->add_option("--ball-samples", cert.ball_samples, "in-ball Hessian samples per certificate");
  CxArgs gap;
  auto* cx_gap = app.add_subcommand("cx-gap", "exact non-convexity gap");
  add_cx(cx_gap, gap);

  SverakArgs sv;
  auto* sverak = app.add_subcommand("sverak", "diagonal probe for separately convex functions (--depth = levels)");
  sverak->add_option("--fn", sv.fn, "neg-xy | sum-sq | abs-sum | hinge | quad | x2-minus-y2");
  sverak->add_option("--x", sv.xs, "comma-separated diagonal points");
  sverak->add_option("--per-window", sv.per_window);

  KochArgs koch;
  auto* koch_bounds = app.add_subcommand("koch-bounds", "exact divergent lower bounds");
  koch_bounds->add_option("--k", koch.k)->check(CLI::Range(1u, 64u));

  ExtendArgs ext;
  auto* extend = app.add_subcommand("extend", "numerical continuous extension across a set");
  extend->add_option("--set", ext.set);
  extend->add_option("--fn", ext.fn);
  extend->add_option("--v", ext.v, "privileged direction");
  extend->add_option("--n", ext.n, "points of the set");
  extend->add_option("--seeds", ext.seeds, "independent runs per point");

  auto* all = app.add_subcommand("all-checks", "fast battery of every pipeline");

  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) add_common(sub, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "crem: " << e.what() << '\n';
    return kUsageError;
  }

  const auto start = std::chrono::steady_clock::now();
  Report rep;
  try {
    CsvSink csv(common.csv);
    if (set_build->parsed()) rep = cmd_set_build(set_args, common, csv);
    else if (thinness->parsed()) rep = cmd_thinness_scan(thin, common, csv);
    else if (disconnect->parsed()) rep = cmd_disconnect_scan(disc, common, csv);
    else if (line_count->parsed()) rep = cmd_line_count(line, common, csv);
    else if (cx_build->parsed()) rep = cmd_cx_build(cx, common, csv);
    else if (cx_eval->parsed()) rep = cmd_cx_eval(cx_eval_args, common, csv);
    else if (cx_certify->parsed()) rep = cmd_cx_certify(cert, common, csv);
    else if (cx_gap->parsed()) rep = cmd_cx_gap(gap, common, csv);
    else if (sverak->parsed()) rep = cmd_sverak(sv, common, csv);
    else if (koch_bounds->parsed()) rep = cmd_koch_bounds(koch, common, csv);
    else if (extend->parsed()) rep = cmd_extend(ext, common, csv);
    else if (all->parsed()) rep = cmd_all_checks(common);
    rep.command = app.get_subcommands().front()->get_name();
  } catch (const std::exception& e) {
    err << "crem: " << e.what() << '\n';
    return kUsageError;
  }
  rep.seed = common.seed;
  rep.settings["depth"] = common.depth ? Json(*common.depth) : Json(nullptr);
  rep.settings["tol"] = common.tol ? number_json(*common.tol) : Json(nullptr);
  rep.settings["budget"] = common.budget ? Json(*common.budget) : Json(nullptr);
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string text = rep.to_json().dump(2) + "\n";
  if (common.out.empty()) {
    out << text;
  } else {
    std::ofstream file(common.out);
    if (!file || !(file << text)) {
      err << "crem: cannot write report to '" << common.out << "'\n";
      return kUsageError;
    }
  }
  return exit_code(rep.verdict);
}

}  // namespace crem::cli
