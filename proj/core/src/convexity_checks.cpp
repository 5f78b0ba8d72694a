#include "crem/convexity_checks.hpp"

#include "crem/format.hpp"
#include "crem/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace crem {

double midpoint_violation(const Fn2& f, Point2 p, Point2 q) {
  return f(midpoint(p, q)) - 0.5 * (f(p) + f(q));
}

namespace {

void record(MidpointScan& scan, const Fn2& f, Point2 p, Point2 q) {
  const double v = midpoint_violation(f, p, q);
  ++scan.samples;
  if (!scan.worst || v > scan.worst->violation) scan.worst = MidpointWitness{p, q, v};
}

void finish(MidpointScan& scan) {
  if (!scan.worst) {
    scan.verdict = Verdict::Inconclusive;
  } else {
    scan.verdict = scan.worst->violation > scan.tol ? Verdict::Violation : Verdict::Pass;
  }
}

}  // namespace

MidpointScan midpoint_violation_scan(const Fn2& f, const Box& region, std::size_t n_samples, std::uint64_t seed,
                                     double tol) {
  MidpointScan scan;
  scan.tol = tol;
  const Halton h(seed);
  auto at = [&](double u, double v) {
    return Point2{region.xmin + u * region.width(), region.ymin + v * region.height()};
  };
  for (std::size_t i = 0; i < n_samples; ++i) record(scan, f, at(h(i, 0), h(i, 1)), at(h(i, 2), h(i, 3)));
  finish(scan);
  return scan;
}

MidpointScan midpoint_violation_scan(const Fn2& f, std::span<const Segment2> segments, std::size_t n_per_segment,
                                     std::uint64_t seed, double tol) {
  MidpointScan scan;
  scan.tol = tol;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const Halton h(mix_seed(seed, s));
    for (std::size_t i = 0; i < n_per_segment; ++i) record(scan, f, segments[s].at(h(i, 0)), segments[s].at(h(i, 1)));
  }
  finish(scan);
  return scan;
}

MidpointScan separate_convexity_check(const Fn2& f, const Box& region, std::size_t n_lines,
                                      std::size_t n_per_line, std::uint64_t seed, double tol) {
  std::vector<Segment2> chords;
  chords.reserve(2 * n_lines);
  for (std::size_t i = 0; i < n_lines; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n_lines);
    const double y = region.ymin + u * region.height();
    const double x = region.xmin + u * region.width();
    chords.push_back({{region.xmin, y}, {region.xmax, y}});
    chords.push_back({{x, region.ymin}, {x, region.ymax}});
  }
  return midpoint_violation_scan(f, chords, n_per_line, seed, tol);
}

Json MidpointScan::to_json() const {
  Json j{{"verdict", to_string(verdict)}, {"samples", samples}, {"tol", number_json(tol)}};
  if (worst) {
    j["worst"] = Json{{"p", point_json(worst->p)},
                      {"q", point_json(worst->q)},
                      {"midpoint", point_json(midpoint(worst->p, worst->q))},
                      {"violation", number_json(worst->violation)}};
  } else {
    j["worst"] = nullptr;
  }
  return j;
}

SverakProbe sverak_probe(const Fn2& f, double x, const SverakOptions& options) {
  if (options.levels < 1 || options.levels > 40) throw std::invalid_argument("sverak_probe: levels must be in 1..40");
  if (options.per_window < 1) throw std::invalid_argument("sverak_probe: per_window must be >= 1");
  if (!(options.tol >= 0.0)) throw std::invalid_argument("sverak_probe: tol must be >= 0");
  constexpr double kUlp = std::numeric_limits<double>::epsilon();

  SverakProbe probe;
  probe.x = x;
  probe.options = options;
  auto g = [&](double s) { return f({s, s}); };
  const double g0 = g(x);
  for (unsigned n = 1; n <= options.levels; ++n) {
    SverakWindow w;
    w.n = n;
    w.sup = std::numeric_limits<double>::quiet_NaN();
    for (unsigned j = 0; j < options.per_window; ++j) {
      const double t = std::ldexp(1.0, -static_cast<int>(n + j));
      const double gp = g(x + t);
      const double gm = g(x - t);
      const double r = (gp + gm - 2.0 * g0) / t;
      probe.samples.emplace_back(t, r);
      // Rounding in g values and in the arguments x +- t.
      const double slope = std::abs(gp - gm) / (2.0 * t);
      const double err = 8.0 * kUlp * (std::abs(gp) + std::abs(gm) + 2.0 * std::abs(g0) + std::abs(x) * slope) / t;
      if (err > options.tol) continue;
      ++w.resolved;
      if (std::isnan(w.sup) || r > w.sup) {
        w.sup = r;
        w.t_at_sup = t;
      }
    }
    probe.windows.push_back(w);
  }
  // An unresolved window is inconclusive, never a violation.
  probe.verdict = Verdict::Pass;
  for (const auto& w : probe.windows) {
    if (w.resolved == 0 && probe.verdict == Verdict::Pass) probe.verdict = Verdict::Inconclusive;
    if (w.resolved > 0 && w.sup < -options.tol) probe.verdict = Verdict::Violation;
  }
  return probe;
}

Json SverakProbe::to_json() const {
  Json rows = Json::array();
  for (const auto& w : windows) {
    rows.push_back(Json{{"n", w.n},
                        {"sup", number_json(w.sup)},
                        {"t_at_sup", number_json(w.t_at_sup)},
                        {"resolved", w.resolved}});
  }
  return Json{{"x", number_json(x)},
              {"levels", options.levels},
              {"per_window", options.per_window},
              {"tol", number_json(options.tol)},
              {"verdict", to_string(verdict)},
              {"evidence_only", true},
              {"windows", std::move(rows)}};
}

void SverakProbe::write_csv(std::ostream& out) const {
  out << "t,r\n";
  for (const auto& [t, r] : samples) out << format_double(t) << ',' << format_double(r) << '\n';
}

SigmaRhoReport sigma_rho_check(const Fn2& f, std::span<const double> t_grid, double tol) {
  SigmaRhoReport rep;
  rep.tol = tol;
  const double f0 = f({0.0, 0.0});
  auto fn = [&](double x, double y) { return f({x, y}) - f0; };
  rep.min_sum = std::numeric_limits<double>::infinity();
  for (const double t : t_grid) {
    SigmaRhoRow row{t, fn(t, -t) + fn(-t, t), fn(t, t) + fn(-t, -t)};
    rep.min_sum = std::min(rep.min_sum, row.sigma + row.rho);
    rep.rows.push_back(row);
  }
  if (rep.rows.empty()) {
    rep.verdict = Verdict::Inconclusive;
    rep.min_sum = 0.0;
  } else {
    rep.verdict = rep.min_sum >= -tol ? Verdict::Pass : Verdict::Violation;
  }
  return rep;
}

Json SigmaRhoReport::to_json() const {
  Json rows_json = Json::array();
  for (const auto& r : rows) {
    rows_json.push_back(Json{{"t", number_json(r.t)}, {"sigma", number_json(r.sigma)}, {"rho", number_json(r.rho)}});
  }
  return Json{{"verdict", to_string(verdict)},
              {"tol", number_json(tol)},
              {"min_sum", number_json(min_sum)},
              {"rows", std::move(rows_json)}};
}

}  // namespace crem
