#include "crem/thinness.hpp"

#include "crem/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace crem {

void ThinnessQuery::validate() const {
  if (!(eps > 0.0)) throw std::invalid_argument("ThinnessQuery: eps must be positive");
  if (direction) {
    const Point2 d = x - y;
    if (std::abs(cross(d, direction->vec())) > 1e-9 * std::max(1.0, norm(d))) {
      throw std::invalid_argument("ThinnessQuery: x - y is not parallel to the direction");
    }
  }
}

namespace {

// Endpoint perturbation: two offsets inside the open eps-disc.
struct Perturbation {
  Point2 dx;
  Point2 dy;
};

Point2 disc_point(double u_radius, double u_angle, double radius) {
  const double r = radius * std::sqrt(u_radius);
  const double a = 2.0 * std::numbers::pi * u_angle;
  return {r * std::cos(a), r * std::sin(a)};
}

Point2 clamp_to_disc(Point2 p, double radius) {
  const double n = norm(p);
  return n <= radius ? p : (radius / n) * p;
}

std::vector<unsigned> depth_schedule(const PlaneSetApprox& set, unsigned requested_max) {
  if (set.cover_is_exact()) return {0};
  const unsigned top = std::min(requested_max, set.max_depth());
  std::vector<unsigned> out;
  for (unsigned d = std::min(1u, top); d <= top; ++d) out.push_back(d);
  return out;
}

}  // namespace

std::optional<TransparencyWitness> find_transparent_segment(const ThinnessQuery& q, const PlaneSetApprox& set,
                                                            unsigned budget, std::uint64_t seed,
                                                            const SearchOptions& options) {
  q.validate();
  if (budget < 1) throw std::invalid_argument("find_transparent_segment: budget must be >= 1");
  // Strictly inside the open ball.
  const double radius = q.eps * (1.0 - 1e-9);
  const Halton halton(seed);

  auto segment_of = [&](const Perturbation& p) { return Segment2{q.x + p.dx, q.y + p.dy}; };
  auto try_certify = [&](const Perturbation& p, unsigned depth) -> std::optional<TransparencyWitness> {
    const Segment2 s = segment_of(p);
    const double c = set.segment_clearance(s, depth);
    if (c > kCertifiedClearance) return TransparencyWitness{s.a, s.b, c, depth};
    return std::nullopt;
  };

  for (const unsigned depth : depth_schedule(set, options.max_depth)) {
    // Unperturbed segment first.
    if (auto w = try_certify({{0.0, 0.0}, {0.0, 0.0}}, depth)) return w;

    struct Scored {
      std::size_t hits;
      Perturbation p;
    };
    std::vector<Scored> best;
    for (unsigned i = 0; i < budget; ++i) {
      const Perturbation p{disc_point(halton(i, 0), halton(i, 1), radius),
                           disc_point(halton(i, 2), halton(i, 3), radius)};
      if (auto w = try_certify(p, depth)) return w;
      const std::size_t hits = set.segment_hits(segment_of(p), depth);
      best.push_back({hits, p});
    }
    std::stable_sort(best.begin(), best.end(), [](const Scored& a, const Scored& b) { return a.hits < b.hits; });
    best.resize(std::min<std::size_t>(best.size(), options.refine_candidates));

    std::mt19937_64 rng(mix_seed(seed, depth));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& cand : best) {
      double step = 0.25 * q.eps;
      for (unsigned it = 0; it < options.refine_steps; ++it) {
        Perturbation trial = cand.p;
        trial.dx = clamp_to_disc(trial.dx + Point2{step * gauss(rng), step * gauss(rng)}, radius);
        trial.dy = clamp_to_disc(trial.dy + Point2{step * gauss(rng), step * gauss(rng)}, radius);
        const std::size_t hits = set.segment_hits(segment_of(trial), depth);
        if (hits == 0) {
          if (auto w = try_certify(trial, depth)) return w;
        }
        if (hits <= cand.hits) {
          cand = {hits, trial};
        } else {
          step *= 0.8;
        }
      }
    }
  }
  return std::nullopt;
}

namespace {

struct BoxFrame {
  Point2 centre;
  double along_lo, along_hi;  // extent of the box projected on v
  double across_lo, across_hi;
};

BoxFrame frame_of(const Box& b, const Direction& v) {
  const Point2 c{0.5 * (b.xmin + b.xmax), 0.5 * (b.ymin + b.ymax)};
  BoxFrame f{c, 0.0, 0.0, 0.0, 0.0};
  const Point2 corners[4] = {{b.xmin, b.ymin}, {b.xmax, b.ymin}, {b.xmax, b.ymax}, {b.xmin, b.ymax}};
  bool first = true;
  for (const Point2& k : corners) {
    const double a = dot(k - c, v.vec());
    const double n = dot(k - c, v.normal());
    if (first) {
      f.along_lo = f.along_hi = a;
      f.across_lo = f.across_hi = n;
      first = false;
    }
    f.along_lo = std::min(f.along_lo, a);
    f.along_hi = std::max(f.along_hi, a);
    f.across_lo = std::min(f.across_lo, n);
    f.across_hi = std::max(f.across_hi, n);
  }
  return f;
}

Json witness_json(const TransparencyWitness& w) {
  return Json{{"x_prime", point_json(w.x_prime)},
              {"y_prime", point_json(w.y_prime)},
              {"clearance", number_json(w.clearance)},
              {"depth", w.depth}};
}

}  // namespace

ThinnessScan directional_thinness_scan(const PlaneSetApprox& set, const Direction& v, unsigned n_queries,
                                       std::span<const double> eps_grid, std::uint64_t seed, unsigned budget,
                                       const SearchOptions& options) {
  ThinnessScan scan;
  const BoxFrame f = frame_of(set.bounding_box(), v);
  const double length = f.along_hi - f.along_lo;
  const double margin = 0.5 * std::max(length, 1e-9);
  const Halton offsets(mix_seed(seed, 0xA11));
  for (unsigned i = 0; i < n_queries; ++i) {
    const double u = offsets(i, 0);
    const double across = f.across_lo + u * (f.across_hi - f.across_lo);
    const Point2 base = f.centre + across * v.normal();
    for (std::size_t e = 0; e < eps_grid.size(); ++e) {
      ThinnessQuery q{base + (f.along_lo - margin) * v.vec(), base + (f.along_hi + margin) * v.vec(), eps_grid[e], v};
      auto w = find_transparent_segment(q, set, budget, mix_seed(seed, i * 131 + e), options);
      if (w) {
        ++scan.witnesses;
        scan.depth_max = std::max(scan.depth_max, w->depth);
      } else {
        ++scan.unknowns;
      }
      scan.outcomes.push_back({q, w});
    }
  }
  scan.verdict = (scan.unknowns == 0 && scan.witnesses > 0) ? Verdict::Pass : Verdict::Inconclusive;
  return scan;
}

Json ThinnessScan::to_json() const {
  Json ws = Json::array();
  for (const auto& o : outcomes) {
    Json entry{{"x", point_json(o.query.x)}, {"y", point_json(o.query.y)}, {"eps", number_json(o.query.eps)}};
    entry["witness"] = o.witness ? witness_json(*o.witness) : Json(nullptr);
    ws.push_back(std::move(entry));
  }
  return Json{{"verdict", to_string(verdict)},
              {"witnesses", witnesses},
              {"unknowns", unknowns},
              {"depth_max", depth_max},
              {"queries", std::move(ws)}};
}

DisconnectScan totally_disconnected_scan(const PlaneSetApprox& set, const Direction& v, double resolution,
                                         unsigned n_lines, unsigned max_depth) {
  if (!(resolution > 0.0)) throw std::invalid_argument("totally_disconnected_scan: resolution must be positive");
  DisconnectScan scan;
  scan.resolution = resolution;
  scan.depths = depth_schedule(set, max_depth);
  const BoxFrame f = frame_of(set.bounding_box(), v);
  for (unsigned i = 0; i < n_lines; ++i) {
    LineTraceRecord rec;
    rec.offset = f.across_lo + (f.across_hi - f.across_lo) * (static_cast<double>(i) + 0.5) / n_lines;
    const Point2 origin = f.centre + rec.offset * v.normal();
    for (const unsigned d : scan.depths) {
      double longest = 0.0;
      for (const auto& [lo, hi] : set.line_trace(origin, v.vec(), d)) longest = std::max(longest, hi - lo);
      rec.longest_runs.push_back(longest);
    }
    scan.worst_final_run = std::max(scan.worst_final_run, rec.longest_runs.back());
    scan.lines.push_back(std::move(rec));
  }
  scan.verdict = (!scan.lines.empty() && scan.worst_final_run < resolution) ? Verdict::Pass : Verdict::Inconclusive;
  return scan;
}

Json DisconnectScan::to_json() const {
  Json lines_json = Json::array();
  for (const auto& l : lines) {
    Json runs = Json::array();
    for (double r : l.longest_runs) runs.push_back(number_json(r));
    lines_json.push_back(Json{{"offset", number_json(l.offset)}, {"longest_runs", std::move(runs)}});
  }
  return Json{{"verdict", to_string(verdict)},
              {"resolution", number_json(resolution)},
              {"depths", depths},
              {"worst_final_run", number_json(worst_final_run)},
              {"lines", std::move(lines_json)}};
}

IntersectionCount line_intersection_count(const Segment2& line, const PlaneSetApprox& set, unsigned depth) {
  Point2 dir = line.b - line.a;
  const double len = norm(dir);
  if (!(len > 0.0)) throw std::invalid_argument("line_intersection_count: degenerate line");
  dir = (1.0 / len) * dir;
  if (dir.x < 0.0 || (dir.x == 0.0 && dir.y < 0.0)) dir = -1.0 * dir;
  const unsigned d = set.cover_is_exact() ? 0u : depth;
  const auto trace = set.line_trace(line.a, dir, d);

  IntersectionCount out;
  out.upper = trace.size();
  if (set.cover_is_exact()) {
    out.lower = out.upper;
    return out;
  }
  if (set.kind() != SetKind::HoleyStaircase || trace.empty() || dir.x == 0.0 || dir.y < 0.0) return out;

  // Non-decreasing line: a + to - change of y - H(x) (in increasing x)
  // between two free sample points forces a point of the set in between.
  std::vector<double> samples;
  samples.push_back(trace.front().first - 1.0);
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) samples.push_back(0.5 * (trace[i].second + trace[i + 1].first));
  samples.push_back(trace.back().second + 1.0);
  int prev = 0;
  for (double t : samples) {
    const Point2 p = line.a + t * dir;
    const double s = p.y - cantor_value_extended(p.x, 60);
    const int sign = (s > 0.0) - (s < 0.0);
    if (sign == 0) continue;
    if (prev > 0 && sign < 0) ++out.lower;
    prev = sign;
  }
  return out;
}

}  // namespace crem
