#include "crem/extension.hpp"

#include "crem/format.hpp"
#include "crem/sampling.hpp"
#include "crem/thinness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <ostream>
#include <stdexcept>

namespace crem {

const char* to_string(ExtendFailure f) {
  switch (f) {
    case ExtendFailure::NoNearbyFreePoints: return "NoNearbyFreePoints";
    case ExtendFailure::OscillationStalled: return "OscillationStalled";
  }
  return "NoNearbyFreePoints";
}

namespace {

unsigned depth_for_radius(const PlaneSetApprox& set, double r) {
  if (set.cover_is_exact()) return 0;
  for (unsigned d = 0; d < set.max_depth(); ++d) {
    if (set.haus_bound(d) < 0.25 * r) return d;
  }
  return set.max_depth();
}

bool is_free(const PlaneSetApprox& set, Point2 p, unsigned depth) {
  return set.point_is_clear(p, depth, kCertifiedClearance);
}

struct Ball {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  // Midrange of pair averages f(x+sv), f(x-sv) over free symmetric pairs.
  double pair_lo = std::numeric_limits<double>::infinity();
  double pair_hi = -std::numeric_limits<double>::infinity();
  std::size_t free = 0;
  std::size_t pairs = 0;
  std::size_t evaluations = 0;

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++free;
  }
  double oscillation() const { return hi - lo; }
};

Ball sample_ball(const PartialFn& pf, Point2 x, double r, unsigned depth, std::uint64_t seed, unsigned n) {
  const PlaneSetApprox& set = *pf.obstacle;
  const Halton h(seed);
  Ball b;
  const Point2 axis = pf.v ? pf.v->vec() : Point2{1.0, 0.0};
  const unsigned n_pairs = n / 2;
  for (unsigned i = 0; i < n; ++i) {
    if (i < n_pairs) {
      // Symmetric pair along the privileged direction, rotated slightly by
      // index so that an axis-aligned obstacle cannot block every pair.
      const double s = r * (0.05 + 0.95 * h(i, 0));
      const double tilt = (h(i, 1) - 0.5) * 0.2;
      const Point2 d{axis.x * std::cos(tilt) - axis.y * std::sin(tilt), axis.x * std::sin(tilt) + axis.y * std::cos(tilt)};
      const Point2 p = x + s * d;
      const Point2 q = x - s * d;
      const bool fp = is_free(set, p, depth);
      const bool fq = is_free(set, q, depth);
      double vp = 0.0, vq = 0.0;
      if (fp) {
        vp = pf.f(p);
        ++b.evaluations;
        b.add(vp);
      }
      if (fq) {
        vq = pf.f(q);
        ++b.evaluations;
        b.add(vq);
      }
      if (fp && fq) {
        const double avg = 0.5 * (vp + vq);
        b.pair_lo = std::min(b.pair_lo, avg);
        b.pair_hi = std::max(b.pair_hi, avg);
        ++b.pairs;
      }
    } else {
      const double rad = r * std::sqrt(h(i, 2));
      const double ang = 2.0 * std::numbers::pi * h(i, 3);
      const Point2 p = x + Point2{rad * std::cos(ang), rad * std::sin(ang)};
      if (is_free(set, p, depth)) {
        b.add(pf.f(p));
        ++b.evaluations;
      }
    }
  }
  return b;
}

}  // namespace

ExtendResult extend_at(const PartialFn& pf, Point2 x, double tol, std::uint64_t seed, const ExtendOptions& options) {
  if (!(tol > 0.0)) throw std::invalid_argument("extend_at: tol must be positive");
  if (!(options.r0 > 0.0)) throw std::invalid_argument("extend_at: r0 must be positive");
  if (options.samples < 2) throw std::invalid_argument("extend_at: at least two samples per ball");
  if (!pf.obstacle) return ExtendValue{pf.f(x), 0.0, 0.0, 0, 1, true};

  const PlaneSetApprox& set = *pf.obstacle;
  const unsigned deepest = set.cover_is_exact() ? 0 : set.max_depth();
  if (is_free(set, x, deepest)) return ExtendValue{pf.f(x), 0.0, 0.0, deepest, 1, true};

  std::size_t evaluations = 0;
  double r = options.r0;
  double last_osc = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (unsigned n = 0; n <= options.max_halvings; ++n, r *= 0.5) {
    const unsigned depth = depth_for_radius(set, r);
    const Ball b = sample_ball(pf, x, r, depth, mix_seed(seed, n), options.samples);
    evaluations += b.evaluations;
    if (b.free == 0) return ExtendFail{ExtendFailure::NoNearbyFreePoints, r, last_osc};
    last_osc = b.oscillation();
    if (!converged) {
      converged = last_osc < tol;
      continue;
    }
    // One ball past convergence: prefer symmetric pairs (exact for affine f).
    ExtendValue v;
    v.value = b.pairs > 0 ? 0.5 * (b.pair_lo + b.pair_hi) : 0.5 * (b.lo + b.hi);
    v.radius = r;
    v.oscillation = last_osc;
    v.depth = depth;
    v.evaluations = evaluations;
    return v;
  }
  return ExtendFail{ExtendFailure::OscillationStalled, r, last_osc};
}

Fn2 extended_function(const PartialFn& pf, double tol, std::uint64_t seed, const ExtendOptions& options) {
  return [pf, tol, seed, options](Point2 p) {
    const ExtendResult r = extend_at(pf, p, tol, seed, options);
    if (const auto* v = std::get_if<ExtendValue>(&r)) return v->value;
    return std::numeric_limits<double>::quiet_NaN();
  };
}

Report extension_report(const PartialFn& pf, std::span<const Point2> points, double tol, std::uint64_t seed,
                        const ExtensionReportOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  rep.command = "extend";
  rep.seed = seed;
  rep.inputs = Json{{"obstacle", pf.obstacle ? pf.obstacle->name() : std::string("none")},
                    {"points", points.size()},
                    {"tol", number_json(tol)}};
  Json seeds = Json::array();
  for (auto s : options.seeds) seeds.push_back(s);
  rep.settings = Json{{"seeds", seeds},
                      {"r0", number_json(options.extend.r0)},
                      {"samples_per_ball", options.extend.samples},
                      {"midpoint_segments", options.midpoint_segments},
                      {"midpoint_tol", number_json(options.midpoint_tol)}};

  std::size_t failures = 0;
  std::size_t inconsistent = 0;
  std::size_t direct = 0;
  double worst_spread = 0.0;
  Json per_point = Json::array();
  for (const Point2 x : points) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    Json runs = Json::array();
    bool failed = false;
    for (const auto s : options.seeds) {
      const ExtendResult r = extend_at(pf, x, tol, mix_seed(seed, s), options.extend);
      if (const auto* v = std::get_if<ExtendValue>(&r)) {
        lo = std::min(lo, v->value);
        hi = std::max(hi, v->value);
        direct += v->direct ? 1 : 0;
        runs.push_back(Json{{"seed", s}, {"value", number_json(v->value)}, {"radius", number_json(v->radius)}});
      } else {
        const auto& f = std::get<ExtendFail>(r);
        failed = true;
        runs.push_back(Json{{"seed", s}, {"failure", to_string(f.reason)}, {"radius", number_json(f.radius)}});
      }
    }
    if (failed) ++failures;
    const double spread = std::isfinite(lo) ? hi - lo : 0.0;
    worst_spread = std::max(worst_spread, spread);
    const bool consistent = !failed && spread <= 3.0 * tol;
    if (!failed && !consistent) ++inconsistent;
    per_point.push_back(Json{{"x", point_json(x)}, {"spread", number_json(spread)}, {"runs", std::move(runs)}});
  }

  // Midpoint scan of the extension on segments through the sample points.
  std::vector<Segment2> segs;
  const Halton h(mix_seed(seed, 0xE57));
  for (std::size_t i = 0; i < options.midpoint_segments && !points.empty(); ++i) {
    const Point2 c = points[i % points.size()];
    const double a = std::numbers::pi * h(i, 0);
    const Point2 d{options.segment_half_length * std::cos(a), options.segment_half_length * std::sin(a)};
    segs.push_back({c - d, c + d});
  }
  const std::uint64_t ext_seed = options.seeds.empty() ? seed : mix_seed(seed, options.seeds.front());
  const Fn2 ext = extended_function(pf, tol, ext_seed, options.extend);
  const MidpointScan scan = midpoint_violation_scan(ext, segs, options.midpoint_pairs, seed, options.midpoint_tol);

  const bool unique_consistent = failures == 0 && inconsistent == 0 && !points.empty() && !options.seeds.empty();
  rep.metrics = Json{{"consistency", unique_consistent ? "UNIQUE-CONSISTENT" : "NOT-CONSISTENT"},
                     {"failures", failures},
                     {"inconsistent", inconsistent},
                     {"direct_evaluations", direct},
                     {"worst_spread", number_json(worst_spread)},
                     {"midpoint_scan", scan.to_json()},
                     {"points", std::move(per_point)}};
  rep.notes.push_back("local convexity of the partial function is assumed/unverified");
  if (scan.verdict == Verdict::Violation) {
    rep.witnesses.push_back(scan.to_json().at("worst"));
    rep.notes.push_back(
        "midpoint violation of the extension: the locally-convex precondition does not hold for this input; "
        "this is not a failure of the extension property");
  }
  rep.verdict = unique_consistent && scan.verdict == Verdict::Pass ? Verdict::Pass : Verdict::Inconclusive;
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<Point2> sample_set_points(const PlaneSetApprox& set, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point2> out;
  out.reserve(n);
  if (set.kind() == SetKind::HoleyStaircase) {
    // x = sum d_k 3^-k with d_k in {0, 2}; h(x) = sum (d_k / 2) 2^-k.
    for (std::size_t i = 0; i < n; ++i) {
      double x = 0.0, y = 0.0, w3 = 1.0, w2 = 1.0;
      for (int k = 0; k < 34; ++k) {
        w3 /= 3.0;
        w2 /= 2.0;
        if (rng() & 1u) {
          x += 2.0 * w3;
          y += w2;
        }
      }
      out.push_back({x, y});
    }
    return out;
  }
  const unsigned depth = set.cover_is_exact() ? 0 : std::min(set.max_depth(), 8u);
  const auto pieces = set.cover(depth);
  if (pieces->empty()) return out;
  std::uniform_int_distribution<std::size_t> pick(0, pieces->size() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Piece& p = (*pieces)[pick(rng)];
    out.push_back(p.shape == Piece::Shape::Capsule ? midpoint(p.capsule.axis.a, p.capsule.axis.b)
                                                   : Point2{0.5 * (p.box.xmin + p.box.xmax), 0.5 * (p.box.ymin + p.box.ymax)});
  }
  return out;
}

void write_extension_grid_csv(std::ostream& out, const PartialFn& pf, const Box& box, unsigned nx, unsigned ny,
                              double tol, std::uint64_t seed) {
  const Fn2 ext = extended_function(pf, tol, seed);
  out << "x,y,value\n";
  for (unsigned j = 0; j < ny; ++j) {
    for (unsigned i = 0; i < nx; ++i) {
      const double x = box.xmin + box.width() * (nx > 1 ? static_cast<double>(i) / (nx - 1) : 0.5);
      const double y = box.ymin + box.height() * (ny > 1 ? static_cast<double>(j) / (ny - 1) : 0.5);
      out << format_double(x) << ',' << format_double(y) << ',' << format_double(ext({x, y})) << '\n';
    }
  }
}

}  // namespace crem
