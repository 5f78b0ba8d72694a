#include "crem/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>

namespace crem {

Direction::Direction(double vx, double vy) {
  const double n = std::hypot(vx, vy);
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("Direction: zero or non-finite vector");
  v_ = {vx / n, vy / n};
}

Direction Direction::checked(double vx, double vy) {
  if (std::abs(vx * vx + vy * vy - 1.0) > 1e-12) {
    throw std::invalid_argument("Direction: vector is not unit length");
  }
  return Direction(vx, vy);
}

Box Box::united(const Box& o) const {
  return {std::min(xmin, o.xmin), std::min(ymin, o.ymin), std::max(xmax, o.xmax), std::max(ymax, o.ymax)};
}

Box Capsule::bounds() const {
  return Box{std::min(axis.a.x, axis.b.x), std::min(axis.a.y, axis.b.y), std::max(axis.a.x, axis.b.x),
             std::max(axis.a.y, axis.b.y)}
      .inflated(radius);
}

double point_segment_distance(Point2 p, const Segment2& s) {
  const Point2 d = s.b - s.a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, s.a);
  const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  return distance(p, s.at(t));
}

double point_box_distance(Point2 p, const Box& b) {
  const double dx = std::max({b.xmin - p.x, 0.0, p.x - b.xmax});
  const double dy = std::max({b.ymin - p.y, 0.0, p.y - b.ymax});
  return std::hypot(dx, dy);
}

std::optional<std::pair<double, double>> clip_line_box(Point2 origin, Point2 dir, const Box& b) {
  // Liang-Barsky over an unbounded parameter range.
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  const std::array<double, 4> p{-dir.x, dir.x, -dir.y, dir.y};
  const std::array<double, 4> q{origin.x - b.xmin, b.xmax - origin.x, origin.y - b.ymin, b.ymax - origin.y};
  for (std::size_t i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return std::nullopt;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
  }
  if (t0 > t1) return std::nullopt;
  return std::pair{t0, t1};
}

bool segment_intersects_box(const Segment2& s, const Box& b) {
  if (b.contains(s.a) || b.contains(s.b)) return true;
  const auto clip = clip_line_box(s.a, s.b - s.a, b);
  return clip && clip->first <= 1.0 && clip->second >= 0.0;
}

namespace {

int orientation(Point2 a, Point2 b, Point2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(const Segment2& s, const Segment2& t) {
  const int o1 = orientation(s.a, s.b, t.a);
  const int o2 = orientation(s.a, s.b, t.b);
  const int o3 = orientation(t.a, t.b, s.a);
  const int o4 = orientation(t.a, t.b, s.b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(s.a, s.b, t.a)) return true;
  if (o2 == 0 && on_segment(s.a, s.b, t.b)) return true;
  if (o3 == 0 && on_segment(t.a, t.b, s.a)) return true;
  if (o4 == 0 && on_segment(t.a, t.b, s.b)) return true;
  return false;
}

double segment_segment_distance(const Segment2& s, const Segment2& t) {
  if (segments_intersect(s, t)) return 0.0;
  return std::min({point_segment_distance(s.a, t), point_segment_distance(s.b, t), point_segment_distance(t.a, s),
                   point_segment_distance(t.b, s)});
}

double segment_box_distance(const Segment2& s, const Box& b) {
  if (segment_intersects_box(s, b)) return 0.0;
  // Disjoint convex polygons: the minimum is attained at a vertex of one of them.
  double best = std::min(point_box_distance(s.a, b), point_box_distance(s.b, b));
  const std::array<Point2, 4> corners{{{b.xmin, b.ymin}, {b.xmax, b.ymin}, {b.xmax, b.ymax}, {b.xmin, b.ymax}}};
  for (const Point2& c : corners) best = std::min(best, point_segment_distance(c, s));
  return best;
}

double segment_capsule_distance(const Segment2& s, const Capsule& c) {
  return std::max(0.0, segment_segment_distance(s, c.axis) - c.radius);
}

std::optional<std::pair<double, double>> clip_line_capsule(Point2 origin, Point2 dir, const Capsule& c) {
  // The capsule is convex, so its trace on a line is an interval. Collect the
  // roots of |p(t) - axis|^2 = r^2 for both end discs and the slab.
  const double r2 = c.radius * c.radius;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto disc = [&](Point2 centre) {
    const Point2 w = origin - centre;
    const double a = dot(dir, dir);
    const double b = 2.0 * dot(w, dir);
    const double cc = dot(w, w) - r2;
    const double disc_val = b * b - 4.0 * a * cc;
    if (disc_val < 0.0) return;
    const double sq = std::sqrt(disc_val);
    lo = std::min(lo, (-b - sq) / (2.0 * a));
    hi = std::max(hi, (-b + sq) / (2.0 * a));
  };
  disc(c.axis.a);
  disc(c.axis.b);
  const Point2 u = c.axis.b - c.axis.a;
  const double len = norm(u);
  if (len > 0.0) {
    const Point2 e{u.x / len, u.y / len};
    const Point2 n{-e.y, e.x};
    // Slab: 0 <= (p - a).e <= len and |(p - a).n| <= r.
    const Point2 w = origin - c.axis.a;
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    auto constrain = [&](double base, double rate, double lower, double upper) {
      if (rate == 0.0) {
        if (base < lower || base > upper) t0 = 1.0, t1 = 0.0;
        return;
      }
      double a = (lower - base) / rate;
      double b = (upper - base) / rate;
      if (a > b) std::swap(a, b);
      t0 = std::max(t0, a);
      t1 = std::min(t1, b);
    };
    constrain(dot(w, e), dot(dir, e), 0.0, len);
    constrain(dot(w, n), dot(dir, n), -c.radius, c.radius);
    if (t0 <= t1) {
      lo = std::min(lo, t0);
      hi = std::max(hi, t1);
    }
  }
  if (lo > hi) return std::nullopt;
  return std::pair{lo, hi};
}

}  // namespace crem
