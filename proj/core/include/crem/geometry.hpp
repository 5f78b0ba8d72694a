#pragma once

#include <cmath>
#include <optional>
#include <utility>

namespace crem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 midpoint(Point2 a, Point2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

struct Segment2 {
  Point2 a;
  Point2 b;

  Point2 at(double t) const { return a + t * (b - a); }
  double length() const { return distance(a, b); }
};

/// Unit vector. Construction normalizes; `Direction::checked` rejects
/// inputs whose norm is off by more than 1e-12.
class Direction {
 public:
  Direction(double vx, double vy);
  static Direction checked(double vx, double vy);

  double x() const { return v_.x; }
  double y() const { return v_.y; }
  Point2 vec() const { return v_; }
  /// Counter-clockwise normal.
  Point2 normal() const { return {-v_.y, v_.x}; }

 private:
  Point2 v_;
};

/// Closed axis-aligned rectangle.
struct Box {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  bool contains(Point2 p) const { return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax; }
  bool contains(const Box& o) const {
    return o.xmin >= xmin && o.xmax <= xmax && o.ymin >= ymin && o.ymax <= ymax;
  }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  Box united(const Box& o) const;
  Box inflated(double r) const { return {xmin - r, ymin - r, xmax + r, ymax + r}; }
  friend bool operator==(const Box&, const Box&) = default;
};

/// Closed r-neighbourhood of a segment.
struct Capsule {
  Segment2 axis;
  double radius = 0.0;

  Box bounds() const;
};

double point_segment_distance(Point2 p, const Segment2& s);
double point_box_distance(Point2 p, const Box& b);

/// True when the closed segment meets the closed box.
bool segment_intersects_box(const Segment2& s, const Box& b);
bool segments_intersect(const Segment2& s, const Segment2& t);

double segment_segment_distance(const Segment2& s, const Segment2& t);
double segment_box_distance(const Segment2& s, const Box& b);
double segment_capsule_distance(const Segment2& s, const Capsule& c);

/// Parameter interval [t0, t1] of the line p(t) = origin + t*dir inside the
/// closed box, or nullopt when the line misses it.
std::optional<std::pair<double, double>> clip_line_box(Point2 origin, Point2 dir, const Box& b);
std::optional<std::pair<double, double>> clip_line_capsule(Point2 origin, Point2 dir, const Capsule& c);

}  // namespace crem
