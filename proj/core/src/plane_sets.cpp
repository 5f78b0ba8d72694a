#include "crem/plane_sets.hpp"

#include "crem/errors.hpp"
#include "crem/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace crem {

const char* to_string(SetKind kind) {
  switch (kind) {
    case SetKind::Product: return "product";
    case SetKind::HoleyStaircase: return "holey-staircase";
    case SetKind::KochCurve: return "koch-curve";
    case SetKind::RectUnion: return "rect-union";
  }
  return "unknown";
}

double Piece::distance_to(const Segment2& s) const {
  return shape == Shape::Rect ? segment_box_distance(s, box) : segment_capsule_distance(s, capsule);
}

double Piece::distance_to(Point2 p) const {
  return shape == Shape::Rect ? point_box_distance(p, box)
                              : std::max(0.0, point_segment_distance(p, capsule.axis) - capsule.radius);
}

std::optional<std::pair<double, double>> Piece::clip_line(Point2 origin, Point2 dir) const {
  return shape == Shape::Rect ? clip_line_box(origin, dir, box) : clip_line_capsule(origin, dir, capsule);
}

void PlaneSetApprox::check_depth(unsigned depth) const {
  if (!cover_is_exact() && depth > max_depth()) {
    throw std::out_of_range(name() + ": depth " + std::to_string(depth) + " exceeds max depth " +
                            std::to_string(max_depth()));
  }
}

std::shared_ptr<const std::vector<Piece>> PlaneSetApprox::cover(unsigned depth) const {
  check_depth(depth);
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(depth); it != cache_.end()) return it->second;
  }
  auto pieces = std::make_shared<std::vector<Piece>>();
  traverse(depth, [](const Box&) { return true; }, [&](const Piece& p) { pieces->push_back(p); });
  std::lock_guard lock(cache_mutex_);
  auto [it, inserted] = cache_.emplace(depth, std::move(pieces));
  return it->second;
}

double PlaneSetApprox::segment_clearance(const Segment2& seg, unsigned depth) const {
  check_depth(depth);
  double best = std::numeric_limits<double>::infinity();
  traverse(
      depth, [&](const Box& b) { return best > 0.0 && segment_box_distance(seg, b) < best; },
      [&](const Piece& p) { best = std::min(best, p.distance_to(seg)); });
  return best;
}

double PlaneSetApprox::point_clearance(Point2 q, unsigned depth) const {
  check_depth(depth);
  double best = std::numeric_limits<double>::infinity();
  traverse(
      depth, [&](const Box& b) { return best > 0.0 && point_box_distance(q, b) < best; },
      [&](const Piece& p) { best = std::min(best, p.distance_to(q)); });
  return best;
}

bool PlaneSetApprox::point_is_clear(Point2 q, unsigned depth, double margin) const {
  check_depth(depth);
  bool touched = false;
  traverse(
      depth, [&](const Box& b) { return !touched && point_box_distance(q, b) <= margin; },
      [&](const Piece& p) { touched = touched || p.distance_to(q) <= margin; });
  return !touched;
}

std::size_t PlaneSetApprox::segment_hits(const Segment2& seg, unsigned depth) const {
  check_depth(depth);
  std::size_t hits = 0;
  traverse(
      depth, [&](const Box& b) { return segment_intersects_box(seg, b); },
      [&](const Piece& p) { hits += p.distance_to(seg) == 0.0 ? 1 : 0; });
  return hits;
}

std::vector<std::pair<double, double>> PlaneSetApprox::line_trace(Point2 origin, Point2 dir, unsigned depth) const {
  check_depth(depth);
  std::vector<std::pair<double, double>> raw;
  traverse(
      depth, [&](const Box& b) { return clip_line_box(origin, dir, b).has_value(); },
      [&](const Piece& p) {
        if (auto c = p.clip_line(origin, dir)) raw.push_back(*c);
      });
  std::sort(raw.begin(), raw.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& iv : raw) {
    if (!merged.empty() && iv.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, iv.second);
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

namespace {

Box outward_box(const Interval& x, const Interval& y) {
  return {to_double_down(x.lo), to_double_down(y.lo), to_double_up(x.hi), to_double_up(y.hi)};
}

/// Flat rectangle list behind a static bounding-volume hierarchy.
class RectUnionSet final : public PlaneSetApprox {
 public:
  RectUnionSet(std::vector<Box> boxes, SetKind kind, std::string name)
      : boxes_(std::move(boxes)), kind_(kind), name_(std::move(name)) {
    if (boxes_.empty()) throw std::invalid_argument(name_ + ": empty rectangle union");
    std::vector<std::size_t> order(boxes_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    build(order, 0, order.size());
    std::vector<Box> reordered;
    reordered.reserve(order.size());
    for (auto i : order) reordered.push_back(boxes_[i]);
    boxes_ = std::move(reordered);
  }

  SetKind kind() const override { return kind_; }
  std::string name() const override { return name_; }
  unsigned max_depth() const override { return 0; }
  double haus_bound(unsigned) const override { return 0.0; }
  Box bounding_box() const override { return nodes_.front().box; }
  bool cover_is_exact() const override { return true; }

  void traverse(unsigned, const BoxPredicate& descend, const PieceVisitor& leaf) const override {
    visit(0, descend, leaf);
  }

 private:
  struct Node {
    Box box;
    std::size_t begin = 0, end = 0;  // leaf range into boxes_
    std::size_t left = 0, right = 0;  // children, 0 when leaf
  };
  static constexpr std::size_t kLeafSize = 4;

  std::size_t build(std::vector<std::size_t>& order, std::size_t begin, std::size_t end) {
    Box bounds = boxes_[order[begin]];
    for (std::size_t i = begin + 1; i < end; ++i) bounds = bounds.united(boxes_[order[i]]);
    const std::size_t index = nodes_.size();
    nodes_.push_back({bounds, begin, end, 0, 0});
    if (end - begin <= kLeafSize) return index;
    const bool split_x = bounds.width() >= bounds.height();
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order.begin() + static_cast<std::ptrdiff_t>(begin), order.begin() + static_cast<std::ptrdiff_t>(mid),
                     order.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                       const Box& ba = boxes_[a];
                       const Box& bb = boxes_[b];
                       return split_x ? ba.xmin + ba.xmax < bb.xmin + bb.xmax : ba.ymin + ba.ymax < bb.ymin + bb.ymax;
                     });
    const std::size_t left = build(order, begin, mid);
    const std::size_t right = build(order, mid, end);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
  }

  void visit(std::size_t index, const BoxPredicate& descend, const PieceVisitor& leaf) const {
    const Node& node = nodes_[index];
    if (!descend(node.box)) return;
    if (node.left == 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) leaf(Piece::rect(boxes_[i]));
      return;
    }
    visit(node.left, descend, leaf);
    visit(node.right, descend, leaf);
  }

  std::vector<Box> boxes_;
  std::vector<Node> nodes_;
  SetKind kind_;
  std::string name_;
};

class HoleyStaircaseSet final : public PlaneSetApprox {
 public:
  explicit HoleyStaircaseSet(unsigned max_depth) : max_depth_(max_depth) {
    if (max_depth > 30) throw std::invalid_argument("holey_staircase: max depth is 30");
    std::uint64_t p = 1;
    for (unsigned j = 0; j <= max_depth; ++j, p *= 3) pow3_[j] = p;
  }

  SetKind kind() const override { return SetKind::HoleyStaircase; }
  std::string name() const override { return "holey-staircase"; }
  unsigned max_depth() const override { return max_depth_; }
  double haus_bound(unsigned depth) const override {
    return std::sqrt(std::pow(3.0, -2.0 * depth) + std::pow(2.0, -2.0 * depth));
  }
  Box bounding_box() const override { return {0.0, 0.0, 1.0, 1.0}; }

  void traverse(unsigned depth, const BoxPredicate& descend, const PieceVisitor& leaf) const override {
    check_depth(depth);
    visit(0, 0, 0, depth, descend, leaf);
  }

 private:
  // Node at `level`: x in [n, n+1] / 3^level, y in [k, k+1] / 2^level.
  Box node_box(unsigned level, std::uint64_t n, std::uint64_t k) const {
    const long double den = static_cast<long double>(pow3_[level]);
    auto down = [&](std::uint64_t num) {
      if (num == 0) return 0.0;
      const double d = static_cast<double>(static_cast<long double>(num) / den);
      return std::nextafter(d, -std::numeric_limits<double>::infinity());
    };
    auto up = [&](std::uint64_t num) {
      if (num == pow3_[level]) return 1.0;
      const double d = static_cast<double>(static_cast<long double>(num) / den);
      return std::nextafter(d, std::numeric_limits<double>::infinity());
    };
    const double ys = std::ldexp(1.0, -static_cast<int>(level));
    return {down(n), static_cast<double>(k) * ys, up(n + 1), static_cast<double>(k + 1) * ys};
  }

  void visit(unsigned level, std::uint64_t n, std::uint64_t k, unsigned depth, const BoxPredicate& descend,
             const PieceVisitor& leaf) const {
    const Box box = node_box(level, n, k);
    if (!descend(box)) return;
    if (level == depth) {
      leaf(Piece::rect(box));
      return;
    }
    visit(level + 1, 3 * n, 2 * k, depth, descend, leaf);
    visit(level + 1, 3 * n + 2, 2 * k + 1, depth, descend, leaf);
  }

  unsigned max_depth_;
  std::uint64_t pow3_[31]{};
};

Point2 rotate60(Point2 d) {
  const double c = 0.5;
  const double s = std::numbers::sqrt3 / 2.0;
  return {c * d.x - s * d.y, s * d.x + c * d.y};
}

void subdivide(Point2 a, Point2 b, Point2 out[5]) {
  const Point2 d{(b.x - a.x) / 3.0, (b.y - a.y) / 3.0};
  out[0] = a;
  out[1] = a + d;
  out[2] = out[1] + rotate60(d);
  out[3] = a + 2.0 * d;
  out[4] = b;
}

class KochCurveSet final : public PlaneSetApprox {
 public:
  explicit KochCurveSet(unsigned max_depth) : max_depth_(max_depth) {
    if (max_depth > 16) throw std::invalid_argument("koch_curve: max depth is 16");
  }

  SetKind kind() const override { return SetKind::KochCurve; }
  std::string name() const override { return "koch-curve"; }
  unsigned max_depth() const override { return max_depth_; }
  double haus_bound(unsigned depth) const override { return std::pow(3.0, 1.0 - static_cast<double>(depth)); }
  Box bounding_box() const override { return {0.0, 0.0, 3.0, std::numbers::sqrt3 / 2.0}; }

  void traverse(unsigned depth, const BoxPredicate& descend, const PieceVisitor& leaf) const override {
    check_depth(depth);
    visit(0, {0.0, 0.0}, {3.0, 0.0}, depth, descend, leaf);
  }

 private:
  void visit(unsigned level, Point2 a, Point2 b, unsigned depth, const BoxPredicate& descend,
             const PieceVisitor& leaf) const {
    const Capsule cap{{a, b}, haus_bound(level)};
    if (!descend(cap.bounds())) return;
    if (level == depth) {
      leaf(Piece::capsule_of(cap));
      return;
    }
    Point2 v[5];
    subdivide(a, b, v);
    for (int i = 0; i < 4; ++i) visit(level + 1, v[i], v[i + 1], depth, descend, leaf);
  }

  unsigned max_depth_;
};

}  // namespace

PlaneSetPtr product_approx(const IntervalSet& a, const IntervalSet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("product_approx: empty factor");
  std::vector<Box> boxes;
  boxes.reserve(a.size() * b.size());
  for (const auto& ia : a.intervals()) {
    for (const auto& ib : b.intervals()) boxes.push_back(outward_box(ia, ib));
  }
  return std::make_shared<RectUnionSet>(std::move(boxes), SetKind::Product, "product");
}

PlaneSetPtr rect_union(std::vector<Box> boxes, std::string name) {
  return std::make_shared<RectUnionSet>(std::move(boxes), SetKind::RectUnion, std::move(name));
}

PlaneSetPtr holey_staircase(unsigned max_depth) { return std::make_shared<HoleyStaircaseSet>(max_depth); }

PlaneSetPtr koch_curve(unsigned max_depth) { return std::make_shared<KochCurveSet>(max_depth); }

std::vector<Point2> koch_polyline(unsigned depth) {
  if (depth > 12) throw std::invalid_argument("koch_polyline: depth must be <= 12");
  std::vector<Point2> pts{{0.0, 0.0}, {3.0, 0.0}};
  for (unsigned g = 0; g < depth; ++g) {
    std::vector<Point2> next;
    next.reserve(4 * (pts.size() - 1) + 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      Point2 v[5];
      subdivide(pts[i], pts[i + 1], v);
      next.insert(next.end(), v, v + 4);
    }
    next.push_back(pts.back());
    pts = std::move(next);
  }
  return pts;
}

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

GraphCrossing last_graph_crossing(const Segment2& input, unsigned depth) {
  Segment2 seg = input;
  if (seg.b.x < seg.a.x) std::swap(seg.a, seg.b);
  constexpr unsigned kDigits = 60;
  auto side = [&](double t) {
    const Point2 p = seg.at(t);
    return p.y - cantor_value_extended(p.x, kDigits);
  };
  const int s0 = sign_of(side(0.0));
  const int s1 = sign_of(side(1.0));
  if (s0 == 0 || s1 == 0 || s0 == s1) {
    throw NoSignChange("last_graph_crossing: endpoints are not strictly on opposite sides of graph(H)");
  }

  // Right-to-left scan for the last bracket with a sign change.
  constexpr int kGrid = 1024;
  double hi_t = 1.0;
  int hi_sign = s1;
  double lo_t = 0.0;
  int lo_sign = s0;
  for (int j = kGrid - 1; j >= 0; --j) {
    const double t = static_cast<double>(j) / kGrid;
    const int s = j == 0 ? s0 : sign_of(side(t));
    if (s != hi_sign) {
      lo_t = t;
      lo_sign = s;
      break;
    }
    hi_t = t;
  }

  double best_t = lo_t;
  if (lo_sign != 0) {
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo_t + hi_t);
      if (mid <= lo_t || mid >= hi_t) break;
      const int s = sign_of(side(mid));
      if (s == 0) {
        lo_t = hi_t = mid;
        break;
      }
      (s == lo_sign ? lo_t : hi_t) = mid;
    }
    best_t = std::abs(side(lo_t)) <= std::abs(side(hi_t)) ? lo_t : hi_t;
  }

  GraphCrossing out;
  out.t = best_t;
  out.point = seg.at(best_t);
  out.residual = side(best_t);
  out.x_class = cantor_classify(exact(out.point.x), depth);
  return out;
}

void write_cover_csv(std::ostream& out, const std::vector<Piece>& pieces) {
  out << "xmin,ymin,xmax,ymax\n";
  for (const auto& p : pieces) {
    out << format_double(p.box.xmin) << ',' << format_double(p.box.ymin) << ',' << format_double(p.box.xmax) << ','
        << format_double(p.box.ymax) << '\n';
  }
}

void write_polyline_csv(std::ostream& out, const std::vector<Point2>& vertices) {
  out << "x,y\n";
  for (const auto& v : vertices) out << format_double(v.x) << ',' << format_double(v.y) << '\n';
}

}  // namespace crem
