#pragma once

// Compact plane sets represented by depth-indexed outer covers. Every cover
// contains the true set, so a positive distance to cover(depth) certifies
// disjointness from the set; a zero distance says nothing.
//
// Covers are hierarchical: each kind exposes a depth-first traversal in which
// every subtree is announced by a bounding box containing all of its pieces,
// so distance and trace queries run branch-and-bound without materializing
// deep covers.

#include "crem/geometry.hpp"
#include "crem/interval_sets.hpp"

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace crem {

enum class SetKind { Product, HoleyStaircase, KochCurve, RectUnion };

const char* to_string(SetKind kind);

/// One element of an outer cover: a closed rectangle or a closed capsule.
struct Piece {
  enum class Shape { Rect, Capsule };

  Shape shape = Shape::Rect;
  Box box;          // the rectangle itself, or the capsule's bounding box
  Capsule capsule;  // only meaningful for Shape::Capsule

  static Piece rect(const Box& b) { return {Shape::Rect, b, {}}; }
  static Piece capsule_of(const Capsule& c) { return {Shape::Capsule, c.bounds(), c}; }

  double distance_to(const Segment2& s) const;
  double distance_to(Point2 p) const;
  std::optional<std::pair<double, double>> clip_line(Point2 origin, Point2 dir) const;
};

using BoxPredicate = std::function<bool(const Box&)>;
using PieceVisitor = std::function<void(const Piece&)>;

class PlaneSetApprox {
 public:
  virtual ~PlaneSetApprox() = default;

  virtual SetKind kind() const = 0;
  virtual std::string name() const = 0;
  virtual unsigned max_depth() const = 0;
  /// Upper bound on the Hausdorff distance between cover(depth) and the set.
  virtual double haus_bound(unsigned depth) const = 0;
  virtual Box bounding_box() const = 0;
  /// True when cover(depth) is the set itself (finite rectangle unions).
  virtual bool cover_is_exact() const { return false; }

  /// Depth-first walk over cover(depth). `descend` is consulted with a box
  /// containing every piece of the subtree below it; returning false prunes.
  virtual void traverse(unsigned depth, const BoxPredicate& descend, const PieceVisitor& leaf) const = 0;

  /// Materialized cover(depth); memoized, first writer wins.
  std::shared_ptr<const std::vector<Piece>> cover(unsigned depth) const;

  /// Exact (floating point) minimum distance from seg to cover(depth).
  double segment_clearance(const Segment2& seg, unsigned depth) const;
  double point_clearance(Point2 p, unsigned depth) const;
  /// point_clearance(p, depth) > margin, visiting only subtrees within the
  /// margin; much cheaper than the distance itself at deep levels.
  bool point_is_clear(Point2 p, unsigned depth, double margin) const;
  /// Number of cover pieces the closed segment touches.
  std::size_t segment_hits(const Segment2& seg, unsigned depth) const;
  /// Connected components of {t : origin + t*dir in cover(depth)}, sorted.
  std::vector<std::pair<double, double>> line_trace(Point2 origin, Point2 dir, unsigned depth) const;

 protected:
  void check_depth(unsigned depth) const;

 private:
  mutable std::mutex cache_mutex_;
  mutable std::map<unsigned, std::shared_ptr<const std::vector<Piece>>> cache_;
};

using PlaneSetPtr = std::shared_ptr<const PlaneSetApprox>;

/// A x B as the exact rectangle grid (haus_bound = 0 at every depth).
/// Throws std::invalid_argument when a factor is empty.
PlaneSetPtr product_approx(const IntervalSet& a, const IntervalSet& b);

/// Arbitrary finite union of rectangles; haus_bound = 0.
PlaneSetPtr rect_union(std::vector<Box> boxes, std::string name = "rect-union");

/// Graph of the Cantor function restricted to the Cantor set. cover(g) is
/// the 2^g rectangles I x h(I) over generation-g Cantor intervals.
/// Supported depths: 0..max_depth (at most 30).
PlaneSetPtr holey_staircase(unsigned max_depth = 30);

/// Koch curve from (0,0) to (3,0), apex side up. cover(g) thickens each
/// generation-g polyline segment by 3^(1-g). Supported depths 0..max_depth (<= 16).
PlaneSetPtr koch_curve(unsigned max_depth = 12);

/// Generation-`depth` Koch polyline: 4^depth + 1 vertices. depth <= 12.
std::vector<Point2> koch_polyline(unsigned depth);

/// Free-function spellings of the member queries.
inline double segment_clearance(const Segment2& seg, const PlaneSetApprox& set, unsigned depth) {
  return set.segment_clearance(seg, depth);
}

struct GraphCrossing {
  Point2 point;         // on the segment
  double t = 0.0;       // segment parameter of the crossing
  double residual = 0;  // y(t) - H(x(t)) at the returned point
  PointClass x_class;   // x against the generation-`depth` Cantor set
};

/// Rightmost crossing of the segment with the graph of the extended Cantor
/// function H (0 left of 0, 1 right of 1), found by a right-to-left scan
/// over the segment parameter followed by bisection. "Rightmost" is in x;
/// the segment is reoriented if needed. Throws NoSignChange when both
/// endpoints lie on the same side of graph(H).
GraphCrossing last_graph_crossing(const Segment2& seg, unsigned depth);

void write_cover_csv(std::ostream& out, const std::vector<Piece>& pieces);
void write_polyline_csv(std::ostream& out, const std::vector<Point2>& vertices);

}  // namespace crem
