#pragma once

// Numerical continuous extension across a thin obstacle: the midrange of a
// partial function over free points in shrinking balls, once its
// oscillation there drops below tol.

#include "crem/convexity_checks.hpp"
#include "crem/plane_sets.hpp"
#include "crem/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace crem {

/// f is only ever evaluated at points with certified clearance from the
/// obstacle cover. A null obstacle means f is defined everywhere.
struct PartialFn {
  Fn2 f;
  PlaneSetPtr obstacle;
  std::optional<Direction> v;  // privileged direction; biases sampling only
};

struct ExtendOptions {
  double r0 = 0.25;           // first ball radius; r_n = r0 * 2^-n
  unsigned samples = 64;      // per ball, half of them symmetric pairs along v
  unsigned max_halvings = 48;
};

struct ExtendValue {
  double value = 0.0;
  double radius = 0.0;       // last ball radius
  double oscillation = 0.0;  // max - min of f over free samples in it
  unsigned depth = 0;        // cover depth used for the last ball
  std::size_t evaluations = 0;
  bool direct = false;       // x itself was free
};

enum class ExtendFailure { NoNearbyFreePoints, OscillationStalled };

const char* to_string(ExtendFailure f);

struct ExtendFail {
  ExtendFailure reason;
  double radius = 0.0;
  double oscillation = 0.0;
};

using ExtendResult = std::variant<ExtendValue, ExtendFail>;

/// Requires tol > 0. Deterministic in (x, seed).
ExtendResult extend_at(const PartialFn& pf, Point2 x, double tol, std::uint64_t seed,
                       const ExtendOptions& options = {});

/// x -> extend_at(x).value; NaN where extension fails.
Fn2 extended_function(const PartialFn& pf, double tol, std::uint64_t seed, const ExtendOptions& options = {});

struct ExtensionReportOptions {
  std::span<const std::uint64_t> seeds;  // at least two for a consistency claim
  std::size_t midpoint_segments = 200;
  std::size_t midpoint_pairs = 8;        // per segment
  double segment_half_length = 0.25;
  double midpoint_tol = 1e-9;
  ExtendOptions extend;
};

/// Verdict PASS iff every point extends under every seed, all runs agree
/// within 3*tol, and no midpoint violation is found on segments through the
/// sample points. A violation is reported as INCONCLUSIVE: local convexity
/// of pf is assumed, never verified.
Report extension_report(const PartialFn& pf, std::span<const Point2> points, double tol, std::uint64_t seed,
                        const ExtensionReportOptions& options);

/// Points of the set itself where possible: exact Cantor-graph points for
/// the Holey Staircase, otherwise centres of random cover pieces.
std::vector<Point2> sample_set_points(const PlaneSetApprox& set, std::size_t n, std::uint64_t seed);

/// Columns x,y,value over an nx-by-ny grid of the box.
void write_extension_grid_csv(std::ostream& out, const PartialFn& pf, const Box& box, unsigned nx, unsigned ny,
                              double tol, std::uint64_t seed);

}  // namespace crem
