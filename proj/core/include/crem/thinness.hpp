#pragma once

// Searches for transparent segments. A returned witness is a proof: its
// segment has positive distance to an outer cover of the set. Failure to
// find one (Unknown) proves nothing about non-thinness.

#include "crem/plane_sets.hpp"
#include "crem/report.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace crem {

/// Clearance below this is treated as touching; covers are rounded outward
/// but distances are still computed in floating point.
inline constexpr double kCertifiedClearance = 1e-12;

struct ThinnessQuery {
  Point2 x;
  Point2 y;
  double eps = 0.0;
  std::optional<Direction> direction;  // constrains the unperturbed x - y only

  /// Throws std::invalid_argument when eps <= 0 or x - y is not parallel to
  /// the direction within 1e-9.
  void validate() const;
};

struct TransparencyWitness {
  Point2 x_prime;
  Point2 y_prime;
  double clearance = 0.0;
  unsigned depth = 0;
};

struct SearchOptions {
  /// Deepest cover level tried; clamped to the set's max depth.
  unsigned max_depth = 10;
  /// Hill-climbing steps per refined candidate.
  unsigned refine_steps = 64;
  /// Candidates (fewest cover hits) handed to local refinement per depth.
  unsigned refine_candidates = 4;
};

/// Scrambled Halton samples of endpoint perturbations, then hill-climbing on
/// the number of cover pieces hit, at depths 1, 2, ... (or the single depth
/// of an exact cover). Deterministic in (query, set, budget, seed).
std::optional<TransparencyWitness> find_transparent_segment(const ThinnessQuery& q, const PlaneSetApprox& set,
                                                            unsigned budget, std::uint64_t seed,
                                                            const SearchOptions& options = {});

struct QueryOutcome {
  ThinnessQuery query;
  std::optional<TransparencyWitness> witness;
};

struct ThinnessScan {
  Verdict verdict = Verdict::Inconclusive;  // Pass iff every query has a witness
  std::size_t witnesses = 0;
  std::size_t unknowns = 0;
  unsigned depth_max = 0;
  std::vector<QueryOutcome> outcomes;

  Json to_json() const;
};

/// Queries parallel to v across the set's bounding box, for every eps.
ThinnessScan directional_thinness_scan(const PlaneSetApprox& set, const Direction& v, unsigned n_queries,
                                       std::span<const double> eps_grid, std::uint64_t seed, unsigned budget = 256,
                                       const SearchOptions& options = {});

struct LineTraceRecord {
  double offset = 0.0;                // signed distance of the line from the box centre
  std::vector<double> longest_runs;   // one per depth scanned
};

struct DisconnectScan {
  Verdict verdict = Verdict::Inconclusive;  // Pass iff every final run < resolution
  double resolution = 0.0;
  std::vector<unsigned> depths;
  std::vector<LineTraceRecord> lines;
  double worst_final_run = 0.0;

  Json to_json() const;
};

/// Longest connected run of line-by-line traces through cover(depth) for
/// growing depths. A short run is evidence; a long one is inconclusive.
DisconnectScan totally_disconnected_scan(const PlaneSetApprox& set, const Direction& v, double resolution,
                                         unsigned n_lines, unsigned max_depth = 10);

struct IntersectionCount {
  std::size_t lower = 0;
  std::size_t upper = 0;
};

/// upper: components of line ∩ cover(depth). lower: certified points of the
/// set on the line (exact covers: equal to upper; Holey Staircase: graph
/// crossings forced by side changes of y - H(x) along non-decreasing lines;
/// otherwise 0). Throws std::invalid_argument for a degenerate line.
IntersectionCount line_intersection_count(const Segment2& line, const PlaneSetApprox& set, unsigned depth);

}  // namespace crem
