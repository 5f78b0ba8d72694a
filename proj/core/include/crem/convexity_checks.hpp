#pragma once

// Sampling-based convexity evidence. A positive midpoint violation with its
// witness pair disproves convexity; the absence of one proves nothing.

#include "crem/geometry.hpp"
#include "crem/report.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace crem {

using Fn2 = std::function<double(Point2)>;

struct MidpointWitness {
  Point2 p;
  Point2 q;
  double violation = 0.0;  // f((p+q)/2) - (f(p)+f(q))/2
};

struct MidpointScan {
  Verdict verdict = Verdict::Inconclusive;  // Violation iff worst > tol
  std::size_t samples = 0;
  double tol = 0.0;
  std::optional<MidpointWitness> worst;

  Json to_json() const;
};

double midpoint_violation(const Fn2& f, Point2 p, Point2 q);

/// Pairs drawn uniformly (scrambled Halton) from the box.
MidpointScan midpoint_violation_scan(const Fn2& f, const Box& region, std::size_t n_samples, std::uint64_t seed,
                                     double tol = 0.0);

/// n_per_segment pairs drawn along each segment of the family.
MidpointScan midpoint_violation_scan(const Fn2& f, std::span<const Segment2> segments, std::size_t n_per_segment,
                                     std::uint64_t seed, double tol = 0.0);

/// Midpoint scan restricted to horizontal and vertical chords of the box,
/// n_lines of each.
MidpointScan separate_convexity_check(const Fn2& f, const Box& region, std::size_t n_lines,
                                      std::size_t n_per_line, std::uint64_t seed, double tol = 0.0);

struct SverakOptions {
  unsigned levels = 20;      // windows W_n = (0, 2^-n], n = 1..levels; at most 40
  unsigned per_window = 32;  // t = 2^-n * 2^-j, j = 0..per_window-1
  double tol = 1e-6;
};

struct SverakWindow {
  unsigned n = 0;
  double sup = 0.0;  // NaN when no sample in the window is resolved
  double t_at_sup = 0.0;
  std::size_t resolved = 0;
};

/// Finite transcription of liminf_{t->0+} r(t) >= 0 for g(t) = f(t, t) and
/// r(t) = (g(x+t) + g(x-t) - 2 g(x)) / t: each window sup must be >= -tol.
/// Samples whose rounding-error estimate exceeds tol are skipped. The
/// verdict is evidence only.
struct SverakProbe {
  double x = 0.0;
  SverakOptions options;
  std::vector<SverakWindow> windows;
  Verdict verdict = Verdict::Inconclusive;
  // Every (t, r(t)) evaluated, resolved or not.
  std::vector<std::pair<double, double>> samples;

  Json to_json() const;
  void write_csv(std::ostream& out) const;
};

SverakProbe sverak_probe(const Fn2& f, double x, const SverakOptions& options = {});

struct SigmaRhoRow {
  double t = 0.0;
  double sigma = 0.0;  // f(t,-t) + f(-t,t), after subtracting f(0,0)
  double rho = 0.0;    // f(t,t) + f(-t,-t), after subtracting f(0,0)
};

struct SigmaRhoReport {
  Verdict verdict = Verdict::Inconclusive;  // Pass iff every sigma + rho >= -tol
  double tol = 0.0;
  double min_sum = 0.0;
  std::vector<SigmaRhoRow> rows;

  Json to_json() const;
};

SigmaRhoReport sigma_rho_check(const Fn2& f, std::span<const double> t_grid, double tol = 1e-9);

}  // namespace crem
