#pragma once

// One-dimensional machinery: Cantor-type sets as finite unions of closed
// intervals with exact rational endpoints, gap lists, and the Cantor function.

#include "crem/rational.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace crem {

struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of closed intervals, stored strictly increasing and pairwise
/// disjoint (hi_k < lo_{k+1}).
class IntervalSet {
 public:
  IntervalSet() = default;
  /// Validates ordering and disjointness; throws std::invalid_argument.
  explicit IntervalSet(std::vector<Interval> intervals);

  std::span<const Interval> intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  Rational measure() const;

  /// Every interval of `inner` lies inside one interval of *this.
  bool contains(const IntervalSet& inner) const;

 private:
  std::vector<Interval> intervals_;
};

/// A removed open interval (w - eps, w + eps).
struct Gap {
  Rational w;
  Rational eps;

  Rational left() const { return w - eps; }
  Rational right() const { return w + eps; }
  friend bool operator==(const Gap&, const Gap&) = default;
};

/// Gaps with eps > 0, pairwise disjoint, inside [-1, 1], and |w| >= eps so
/// that no gap contains 0. Enumeration order is kept as supplied.
class GapList {
 public:
  GapList() = default;
  explicit GapList(std::vector<Gap> gaps);

  std::span<const Gap> gaps() const { return gaps_; }
  std::size_t size() const { return gaps_.size(); }
  const Gap& operator[](std::size_t i) const { return gaps_[i]; }
  Rational eps_sum() const;
  Rational total_length() const { return 2 * eps_sum(); }

 private:
  std::vector<Gap> gaps_;
};

/// Generation-`depth` approximation of the ternary Cantor set:
/// 2^depth intervals of length 3^-depth. depth <= 40; note the result is
/// materialized, so large depths are memory bound (use cantor_classify).
IntervalSet ternary_cantor(unsigned depth);

struct FatCantor {
  IntervalSet set;
  GapList gaps;
};

/// Symmetric Smith-Volterra-Cantor set on [-1, 1], built on [0, 1] and
/// mirrored. Generation n removes 2^(n-1) centred gaps of length
/// gap_budget * 4^-n from each half, so the total removed length is
/// gap_budget * (1 - 2^-depth). Requires 0 < gap_budget <= 1/12, depth >= 1.
/// Gaps are listed by generation, then left to right over [-1, 1].
FatCantor fat_cantor(const Rational& gap_budget, unsigned depth);

struct CantorValue {
  Rational value;      // truncated digit-expansion value
  Rational err_bound;  // h(x) lies in [value, value + err_bound]
};

/// Cantor function via ternary digits read in binary, stopping at the first
/// digit 1 or after `depth` digits. Throws std::domain_error outside [0, 1],
/// std::invalid_argument for depth 0.
CantorValue cantor_function(const Rational& x, unsigned depth);
CantorValue cantor_function(double x, unsigned depth);

/// Fast double-precision path of cantor_function for depth <= 60; the
/// returned value is the truncated expansion rounded to double.
double cantor_value(double x, unsigned depth);

/// Extended Cantor function: 0 left of 0, 1 right of 1.
double cantor_value_extended(double x, unsigned depth);

struct Inside {
  Rational distance_to_complement;
};
struct Outside {
  Rational distance_to_set;
};
using PointClass = std::variant<Inside, Outside>;

inline bool is_inside(const PointClass& c) { return std::holds_alternative<Inside>(c); }

/// Exact classification of x against a nonempty interval union.
PointClass point_classify(const IntervalSet& set, const Rational& x);
PointClass point_classify(const IntervalSet& set, double x);

/// point_classify(ternary_cantor(depth), x) without materializing the set.
PointClass cantor_classify(const Rational& x, unsigned depth);

}  // namespace crem
