#include "crem/interval_sets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace crem {

IntervalSet::IntervalSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  for (std::size_t k = 0; k < intervals_.size(); ++k) {
    if (intervals_[k].lo > intervals_[k].hi) {
      throw std::invalid_argument("IntervalSet: interval " + std::to_string(k) + " has lo > hi");
    }
    if (k > 0 && !(intervals_[k - 1].hi < intervals_[k].lo)) {
      throw std::invalid_argument("IntervalSet: intervals " + std::to_string(k - 1) + " and " +
                                  std::to_string(k) + " overlap, touch, or are out of order");
    }
  }
}

Rational IntervalSet::measure() const {
  Rational total = 0;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

bool IntervalSet::contains(const IntervalSet& inner) const {
  for (const auto& iv : inner.intervals()) {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), iv.lo,
                               [](const Rational& v, const Interval& j) { return v < j.lo; });
    if (it == intervals_.begin()) return false;
    --it;
    if (!(it->lo <= iv.lo && iv.hi <= it->hi)) return false;
  }
  return true;
}

GapList::GapList(std::vector<Gap> gaps) : gaps_(std::move(gaps)) {
  for (std::size_t i = 0; i < gaps_.size(); ++i) {
    const Gap& g = gaps_[i];
    const std::string tag = "GapList: gap " + std::to_string(i);
    if (g.eps <= 0) throw std::invalid_argument(tag + " has non-positive half-length");
    if (g.left() < -1 || g.right() > 1) throw std::invalid_argument(tag + " is not contained in [-1,1]");
    if (abs(g.w) < g.eps) throw std::invalid_argument(tag + " contains 0 (|w| < eps)");
  }
  std::vector<const Gap*> sorted;
  sorted.reserve(gaps_.size());
  for (const auto& g : gaps_) sorted.push_back(&g);
  std::sort(sorted.begin(), sorted.end(), [](const Gap* a, const Gap* b) { return a->w < b->w; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i - 1]->right() > sorted[i]->left()) {
      throw std::invalid_argument("GapList: gaps are not pairwise disjoint");
    }
  }
}

Rational GapList::eps_sum() const {
  Rational total = 0;
  for (const auto& g : gaps_) total += g.eps;
  return total;
}

IntervalSet ternary_cantor(unsigned depth) {
  if (depth > 40) throw std::invalid_argument("ternary_cantor: depth must be <= 40");
  const BigInt den = pow3(depth);
  std::vector<Interval> out;
  out.reserve(std::size_t{1} << depth);
  // Left endpoints are sums of 2*3^(depth-j) over the chosen right branches.
  std::vector<BigInt> lefts{BigInt(0)};
  for (unsigned level = 1; level <= depth; ++level) {
    const BigInt step = 2 * pow3(depth - level);
    std::vector<BigInt> next;
    next.reserve(lefts.size() * 2);
    for (const auto& l : lefts) {
      next.push_back(l);
      next.push_back(l + step);
    }
    lefts = std::move(next);
  }
  for (const auto& l : lefts) out.push_back({Rational(l, den), Rational(l + 1, den)});
  return IntervalSet(std::move(out));
}

FatCantor fat_cantor(const Rational& gap_budget, unsigned depth) {
  if (gap_budget <= 0) throw std::invalid_argument("fat_cantor: gap_budget must be positive");
  if (gap_budget > Rational(1, 12)) {
    throw std::invalid_argument("fat_cantor: gap_budget must be <= 1/12 (keeps the half-length sum below 1/24)");
  }
  if (depth < 1) throw std::invalid_argument("fat_cantor: depth must be >= 1");

  std::vector<Interval> pieces{{Rational(0), Rational(1)}};
  std::vector<std::vector<Gap>> per_generation;
  Rational length = gap_budget;
  for (unsigned n = 1; n <= depth; ++n) {
    length /= 4;
    const Rational half = length / 2;
    std::vector<Interval> next;
    std::vector<Gap> gen;
    for (const auto& iv : pieces) {
      const Rational mid = (iv.lo + iv.hi) / 2;
      gen.push_back({mid, half});
      next.push_back({iv.lo, mid - half});
      next.push_back({mid + half, iv.hi});
    }
    pieces = std::move(next);
    per_generation.push_back(std::move(gen));
  }

  std::vector<Gap> gaps;
  for (const auto& gen : per_generation) {
    for (auto it = gen.rbegin(); it != gen.rend(); ++it) gaps.push_back({-it->w, it->eps});
    for (const auto& g : gen) gaps.push_back(g);
  }

  std::vector<Interval> intervals;
  intervals.reserve(2 * pieces.size() - 1);
  for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) intervals.push_back({-it->hi, -it->lo});
  // [-a, 0] and [0, a] meet at 0.
  intervals.back().hi = pieces.front().hi;
  for (std::size_t i = 1; i < pieces.size(); ++i) intervals.push_back(pieces[i]);
  return {IntervalSet(std::move(intervals)), GapList(std::move(gaps))};
}

CantorValue cantor_function(const Rational& x, unsigned depth) {
  if (x < 0 || x > 1) throw std::domain_error("cantor_function: x outside [0,1]");
  if (depth < 1) throw std::invalid_argument("cantor_function: depth must be >= 1");
  if (x == 1) return {Rational(1), Rational(0)};
  Rational rest = x;
  Rational value = 0;
  Rational weight(1, 2);
  for (unsigned k = 0; k < depth; ++k) {
    rest *= 3;
    const int digit = static_cast<int>(boost::multiprecision::numerator(rest) /
                                       boost::multiprecision::denominator(rest));
    rest -= digit;
    if (digit == 1) return {value + weight, Rational(0)};
    if (digit == 2) value += weight;
    weight /= 2;
  }
  return {value, weight * 2};
}

CantorValue cantor_function(double x, unsigned depth) { return cantor_function(exact(x), depth); }

double cantor_value(double x, unsigned depth) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("cantor_value: x outside [0,1]");
  if (depth < 1 || depth > 60) throw std::invalid_argument("cantor_value: depth must be in [1, 60]");
  if (x == 1.0) return 1.0;
  if (x == 0.0) return 0.0;
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  const int shift = 53 - exponent;  // x = m / 2^shift
  if (shift > 120) return to_double(cantor_function(exact(x), depth).value);
  __extension__ typedef unsigned __int128 u128;
  u128 num = static_cast<u128>(static_cast<std::uint64_t>(std::ldexp(mantissa, 53)));
  const u128 den = u128{1} << shift;
  double value = 0.0;
  double weight = 0.5;
  for (unsigned k = 0; k < depth; ++k) {
    num *= 3;
    const auto digit = static_cast<unsigned>(num / den);
    num -= static_cast<u128>(digit) * den;
    if (digit == 1) return value + weight;
    if (digit == 2) value += weight;
    weight *= 0.5;
  }
  return value;
}

double cantor_value_extended(double x, unsigned depth) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return cantor_value(x, depth);
}

PointClass point_classify(const IntervalSet& set, const Rational& x) {
  if (set.empty()) throw std::invalid_argument("point_classify: empty set");
  const auto ivs = set.intervals();
  auto it = std::upper_bound(ivs.begin(), ivs.end(), x, [](const Rational& v, const Interval& j) { return v < j.lo; });
  if (it != ivs.begin()) {
    const Interval& left = *(it - 1);
    if (x <= left.hi) return Inside{std::min(Rational(x - left.lo), Rational(left.hi - x))};
  }
  // Outside: nearest neighbours are the interval ending before x and the one starting after.
  std::optional<Rational> best;
  if (it != ivs.begin()) best = x - (it - 1)->hi;
  if (it != ivs.end()) {
    const Rational d = it->lo - x;
    if (!best || d < *best) best = d;
  }
  return Outside{*best};
}

PointClass point_classify(const IntervalSet& set, double x) { return point_classify(set, exact(x)); }

PointClass cantor_classify(const Rational& x, unsigned depth) {
  if (x < 0) return Outside{-x};
  if (x > 1) return Outside{x - 1};
  BigInt index = 0;  // current interval [index, index + 1] / 3^level
  BigInt scale = 1;  // 3^level
  for (unsigned level = 0; level < depth; ++level) {
    scale *= 3;
    // Position of x inside the current interval measured in thirds.
    const Rational third = x * Rational(scale) - Rational(3 * index);
    if (third <= 1) {
      index = 3 * index;
    } else if (third >= 2) {
      index = 3 * index + 2;
    } else {
      return Outside{std::min(Rational(third - 1), Rational(2 - third)) / Rational(scale)};
    }
  }
  const Rational lo(index, scale);
  const Rational hi(index + 1, scale);
  return Inside{std::min(Rational(x - lo), Rational(hi - x))};
}

}  // namespace crem
