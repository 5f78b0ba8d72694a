#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace crem::oracle {

std::vector<std::pair<Rational, Rational>> cantor_intervals_by_words(unsigned depth) {
  const Rational len(1, pow3(depth));
  std::vector<std::pair<Rational, Rational>> out;
  for (std::uint64_t word = 0; word < (std::uint64_t{1} << depth); ++word) {
    Rational lo = 0;
    Rational scale(1);
    for (unsigned i = 0; i < depth; ++i) {
      scale /= 3;
      if ((word >> (depth - 1 - i)) & 1U) lo += 2 * scale;
    }
    out.emplace_back(lo, lo + len);
  }
  return out;
}

Rational cantor_by_recursion(const Rational& x, unsigned levels) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  if (levels == 0) return 0;
  const Rational third(1, 3);
  if (x <= third) return cantor_by_recursion(3 * x, levels - 1) / 2;
  if (x < 2 * third) return Rational(1, 2);
  return Rational(1, 2) + cantor_by_recursion(3 * x - 2, levels - 1) / 2;
}

double segment_box_distance_search(const Segment2& s, const Box& b) {
  auto f = [&](double t) { return point_box_distance(s.at(t), b); };
  double lo = 0.0, hi = 1.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double m1 = hi - g * (hi - lo);
    const double m2 = lo + g * (hi - lo);
    if (f(m1) <= f(m2)) hi = m2;
    else lo = m1;
  }
  return std::min({f(0.0), f(1.0), f(0.5 * (lo + hi))});
}

FdHessian fd_hessian(const std::function<double(Point2)>& f, Point2 p, double h) {
  const double f0 = f(p);
  const double fxx = (f({p.x + h, p.y}) - 2 * f0 + f({p.x - h, p.y})) / (h * h);
  const double fyy = (f({p.x, p.y + h}) - 2 * f0 + f({p.x, p.y - h})) / (h * h);
  const double fxy = (f({p.x + h, p.y + h}) - f({p.x + h, p.y - h}) - f({p.x - h, p.y + h}) +
                      f({p.x - h, p.y - h})) /
                     (4 * h * h);
  return {fxx, fxy, fyy};
}

Rational stripe_value(const Rational& beta, const Rational& eps, const Rational& w, const Rational& x,
                      const Rational& y) {
  const Rational s = x - w;
  Rational profile;
  if (s < -eps) profile = -2 * eps * s - eps * eps;
  else if (s > eps) profile = 2 * eps * s - eps * eps;
  else profile = s * s;
  return beta * y * y + profile;
}

namespace {
Rational f1(const Rational& x, const Rational& y) {
  Rational v = x * x / 12;
  if (y > 1) v += 4 * (y - 1) * (y - 1);
  return v;
}
}  // namespace

Rational counterexample_value(const std::vector<Rational>& betas, const std::vector<Gap>& gaps, const Rational& x,
                              const Rational& y) {
  Rational v = -x * y;
  v += f1(x, y) + f1(x, -y) + f1(y, x) + f1(y, -x);
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    v += stripe_value(betas[i], gaps[i].eps, gaps[i].w, x, y);
    v += stripe_value(betas[i], gaps[i].eps, gaps[i].w, y, x);
  }
  return v;
}

double branch_distance(const CounterexampleParams& params, Point2 p) {
  double d = std::min(std::abs(std::abs(p.x) - 1.0), std::abs(std::abs(p.y) - 1.0));
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (double e : {params.left_d()[i], params.right_d()[i]}) d = std::min({d, std::abs(p.x - e), std::abs(p.y - e)});
  }
  return d;
}

std::pair<Rational, Rational> koch_affine_expansion(unsigned k) {
  Rational a = 1, b = 0;  // B_k = T
  for (unsigned i = k; i-- > 0;) {
    const Rational r = Rational(pow3(i + 1) + 3, pow3(i + 1) + 1);
    a = r * 3 * a;
    b = r * (3 * b - 2);
  }
  return {a, b};
}

}  // namespace crem::oracle
