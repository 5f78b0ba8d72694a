#pragma once

// The non-convex function that is locally convex off K x K, where
// K = [-1, 1] minus a family of disjoint open gaps (w_i - eps_i, w_i + eps_i):
//
//   f = phi + f_1 + f_2 + f_3 + f_4 + sum_i (g_i + h_i),   phi(x, y) = -xy,
//
// with g_i a convex C^1 "vertical stripe" term around x = w_i and h_i its
// transpose. All certificate quantities are exact rationals; floating point
// is used only for sampling-style checks.

#include "crem/geometry.hpp"
#include "crem/interval_sets.hpp"
#include "crem/rational.hpp"
#include "crem/report.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <span>
#include <variant>
#include <vector>

namespace crem {

enum class Orientation { Vertical, Horizontal };

/// One summand g^w_{beta,eps} (Vertical) or h^w_{beta,eps} (Horizontal).
struct StripeTerm {
  Rational beta;
  Rational eps;
  Rational w;
  Orientation orientation = Orientation::Vertical;

  /// 0 < beta < 1/80, eps > 0, |w| >= eps, stripe inside [-1, 1].
  void validate() const;
};

/// Gap list plus betas with sum(beta) = 1/4, sum(eps) < 1/24,
/// beta_i in (0, 1/80), and therefore at least 21 gaps.
class CounterexampleParams {
 public:
  CounterexampleParams(GapList gaps, std::vector<Rational> betas);

  const GapList& gaps() const { return gaps_; }
  std::span<const Rational> betas() const { return betas_; }
  std::size_t size() const { return betas_.size(); }
  StripeTerm term(std::size_t i, Orientation o) const;

  // Nearest-double copies used by the floating-point evaluators.
  std::span<const double> beta_d() const { return beta_d_; }
  std::span<const double> w_d() const { return w_d_; }
  std::span<const double> eps_d() const { return eps_d_; }
  std::span<const double> left_d() const { return left_d_; }
  std::span<const double> right_d() const { return right_d_; }

  /// Index of the gap whose open interval contains v, if any (exact test).
  std::optional<std::size_t> gap_containing(const Rational& v) const;

  Json to_json() const;
  static CounterexampleParams from_json(const Json& j);

 private:
  GapList gaps_;
  std::vector<Rational> betas_;
  std::vector<double> beta_d_, w_d_, eps_d_, left_d_, right_d_;
  std::vector<std::size_t> by_position_;  // gap indices sorted by w
};

// --- closed-form pieces ----------------------------------------------------

/// g_{beta,eps}(x - w, y): beta*y^2 plus a C^1 quadratic/linear profile in x.
template <class T>
T stripe_g(const T& beta, const T& eps, const T& w, const T& x, const T& y) {
  const T s = x - w;
  const T base = beta * y * y;
  if (s <= -eps) return T(base - 2 * eps * s - eps * eps);
  if (s >= eps) return T(base + 2 * eps * s - eps * eps);
  return T(base + s * s);
}

/// f_1(x, y) = x^2/12 + 4 (y - 1)^2 for y > 1, x^2/12 otherwise.
template <class T>
T outer_f1(const T& x, const T& y) {
  const T base = x * x / 12;
  if (y > 1) {
    const T d = y - 1;
    return T(base + 4 * d * d);
  }
  return base;
}

/// f_1..f_4 with f_2(x,y) = f_1(x,-y), f_3(x,y) = f_1(y,x), f_4(x,y) = f_3(-x,y).
template <class T>
T outer_f(int i, const T& x, const T& y) {
  switch (i) {
    case 1: return outer_f1<T>(x, y);
    case 2: return outer_f1<T>(x, T(-y));
    case 3: return outer_f1<T>(y, x);
    case 4: return outer_f1<T>(y, T(-x));
    default: throw std::invalid_argument("outer_f: index must be 1..4");
  }
}

double eval_g(double beta, double eps, double w, Point2 p);
/// h^w(x, y) = g^w(y, x).
double eval_h(double beta, double eps, double w, Point2 p);
double eval_outer(int i, Point2 p);

double eval_f(const CounterexampleParams& params, Point2 p);
Rational eval_f_exact(const CounterexampleParams& params, const Rational& x, const Rational& y);

struct TailBracket {
  Rational lower;
  Rational upper;
};

/// Bracket for the omitted sum over i > N of (g_i + h_i) on [-R, R]^2:
/// [-2 (tail_eps)^2, 2 (tail_beta R^2 + 4 R tail_eps)]. Requires R >= 1.
TailBracket tail_bound(const Rational& tail_beta_sum, const Rational& tail_eps_sum, const Rational& R);

// --- Hessians ----------------------------------------------------------------

struct Hessian2 {
  double fxx = 0.0;
  double fxy = 0.0;
  double fyy = 0.0;

  double det() const { return fxx * fyy - fxy * fxy; }
  bool is_psd(double tol = 0.0) const { return fxx >= -tol && fyy >= -tol && det() >= -tol; }
};

struct BoundaryHit {
  enum class Line { StripeVertical, StripeHorizontal, OuterVertical, OuterHorizontal };
  Line line;
  std::size_t index = 0;  // gap index, or 0 for outer lines
  Rational at;            // the coordinate of the line
};

struct OnBoundary {
  std::vector<BoundaryHit> hits;
};

using HessianResult = std::variant<Hessian2, OnBoundary>;

/// Closed-form Hessian of f, or the list of branch lines through p.
HessianResult hessian_at(const CounterexampleParams& params, Point2 p);

// --- certificates ------------------------------------------------------------

enum class CertCase { OuterTop, OuterBottom, OuterRight, OuterLeft, StripeBased };

const char* to_string(CertCase c);

/// States that f is convex on B(point, radius). For StripeBased, the convex
/// summand family f_F = phi + sum_{i in F}(g_i + h_i) [+ the lone stripe term
/// of gap `stripe` when stripe is not in F] has constant Hessian on the ball
/// with determinant >= det_bound = 4(alpha_F + alpha_F^2) - 1, and f - f_F is
/// convex. Outer cases pair phi with one f_i (det_bound 1/3).
struct ConvexityCertificate {
  Point2 point;
  CertCase kase = CertCase::StripeBased;
  Orientation orientation = Orientation::Vertical;  // stripe the point sits in
  std::size_t stripe = 0;
  bool stripe_term_added = false;  // stripe not in F, its lone term added
  std::vector<std::size_t> subfamily;  // F, ascending
  Rational alpha_F = 0;
  Rational det_bound = 0;
  Rational radius_exact = 0;
  double radius = 0.0;  // rounded down

  Json to_json() const;
};

/// Throws PointInsideObstacle for p in K x K, UnsatisfiableF if the
/// admissible betas cannot exceed 9/40.
ConvexityCertificate certify_local_convexity(const CounterexampleParams& params, Point2 p);

/// Hessian of the certified family f_F (or phi + f_i) at q.
HessianResult certified_family_hessian(const CounterexampleParams& params, const ConvexityCertificate& cert,
                                       Point2 q);

/// True when both coordinates lie in K (inside [-1,1] and in no gap).
bool in_obstacle(const CounterexampleParams& params, Point2 p);

struct CertificateCheck {
  std::size_t checked = 0;
  std::size_t skipped = 0;  // samples on a branch line
  std::size_t failures = 0;
  double min_det_margin = 0.0;  // min over samples of det(H_F) - det_bound
  std::optional<Point2> witness;  // first failing sample
};

/// Samples the open ball of the certificate: the family Hessian must have
/// fxx, fyy >= 0 and det >= det_bound - 1e-9, and the full Hessian must be PSD
/// (within 1e-12).
CertificateCheck check_certificate(const CounterexampleParams& params, const ConvexityCertificate& cert,
                                   unsigned n_samples, std::uint64_t seed);

// --- non-convexity -----------------------------------------------------------

struct NonconvexityGap {
  Rational direct;       // f(-1,-1) + f(1,1) - 2 f(0,0), exact
  Rational closed_form;  // -4/3 + 4 sum(delta_i)
  Rational delta_sum;    // sum of beta_i + 2 eps_i (1 - |w_i|)
};

/// Both routes are computed; throws std::logic_error if they disagree.
NonconvexityGap nonconvexity_gap(const CounterexampleParams& params);

/// sum_i (beta_i + 2 eps_i (1 - |w_i|)); no validity requirements.
Rational delta_sum(std::span<const Rational> betas, std::span<const Gap> gaps);
inline Rational closed_form_gap(std::span<const Rational> betas, std::span<const Gap> gaps) {
  return Rational(-4, 3) + 4 * delta_sum(betas, gaps);
}

// --- parameter construction --------------------------------------------------

enum class BetaPolicy { Uniform, ProportionalCapped };

/// Uniform: beta_i = 1/(4N), TooFewGaps unless N >= 21. ProportionalCapped:
/// 1/4 split in proportion to gap length, capped at 1/80 - cap_margin with
/// the excess redistributed; InfeasibleCap if N * cap < 1/4.
CounterexampleParams build_params(const GapList& gaps, BetaPolicy policy,
                                  const Rational& cap_margin = Rational(1, 800));

/// CSV rows (t, f(p0 + t v)).
void write_slice_csv(std::ostream& out, const CounterexampleParams& params, Point2 p0, Point2 v,
                     std::span<const double> ts);

}  // namespace crem
