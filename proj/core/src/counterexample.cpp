#include "crem/counterexample.hpp"

#include "crem/errors.hpp"
#include "crem/format.hpp"
#include "crem/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>

namespace crem {

namespace {

const Rational kAlphaMin(9, 40);
const Rational kBetaCap(1, 80);

}  // namespace

void StripeTerm::validate() const {
  if (!(beta > 0 && beta < kBetaCap)) throw std::invalid_argument("StripeTerm: beta must lie in (0, 1/80)");
  if (!(eps > 0)) throw std::invalid_argument("StripeTerm: eps must be positive");
  if (abs(w) < eps) throw std::invalid_argument("StripeTerm: |w| must be >= eps");
  if (w - eps < -1 || w + eps > 1) throw std::invalid_argument("StripeTerm: stripe must lie inside [-1, 1]");
}

CounterexampleParams::CounterexampleParams(GapList gaps, std::vector<Rational> betas)
    : gaps_(std::move(gaps)), betas_(std::move(betas)) {
  if (betas_.size() != gaps_.size()) throw std::invalid_argument("CounterexampleParams: one beta per gap required");
  Rational beta_sum = 0;
  for (const Rational& b : betas_) {
    if (!(b > 0 && b < kBetaCap)) throw std::invalid_argument("CounterexampleParams: beta_i must lie in (0, 1/80)");
    beta_sum += b;
  }
  if (beta_sum != Rational(1, 4)) throw std::invalid_argument("CounterexampleParams: sum(beta) must equal 1/4");
  if (!(gaps_.eps_sum() < Rational(1, 24))) throw std::invalid_argument("CounterexampleParams: sum(eps) must be < 1/24");

  const std::size_t n = betas_.size();
  beta_d_.reserve(n);
  w_d_.reserve(n);
  eps_d_.reserve(n);
  left_d_.reserve(n);
  right_d_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    beta_d_.push_back(to_double(betas_[i]));
    w_d_.push_back(to_double(gaps_[i].w));
    eps_d_.push_back(to_double(gaps_[i].eps));
    left_d_.push_back(to_double(gaps_[i].left()));
    right_d_.push_back(to_double(gaps_[i].right()));
  }
  by_position_.resize(n);
  std::iota(by_position_.begin(), by_position_.end(), std::size_t{0});
  std::sort(by_position_.begin(), by_position_.end(),
            [&](std::size_t a, std::size_t b) { return gaps_[a].w < gaps_[b].w; });
}

StripeTerm CounterexampleParams::term(std::size_t i, Orientation o) const {
  if (i >= size()) throw std::out_of_range("CounterexampleParams::term: index out of range");
  return StripeTerm{betas_[i], gaps_[i].eps, gaps_[i].w, o};
}

std::optional<std::size_t> CounterexampleParams::gap_containing(const Rational& v) const {
  // Disjoint gaps sorted by centre also have sorted left ends.
  auto it = std::partition_point(by_position_.begin(), by_position_.end(),
                                 [&](std::size_t i) { return gaps_[i].left() < v; });
  if (it == by_position_.begin()) return std::nullopt;
  const std::size_t i = *std::prev(it);
  if (v < gaps_[i].right()) return i;
  return std::nullopt;
}

Json CounterexampleParams::to_json() const {
  Json gaps = Json::array();
  Json betas = Json::array();
  for (std::size_t i = 0; i < size(); ++i) {
    gaps.push_back(Json{{"w", rational_json(gaps_[i].w)}, {"eps", rational_json(gaps_[i].eps)}});
    betas.push_back(rational_json(betas_[i]));
  }
  return Json{{"n", size()},
              {"eps_sum", rational_json(gaps_.eps_sum())},
              {"gaps", std::move(gaps)},
              {"betas", std::move(betas)}};
}

CounterexampleParams CounterexampleParams::from_json(const Json& j) {
  std::vector<Gap> gaps;
  std::vector<Rational> betas;
  for (const auto& g : j.at("gaps")) {
    gaps.push_back(Gap{parse_rational(g.at("w").get<std::string>()), parse_rational(g.at("eps").get<std::string>())});
  }
  for (const auto& b : j.at("betas")) betas.push_back(parse_rational(b.get<std::string>()));
  return CounterexampleParams(GapList(std::move(gaps)), std::move(betas));
}

// --- evaluation ----------------------------------------------------------------

double eval_g(double beta, double eps, double w, Point2 p) { return stripe_g<double>(beta, eps, w, p.x, p.y); }

double eval_h(double beta, double eps, double w, Point2 p) { return stripe_g<double>(beta, eps, w, p.y, p.x); }

double eval_outer(int i, Point2 p) { return outer_f<double>(i, p.x, p.y); }

double eval_f(const CounterexampleParams& params, Point2 p) {
  double f = -p.x * p.y;
  for (int i = 1; i <= 4; ++i) f += eval_outer(i, p);
  const auto beta = params.beta_d();
  const auto w = params.w_d();
  const auto eps = params.eps_d();
  for (std::size_t i = 0; i < params.size(); ++i) {
    f += eval_g(beta[i], eps[i], w[i], p) + eval_h(beta[i], eps[i], w[i], p);
  }
  return f;
}

Rational eval_f_exact(const CounterexampleParams& params, const Rational& x, const Rational& y) {
  Rational f = -x * y;
  for (int i = 1; i <= 4; ++i) f += outer_f<Rational>(i, x, y);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Rational& b = params.betas()[i];
    const Gap& g = params.gaps()[i];
    f += stripe_g<Rational>(b, g.eps, g.w, x, y);
    f += stripe_g<Rational>(b, g.eps, g.w, y, x);
  }
  return f;
}

TailBracket tail_bound(const Rational& tail_beta_sum, const Rational& tail_eps_sum, const Rational& R) {
  if (R < 1) throw std::invalid_argument("tail_bound: R must be >= 1");
  if (tail_beta_sum < 0 || tail_eps_sum < 0) throw std::invalid_argument("tail_bound: tail sums must be >= 0");
  return TailBracket{-2 * tail_eps_sum * tail_eps_sum, 2 * (tail_beta_sum * R * R + 4 * R * tail_eps_sum)};
}

// --- Hessians ------------------------------------------------------------------

namespace {

// Sign of v - b where bd is the nearest double to the exact boundary b().
template <class Exact>
int compare_to_boundary(double v, double bd, Exact b) {
  const double diff = v - bd;
  if (std::abs(diff) > 1e-13 * std::max(1.0, std::abs(v))) return diff > 0.0 ? 1 : -1;
  const Rational e = exact(v);
  const Rational x = b();
  return e > x ? 1 : (e < x ? -1 : 0);
}

enum class Where { Outside, Inside, OnLeft, OnRight };

Where locate(const CounterexampleParams& params, std::size_t i, double v) {
  const Gap& g = params.gaps()[i];
  const int l = compare_to_boundary(v, params.left_d()[i], [&] { return g.left(); });
  if (l == 0) return Where::OnLeft;
  if (l < 0) return Where::Outside;
  const int r = compare_to_boundary(v, params.right_d()[i], [&] { return g.right(); });
  if (r == 0) return Where::OnRight;
  return r < 0 ? Where::Inside : Where::Outside;
}

using Line = BoundaryHit::Line;

// Adds the Hessian of g_i (or h_i if transposed) at p, or records a hit.
void add_stripe(const CounterexampleParams& params, std::size_t i, Orientation o, Point2 p, Hessian2& h,
                std::vector<BoundaryHit>& hits) {
  const double two_beta = 2.0 * params.beta_d()[i];
  const double across = o == Orientation::Vertical ? p.x : p.y;
  const Where where = locate(params, i, across);
  if (where == Where::OnLeft || where == Where::OnRight) {
    const Gap& g = params.gaps()[i];
    hits.push_back({o == Orientation::Vertical ? Line::StripeVertical : Line::StripeHorizontal, i,
                    where == Where::OnLeft ? g.left() : g.right()});
    return;
  }
  const double bump = where == Where::Inside ? 2.0 : 0.0;
  if (o == Orientation::Vertical) {
    h.fxx += bump;
    h.fyy += two_beta;
  } else {
    h.fxx += two_beta;
    h.fyy += bump;
  }
}

// Adds the Hessian of f_i at p, or records a hit.
void add_outer(int i, Point2 p, Hessian2& h, std::vector<BoundaryHit>& hits) {
  const bool horizontal = i <= 2;
  const double c = horizontal ? p.y : p.x;
  const double sign = (i == 1 || i == 3) ? 1.0 : -1.0;
  if (c == sign) {
    hits.push_back({horizontal ? Line::OuterHorizontal : Line::OuterVertical, 0, Rational(static_cast<int>(sign))});
    return;
  }
  const double bump = sign * c > 1.0 ? 8.0 : 0.0;
  if (horizontal) {
    h.fxx += 1.0 / 6.0;
    h.fyy += bump;
  } else {
    h.fyy += 1.0 / 6.0;
    h.fxx += bump;
  }
}

HessianResult finish(Hessian2 h, std::vector<BoundaryHit> hits) {
  if (!hits.empty()) return OnBoundary{std::move(hits)};
  return h;
}

}  // namespace

HessianResult hessian_at(const CounterexampleParams& params, Point2 p) {
  Hessian2 h;
  h.fxy = -1.0;
  std::vector<BoundaryHit> hits;
  for (int i = 1; i <= 4; ++i) add_outer(i, p, h, hits);
  for (std::size_t i = 0; i < params.size(); ++i) {
    add_stripe(params, i, Orientation::Vertical, p, h, hits);
    add_stripe(params, i, Orientation::Horizontal, p, h, hits);
  }
  return finish(h, std::move(hits));
}

// --- certificates --------------------------------------------------------------

const char* to_string(CertCase c) {
  switch (c) {
    case CertCase::OuterTop: return "outer-top";
    case CertCase::OuterBottom: return "outer-bottom";
    case CertCase::OuterRight: return "outer-right";
    case CertCase::OuterLeft: return "outer-left";
    case CertCase::StripeBased: return "stripe";
  }
  return "stripe";
}

Json ConvexityCertificate::to_json() const {
  Json j{{"point", point_json(point)}, {"case", to_string(kase)}};
  if (kase == CertCase::StripeBased) {
    j["orientation"] = orientation == Orientation::Vertical ? "vertical" : "horizontal";
    j["stripe"] = stripe;
    j["stripe_term_added"] = stripe_term_added;
    j["subfamily_size"] = subfamily.size();
    j["alpha_F"] = rational_json(alpha_F);
  }
  j["det_bound"] = rational_json(det_bound);
  j["radius_exact"] = rational_json(radius_exact);
  j["radius"] = number_json(radius);
  return j;
}

ConvexityCertificate certify_local_convexity(const CounterexampleParams& params, Point2 p) {
  const Rational x = exact(p.x);
  const Rational y = exact(p.y);
  ConvexityCertificate cert;
  cert.point = p;

  // Outside the square: phi plus the matching f_i.
  const std::pair<Rational, CertCase> outer[4] = {
      {y - 1, CertCase::OuterTop}, {-1 - y, CertCase::OuterBottom}, {x - 1, CertCase::OuterRight},
      {-1 - x, CertCase::OuterLeft}};
  const auto* best = std::max_element(std::begin(outer), std::end(outer),
                                      [](const auto& a, const auto& b) { return a.first < b.first; });
  if (best->first > 0) {
    cert.kase = best->second;
    cert.det_bound = Rational(1, 3);
    cert.radius_exact = best->first;
    cert.radius = to_double_down(best->first);
    return cert;
  }

  // Inside the square: the stripe containing one coordinate.
  Rational along, across;
  std::optional<std::size_t> k = params.gap_containing(x);
  if (k) {
    cert.orientation = Orientation::Vertical;
    along = y;
    across = x;
  } else if ((k = params.gap_containing(y))) {
    cert.orientation = Orientation::Horizontal;
    along = x;
    across = y;
  } else {
    throw PointInsideObstacle("certify_local_convexity: point lies in K x K");
  }
  cert.kase = CertCase::StripeBased;
  cert.stripe = *k;

  const Gap& gk = params.gaps()[*k];
  const Rational r_k = std::min(across - gk.left(), gk.right() - across);

  // Distance from `along` to the boundary lines of every transposed term.
  const std::size_t n = params.size();
  std::vector<Rational> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Gap& g = params.gaps()[i];
    dist[i] = std::min(abs(along - g.left()), abs(along - g.right()));
  }

  std::vector<bool> excluded(n, false);
  Rational alpha = 0;
  for (const Rational& b : params.betas()) alpha += b;
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i] == 0) {
      excluded[i] = true;
      alpha -= params.betas()[i];
    }
  }
  if (!(alpha > kAlphaMin)) {
    throw UnsatisfiableF("certify_local_convexity: admissible beta mass " + to_string(alpha) + " is not above 9/40");
  }

  // Widen the ball by dropping the nearest lines while mass allows.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    if (!excluded[i] && dist[i] < r_k) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  Rational radius = r_k;
  for (const std::size_t i : order) {
    if (alpha - params.betas()[i] > kAlphaMin) {
      excluded[i] = true;
      alpha -= params.betas()[i];
    } else {
      radius = dist[i];
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!excluded[i]) cert.subfamily.push_back(i);
  }
  cert.stripe_term_added = excluded[*k];
  cert.alpha_F = alpha;
  cert.det_bound = 4 * (alpha + alpha * alpha) - 1;
  cert.radius_exact = radius;
  cert.radius = to_double_down(radius);
  return cert;
}

HessianResult certified_family_hessian(const CounterexampleParams& params, const ConvexityCertificate& cert,
                                       Point2 q) {
  Hessian2 h;
  h.fxy = -1.0;
  std::vector<BoundaryHit> hits;
  switch (cert.kase) {
    case CertCase::OuterTop: add_outer(1, q, h, hits); break;
    case CertCase::OuterBottom: add_outer(2, q, h, hits); break;
    case CertCase::OuterRight: add_outer(3, q, h, hits); break;
    case CertCase::OuterLeft: add_outer(4, q, h, hits); break;
    case CertCase::StripeBased:
      for (const std::size_t i : cert.subfamily) {
        add_stripe(params, i, Orientation::Vertical, q, h, hits);
        add_stripe(params, i, Orientation::Horizontal, q, h, hits);
      }
      if (cert.stripe_term_added) add_stripe(params, cert.stripe, cert.orientation, q, h, hits);
      break;
  }
  return finish(h, std::move(hits));
}

bool in_obstacle(const CounterexampleParams& params, Point2 p) {
  if (std::abs(p.x) > 1.0 || std::abs(p.y) > 1.0) return false;
  return !params.gap_containing(exact(p.x)) && !params.gap_containing(exact(p.y));
}

CertificateCheck check_certificate(const CounterexampleParams& params, const ConvexityCertificate& cert,
                                   unsigned n_samples, std::uint64_t seed) {
  CertificateCheck out;
  out.min_det_margin = std::numeric_limits<double>::infinity();
  const double det_bound = to_double_down(cert.det_bound);
  const double r = cert.radius * (1.0 - 1e-9);
  const Halton h(seed);
  for (unsigned i = 0; i < n_samples; ++i) {
    const double rad = r * std::sqrt(h(i, 0));
    const double ang = 2.0 * std::numbers::pi * h(i, 1);
    const Point2 q = cert.point + Point2{rad * std::cos(ang), rad * std::sin(ang)};
    const HessianResult family = certified_family_hessian(params, cert, q);
    const HessianResult full = hessian_at(params, q);
    const auto* hf = std::get_if<Hessian2>(&family);
    const auto* hall = std::get_if<Hessian2>(&full);
    if (!hf || !hall) {
      ++out.skipped;
      continue;
    }
    ++out.checked;
    const double margin = hf->det() - det_bound;
    out.min_det_margin = std::min(out.min_det_margin, margin);
    const bool ok = hf->fxx >= 0.0 && hf->fyy >= 0.0 && margin >= -1e-9 && hall->is_psd(1e-12);
    if (!ok) {
      ++out.failures;
      if (!out.witness) out.witness = q;
    }
  }
  if (out.checked == 0) out.min_det_margin = 0.0;
  return out;
}

// --- non-convexity ---------------------------------------------------------------

Rational delta_sum(std::span<const Rational> betas, std::span<const Gap> gaps) {
  if (betas.size() != gaps.size()) throw std::invalid_argument("delta_sum: one beta per gap required");
  Rational s = 0;
  for (std::size_t i = 0; i < gaps.size(); ++i) s += betas[i] + 2 * gaps[i].eps * (1 - abs(gaps[i].w));
  return s;
}

NonconvexityGap nonconvexity_gap(const CounterexampleParams& params) {
  NonconvexityGap g;
  g.direct = eval_f_exact(params, -1, -1) + eval_f_exact(params, 1, 1) - 2 * eval_f_exact(params, 0, 0);
  g.delta_sum = delta_sum(params.betas(), params.gaps().gaps());
  g.closed_form = Rational(-4, 3) + 4 * g.delta_sum;
  if (g.direct != g.closed_form) {
    throw std::logic_error("nonconvexity_gap: direct value " + to_string(g.direct) + " != closed form " +
                           to_string(g.closed_form));
  }
  return g;
}

// --- parameter construction --------------------------------------------------------

CounterexampleParams build_params(const GapList& gaps, BetaPolicy policy, const Rational& cap_margin) {
  const std::size_t n = gaps.size();
  std::vector<Rational> betas(n);
  if (policy == BetaPolicy::Uniform) {
    if (n < 21) throw TooFewGaps("build_params: uniform betas need at least 21 gaps, got " + std::to_string(n));
    std::fill(betas.begin(), betas.end(), Rational(1, 4 * static_cast<long long>(n)));
    return CounterexampleParams(gaps, std::move(betas));
  }

  if (!(cap_margin > 0 && cap_margin < kBetaCap)) {
    throw std::invalid_argument("build_params: cap_margin must lie in (0, 1/80)");
  }
  const Rational cap = kBetaCap - cap_margin;
  if (n * cap < Rational(1, 4)) {
    throw InfeasibleCap("build_params: " + std::to_string(n) + " gaps at cap " + to_string(cap) +
                        " cannot carry 1/4");
  }
  // Water filling: split what is left over the uncapped gaps by eps.
  std::vector<bool> capped(n, false);
  for (;;) {
    Rational remaining(1, 4);
    Rational weight = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (capped[i]) {
        remaining -= cap;
      } else {
        weight += gaps[i].eps;
      }
    }
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (capped[i]) {
        betas[i] = cap;
        continue;
      }
      betas[i] = remaining * gaps[i].eps / weight;
      if (betas[i] > cap) {
        capped[i] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return CounterexampleParams(gaps, std::move(betas));
}

void write_slice_csv(std::ostream& out, const CounterexampleParams& params, Point2 p0, Point2 v,
                     std::span<const double> ts) {
  out << "t,f\n";
  for (const double t : ts) out << format_double(t) << ',' << format_double(eval_f(params, p0 + t * v)) << '\n';
}

}  // namespace crem
