#include "crem/convexity_checks.hpp"
#include "crem/counterexample.hpp"
#include "crem/errors.hpp"
#include "crem/sampling.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

namespace crem {
namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

CounterexampleParams standard_params() { return build_params(fat_cantor(q(1, 12), 5).gaps, BetaPolicy::Uniform); }

std::vector<Rational> betas_of(const CounterexampleParams& p) { return {p.betas().begin(), p.betas().end()}; }
std::vector<Gap> gaps_of(const CounterexampleParams& p) { return {p.gaps().gaps().begin(), p.gaps().gaps().end()}; }

TEST(Stripe, KnownValues) {
  EXPECT_EQ(eval_g(1, 1, 0, {0, 0}), 0.0);
  EXPECT_EQ(eval_g(1, 1, 0, {2, 0}), 3.0);
  // C^0 at s = eps: both branches give beta y^2 + eps^2.
  const Rational beta(1, 3), eps(1, 5), w(1, 2), y(7, 10);
  const Rational x = w + eps;
  EXPECT_EQ(stripe_g<Rational>(beta, eps, w, x, y), beta * y * y + eps * eps);
  EXPECT_EQ(oracle::stripe_value(beta, eps, w, x, y), beta * y * y + eps * eps);
  EXPECT_EQ(eval_h(0.5, 0.1, 0.3, {0.7, 0.2}), eval_g(0.5, 0.1, 0.3, {0.2, 0.7}));
}

TEST(Outer, KnownValues) {
  EXPECT_EQ(outer_f1<Rational>(1, 1), q(1, 12));
  EXPECT_EQ(outer_f1<Rational>(0, 2), 4);
  EXPECT_EQ(outer_f<Rational>(2, 0, -2), 4);
  EXPECT_DOUBLE_EQ(eval_outer(1, {1, 1}), 1.0 / 12);
  EXPECT_THROW(eval_outer(5, {0, 0}), std::invalid_argument);
}

TEST(Params, UniformNeedsTwentyOneGaps) {
  const auto fc = fat_cantor(q(1, 12), 5);
  std::vector<Gap> gaps(fc.gaps.gaps().begin(), fc.gaps.gaps().begin() + 21);
  const auto p = build_params(GapList(gaps), BetaPolicy::Uniform);
  for (const auto& b : p.betas()) EXPECT_EQ(b, q(1, 84));
  gaps.pop_back();
  EXPECT_THROW(build_params(GapList(gaps), BetaPolicy::Uniform), TooFewGaps);
}

TEST(Params, ProportionalEqualLengths) {
  std::vector<Gap> gaps;
  for (int i = 0; i < 100; ++i) gaps.push_back({q(10 + 2 * i, 1000), q(1, 5000)});
  const auto p = build_params(GapList(gaps), BetaPolicy::ProportionalCapped);
  for (const auto& b : p.betas()) EXPECT_EQ(b, q(1, 400));
}

TEST(Params, ProportionalCappedRespectsCapAndSum) {
  const auto p = build_params(fat_cantor(q(1, 12), 6).gaps, BetaPolicy::ProportionalCapped);
  Rational sum = 0;
  for (const auto& b : p.betas()) {
    EXPECT_GT(b, 0);
    EXPECT_LE(b, q(1, 80) - q(1, 800));
    sum += b;
  }
  EXPECT_EQ(sum, q(1, 4));
}

TEST(Params, InfeasibleCap) {
  const auto fc = fat_cantor(q(1, 12), 5);
  std::vector<Gap> gaps(fc.gaps.gaps().begin(), fc.gaps.gaps().begin() + 21);
  EXPECT_THROW(build_params(GapList(gaps), BetaPolicy::ProportionalCapped, q(1, 100)), InfeasibleCap);
}

TEST(Params, ConstructorValidation) {
  const auto fc = fat_cantor(q(1, 12), 5);
  std::vector<Rational> betas(fc.gaps.size(), Rational(1, 4 * fc.gaps.size()));
  EXPECT_NO_THROW(CounterexampleParams(fc.gaps, betas));
  betas[0] += q(1, 1000);
  EXPECT_THROW(CounterexampleParams(fc.gaps, betas), std::invalid_argument);
  betas.pop_back();
  EXPECT_THROW(CounterexampleParams(fc.gaps, betas), std::invalid_argument);
}

TEST(Params, JsonRoundTrip) {
  const auto p = standard_params();
  const auto back = CounterexampleParams::from_json(p.to_json());
  ASSERT_EQ(back.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(back.betas()[i], p.betas()[i]);
    EXPECT_EQ(back.gaps()[i], p.gaps()[i]);
  }
}

TEST(EvalF, OriginByBranchSelection) {
  const auto p = standard_params();
  Rational expected = 0;
  for (const auto& g : p.gaps().gaps()) expected += 2 * (2 * g.eps * abs(g.w) - g.eps * g.eps);
  EXPECT_EQ(eval_f_exact(p, 0, 0), expected);
  EXPECT_NEAR(eval_f(p, {0, 0}), to_double(expected), 1e-15);
}

TEST(EvalF, ExactAgreesWithTermwiseOracle) {
  const auto p = standard_params();
  const auto betas = betas_of(p);
  const auto gaps = gaps_of(p);
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> num(-3000, 3000);
  for (int i = 0; i < 200; ++i) {
    const Rational x(num(rng), 1000), y(num(rng), 1000);
    EXPECT_EQ(eval_f_exact(p, x, y), oracle::counterexample_value(betas, gaps, x, y));
    EXPECT_NEAR(eval_f(p, {to_double(x), to_double(y)}), to_double(eval_f_exact(p, x, y)), 1e-12);
  }
  EXPECT_TRUE(std::isfinite(eval_f(p, {3, 3})));
}

TEST(TailBound, Examples) {
  auto t = tail_bound(0, 0, 3);
  EXPECT_EQ(t.lower, 0);
  EXPECT_EQ(t.upper, 0);
  t = tail_bound(q(1, 100), q(1, 1000), 2);
  EXPECT_EQ(t.upper, Rational(96, 1000));
  EXPECT_EQ(t.lower, -2 * q(1, 1000) * q(1, 1000));
  EXPECT_LE(t.upper, tail_bound(q(1, 100), q(1, 1000), 3).upper);
  EXPECT_THROW(tail_bound(0, 0, q(1, 2)), std::invalid_argument);
}

TEST(Hessian, MatchesFiniteDifferences) {
  const auto p = standard_params();
  const Fn2 f = [&](Point2 x) { return eval_f(p, x); };
  const double h = 1e-4;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int tested = 0;
  while (tested < 300) {
    const Point2 x{u(rng), u(rng)};
    const auto r = hessian_at(p, x);
    if (!std::holds_alternative<Hessian2>(r)) continue;
    // Keep the difference stencil on one branch.
    if (oracle::branch_distance(p, x) <= 2 * h) continue;
    const auto& H = std::get<Hessian2>(r);
    const auto fd = oracle::fd_hessian(f, x, h);
    const double scale = std::max({1.0, std::abs(H.fxx), std::abs(H.fyy), std::abs(H.fxy)});
    EXPECT_NEAR(fd.fxx, H.fxx, 1e-5 * scale);
    EXPECT_NEAR(fd.fyy, H.fyy, 1e-5 * scale);
    EXPECT_NEAR(fd.fxy, H.fxy, 1e-5 * scale);
    ++tested;
  }
}

TEST(Hessian, OuterPointHasMinusOneCrossTerm) {
  const auto p = standard_params();
  const auto r = hessian_at(p, {0, 2});
  ASSERT_TRUE(std::holds_alternative<Hessian2>(r));
  EXPECT_EQ(std::get<Hessian2>(r).fxy, -1.0);
  EXPECT_GE(std::get<Hessian2>(r).fyy, 8.0);
}

TEST(Hessian, StripeBoundaryReported) {
  // Dyadic gap ends so the boundary is exactly representable.
  std::vector<Gap> gaps;
  for (int i = 0; i < 24; ++i) gaps.push_back({q(2 * i + 1, 64), q(1, 1024)});
  const auto p = build_params(GapList(gaps), BetaPolicy::Uniform);
  const double x = to_double(p.gaps()[0].right());
  ASSERT_EQ(exact(x), p.gaps()[0].right());
  const auto r = hessian_at(p, {x, 0.123});
  ASSERT_TRUE(std::holds_alternative<OnBoundary>(r));
  EXPECT_EQ(std::get<OnBoundary>(r).hits.front().line, BoundaryHit::Line::StripeVertical);
}

TEST(Gluing, ValuesAndGradientsContinuousAcrossBranchLines) {
  const auto p = standard_params();
  const Fn2 f = [&](Point2 x) { return eval_f(p, x); };
  const double d = 1e-7;
  auto check = [&](Point2 at, Point2 normal) {
    const Point2 lo = at - d * normal, hi = at + d * normal;
    // A kink would leave a gap of order d between f(at) and the average.
    EXPECT_NEAR(f(at), 0.5 * (f(lo) + f(hi)), 1e-11);
    // One-sided slopes along the normal from each side.
    const double s_lo = (f(at) - f(at - 2 * d * normal)) / (2 * d);
    const double s_hi = (f(at + 2 * d * normal) - f(at)) / (2 * d);
    EXPECT_NEAR(s_lo, s_hi, 1e-5);
  };
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (double e : {p.left_d()[i], p.right_d()[i]}) {
      check({e, u(rng)}, {1, 0});
      check({u(rng), e}, {0, 1});
    }
  }
  for (double e : {-1.0, 1.0}) {
    check({e, u(rng)}, {1, 0});
    check({u(rng), e}, {0, 1});
  }
}

TEST(Certificate, OuterTop) {
  const auto p = standard_params();
  const auto c = certify_local_convexity(p, {0, 2});
  EXPECT_EQ(c.kase, CertCase::OuterTop);
  EXPECT_EQ(c.det_bound, q(1, 3));
  EXPECT_GT(c.radius, 0.0);
}

TEST(Certificate, PointInsideObstacleRejected) {
  const auto p = standard_params();
  EXPECT_TRUE(in_obstacle(p, {0, 0}));
  EXPECT_THROW(certify_local_convexity(p, {0, 0}), PointInsideObstacle);
}

TEST(Certificate, DetBoundFormula) {
  const auto p = standard_params();
  const double w = p.w_d()[3];
  const auto c = certify_local_convexity(p, {w, 0.0});
  EXPECT_EQ(c.kase, CertCase::StripeBased);
  EXPECT_GT(c.alpha_F, q(9, 40));
  EXPECT_EQ(c.det_bound, 4 * (c.alpha_F + c.alpha_F * c.alpha_F) - 1);
  EXPECT_GT(c.det_bound, Rational(1025, 10000));
  // With no exclusions alpha = 1/4 and the bound is 1/4.
  EXPECT_EQ(4 * (q(1, 4) + q(1, 16)) - 1, q(1, 4));
  EXPECT_EQ(4 * (q(9, 40) + q(81, 1600)) - 1, Rational(1025, 10000));
}

TEST(Certificate, RandomPointsCertifyAndCheck) {
  const auto p = standard_params();
  Halton h(23);
  std::size_t issued = 0;
  for (std::uint64_t i = 0; issued < 300; ++i) {
    const Point2 x{4 * h(i, 0) - 2, 4 * h(i, 1) - 2};
    if (in_obstacle(p, x)) continue;
    const auto c = certify_local_convexity(p, x);
    ++issued;
    if (c.kase == CertCase::StripeBased) {
      EXPECT_GT(c.alpha_F, q(9, 40));
      EXPECT_EQ(c.det_bound, 4 * (c.alpha_F + c.alpha_F * c.alpha_F) - 1);
    }
    const auto chk = check_certificate(p, c, 50, mix_seed(23, i));
    EXPECT_EQ(chk.failures, 0U) << x.x << "," << x.y;
    EXPECT_GE(chk.min_det_margin, -1e-9);
  }
}

TEST(Certificate, PointOnTransposedBoundaryExcludesThatStripe) {
  // Mandatory exclusions remove at most two betas below 1/80 each, so
  // alpha stays above 9/40 and UnsatisfiableF cannot fire for valid params.
  const auto p = standard_params();
  const double x = p.w_d()[0];
  const double y = p.right_d()[5];
  const auto c = certify_local_convexity(p, {x, y});
  EXPECT_EQ(c.kase, CertCase::StripeBased);
  EXPECT_EQ(std::count(c.subfamily.begin(), c.subfamily.end(), std::size_t{5}), 0);
  EXPECT_GT(c.alpha_F, q(9, 40));
  EXPECT_GT(c.radius, 0.0);
}

TEST(NonconvexityGap, StandardParams) {
  const auto p = standard_params();
  const auto g = nonconvexity_gap(p);
  EXPECT_EQ(g.direct, g.closed_form);
  EXPECT_LT(g.direct, 0);
  EXPECT_EQ(g.direct, q(-11, 64));
  const auto betas = betas_of(p);
  const auto gaps = gaps_of(p);
  const Rational direct = oracle::counterexample_value(betas, gaps, -1, -1) +
                          oracle::counterexample_value(betas, gaps, 1, 1) -
                          2 * oracle::counterexample_value(betas, gaps, 0, 0);
  EXPECT_EQ(direct, g.direct);
}

TEST(NonconvexityGap, OuterTermsContributeOneThird) {
  Rational outer = 0;
  for (int i = 1; i <= 4; ++i) outer += outer_f<Rational>(i, -1, -1) + outer_f<Rational>(i, 1, 1);
  // Half of it enters the midpoint deficit.
  EXPECT_EQ(outer / 2, q(1, 3));
}

TEST(NonconvexityGap, ClosedFormPlugIn) {
  // N = 24, beta 1/96, eps 1/1000, |w| = 1/2: the closed form only.
  std::vector<Rational> betas(24, q(1, 96));
  std::vector<Gap> gaps(24, Gap{q(1, 2), q(1, 1000)});
  EXPECT_EQ(delta_sum(betas, gaps), Rational(274, 1000));
  EXPECT_EQ(closed_form_gap(betas, gaps), q(-4, 3) + Rational(1096, 1000));
}

TEST(NonconvexityGap, NegativeForManyValidParams) {
  for (unsigned d = 5; d <= 8; ++d) {
    for (const Rational& budget : {q(1, 12), q(1, 50), q(1, 1000)}) {
      for (BetaPolicy pol : {BetaPolicy::Uniform, BetaPolicy::ProportionalCapped}) {
        const auto p = build_params(fat_cantor(budget, d).gaps, pol);
        const auto g = nonconvexity_gap(p);
        EXPECT_LT(g.direct, 0);
        EXPECT_EQ(g.direct, g.closed_form);
      }
    }
  }
}

TEST(SliceCsv, Rows) {
  const auto p = standard_params();
  std::ostringstream os;
  const std::vector<double> ts{-1, 0, 1};
  write_slice_csv(os, p, {0, 0}, {1, 1}, ts);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, 4), "t,f\n");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);
}

}  // namespace
}  // namespace crem
