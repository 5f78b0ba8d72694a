#include "crem/convexity_checks.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace crem {
namespace {

const Box kSquare{-1, -1, 1, 1};

double neg_xy(Point2 p) { return -p.x * p.y; }
double sum_sq(Point2 p) { return p.x * p.x + p.y * p.y; }
double abs_sum(Point2 p) { return std::abs(p.x) + std::abs(p.y); }

TEST(Midpoint, ConvexFunctionsHaveNoViolation) {
  for (const Fn2& f : {Fn2(sum_sq), Fn2(abs_sum), Fn2([](Point2 p) { return std::max(p.x + p.y, 0.0); })}) {
    const auto scan = midpoint_violation_scan(f, kSquare, 100000, 1, 1e-12);
    EXPECT_EQ(scan.verdict, Verdict::Pass);
    ASSERT_TRUE(scan.worst.has_value());
    EXPECT_LE(scan.worst->violation, 1e-12);
  }
}

TEST(Midpoint, DiagonalOfNegXy) {
  EXPECT_DOUBLE_EQ(midpoint_violation(neg_xy, {-1, -1}, {1, 1}), 1.0);
  const auto scan = midpoint_violation_scan(neg_xy, kSquare, 1000, 3, 1e-9);
  EXPECT_EQ(scan.verdict, Verdict::Violation);
  ASSERT_TRUE(scan.worst.has_value());
  // The witness replays.
  EXPECT_DOUBLE_EQ(midpoint_violation(neg_xy, scan.worst->p, scan.worst->q), scan.worst->violation);
}

TEST(Midpoint, SegmentFamily) {
  const std::vector<Segment2> segs{{{-1, -1}, {1, 1}}, {{-1, 1}, {1, -1}}};
  const auto scan = midpoint_violation_scan(neg_xy, segs, 50, 5, 1e-9);
  EXPECT_EQ(scan.verdict, Verdict::Violation);
  EXPECT_EQ(scan.samples, 100U);
}

TEST(SeparateConvexity, Examples) {
  EXPECT_EQ(separate_convexity_check(neg_xy, kSquare, 20, 50, 1, 1e-12).verdict, Verdict::Pass);
  const auto bad = separate_convexity_check([](Point2 p) { return p.x * p.x - p.y * p.y; }, kSquare, 20, 50, 1);
  EXPECT_EQ(bad.verdict, Verdict::Violation);
  ASSERT_TRUE(bad.worst.has_value());
  EXPECT_DOUBLE_EQ(bad.worst->p.x, bad.worst->q.x);  // a vertical chord
  EXPECT_EQ(
      separate_convexity_check([](Point2 p) { return std::max(p.x + p.y, 0.0); }, kSquare, 20, 50, 1, 1e-12).verdict,
            Verdict::Pass);
}

TEST(Sverak, NegXyMatchesClosedForm) {
  const auto probe = sverak_probe(neg_xy, 0.0);
  EXPECT_EQ(probe.verdict, Verdict::Pass);
  ASSERT_EQ(probe.windows.size(), 20U);
  for (const auto& w : probe.windows) {
    ASSERT_GT(w.resolved, 0U);
    // r(t) = -2t, so the window sup sits at its smallest resolved t.
    EXPECT_NEAR(w.sup, -2.0 * w.t_at_sup, 1e-9);
    EXPECT_LE(w.sup, 0.0);
  }
  for (std::size_t i = 1; i < probe.windows.size(); ++i) EXPECT_GE(probe.windows[i].sup, probe.windows[i - 1].sup);
}

TEST(Sverak, AffineIsZero) {
  const auto probe = sverak_probe([](Point2 p) { return 3 * p.x - 2 * p.y + 1; }, 0.3);
  EXPECT_EQ(probe.verdict, Verdict::Pass);
  for (const auto& w : probe.windows) EXPECT_NEAR(w.sup, 0.0, 1e-6);
}

TEST(Sverak, AbsSumHasConstantFour) {
  const auto probe = sverak_probe(abs_sum, 0.0);
  EXPECT_EQ(probe.verdict, Verdict::Pass);
  for (const auto& w : probe.windows) EXPECT_NEAR(w.sup, 4.0, 1e-9);
}

TEST(Sverak, ConcaveDiagonalFails) {
  const auto probe = sverak_probe([](Point2 p) { return -std::abs(p.x + p.y); }, 0.0);
  EXPECT_EQ(probe.verdict, Verdict::Violation);
}

TEST(Sverak, LevelLimitAndCsv) {
  SverakOptions o;
  o.levels = 41;
  EXPECT_THROW(sverak_probe(neg_xy, 0.0, o), std::invalid_argument);
  o.levels = 3;
  o.per_window = 4;
  const auto probe = sverak_probe(neg_xy, 0.0, o);
  std::ostringstream os;
  probe.write_csv(os);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, 4), "t,r\n");
  EXPECT_EQ(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')), probe.samples.size() + 1);
}

TEST(Sverak, SeparatelyConvexFunctionsPass) {
  // Separately convex f passes the diagonal probe.
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const Fn2 f = [=](Point2 p) { return a * p.x * p.y + std::abs(p.x - b) + (p.y - c) * (p.y - c); };
    ASSERT_EQ(separate_convexity_check(f, kSquare, 10, 40, 1, 1e-12).verdict, Verdict::Pass);
    for (double x : {-0.5, 0.0, 0.25, 0.6}) EXPECT_EQ(sverak_probe(f, x).verdict, Verdict::Pass) << trial << " " << x;
  }
}

TEST(SigmaRho, Examples) {
  const std::vector<double> ts{0.5, 0.25, 0.125};
  auto r = sigma_rho_check(neg_xy, ts);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  for (const auto& row : r.rows) {
    EXPECT_DOUBLE_EQ(row.sigma, 2 * row.t * row.t);
    EXPECT_DOUBLE_EQ(row.rho, -2 * row.t * row.t);
  }
  r = sigma_rho_check(sum_sq, ts);
  for (const auto& row : r.rows) {
    EXPECT_DOUBLE_EQ(row.sigma, 4 * row.t * row.t);
    EXPECT_DOUBLE_EQ(row.rho, 4 * row.t * row.t);
  }
  r = sigma_rho_check([](Point2 p) { return 2 * p.x + 5 * p.y + 7; }, ts);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_NEAR(r.min_sum, 0.0, 1e-12);
  EXPECT_EQ(sigma_rho_check(neg_xy, {}).verdict, Verdict::Inconclusive);
  EXPECT_EQ(sigma_rho_check([](Point2 p) { return -sum_sq(p); }, ts).verdict, Verdict::Violation);
}

TEST(Reports, MidpointJson) {
  const auto scan = midpoint_violation_scan(neg_xy, kSquare, 10, 1, 1e-9);
  const Json j = scan.to_json();
  EXPECT_EQ(j.at("verdict"), "VIOLATION");
  EXPECT_TRUE(j.contains("worst"));
}

}  // namespace
}  // namespace crem
