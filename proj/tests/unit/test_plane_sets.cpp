#include "crem/errors.hpp"
#include "crem/plane_sets.hpp"
#include "crem/sampling.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace crem {
namespace {

constexpr double kUlpSlack = 1e-15;

void expect_box_near(const Box& got, const Box& want) {
  EXPECT_NEAR(got.xmin, want.xmin, kUlpSlack);
  EXPECT_NEAR(got.ymin, want.ymin, kUlpSlack);
  EXPECT_NEAR(got.xmax, want.xmax, kUlpSlack);
  EXPECT_NEAR(got.ymax, want.ymax, kUlpSlack);
}

double total_area(const std::vector<Piece>& pieces) {
  double a = 0.0;
  for (const auto& p : pieces) a += p.box.area();
  return a;
}

TEST(ProductApprox, UnitSquare) {
  const IntervalSet unit({{0, 1}});
  const auto s = product_approx(unit, unit);
  const auto cover = s->cover(0);
  ASSERT_EQ(cover->size(), 1U);
  expect_box_near(cover->front().box, {0, 0, 1, 1});
  EXPECT_EQ(s->haus_bound(0), 0.0);
  EXPECT_TRUE(s->cover_is_exact());
}

TEST(ProductApprox, CantorTimesCantor) {
  const auto c1 = ternary_cantor(1);
  const auto s = product_approx(c1, c1);
  const auto cover = s->cover(0);
  EXPECT_EQ(cover->size(), 4U);
  EXPECT_NEAR(total_area(*cover), 4.0 / 9.0, 1e-14);
}

TEST(ProductApprox, EmptyFactorRejected) {
  EXPECT_THROW(product_approx(IntervalSet({{0, 1}}), IntervalSet()), std::invalid_argument);
}

TEST(HoleyStaircase, DepthOneCover) {
  const auto s = holey_staircase();
  const auto cover = s->cover(1);
  ASSERT_EQ(cover->size(), 2U);
  expect_box_near((*cover)[0].box, {0, 0, 1.0 / 3, 0.5});
  expect_box_near((*cover)[1].box, {2.0 / 3, 0.5, 1, 1});
}

TEST(HoleyStaircase, CountsAndEndpoints) {
  const auto s = holey_staircase();
  for (unsigned g = 0; g <= 12; ++g) {
    const auto cover = s->cover(g);
    EXPECT_EQ(cover->size(), std::size_t{1} << g);
    EXPECT_EQ(s->point_clearance({0, 0}, g), 0.0);
    EXPECT_EQ(s->point_clearance({1, 1}, g), 0.0);
    EXPECT_LE(s->haus_bound(g + 1), s->haus_bound(g));
    EXPECT_DOUBLE_EQ(s->haus_bound(g), std::hypot(std::pow(3.0, -double(g)), std::pow(2.0, -double(g))));
  }
}

TEST(HoleyStaircase, CoversAreNested) {
  const auto s = holey_staircase();
  for (unsigned g = 0; g < 10; ++g) {
    const auto outer = s->cover(g);
    for (const auto& p : *s->cover(g + 1)) {
      bool inside = false;
      for (const auto& o : *outer) inside = inside || o.box.contains(p.box);
      EXPECT_TRUE(inside);
    }
  }
}

TEST(HoleyStaircase, CoverContainsCantorGraphPoints) {
  const auto s = holey_staircase();
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    // A point of C from random ternary digits in {0, 2}; h reads them as bits.
    Rational x = 0, h = 0, p3 = 1, p2 = 1;
    for (int j = 0; j < 34; ++j) {
      p3 /= 3;
      p2 /= 2;
      if (rng() & 1U) {
        x += 2 * p3;
        h += p2;
      }
    }
    for (unsigned g : {1U, 5U, 12U, 20U}) EXPECT_EQ(s->point_clearance({to_double(x), to_double(h)}, g), 0.0);
  }
}

TEST(KochPolyline, EndpointsCountsAndApex) {
  for (unsigned g = 0; g <= 6; ++g) {
    const auto poly = koch_polyline(g);
    ASSERT_EQ(poly.size(), (std::size_t{1} << (2 * g)) + 1);
    EXPECT_EQ(poly.front(), (Point2{0, 0}));
    EXPECT_NEAR(poly.back().x, 3.0, 1e-12);
    EXPECT_NEAR(poly.back().y, 0.0, 1e-12);
    double length = 0.0;
    for (std::size_t i = 1; i < poly.size(); ++i) {
      const double seg = distance(poly[i - 1], poly[i]);
      EXPECT_NEAR(seg, std::pow(3.0, 1.0 - g), 1e-12);
      length += seg;
    }
    EXPECT_NEAR(length, 3.0 * std::pow(4.0 / 3.0, g), 1e-9);
  }
  const auto p1 = koch_polyline(1);
  EXPECT_NEAR(p1[2].x, 1.5, 1e-15);
  EXPECT_NEAR(p1[2].y, std::numbers::sqrt3 / 2, 1e-15);
  EXPECT_THROW(koch_polyline(13), std::invalid_argument);
}

TEST(KochCurve, CoverContainsDeeperPolylines) {
  const auto s = koch_curve();
  const auto fine = koch_polyline(9);
  for (unsigned g = 0; g <= 6; ++g)
    for (std::size_t i = 0; i < fine.size(); i += 97) EXPECT_EQ(s->point_clearance(fine[i], g), 0.0);
}

TEST(SegmentClearance, KnownValues) {
  const auto s = holey_staircase();
  EXPECT_NEAR(segment_clearance({{-1, -1}, {-1, 1}}, *s, 1), 1.0, 1e-15);
  EXPECT_EQ(segment_clearance({{0.1, -1}, {0.1, 2}}, *s, 1), 0.0);
  // The horizontal at y = 1/4 from x = 1/3 to 2/3 starts on the edge of
  // [0,1/3] x [0,1/2]: touching, so clearance 0.
  EXPECT_EQ(segment_clearance({{1.0 / 3, 0.25}, {2.0 / 3, 0.25}}, *s, 1), 0.0);
  EXPECT_NEAR(segment_clearance({{0.4, 0.25}, {0.6, 0.25}}, *s, 1), 0.4 - 1.0 / 3, 1e-15);
}

TEST(SegmentClearance, MatchesBoxSearchOracle) {
  const auto s = holey_staircase();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  for (unsigned g : {1U, 3U, 6U}) {
    const auto cover = s->cover(g);
    for (int i = 0; i < 200; ++i) {
      const Segment2 seg{{u(rng), u(rng)}, {u(rng), u(rng)}};
      double ref = std::numeric_limits<double>::infinity();
      for (const auto& p : *cover) ref = std::min(ref, oracle::segment_box_distance_search(seg, p.box));
      EXPECT_NEAR(s->segment_clearance(seg, g), ref, 1e-9);
    }
  }
}

TEST(SegmentClearance, NondecreasingInDepth) {
  const auto s = holey_staircase();
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-0.25, 1.25);
  for (int i = 0; i < 1000; ++i) {
    const Segment2 seg{{u(rng), u(rng)}, {u(rng), u(rng)}};
    const unsigned g = 1 + i % 8;
    const double c = s->segment_clearance(seg, g);
    if (c > 0.0) {
      EXPECT_GE(s->segment_clearance(seg, g + 1), c);
    }
  }
}

TEST(PointIsClear, AgreesWithClearance) {
  const auto s = holey_staircase();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.1, 1.1);
  for (int i = 0; i < 500; ++i) {
    const Point2 p{u(rng), u(rng)};
    const unsigned g = 1 + i % 10;
    const double margin = 1e-3;
    EXPECT_EQ(s->point_is_clear(p, g, margin), s->point_clearance(p, g) > margin);
  }
}

TEST(LineTrace, VerticalTraceIsOneRectangleHigh) {
  const auto s = holey_staircase();
  const auto runs = s->line_trace({0.1, -1}, {0, 1}, 4);
  ASSERT_EQ(runs.size(), 1U);
  EXPECT_NEAR(runs[0].second - runs[0].first, 1.0 / 16, 1e-12);
}

TEST(LastGraphCrossing, ReferenceSegmentLandsInCantorSet) {
  const auto c = last_graph_crossing({{-1.0 / 3, 1.0 / 3}, {4.0 / 3, 2.0 / 3}}, 20);
  EXPECT_TRUE(is_inside(c.x_class));
  EXPECT_LE(std::abs(c.residual), 2 * std::ldexp(1.0, -20));
}

TEST(LastGraphCrossing, NoSignChangeBelowGraph) {
  EXPECT_THROW(last_graph_crossing({{-1, -1}, {2, -1}}, 10), NoSignChange);
}

TEST(LastGraphCrossing, NearVerticalThroughPlateau) {
  const auto c = last_graph_crossing({{0.5, 0}, {0.5 + 1e-9, 1}}, 20);
  EXPECT_NEAR(c.point.y, 0.5, 1e-9);
  EXPECT_NEAR(c.point.x, 0.5, 1e-9);
  EXPECT_FALSE(is_inside(c.x_class));
}

TEST(LastGraphCrossing, NegativeSlopeCanCrossOnPlateau) {
  // Endpoints within 1/4 of (-1/3,1/3) and (4/3,2/3); the segment passes
  // through (1/2,1/2) and meets graph(H) only there.
  const Segment2 seg{{-1.0 / 3, 0.5 + 1.0 / 24}, {4.0 / 3, 0.5 - 1.0 / 24}};
  EXPECT_LT(distance(seg.a, {-1.0 / 3, 1.0 / 3}), 0.25);
  EXPECT_LT(distance(seg.b, {4.0 / 3, 2.0 / 3}), 0.25);
  const auto c = last_graph_crossing(seg, 20);
  EXPECT_NEAR(c.point.x, 0.5, 1e-9);
  EXPECT_FALSE(is_inside(c.x_class));
}

TEST(LastGraphCrossing, ResidualBoundOnRandomSegments) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.25, 0.25);
  for (int i = 0; i < 200; ++i) {
    const Segment2 seg{{-1.0 / 3 + u(rng), 1.0 / 3 + u(rng)}, {4.0 / 3 + u(rng), 2.0 / 3 + u(rng)}};
    const unsigned depth = 10 + i % 10;
    const auto c = last_graph_crossing(seg, depth);
    EXPECT_LE(std::abs(c.residual), 2 * std::ldexp(1.0, -static_cast<int>(depth)));
  }
}

TEST(CoverCsv, HeaderAndRows) {
  std::ostringstream os;
  write_cover_csv(os, *holey_staircase()->cover(1));
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "xmin,ymin,xmax,ymax");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 3);
}

TEST(CoverMemo, SameObjectOnRepeat) {
  const auto s = holey_staircase();
  EXPECT_EQ(s->cover(5).get(), s->cover(5).get());
}

}  // namespace
}  // namespace crem
