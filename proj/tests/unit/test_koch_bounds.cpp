#include "crem/koch_bounds.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace crem {
namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

TEST(KochProduct, Examples) {
  EXPECT_EQ(koch_product(0), 1);
  EXPECT_EQ(koch_product_closed_form(0), 1);
  EXPECT_EQ(koch_product(1), q(3, 2));
  EXPECT_EQ(koch_product(2), q(9, 5));
  EXPECT_EQ(koch_ratio(0), q(3, 2));
  EXPECT_EQ(koch_ratio(1), q(6, 5));
}

TEST(KochProduct, ClosedFormThroughThirty) {
  Rational p = 1;
  for (unsigned k = 0; k <= 30; ++k) {
    EXPECT_EQ(koch_product(k), p);
    EXPECT_EQ(koch_product(k), Rational(2 * pow3(k), pow3(k) + 1));
    p *= Rational(pow3(k + 1) + 3, pow3(k + 1) + 1);
  }
  EXPECT_THROW(koch_product(65), std::out_of_range);
}

TEST(KochLowerBound, Examples) {
  EXPECT_EQ(koch_lower_bound(1), q(5, 2));
  EXPECT_EQ(koch_lower_bound(2), q(26, 5));
  EXPECT_EQ(koch_lower_bound(3), q(607, 70));
  EXPECT_THROW(koch_lower_bound(0), std::out_of_range);
}

TEST(KochLowerBound, AtLeastTwoKAndIncreasing) {
  Rational prev = 0;
  for (unsigned k = 1; k <= 30; ++k) {
    const Rational l = koch_lower_bound(k);
    EXPECT_GE(l, 2 * k);
    EXPECT_GT(l, prev);
    prev = l;
  }
}

TEST(Recurrence, Examples) {
  EXPECT_EQ(recurrence_propagate(1, 1), q(3, 2));
  EXPECT_EQ(recurrence_propagate(1, 2), 6);
  EXPECT_LT(recurrence_propagate(4, 1), recurrence_propagate(4, q(3, 2)));
  EXPECT_THROW(recurrence_propagate(3, q(1, 2)), std::invalid_argument);
}

TEST(Recurrence, SymbolicExpansionOracle) {
  for (unsigned k = 1; k <= 20; ++k) {
    const auto [a, b] = oracle::koch_affine_expansion(k);
    for (const Rational& t : {q(1), q(3, 2), q(7)}) {
      EXPECT_EQ(recurrence_propagate(k, t), a * t + b);
      EXPECT_EQ(recurrence_expansion(k, t), a * t + b);
    }
  }
}

TEST(Recurrence, ReconcilesWithLowerBound) {
  const Rational offsets[] = {q(1), q(14, 5), q(179, 35)};
  for (unsigned k = 1; k <= 20; ++k) {
    EXPECT_EQ(koch_lower_bound(k), recurrence_propagate(k, 1) + reconciliation_offset(k));
    if (k <= 3) {
      EXPECT_EQ(reconciliation_offset(k), offsets[k - 1]);
    }
  }
}

TEST(Landmarks, Examples) {
  const auto l0 = landmarks(0);
  EXPECT_EQ(l0.b.x, (Surd3{q(1, 2), 0}));
  EXPECT_EQ(l0.b.y, (Surd3{0, q(-1, 3)}));
  EXPECT_EQ(l0.z.x, (Surd3{0, 0}));
  EXPECT_EQ(l0.z.y, (Surd3{0, q(1, 3)}));
  for (unsigned i = 0; i < 8; ++i) {
    const auto l = landmarks(i);
    EXPECT_EQ(l.a.y, l.b.y);
    const Surd3 dx = l.a.x - l.b.x;
    EXPECT_EQ(dx.b, 0);
    EXPECT_EQ(abs(dx.a), Rational(1, 2 * pow3(i)));
  }
}

TEST(Landmarks, CorrectedU) {
  for (unsigned i = 1; i < 6; ++i) {
    const auto l = landmarks(i, ULandmark::Corrected);
    EXPECT_EQ(l.u.x, (Surd3{Rational(1, 2 * pow3(i - 1)), 0}));
    EXPECT_EQ(l.u.y, (Surd3{0, Rational(-1, pow3(i + 1))}));
    EXPECT_EQ(landmarks(i).u.x, landmarks(i).b.x);
  }
}

TEST(Surd3, Arithmetic) {
  const Surd3 r3{0, 1};
  EXPECT_EQ(r3 * r3, (Surd3{3, 0}));
  EXPECT_NEAR((Surd3{1, 1}).to_double(), 1 + std::sqrt(3.0), 1e-15);
}

TEST(Table, CsvAndJson) {
  const auto rows = koch_table(10);
  ASSERT_EQ(rows.size(), 10U);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.at_least_2k);
    EXPECT_TRUE(r.reconciled);
  }
  std::ostringstream os;
  write_bounds_csv(os, rows);
  EXPECT_EQ(os.str().substr(0, 7), "k,L,2k\n");
  EXPECT_EQ(koch_table_json(rows).size(), 10U);
}

}  // namespace
}  // namespace crem
