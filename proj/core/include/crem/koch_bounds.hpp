#pragma once

// Exact bounds along the central vertical line of the Koch curve. With
// r_i = (3^{i+1}+3)/(3^{i+1}+1) and P(m) = r_0 ... r_{m-1}:
//
//   L(k)      = 3^k P(k) - 2 sum_{m<k} 3^m P(m)
//   B_i       = r_i (3 B_{i+1} - 2),  B_k = terminal
//   B_0(k, T) = 3^k P(k) T - 2 sum_{m<k} 3^m P(m+1)
//
// and L(k) = B_0(k, 1) + 2 sum_{m<k} 3^m (P(m+1) - P(m)).

#include "crem/rational.hpp"
#include "crem/report.hpp"

#include <iosfwd>
#include <string>
#include <span>
#include <vector>

namespace crem {

/// a + b*sqrt(3) with rational a, b.
struct Surd3 {
  Rational a = 0;
  Rational b = 0;

  double to_double() const;
  friend Surd3 operator+(const Surd3& x, const Surd3& y) { return {x.a + y.a, x.b + y.b}; }
  friend Surd3 operator-(const Surd3& x, const Surd3& y) { return {x.a - y.a, x.b - y.b}; }
  friend Surd3 operator*(const Surd3& x, const Surd3& y) {
    return {x.a * y.a + 3 * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  friend bool operator==(const Surd3& x, const Surd3& y) { return x.a == y.a && x.b == y.b; }
};

std::string to_string(const Surd3& s);

struct SurdPoint {
  Surd3 x;
  Surd3 y;
};

/// The printed u_i repeats b_i. Corrected places u_i at (1/(2*3^(i-1)),
/// -sqrt(3)/3^(i+1)), the one position consistent with both convexity steps.
enum class ULandmark { AsPrinted, Corrected };

struct KochLandmarks {
  unsigned i = 0;
  SurdPoint a, b, u, z, s, p;

  Json to_json() const;
};

/// Throws std::logic_error if a structural identity fails (p_i on the
/// x-axis, s_i at height sqrt(3)/3, a_i b_i horizontal, s_i b_i vertical).
KochLandmarks landmarks(unsigned i, ULandmark u = ULandmark::AsPrinted);

/// r_i.
Rational koch_ratio(unsigned i);
/// 2*3^k / (3^k + 1).
Rational koch_product_closed_form(unsigned k);
/// P(k) by multiplication; asserts it equals the closed form. 0 <= k <= 64.
Rational koch_product(unsigned k);
/// L(k); asserts L(k) >= 2k. 1 <= k <= 64.
Rational koch_lower_bound(unsigned k);
/// B_0 by applying the recurrence downward. Requires terminal >= 1, k >= 1.
Rational recurrence_propagate(unsigned k, const Rational& terminal);
/// B_0(k, T) from its expanded closed form.
Rational recurrence_expansion(unsigned k, const Rational& terminal);
/// L(k) - B_0(k, 1) = 2 sum_{m<k} 3^m (P(m+1) - P(m)).
Rational reconciliation_offset(unsigned k);

struct KochRow {
  unsigned k = 0;
  Rational lower_bound;   // L(k)
  Rational propagated;    // B_0(k, 1)
  Rational offset;        // reconciliation_offset(k)
  bool at_least_2k = false;
  bool reconciled = false;  // L(k) == propagated + offset
};

std::vector<KochRow> koch_table(unsigned k_max);
Json koch_table_json(std::span<const KochRow> rows);
/// Columns k,L,2k with L as "num/den".
void write_bounds_csv(std::ostream& out, std::span<const KochRow> rows);

}  // namespace crem
