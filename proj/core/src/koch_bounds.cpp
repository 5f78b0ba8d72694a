#include "crem/koch_bounds.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace crem {

double Surd3::to_double() const { return crem::to_double(a) + crem::to_double(b) * std::sqrt(3.0); }

std::string to_string(const Surd3& s) { return to_string(s.a) + " + " + to_string(s.b) + "*sqrt(3)"; }

namespace {

Rational inv_pow3(int n) {
  if (n >= 0) return Rational(BigInt(1), pow3(static_cast<unsigned>(n)));
  return Rational(pow3(static_cast<unsigned>(-n)));
}

Surd3 rat(const Rational& q) { return {q, 0}; }
Surd3 root3(const Rational& q) { return {0, q}; }

Json surd_json(const Surd3& s) {
  return Json{{"rational", rational_json(s.a)}, {"sqrt3", rational_json(s.b)}, {"approx", number_json(s.to_double())}};
}

Json point_json(const SurdPoint& p) { return Json{{"x", surd_json(p.x)}, {"y", surd_json(p.y)}}; }

void check_k(unsigned k, unsigned lo, const char* who) {
  if (k < lo || k > 64) {
    throw std::out_of_range(std::string(who) + ": k must be in " + std::to_string(lo) + "..64");
  }
}

// P(0..k).
std::vector<Rational> partial_products(unsigned k) {
  std::vector<Rational> p{Rational(1)};
  for (unsigned j = 0; j < k; ++j) p.push_back(p.back() * koch_ratio(j));
  return p;
}

}  // namespace

Json KochLandmarks::to_json() const {
  return Json{{"i", i},
              {"a", point_json(a)},
              {"b", point_json(b)},
              {"u", point_json(u)},
              {"z", point_json(z)},
              {"s", point_json(s)},
              {"p", point_json(p)}};
}

KochLandmarks landmarks(unsigned i, ULandmark u) {
  KochLandmarks L;
  L.i = i;
  const Rational half_step = inv_pow3(static_cast<int>(i)) / 2;  // 1/(2*3^i)
  const Rational depth = inv_pow3(static_cast<int>(i) + 1);      // coefficient of sqrt(3)
  L.a = {rat(0), root3(-depth)};
  L.b = {rat(half_step), root3(-depth)};
  L.u = u == ULandmark::AsPrinted ? L.b : SurdPoint{rat(3 * half_step), root3(-depth)};
  L.z = {rat(0), root3(Rational(1, 3))};
  L.s = {rat(half_step), root3(Rational(1, 3))};
  L.p = {rat(half_step), rat(0)};

  if (!(L.p.y == Surd3{})) throw std::logic_error("landmarks: p_i is off the x-axis");
  if (!(L.s.y == L.z.y)) throw std::logic_error("landmarks: s_i is not at height sqrt(3)/3");
  if (!(L.a.y == L.b.y)) throw std::logic_error("landmarks: a_i b_i is not horizontal");
  if (!(L.s.x == L.b.x)) throw std::logic_error("landmarks: s_i b_i is not vertical");
  return L;
}

Rational koch_ratio(unsigned i) {
  const BigInt t = pow3(i + 1);
  return Rational(t + 3, t + 1);
}

Rational koch_product_closed_form(unsigned k) {
  const BigInt t = pow3(k);
  return Rational(2 * t, t + 1);
}

Rational koch_product(unsigned k) {
  check_k(k, 0, "koch_product");
  const Rational p = partial_products(k).back();
  if (p != koch_product_closed_form(k)) throw std::logic_error("koch_product: product != closed form");
  return p;
}

Rational koch_lower_bound(unsigned k) {
  check_k(k, 1, "koch_lower_bound");
  const auto p = partial_products(k);
  Rational sum = 0;
  for (unsigned m = 0; m < k; ++m) sum += Rational(pow3(m)) * p[m];
  const Rational L = Rational(pow3(k)) * p[k] - 2 * sum;
  if (L < 2 * k) throw std::logic_error("koch_lower_bound: L(k) < 2k");
  return L;
}

Rational recurrence_propagate(unsigned k, const Rational& terminal) {
  check_k(k, 1, "recurrence_propagate");
  if (terminal < 1) throw std::invalid_argument("recurrence_propagate: terminal must be >= 1");
  Rational b = terminal;
  for (unsigned i = k; i-- > 0;) b = koch_ratio(i) * (3 * b - 2);
  return b;
}

Rational recurrence_expansion(unsigned k, const Rational& terminal) {
  check_k(k, 1, "recurrence_expansion");
  const auto p = partial_products(k);
  Rational sum = 0;
  for (unsigned m = 0; m < k; ++m) sum += Rational(pow3(m)) * p[m + 1];
  return Rational(pow3(k)) * p[k] * terminal - 2 * sum;
}

Rational reconciliation_offset(unsigned k) {
  check_k(k, 1, "reconciliation_offset");
  const auto p = partial_products(k);
  Rational sum = 0;
  for (unsigned m = 0; m < k; ++m) sum += Rational(pow3(m)) * (p[m + 1] - p[m]);
  return 2 * sum;
}

std::vector<KochRow> koch_table(unsigned k_max) {
  std::vector<KochRow> rows;
  for (unsigned k = 1; k <= k_max; ++k) {
    KochRow r;
    r.k = k;
    r.lower_bound = koch_lower_bound(k);
    r.propagated = recurrence_propagate(k, 1);
    r.offset = reconciliation_offset(k);
    r.at_least_2k = r.lower_bound >= 2 * k;
    r.reconciled = r.lower_bound == r.propagated + r.offset && r.propagated == recurrence_expansion(k, 1);
    rows.push_back(std::move(r));
  }
  return rows;
}

Json koch_table_json(std::span<const KochRow> rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    out.push_back(Json{{"k", r.k},
                       {"L", rational_json(r.lower_bound)},
                       {"L_approx", number_json(to_double(r.lower_bound))},
                       {"two_k", 2 * r.k},
                       {"propagated", rational_json(r.propagated)},
                       {"offset", rational_json(r.offset)},
                       {"at_least_2k", r.at_least_2k},
                       {"reconciled", r.reconciled}});
  }
  return out;
}

void write_bounds_csv(std::ostream& out, std::span<const KochRow> rows) {
  out << "k,L,2k\n";
  for (const auto& r : rows) out << r.k << ',' << to_string(r.lower_bound) << ',' << 2 * r.k << '\n';
}

}  // namespace crem
