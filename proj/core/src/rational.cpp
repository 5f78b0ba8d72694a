#include "crem/rational.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace crem {

Rational exact(double value) {
  if (!std::isfinite(value)) {
    throw std::domain_error("exact: non-finite double");
  }
  if (value == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  // mantissa in [0.5, 1): scale to a 53-bit integer.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational q{BigInt(scaled)};
  if (exponent > 0) {
    q *= Rational(pow2(static_cast<unsigned>(exponent)));
  } else if (exponent < 0) {
    q /= Rational(pow2(static_cast<unsigned>(-exponent)));
  }
  return q;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

double to_double_down(const Rational& q) {
  double d = to_double(q);
  while (exact(d) > q) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
  return d;
}

double to_double_up(const Rational& q) {
  double d = to_double(q);
  while (exact(d) < q) d = std::nextafter(d, std::numeric_limits<double>::infinity());
  return d;
}

std::string to_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw std::invalid_argument("parse_rational: empty integer in '" + std::string(whole) + "'");
  std::size_t start = 0;
  if (digits[0] == '-' || digits[0] == '+') start = 1;
  if (start == digits.size()) throw std::invalid_argument("parse_rational: bare sign in '" + std::string(whole) + "'");
  for (std::size_t i = start; i < digits.size(); ++i) {
    if (digits[i] < '0' || digits[i] > '9') {
      throw std::invalid_argument("parse_rational: bad digit in '" + std::string(whole) + "'");
    }
  }
  // Boost reads a leading 0 as an octal prefix.
  std::string_view magnitude = digits.substr(start);
  while (magnitude.size() > 1 && magnitude[0] == '0') magnitude.remove_prefix(1);
  BigInt value{std::string(magnitude)};
  return digits[0] == '-' ? BigInt(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const BigInt num = parse_integer(text.substr(0, slash), text);
    const BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("parse_rational: zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view int_part = text.substr(0, dot);
    const std::string_view frac_part = text.substr(dot + 1);
    const bool negative = !int_part.empty() && int_part[0] == '-';
    std::string digits(int_part);
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    digits += frac_part;
    BigInt scaled = parse_integer(digits, text);
    Rational q(scaled, boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac_part.size())));
    if (negative && q > 0) q = -q;
    return q;
  }
  return Rational(parse_integer(text, text));
}

BigInt pow3(unsigned n) { return boost::multiprecision::pow(BigInt(3), n); }
BigInt pow2(unsigned n) { return BigInt(1) << n; }

}  // namespace crem
