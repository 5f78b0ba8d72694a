#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace crem {

/// Exact big-integer rational.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exact conversion of a finite double (every finite double is a dyadic
/// rational). Throws std::domain_error on NaN or infinity.
Rational exact(double value);

/// Nearest double (round-to-nearest).
double to_double(const Rational& q);

/// Largest double <= q.
double to_double_down(const Rational& q);

/// Smallest double >= q.
double to_double_up(const Rational& q);

/// "num/den" in lowest terms; integers are still written with "/1".
std::string to_string(const Rational& q);

/// Parses "num/den", "num", or a plain decimal such as "0.125" (decimal
/// literals are converted exactly from their digits, not through double).
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// 3^n and 2^n as exact integers.
BigInt pow3(unsigned n);
BigInt pow2(unsigned n);

}  // namespace crem
