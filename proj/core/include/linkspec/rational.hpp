#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace linkspec {

/// Exact arbitrary-precision rational used for areas, eta and lambda.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Accepts "p/q", "p", and finite decimals such as "0.125" (converted exactly).
Rational parse_rational(std::string_view text);

/// Always "p/q" with q > 0, e.g. "3/1", "-1/2".
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

/// Exact rational equal to a finite double (binary expansion).
Rational from_double(double value);

}  // namespace linkspec
