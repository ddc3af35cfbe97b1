#include "linkspec/rational.hpp"

#include "linkspec/error.hpp"

#include <cctype>
#include <cmath>

namespace linkspec {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ParseError("malformed rational '" + std::string(whole) + "'");
  BigInt v{std::string(s)};
  return negative ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty rational");

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const BigInt num = parse_integer(trim(s.substr(0, slash)), s);
    const BigInt den = parse_integer(trim(s.substr(slash + 1)), s);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
    return Rational(num, den);
  }

  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      negative = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    if ((int_part.empty() && frac.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac.empty() && !all_digits(frac)))
      throw ParseError("malformed rational '" + std::string(s) + "'");
    BigInt num = int_part.empty() ? BigInt(0) : BigInt(std::string(int_part));
    BigInt den = 1;
    for (char c : frac) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
    Rational r(num, den);
    return negative ? Rational(-r) : r;
  }

  return Rational(parse_integer(s, s));
}

std::string format_rational(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Rational from_double(double value) {
  if (!std::isfinite(value)) throw NumericError("cannot convert non-finite value to rational");
  int exponent = 0;
  double mantissa = std::frexp(value, &exponent);
  // 53 bits of mantissa as an integer.
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r{BigInt(scaled)};
  if (exponent > 0) {
    r *= Rational(BigInt(1) << exponent);
  } else if (exponent < 0) {
    r /= Rational(BigInt(1) << -exponent);
  }
  return r;
}

}  // namespace linkspec
