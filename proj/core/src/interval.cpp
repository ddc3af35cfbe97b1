#include "linkspec/interval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace linkspec {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// 0 * inf is taken as 0 so that products with unbounded ranges stay meaningful.
double safe_mul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

// Endpoints computed in round-to-nearest are pushed out by n ulps. Exact zeros
// and infinities stay put.
Interval widen(Interval x, int n) {
  for (int i = 0; i < n; ++i) {
    if (x.lo != 0.0 && std::isfinite(x.lo)) x.lo = std::nextafter(x.lo, -kInf);
    if (x.hi != 0.0 && std::isfinite(x.hi)) x.hi = std::nextafter(x.hi, kInf);
  }
  return x;
}

Interval clamp_unit(Interval x) { return {std::max(x.lo, -1.0), std::min(x.hi, 1.0)}; }
}  // namespace

Interval operator+(const Interval& a, const Interval& b) {
  if (a.is_point() && b.is_point()) return Interval(a.lo + b.lo);
  return widen({a.lo + b.lo, a.hi + b.hi}, 1);
}
Interval operator-(const Interval& a, const Interval& b) {
  if (a.is_point() && b.is_point()) return Interval(a.lo - b.lo);
  return widen({a.lo - b.hi, a.hi - b.lo}, 1);
}
Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
  if (a.is_point() && b.is_point()) return Interval(a.lo * b.lo);
  const double p[4] = {safe_mul(a.lo, b.lo), safe_mul(a.lo, b.hi), safe_mul(a.hi, b.lo),
                       safe_mul(a.hi, b.hi)};
  return widen({*std::min_element(p, p + 4), *std::max_element(p, p + 4)}, 1);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (a.is_point() && b.is_point()) return Interval(a.lo / b.lo);
  if (b.lo <= 0.0 && b.hi >= 0.0) return Interval::entire();
  const double p[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
  return widen({*std::min_element(p, p + 4), *std::max_element(p, p + 4)}, 1);
}

Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Interval pow_int(const Interval& x, long long n) {
  if (x.is_point()) {
    double r = 1.0;
    double base = n < 0 ? 1.0 / x.lo : x.lo;
    for (long long k = n < 0 ? -n : n; k > 0; --k) r *= base;
    return Interval(r);
  }
  if (n == 0) return Interval(1.0);
  if (n < 0) return Interval(1.0) / pow_int(x, -n);
  auto p = [n](double v) {
    double r = 1.0;
    for (long long k = 0; k < n; ++k) r *= v;
    return r;
  };
  const int ulps = static_cast<int>(std::min<long long>(n, 64));
  if (n % 2 == 1) return widen({p(x.lo), p(x.hi)}, ulps);
  if (x.lo >= 0.0) return widen({p(x.lo), p(x.hi)}, ulps);
  if (x.hi <= 0.0) return widen({p(x.hi), p(x.lo)}, ulps);
  return widen({0.0, std::max(p(x.lo), p(x.hi))}, ulps);
}

Interval pow(const Interval& x, const Interval& y) {
  if (y.is_point() && std::floor(y.lo) == y.lo && std::abs(y.lo) < 1e9)
    return pow_int(x, static_cast<long long>(y.lo));
  if (x.is_point() && y.is_point()) return Interval(std::pow(x.lo, y.lo));
  if (x.hi <= 0.0) return {kNaN, kNaN};
  if (y.is_point()) {
    // monotone in x for a fixed exponent
    const double lo = std::pow(std::max(x.lo, 0.0), y.lo), hi = std::pow(x.hi, y.lo);
    return widen(y.lo > 0.0 ? Interval(lo, hi) : Interval(hi, lo), 2);
  }
  return exp(y * log(Interval(std::max(x.lo, 0.0), x.hi)));
}

Interval sqrt(const Interval& x) {
  if (x.hi < 0.0) return {kNaN, kNaN};
  if (x.is_point()) return Interval(std::sqrt(x.lo));
  return widen({std::sqrt(std::max(x.lo, 0.0)), std::sqrt(x.hi)}, 1);
}

Interval exp(const Interval& x) {
  if (x.is_point()) return Interval(std::exp(x.lo));
  Interval r = widen({std::exp(x.lo), std::exp(x.hi)}, 2);
  r.lo = std::max(r.lo, 0.0);
  return r;
}

Interval log(const Interval& x) {
  if (x.hi < 0.0) return {kNaN, kNaN};
  if (x.is_point()) return Interval(std::log(x.lo));
  return widen({x.lo <= 0.0 ? -kInf : std::log(x.lo), std::log(x.hi)}, 2);
}

namespace {
// Range of sin (phase 0) or cos (phase pi/2) from the endpoints and the
// extrema at phase + k pi inside the interval.
Interval trig(const Interval& x, double (*fn)(double), double phase) {
  if (!std::isfinite(x.lo) || !std::isfinite(x.hi) || x.width() >= 2.0 * std::numbers::pi)
    return {-1.0, 1.0};
  double lo = std::min(fn(x.lo), fn(x.hi));
  double hi = std::max(fn(x.lo), fn(x.hi));
  const double start = std::ceil((x.lo - phase) / std::numbers::pi) - 1.0;
  for (double k = start; phase + k * std::numbers::pi <= x.hi + 1e-15 * (1.0 + std::abs(x.hi)); k += 1.0) {
    const double c = phase + k * std::numbers::pi;
    if (c < x.lo - 1e-15 * (1.0 + std::abs(x.lo))) continue;
    const bool top = static_cast<long long>(k) % 2 == 0;
    if (top) hi = 1.0;
    else lo = -1.0;
  }
  return clamp_unit(widen({lo, hi}, 2));
}

double sin_d(double v) { return std::sin(v); }
double cos_d(double v) { return std::cos(v); }
}  // namespace

Interval sin(const Interval& x) {
  if (x.is_point()) return Interval(std::sin(x.lo));
  return trig(x, sin_d, std::numbers::pi / 2.0);
}

Interval cos(const Interval& x) {
  if (x.is_point()) return Interval(std::cos(x.lo));
  return trig(x, cos_d, 0.0);
}

Interval tanh(const Interval& x) {
  if (x.is_point()) return Interval(std::tanh(x.lo));
  return clamp_unit(widen({std::tanh(x.lo), std::tanh(x.hi)}, 2));
}

Interval abs(const Interval& x) {
  if (x.lo >= 0.0) return x;
  if (x.hi <= 0.0) return -x;
  return {0.0, std::max(-x.lo, x.hi)};
}

Interval min(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Interval max(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval step(const Interval& x) { return {x.lo >= 0.0 ? 1.0 : 0.0, x.hi >= 0.0 ? 1.0 : 0.0}; }

std::ostream& operator<<(std::ostream& os, const Interval& x) {
  return os << '[' << x.lo << ", " << x.hi << ']';
}

}  // namespace linkspec
