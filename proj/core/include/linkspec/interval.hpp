#pragma once

#include <algorithm>
#include <iosfwd>
#include <limits>

namespace linkspec {

/// Closed real interval [lo, hi]. Results with a non-point operand are pushed
/// outward by a few ulps; point op point is plain double arithmetic.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr Interval(double v) : lo(v), hi(v) {}  // NOLINT(google-explicit-constructor)
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  static constexpr Interval entire() {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }

  constexpr double width() const { return hi - lo; }
  constexpr double mid() const { return 0.5 * (lo + hi); }
  constexpr bool contains(double v) const { return lo <= v && v <= hi; }
  constexpr bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  constexpr bool is_point() const { return lo == hi; }
  bool is_empty() const { return !(lo <= hi); }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);

Interval hull(const Interval& a, const Interval& b);
/// May return an empty interval (lo > hi) when the operands are disjoint.
Interval intersect(const Interval& a, const Interval& b);

Interval pow_int(const Interval& x, long long n);
Interval pow(const Interval& x, const Interval& y);
Interval sqrt(const Interval& x);
Interval exp(const Interval& x);
Interval log(const Interval& x);
Interval sin(const Interval& x);
Interval cos(const Interval& x);
Interval tanh(const Interval& x);
Interval abs(const Interval& x);
Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);
/// Heaviside step: 1 for x >= 0, 0 otherwise.
Interval step(const Interval& x);

std::ostream& operator<<(std::ostream& os, const Interval& x);

}  // namespace linkspec
