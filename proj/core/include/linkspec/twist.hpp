#pragma once

#include "linkspec/hamiltonian.hpp"

#include <vector>

namespace linkspec {

// Radial twist profile on the disc of radius R. The user function f is
// multiplied by a smooth cutoff equal to 1 below cut_lo*R and 0 above cut_hi*R.
struct TwistProfile {
  Expr f;
  double radius = 1.0;
  double cut_lo = 0.7;
  double cut_hi = 0.9;
  bool divergent = false;  // int_0^R r^3 f(r) dr = infinity
  double value(double r) const;  // cut-off profile
  double raw(double r) const;    // f itself
};

// Checks that the cut-off profile is decreasing and non-negative on (0, R] and
// decides divergence of int r^3 f from the log-log slope of r^3 f near 0.
TwistProfile make_twist_profile(const Expr& f, double radius = 1.0);

enum class TruncationRule {
  radius,  // c_i = f(R / i)
  linear,  // c_i = i
};

std::vector<double> truncation_levels(const TwistProfile& p, int count, TruncationRule rule = TruncationRule::radius);

// F(r) = 2 pi int_r^R s min(f(s), level) ds, whose time-t flow is
// (r, theta) -> (r, theta + 2 pi t min(f, level)). level <= 0 gives F = 0.
Hamiltonian twist_hamiltonian(const TwistProfile& p, double level);

// F_1 <= F_2 <= ... for the given rule; rejects non-divergent profiles.
std::vector<Hamiltonian> twist_truncations(const TwistProfile& p, int count,
                                           TruncationRule rule = TruncationRule::radius);

// Cal(F) = kTwistCalabiFactor * int_0^R r^3 min(f, level) dr for the
// Hamiltonian above (area form r dr dtheta).
inline constexpr double kTwistCalabiFactor = 2.0 * 3.14159265358979323846 * 3.14159265358979323846;

}  // namespace linkspec
