#pragma once

#include "linkspec/surface_link.hpp"

#include <cstdint>
#include <vector>

namespace linkspec {

// Integer combination of the basic classes [u_1], ..., [u_s] of one link. The
// basis tag ties the coefficients to the region decomposition they came from.
struct DiscClass {
  std::vector<long long> coeffs;
  std::uint64_t basis = 0;
};

DiscClass make_class(const SurfaceLink& link, std::vector<long long> coeffs);
DiscClass basic_class(const SurfaceLink& link, std::size_t i);
// Sum of all basic classes.
DiscClass sphere_class(const SurfaceLink& link);

struct ClassInvariants {
  long long maslov = 0;
  Rational area{0};
  long long delta = 0;  // intersection with the diagonal
  std::vector<long long> divisor_intersections;
};

ClassInvariants class_invariants(const SurfaceLink& link, const DiscClass& cls);

// omega(u) + eta [u].Delta == (lambda/2) mu(u); the link must be eta-monotone.
bool check_monotonicity_identity(const SurfaceLink& link, const Rational& eta, const DiscClass& cls);

// Euler characteristic of the corresponding branched cover; non-negative classes only.
long long riemann_hurwitz(const SurfaceLink& link, const DiscClass& cls);

struct IndexIdentity {
  long long vdim_u_plus_3 = 0;  // k + mu(u)
  long long vdim_cover = 0;     // chi + 2 sum (2 - k_i) c_i
  long long two_delta = 0;
  bool holds = false;
};

IndexIdentity index_identity(const SurfaceLink& link, const DiscClass& cls);

}  // namespace linkspec
