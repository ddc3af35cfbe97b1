#include "linkspec/homology_lattice.hpp"

#include "linkspec/error.hpp"

namespace linkspec {

namespace {

void check_basis(const SurfaceLink& link, const DiscClass& cls) {
  if (cls.coeffs.size() != link.s())
    throw ValidationError("class has " + std::to_string(cls.coeffs.size()) + " coefficients but the link has " +
                          std::to_string(link.s()) + " regions");
  if (cls.basis != link.fingerprint()) throw ValidationError("class belongs to a different link");
}

}  // namespace

DiscClass make_class(const SurfaceLink& link, std::vector<long long> coeffs) {
  DiscClass c{std::move(coeffs), link.fingerprint()};
  check_basis(link, c);
  return c;
}

DiscClass basic_class(const SurfaceLink& link, std::size_t i) {
  if (i >= link.s()) throw ValidationError("basic class index out of range");
  std::vector<long long> v(link.s(), 0);
  v[i] = 1;
  return make_class(link, std::move(v));
}

DiscClass sphere_class(const SurfaceLink& link) {
  return make_class(link, std::vector<long long>(link.s(), 1));
}

ClassInvariants class_invariants(const SurfaceLink& link, const DiscClass& cls) {
  check_basis(link, cls);
  ClassInvariants inv;
  for (std::size_t i = 0; i < cls.coeffs.size(); ++i) {
    const long long c = cls.coeffs[i];
    const auto& r = link.regions[i];
    inv.maslov += 2 * c;
    inv.area += c * r.area;
    inv.delta += 2LL * (r.boundary_count - 1) * c;
  }
  inv.divisor_intersections = cls.coeffs;
  return inv;
}

bool check_monotonicity_identity(const SurfaceLink& link, const Rational& eta, const DiscClass& cls) {
  const auto mono = check_monotone(link, eta);
  if (!mono.is_monotone) throw ValidationError("link is not eta-monotone for eta = " + format_rational(eta));
  const auto inv = class_invariants(link, cls);
  return inv.area + eta * inv.delta == (*mono.lambda / 2) * inv.maslov;
}

long long riemann_hurwitz(const SurfaceLink& link, const DiscClass& cls) {
  check_basis(link, cls);
  for (long long c : cls.coeffs)
    if (c < 0) throw ValidationError("riemann_hurwitz is defined for non-negative classes only");
  long long chi = static_cast<long long>(link.k());
  for (std::size_t i = 0; i < cls.coeffs.size(); ++i)
    chi -= 2LL * (link.regions[i].boundary_count - 1) * cls.coeffs[i];
  return chi;
}

IndexIdentity index_identity(const SurfaceLink& link, const DiscClass& cls) {
  const long long chi = riemann_hurwitz(link, cls);
  const auto inv = class_invariants(link, cls);
  IndexIdentity id;
  id.vdim_u_plus_3 = static_cast<long long>(link.k()) + inv.maslov;
  id.vdim_cover = chi;
  for (std::size_t i = 0; i < cls.coeffs.size(); ++i)
    id.vdim_cover += 2LL * (2 - link.regions[i].boundary_count) * cls.coeffs[i];
  id.two_delta = 2 * inv.delta;
  id.holds = id.vdim_u_plus_3 == id.vdim_cover + id.two_delta;
  return id;
}

}  // namespace linkspec
