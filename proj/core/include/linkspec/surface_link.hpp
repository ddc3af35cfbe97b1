#pragma once

#include "linkspec/rational.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace linkspec {

struct Surface {
  int genus = 0;
  Rational total_area{1};
};

// Geometric placement of a circle. On S² (cylinder model z in [0,1], theta in
// R/Z) either a horizontal level or a closed polygon in (z, unwrapped theta);
// on a disc model a radial level.
struct CircleRealization {
  enum class Kind { none, z_level, r_level, polygon };
  Kind kind = Kind::none;
  Rational level{0};
  std::vector<std::array<double, 2>> polygon;  // (z, theta) vertices, implicitly closed

  static CircleRealization z_at(const Rational& z) { return {Kind::z_level, z, {}}; }
  static CircleRealization r_at(const Rational& r) { return {Kind::r_level, r, {}}; }
  static CircleRealization loop(std::vector<std::array<double, 2>> pts) {
    return {Kind::polygon, Rational{0}, std::move(pts)};
  }
  bool present() const { return kind != Kind::none; }
  // [min z, max z] over the realized curve (z_level and polygon kinds).
  std::array<double, 2> z_range() const;
};

struct Circle {
  std::string id;
  bool contractible = true;
  CircleRealization realization;
  int orientation = 1;
};

struct Incidence {
  std::string circle;
  int sign = 1;
};

struct Region {
  std::string id;
  std::vector<Incidence> boundary;
  Rational area{0};
  int boundary_count = 0;  // k_j
};

struct SurfaceLink {
  Surface surface;
  std::vector<Circle> circles;
  std::vector<Region> regions;

  std::size_t k() const { return circles.size(); }
  std::size_t s() const { return regions.size(); }
  // Index of a circle id, or -1.
  int circle_index(const std::string& id) const;
  // Stable fingerprint of the combinatorial data; used to tag lattice classes.
  std::uint64_t fingerprint() const;
};

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_link(const SurfaceLink& link);

// Throws ValidationError listing the violations if the link is malformed.
void require_valid(const SurfaceLink& link);

struct MonotonicityReport {
  Rational eta{0};
  std::vector<Rational> values;  // 2 eta (k_j - 1) + A_j per region
  bool is_monotone = false;
  std::optional<Rational> lambda;
};

MonotonicityReport check_monotone(const SurfaceLink& link, const Rational& eta);

// (k, eta) feasible for parallel circles on the sphere.
bool parallel_feasible(int k, const Rational& eta);

Rational lambda_closed_form(int k, const Rational& eta);

// k horizontal circles; regions ordered south cap, north cap, then annuli
// from bottom to top. Circles below the equator (and the equator itself) are
// oriented as boundaries of their southern disc, the rest of their northern one.
SurfaceLink build_parallel_link(int k, const Rational& eta);

// Random genus-0 link: regions are the vertices of a random tree on k+1
// vertices, circles its edges. Areas are random positive rationals.
SurfaceLink random_genus0_link(int k, std::mt19937_64& rng);

// Same tree model but with areas chosen so the link is eta-monotone.
SurfaceLink random_monotone_genus0_link(int k, const Rational& eta, std::mt19937_64& rng);

// Random connected multigraph with k edges and cycle rank g (regions are
// vertices). Requires k >= g + 1. Self-loops give circles with one region on
// both sides; allow_loops=false avoids them.
SurfaceLink random_link(int genus, int k, std::mt19937_64& rng, bool allow_loops = true);

}  // namespace linkspec

namespace linkspec {

// Some eta >= 0 for which the link is eta-monotone, if one exists. When every
// region has the same boundary count any eta works and 0 is returned.
std::optional<Rational> monotone_eta(const SurfaceLink& link);

}  // namespace linkspec
