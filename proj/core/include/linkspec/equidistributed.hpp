#pragma once

#include "linkspec/surface_link.hpp"

#include <functional>
#include <vector>

namespace linkspec {

// One member of an equidistributed family of m-disc links on S².
struct EquidistributedLink {
  int m = 0;
  Rational eta{0};
  Rational alpha{0};            // common disc area
  Rational complement_area{0};  // 1 - m * alpha
  int noncontractible = 0;      // always 0 here
  std::vector<double> diameters;  // per disc, round sphere of area 1
  double max_diameter = 0.0;
  SurfaceLink link;
};

// eta_m < 1/(2 m (m - 1)) and m >= 2.
bool equidistributed_eta_ok(int m, const Rational& eta);

Rational equidistributed_alpha(int m, const Rational& eta);

// Discs are convex polygons obtained by cutting a helical strip of height
// roughly m^{-2/3} into m equal pieces and shrinking each about its centroid
// to area alpha.
EquidistributedLink build_equidistributed_link(int m, const Rational& eta);

using EtaRule = std::function<Rational(int)>;

// Members m = 2 .. m_max.
std::vector<EquidistributedLink> build_equidistributed_sequence(int m_max, const EtaRule& eta_rule);

}  // namespace linkspec
