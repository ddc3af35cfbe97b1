#include "linkspec/equidistributed.hpp"

#include "linkspec/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace linkspec {

bool equidistributed_eta_ok(int m, const Rational& eta) {
  if (m < 2 || eta < 0) return false;
  return eta < Rational(1, 2 * m * (m - 1));
}

Rational equidistributed_alpha(int m, const Rational& eta) {
  if (!equidistributed_eta_ok(m, eta))
    throw ValidationError("equidistributed link needs m >= 2 and 0 <= eta < 1/(2m(m-1)); got m = " +
                          std::to_string(m) + ", eta = " + format_rational(eta));
  return Rational(1, m + 1) + 2 * eta * (m - 1) / (m + 1);
}

namespace {

struct Strip {
  double h;
  double u_end;  // 1/h
  double lower(double u) const { return std::max(h * u, 0.0); }
  double upper(double u) const { return std::min(h * u + h, 1.0); }
  double width(double u) const { return std::max(0.0, upper(u) - lower(u)); }

  std::vector<double> breaks() const {
    std::vector<double> b{-1.0, 0.0, u_end - 1.0, u_end};
    std::sort(b.begin(), b.end());
    return b;
  }

  // Area of the strip over [-1, u]; the width is piecewise linear in u.
  double area_until(double u) const {
    const auto b = breaks();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      const double a = b[i], c = std::min(b[i + 1], u);
      if (c <= a) break;
      acc += 0.5 * (width(a) + width(c)) * (c - a);
    }
    return acc;
  }

  double invert_area(double target) const {
    double lo = -1.0, hi = u_end;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (area_until(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
};

// Piece of the strip over [ua, ub] as a counter-clockwise polygon in (u, z).
std::vector<std::array<double, 2>> piece(const Strip& s, double ua, double ub) {
  std::vector<double> us{ua};
  for (double b : s.breaks())
    if (b > ua && b < ub) us.push_back(b);
  us.push_back(ub);
  std::vector<std::array<double, 2>> poly;
  auto push = [&](double u, double z) {
    if (!poly.empty() && std::abs(poly.back()[0] - u) < 1e-15 && std::abs(poly.back()[1] - z) < 1e-15)
      return;
    poly.push_back({u, z});
  };
  for (double u : us) push(u, s.lower(u));
  for (auto it = us.rbegin(); it != us.rend(); ++it) push(*it, s.upper(*it));
  if (poly.size() > 1 && std::abs(poly.front()[0] - poly.back()[0]) < 1e-15 &&
      std::abs(poly.front()[1] - poly.back()[1]) < 1e-15)
    poly.pop_back();
  return poly;
}

std::array<double, 3> centroid_area(const std::vector<std::array<double, 2>>& p) {
  double a = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& q = p[i];
    const auto& r = p[(i + 1) % p.size()];
    const double cr = q[0] * r[1] - r[0] * q[1];
    a += cr;
    cx += (q[0] + r[0]) * cr;
    cy += (q[1] + r[1]) * cr;
  }
  a *= 0.5;
  return {cx / (6.0 * a), cy / (6.0 * a), a};
}

// Geodesic diameter in the round metric of area 1; the cylinder model is the
// area-preserving projection, so polar pieces are small even when long in theta.
double round_diameter(const std::vector<std::array<double, 2>>& loop) {
  const double rho = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  std::vector<std::array<double, 3>> pts;
  constexpr int per_edge = 16;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const auto& a = loop[i];
    const auto& b = loop[(i + 1) % loop.size()];
    for (int t = 0; t < per_edge; ++t) {
      const double s = static_cast<double>(t) / per_edge;
      const double z = std::clamp(a[0] + s * (b[0] - a[0]), 0.0, 1.0);
      const double th = 2.0 * std::numbers::pi * (a[1] + s * (b[1] - a[1]));
      const double w = 2.0 * std::sqrt(z * (1.0 - z));
      pts.push_back({w * std::cos(th), w * std::sin(th), 2.0 * z - 1.0});
    }
  }
  double best = 1.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = pts[i][0] * pts[j][0] + pts[i][1] * pts[j][1] + pts[i][2] * pts[j][2];
      best = std::min(best, d);
    }
  return rho * std::acos(std::clamp(best, -1.0, 1.0));
}

}  // namespace

EquidistributedLink build_equidistributed_link(int m, const Rational& eta) {
  EquidistributedLink out;
  out.m = m;
  out.eta = eta;
  out.alpha = equidistributed_alpha(m, eta);
  out.complement_area = 1 - m * out.alpha;

  const double c = std::max(2.5, 0.8 * std::cbrt(static_cast<double>(m)));
  Strip strip{c / m, m / c};
  const double shrink = std::sqrt(to_double(out.alpha) * m);

  Region complement;
  complement.id = "C";
  complement.area = out.complement_area;
  std::vector<Region> discs;
  double ua = -1.0;
  for (int i = 0; i < m; ++i) {
    const double ub = i + 1 == m ? strip.u_end : strip.invert_area(static_cast<double>(i + 1) / m);
    auto poly = piece(strip, ua, ub);
    ua = ub;
    const auto [cu, cz, area] = centroid_area(poly);
    (void)area;
    std::vector<std::array<double, 2>> loop;
    for (const auto& p : poly)
      loop.push_back({cz + shrink * (p[1] - cz), cu + shrink * (p[0] - cu)});
    const double diam = round_diameter(loop);
    out.diameters.push_back(diam);
    out.max_diameter = std::max(out.max_diameter, diam);

    Circle circ;
    circ.id = "c" + std::to_string(i + 1);
    circ.realization = CircleRealization::loop(std::move(loop));
    out.link.circles.push_back(circ);
    Region d;
    d.id = "D" + std::to_string(i + 1);
    d.area = out.alpha;
    d.boundary = {{circ.id, 1}};
    d.boundary_count = 1;
    discs.push_back(d);
    complement.boundary.push_back({circ.id, -1});
  }
  complement.boundary_count = m;
  out.link.regions = std::move(discs);
  out.link.regions.push_back(complement);
  return out;
}

std::vector<EquidistributedLink> build_equidistributed_sequence(int m_max, const EtaRule& eta_rule) {
  std::vector<EquidistributedLink> out;
  for (int m = 2; m <= m_max; ++m) out.push_back(build_equidistributed_link(m, eta_rule(m)));
  return out;
}

}  // namespace linkspec
