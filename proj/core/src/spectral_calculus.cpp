#include "linkspec/spectral_calculus.hpp"

#include "linkspec/error.hpp"
#include "linkspec/parallel.hpp"
#include "linkspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace linkspec {

const char* to_string(Rule r) {
  switch (r) {
    case Rule::LagrangianControl: return "LagrangianControl";
    case Rule::HoferLipschitz: return "HoferLipschitz";
    case Rule::Monotonicity: return "Monotonicity";
    case Rule::SupportControl: return "SupportControl";
    case Rule::Shift: return "Shift";
    case Rule::Subadditivity: return "Subadditivity";
    case Rule::ExactLinkAdapted: return "ExactLinkAdapted";
  }
  return "?";
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// x-range of each circle in the model coordinate.
std::vector<Interval> circle_extents(const SurfaceLink& link, Model model) {
  std::vector<Interval> out;
  for (const auto& c : link.circles) {
    const auto& re = c.realization;
    using K = CircleRealization::Kind;
    if (re.kind == K::none) throw ValidationError("circle '" + c.id + "' has no geometric realization");
    if (model == Model::sphere) {
      if (re.kind == K::r_level) throw ValidationError("circle '" + c.id + "' is an r-level but H lives on the sphere");
      const auto z = re.z_range();
      out.emplace_back(z[0], z[1]);
    } else {
      if (re.kind != K::r_level) throw ValidationError("circle '" + c.id + "' is not an r-level but H lives on a disc");
      const double r = to_double(re.level);
      out.emplace_back(r, r);
    }
  }
  return out;
}

// Time nodes and weights on [0, 1]; a single node for autonomous fields.
std::vector<std::pair<double, double>> time_nodes(const Field& f, int panels) {
  if (f.autonomous()) return {{0.0, 1.0}};
  const GaussRule& rule = gauss_legendre(16);
  std::vector<std::pair<double, double>> out;
  const double h = 1.0 / panels;
  for (int p = 0; p < panels; ++p)
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      out.push_back({(p + 0.5) * h + 0.5 * h * rule.nodes[q], 0.5 * h * rule.weights[q]});
  return out;
}

double shift_integral(const ShiftTerm& s, const Hamiltonian& h) {
  if (s.kind == ShiftTerm::Kind::expr) {
    if (!s.s.depends_on(Var::t)) return s.s.constant_value();
    const auto r = integrate_adaptive([&](double t) { return s.s.eval(Point{t, 0, 0}); }, 0.0, 1.0);
    if (!r.converged) throw NumericError("shift term quadrature did not converge");
    return r.value;
  }
  return -s.coeff * integrate_field(s.mean_of, h.model(), h.radius()) / h.area();
}

struct CircleData {
  std::vector<double> lo_int, hi_int, mid_int;  // per circle, integrated over t
  double hofer_lo = 0.0, hofer_hi = 0.0;        // int min_i (lo_i - mid_i), int max_i (hi_i - mid_i)
  double global_lo = 0.0, global_hi = 0.0;      // int min_Sigma, int max_Sigma
  double max_width = 0.0;
};

CircleData collect(const Hamiltonian& h, const std::vector<Interval>& ext, const BoundOptions& opts,
                   bool need_global) {
  const Field& f = *h.field();
  const auto nodes = time_nodes(f, opts.time_panels);
  const std::size_t k = ext.size();
  CircleData d;
  d.lo_int.assign(k, 0.0);
  d.hi_int.assign(k, 0.0);
  d.mid_int.assign(k, 0.0);
  for (const auto& [t, w] : nodes) {
    auto ranges = parallel_map<std::pair<Interval, Interval>>(k, [&](std::size_t i) { return field_extrema(f, t, ext[i]); });
    double hlo = std::numeric_limits<double>::infinity(), hhi = -hlo;
    for (std::size_t i = 0; i < k; ++i) {
      const double lo = ranges[i].first.lo, hi = ranges[i].second.hi;
      const double mid = 0.5 * (lo + hi);
      d.lo_int[i] += w * lo;
      d.hi_int[i] += w * hi;
      d.mid_int[i] += w * mid;
      hlo = std::min(hlo, lo - mid);
      hhi = std::max(hhi, hi - mid);
      d.max_width = std::max(d.max_width, (hi - lo) / (1.0 + std::abs(mid)));
    }
    d.hofer_lo += w * hlo;
    d.hofer_hi += w * hhi;
    if (need_global) {
      const auto [mn, mx] = field_extrema(f, t, h.domain());
      d.global_lo += w * mn.lo;
      d.global_hi += w * mx.hi;
    }
  }
  return d;
}

double average(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

bool support_disjoint(const Hamiltonian& h, const std::vector<Interval>& ext) {
  if (!h.support()) return false;
  const Band b = *h.support();
  for (const auto& e : ext)
    if (!(b.hi < e.lo || b.lo > e.hi)) return false;
  return true;
}

void require_monotone(const SurfaceLink& link, const std::optional<Rational>& eta) {
  if (eta) {
    if (!check_monotone(link, *eta).is_monotone)
      throw ValidationError("link is not eta-monotone for eta = " + format_rational(*eta));
  } else if (!monotone_eta(link)) {
    throw ValidationError("link is not eta-monotone for any eta >= 0");
  }
}

SpectralBound bound_impl(const Hamiltonian& h, const SurfaceLink& link, const BoundOptions& opts, int depth) {
  const auto ext = circle_extents(link, h.model());
  SpectralBound out;
  const double inf = std::numeric_limits<double>::infinity();
  double lo = -inf, hi = inf;
  auto apply = [&](Rule r, double a, double b, std::string detail) {
    out.derivation.push_back({r, a, b, std::move(detail)});
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  };
  std::optional<double> pinned;

  if (opts.support_control && support_disjoint(h, ext)) {
    pinned = 0.0;
    out.derivation.push_back({Rule::SupportControl, 0.0, 0.0,
                              "support [" + fmt(h.support()->lo) + ", " + fmt(h.support()->hi) +
                                  "] misses every circle"});
  }

  if (!pinned) {
    const bool need_global = opts.monotonicity;
    const CircleData d = collect(h, ext, opts, need_global);
    const double k = static_cast<double>(ext.size());
    if (opts.exact_link_adapted && d.max_width <= opts.adapted_tol) {
      pinned = average(d.mid_int);
      out.derivation.push_back({Rule::ExactLinkAdapted, *pinned, *pinned, "constant on each of " + fmt(k) + " circles"});
    } else {
      if (opts.lagrangian_control) apply(Rule::LagrangianControl, average(d.lo_int), average(d.hi_int), "average of circle extrema");
      if (opts.hofer_lipschitz) {
        const double g = average(d.mid_int);
        apply(Rule::HoferLipschitz, g + d.hofer_lo, g + d.hofer_hi, "midpoint approximant, c(G) = " + fmt(g));
      }
      if (opts.monotonicity) apply(Rule::Monotonicity, d.global_lo, d.global_hi, "global extrema");
    }
  }

  if (!pinned && opts.subadditivity && depth < 4 && h.composed_first()) {
    const SpectralBound a = bound_impl(*h.composed_first(), link, opts, depth + 1);
    const SpectralBound b = bound_impl(*h.composed_second(), link, opts, depth + 1);
    double shifts = 0.0;
    for (const auto& s : h.shifts()) shifts += shift_integral(s, h);
    apply(Rule::Subadditivity, -inf, a.upper + b.upper - shifts, "c(H#H') <= c(H) + c(H')");
  }

  if (pinned) {
    lo = hi = *pinned;
  } else {
    if (!(lo <= hi)) {
      const double scale = 1.0 + std::max(std::abs(lo), std::abs(hi));
      if (lo - hi > 1e-9 * scale)
        throw NumericError("derived intervals are inconsistent: [" + fmt(lo) + ", " + fmt(hi) + "]");
      lo = hi = 0.5 * (lo + hi);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw NumericError("no finite bound could be derived");
  }

  for (const auto& s : h.shifts()) {
    const double v = shift_integral(s, h);
    lo += v;
    hi += v;
    out.derivation.push_back({Rule::Shift, v, v, "+ int s(t) dt"});
  }
  out.lower = lo;
  out.upper = hi;
  return out;
}

}  // namespace

double exact_link_adapted(const Hamiltonian& h, const SurfaceLink& link, double tol) {
  require_valid(link);
  const auto ext = circle_extents(link, h.model());
  BoundOptions opts;
  const CircleData d = collect(h, ext, opts, false);
  if (d.max_width > tol)
    throw ValidationError("Hamiltonian is not link-adapted: oscillation " + fmt(d.max_width) + " on a circle");
  double v = average(d.mid_int);
  for (const auto& s : h.shifts()) v += shift_integral(s, h);
  return v;
}

SpectralBound bound(const Hamiltonian& h, const SurfaceLink& link, const std::optional<Rational>& eta,
                    const BoundOptions& opts) {
  require_monotone(link, eta);
  return bound_impl(h, link, opts, 0);
}

std::vector<ConvergenceRow> calabi_property_table(const Hamiltonian& h, const std::vector<EquidistributedLink>& links) {
  const double target = integrate(h);
  std::vector<ConvergenceRow> rows(links.size());
  for (std::size_t n = 0; n < links.size(); ++n) {
    const auto& L = links[n];
    ConvergenceRow& r = rows[n];
    r.m = L.m;
    r.k = static_cast<int>(L.link.k());
    r.alpha = L.alpha;
    r.bound = bound(h, L.link, L.eta);
    r.target = target;
    r.gap = std::max(std::abs(r.bound.lower - target), std::abs(r.bound.upper - target));
    r.alpha_times_count = L.alpha * (r.k + L.noncontractible);
    r.complement_area = L.complement_area;
    r.max_diameter = L.max_diameter;
  }
  return rows;
}

ZetaTable zeta_divergence_table(const TwistProfile& profile, int count, const std::vector<EquidistributedLink>& links,
                                const SurfaceLink& base_link, TruncationRule rule) {
  if (count < 0) throw ValidationError("truncation count must be non-negative");
  std::vector<Hamiltonian> caps{embed_in_sphere_cap(twist_hamiltonian(profile, 0.0))};
  std::vector<double> levels{0.0};
  if (count > 0) {
    for (const auto& F : twist_truncations(profile, count, rule)) caps.push_back(embed_in_sphere_cap(F));
    const auto lv = truncation_levels(profile, count, rule);
    levels.insert(levels.end(), lv.begin(), lv.end());
  }
  // The twist must avoid the base link for its invariant to vanish.
  const auto base_ext = circle_extents(base_link, Model::sphere);
  for (const auto& F : caps)
    if (!support_disjoint(F, base_ext)) throw ValidationError("twist support meets the base link");

  ZetaTable table;
  std::vector<double> base(caps.size()), cal(caps.size());
  for (std::size_t i = 0; i < caps.size(); ++i) {
    const auto b = bound(caps[i], base_link);
    if (b.lower != 0.0 || b.upper != 0.0) throw NumericError("base link invariant of the twist is not pinned to 0");
    base[i] = b.upper;
    cal[i] = integrate(caps[i]);
  }
  for (const auto& L : links) {
    double best = 0.0;
    for (std::size_t i = 0; i < caps.size(); ++i) {
      const auto b = bound(caps[i], L.link, L.eta);
      ZetaRow row;
      row.m = L.m;
      row.i = static_cast<int>(i);
      row.level = levels[i];
      row.calabi = cal[i];
      row.lower = b.lower;
      row.upper = b.upper;
      row.base = base[i];
      best = std::max(best, b.lower - base[i]);
      table.rows.push_back(row);
    }
    table.zeta_lower.push_back({L.m, best});
  }
  return table;
}

}  // namespace linkspec
