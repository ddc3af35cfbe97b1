#include "linkspec/quasimorphism.hpp"

#include "linkspec/error.hpp"
#include "linkspec/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace linkspec {

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  return v < 0 ? "(" + s + ")" : s;
}

void require_sphere(const SurfaceLink& link) {
  if (link.surface.genus != 0 || link.surface.total_area != 1)
    throw ValidationError("quasimorphisms are defined for links on the sphere of area 1");
}

void require_mean_normalized(const Hamiltonian& h) {
  if (h.model() != Model::sphere) throw ValidationError("Hamiltonian must live on the sphere model");
  const double mean = integrate(h, 1e-11);
  const double scale = 1.0 + hofer_norm(h);
  if (std::abs(mean) > 1e-8 * scale)
    throw ValidationError("Hamiltonian is not mean-normalized (integral " + num(mean) + ")");
}

std::vector<Rational> circle_levels(const SurfaceLink& link) {
  std::vector<Rational> out;
  for (const auto& c : link.circles) out.push_back(c.realization.level);
  return out;
}

}  // namespace

DefectBound defect_bound(int k, const Rational& eta) {
  DefectBound d;
  d.k = k;
  d.eta = eta;
  d.lambda = lambda_closed_form(k, eta);
  d.defect = 2 * (k + 1) * d.lambda / k;
  return d;
}

DefectBound defect_bound(const SurfaceLink& link, const std::optional<Rational>& eta) {
  require_sphere(link);
  const auto e = eta ? eta : monotone_eta(link);
  if (!e) throw ValidationError("link is not eta-monotone for any eta >= 0");
  const auto rep = check_monotone(link, *e);
  if (!rep.is_monotone) throw ValidationError("link is not eta-monotone for eta = " + format_rational(*e));
  DefectBound d;
  d.k = static_cast<int>(link.k());
  d.eta = *e;
  d.lambda = *rep.lambda;
  d.defect = 2 * (d.k + 1) * d.lambda / d.k;
  return d;
}

QuasiValue homogenize(const Hamiltonian& h, const SurfaceLink& link, int n, const std::optional<Rational>& eta) {
  if (n < 1) throw ValidationError("homogenization depth must be >= 1");
  if (!h.autonomous()) throw ValidationError("homogenization needs an autonomous Hamiltonian");
  const DefectBound d = defect_bound(link, eta);
  require_mean_normalized(h);

  QuasiValue q;
  q.n_used = n;
  const SpectralBound b1 = bound(h, link, d.eta);
  if (b1.width() == 0.0) {
    // c_L(nH) = n c_L(H) when the bound is an identity
    q.lower = q.upper = b1.lower;
    q.exact = true;
    return q;
  }
  const SpectralBound bn = n == 1 ? b1 : bound(compose_power(h, n), link, d.eta);
  q.lower = bn.lower / n;
  q.upper = bn.upper / n;
  q.error_bound = to_double(d.defect) / n;
  return q;
}

DualityResult duality_check(const Hamiltonian& h, const SurfaceLink& link, const std::optional<Rational>& eta) {
  const DefectBound d = defect_bound(link, eta);
  DualityResult r;
  r.h = bound(h, link, d.eta);
  r.hbar = bound(bar(h), link, d.eta);
  r.lhs = r.h.lower + r.hbar.lower;
  r.rhs = d.duality_constant();
  r.slack = to_double(r.rhs) - r.lhs;
  r.holds = r.slack >= 0.0;
  return r;
}

Hamiltonian scl_family_hamiltonian(int n) {
  if (n < 2) throw ValidationError("the scl family starts at n = 2");
  const double a = 0.75 / n;
  const double b = a / 4.0;
  const std::string g = "(z - " + num(b) + ")*max(" + num(a) + " - z, 0)^2";
  const double zb = to_double(Rational(1, 2 * n));
  const double G = Expr::parse(g).eval(Point{0.0, zb, 0.0});
  const double V = static_cast<double>(n) * (2 * n - 1);
  return Hamiltonian::z_profile(num(V) + "*(" + g + "/" + num(G) + ")").with_support({0.0, a});
}

SurfaceLink scl_family_link(int n) {
  if (n < 1) throw ValidationError("n must be >= 1");
  return build_parallel_link(2 * n - 1, Rational(0));
}

std::vector<SclRow> scl_lower_bound(int n_lo, int n_hi) {
  if (n_lo < 2 || n_hi < n_lo) throw ValidationError("scl range must satisfy 2 <= n_lo <= n_hi");
  const SurfaceLink l1 = build_parallel_link(1, Rational(0));
  const Rational d1 = defect_bound(1, Rational(0)).defect;
  return parallel_map<SclRow>(static_cast<std::size_t>(n_hi - n_lo + 1), [&](std::size_t idx) {
    SclRow r;
    r.n = n_lo + static_cast<int>(idx);
    const Hamiltonian h = scl_family_hamiltonian(r.n);
    const SurfaceLink ln = scl_family_link(r.n);
    const QuasiValue qn = homogenize(h, ln, 1, Rational(0));
    const QuasiValue q1 = homogenize(h, l1, 1, Rational(0));
    r.mu_ln = qn.value();
    r.mu_l1 = q1.value();
    r.f_value = r.mu_ln - r.mu_l1;
    r.exact = qn.exact && q1.exact;
    r.defect_l1 = d1;
    r.defect_ln = defect_bound(2 * r.n - 1, Rational(0)).defect;
    r.defect_sum = r.defect_l1 + r.defect_ln;
    r.scl_lower = std::abs(r.f_value) / to_double(r.defect_sum);
    return r;
  });
}

IndependenceWitness independence_witness(const std::vector<std::pair<int, Rational>>& family) {
  if (family.empty()) throw ValidationError("empty family");
  IndependenceWitness w;
  for (const auto& [k, eta] : family) {
    IndependenceMember m;
    m.k = k;
    m.eta = eta;
    m.lambda = lambda_closed_form(k, eta);
    m.link = build_parallel_link(k, eta);
    w.members.push_back(std::move(m));
  }
  std::sort(w.members.begin(), w.members.end(), [](const auto& a, const auto& b) {
    return a.lambda != b.lambda ? a.lambda < b.lambda : a.eta < b.eta;
  });
  const std::size_t N = w.members.size();
  for (std::size_t i = 0; i + 1 < N; ++i)
    if (w.members[i].lambda == w.members[i + 1].lambda && w.members[i].eta == w.members[i + 1].eta)
      throw ValidationError("family lists (k, eta) = (" + std::to_string(w.members[i].k) + ", " +
                            format_rational(w.members[i].eta) + ") twice");

  // Elimination order: the next member is the first remaining one owning a
  // level that no other remaining member uses. A member whose circles all lie
  // on another link (e.g. 1/3, 2/3 inside 1/3, 1/2, 2/3) is postponed.
  std::vector<IndependenceMember> ordered;
  std::vector<int> chosen_circle;
  while (!w.members.empty()) {
    std::size_t pick = w.members.size();
    int chosen = -1;
    for (std::size_t i = 0; i < w.members.size() && pick == w.members.size(); ++i) {
      const auto li = circle_levels(w.members[i].link);
      for (std::size_t c = 0; c < li.size() && chosen < 0; ++c) {
        bool absent = true;
        for (std::size_t j = 0; j < w.members.size() && absent; ++j) {
          if (j == i) continue;
          const auto lj = circle_levels(w.members[j].link);
          absent = std::find(lj.begin(), lj.end(), li[c]) == lj.end();
        }
        if (absent) chosen = static_cast<int>(c);
      }
      if (chosen >= 0) pick = i;
    }
    if (pick == w.members.size())
      throw ValidationError("circles not separable: every circle of each remaining link lies on another one");
    ordered.push_back(std::move(w.members[pick]));
    chosen_circle.push_back(chosen);
    w.members.erase(w.members.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  w.members = std::move(ordered);

  std::vector<std::vector<Rational>> levels;
  for (const auto& m : w.members) levels.push_back(circle_levels(m.link));

  for (std::size_t i = 0; i < N; ++i) {
    auto& m = w.members[i];
    const int chosen = chosen_circle[i];
    m.circle = chosen;
    m.level = levels[i][static_cast<std::size_t>(chosen)];

    Rational gap = std::min(m.level, Rational(1 - m.level));
    auto consider = [&](const std::vector<Rational>& ls, bool own) {
      for (std::size_t c = 0; c < ls.size(); ++c) {
        if (own && static_cast<int>(c) == chosen) continue;
        Rational d = Rational(ls[c] - m.level);
        if (d < 0) d = -d;
        gap = std::min(gap, d);
      }
    };
    consider(levels[i], true);
    for (std::size_t j = i + 1; j < N; ++j) consider(levels[j], false);

    m.half_width = to_double(gap) / 6.0;
    const double z0 = to_double(m.level);
    const std::string x = "((z - " + num(z0) + ")/" + num(m.half_width) + ")";
    m.witness = Hamiltonian::z_profile(num(m.k) + "*max(1 - " + x + "^2, 0)^2*(1 - 7*" + x + "^2)")
                    .with_support({z0 - m.half_width, z0 + m.half_width});
  }

  w.matrix.assign(N, std::vector<double>(N, 0.0));
  parallel_for(N * N, [&](std::size_t idx) {
    const std::size_t i = idx / N, j = idx % N;
    w.matrix[i][j] = homogenize(w.members[i].witness, w.members[j].link, 1, w.members[j].eta).value();
  });
  w.triangular_unit = true;
  for (std::size_t i = 0; i < N; ++i) {
    if (w.matrix[i][i] != 1.0) w.triangular_unit = false;
    for (std::size_t j = i + 1; j < N; ++j)
      if (w.matrix[i][j] != 0.0) w.triangular_unit = false;
  }
  return w;
}

double QuasiCalabiRow::radius() const { return std::max(std::abs(mu_lo), std::abs(mu_hi)); }

std::vector<QuasiCalabiRow> quasicalabi_check(const Hamiltonian& h, int k_lo, int k_hi, const EtaRule& eta_rule,
                                              LinkFamily family) {
  if (k_lo < 1 || k_hi < k_lo) throw ValidationError("k range must satisfy 1 <= k_lo <= k_hi");
  if (family == LinkFamily::equidistributed && k_lo < 2)
    throw ValidationError("equidistributed links need k >= 2");
  if (!h.autonomous()) throw ValidationError("quasicalabi_check needs an autonomous Hamiltonian");
  require_mean_normalized(h);

  std::vector<Rational> etas;
  for (int k = k_lo; k <= k_hi; ++k) {
    const Rational eta = eta_rule(k);
    if (eta < 0) throw ValidationError("eta rule gives a negative value at k = " + std::to_string(k));
    if (k >= 2 && !(eta * 2 * k * (k - 1) < 1))
      throw ValidationError("eta rule violates eta_k < 1/(2k(k-1)) at k = " + std::to_string(k));
    etas.push_back(eta);
  }

  return parallel_map<QuasiCalabiRow>(etas.size(), [&](std::size_t idx) {
    QuasiCalabiRow r;
    r.k = k_lo + static_cast<int>(idx);
    r.eta = etas[idx];
    const SurfaceLink link = family == LinkFamily::parallel ? build_parallel_link(r.k, r.eta)
                                                            : build_equidistributed_link(r.k, r.eta).link;
    const DefectBound d = defect_bound(link, r.eta);
    r.lambda = d.lambda;
    r.d_k = d.duality_constant();
    const SpectralBound b = bound(h, link, r.eta);
    r.c_lo = b.lower;
    r.c_hi = b.upper;
    r.mu_lo = b.lower - to_double(r.d_k);
    r.mu_hi = b.upper + to_double(r.d_k);
    return r;
  });
}

FragmentationWitness fragmentation_witness(const Rational& area) {
  if (!(area > 0 && area < Rational(1, 2))) throw ValidationError("fragmentation area must lie in (0, 1/2)");
  FragmentationWitness w;
  w.area = area;
  w.l1 = build_parallel_link(1, Rational(0));
  const Rational lambda = (std::max(area, Rational(1, 3)) + Rational(1, 2)) / 2;
  w.eta2 = (3 * lambda - 1) / 2;
  w.l2 = build_parallel_link(2, w.eta2);
  return w;
}

std::pair<double, double> fragmentation_value(const FragmentationWitness& w, const Hamiltonian& h) {
  if (!h.autonomous()) throw ValidationError("fragmentation check needs an autonomous Hamiltonian");
  if (!h.support() || h.support()->lo < 0.0 || h.support()->hi >= to_double(w.area))
    throw ValidationError("Hamiltonian must declare support inside the southern cap of area " +
                          format_rational(w.area));
  const Hamiltonian hn = mean_normalize(h);
  const QuasiValue q2 = homogenize(hn, w.l2, 1, w.eta2);
  const QuasiValue q1 = homogenize(hn, w.l1, 1, Rational(0));
  return {q2.mu_lo() - q1.mu_hi(), q2.mu_hi() - q1.mu_lo()};
}

}  // namespace linkspec
