#include "linkspec/disc_potential.hpp"
#include "linkspec/equidistributed.hpp"
#include "linkspec/hamiltonian.hpp"
#include "linkspec/homology_lattice.hpp"
#include "linkspec/quasimorphism.hpp"
#include "linkspec/spectral_calculus.hpp"
#include "linkspec/surface_link.hpp"
#include "linkspec/twist.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace linkspec;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;
};

// First failure wins the note.
struct Check {
  Outcome& o;
  void operator()(bool cond, const std::string& msg) {
    if (!cond && o.pass) {
      o.pass = false;
      o.note = msg;
    }
  }
};

std::string str(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Rational random_eta(std::mt19937_64& rng, int k) {
  // eta in [0, 1/4) for k >= 2, anything non-negative for k = 1
  std::uniform_int_distribution<int> den(1, 997);
  const int q = den(rng);
  std::uniform_int_distribution<int> num(0, k >= 2 ? (q - 1) / 4 : 3 * q);
  Rational e(num(rng), q);
  if (k >= 2 && e * 4 >= 1) e = Rational(0);
  return e;
}

Outcome c1_lambda() {
  Outcome o;
  Check ck{o};
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> kd(1, 20);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = kd(rng);
    const Rational eta = random_eta(rng, k);
    ck(parallel_feasible(k, eta), "generator produced infeasible pair");
    const SurfaceLink link = build_parallel_link(k, eta);
    const auto rep = check_monotone(link, eta);
    const Rational expect = (1 + 2 * eta * (k - 1)) / (k + 1);
    ck(rep.is_monotone && rep.lambda && *rep.lambda == expect,
       "k=" + std::to_string(k) + " eta=" + format_rational(eta));
    // the south cap is a disc with one boundary circle, so its area is lambda
    ck(link.circles.front().realization.level == expect, "south cap area differs from lambda");
  }
  return o;
}

Outcome c2_consistency() {
  Outcome o;
  Check ck{o};
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 1000; ++trial) {
    const int g = static_cast<int>(rng() % 4);
    const int k = g + 1 + static_cast<int>(rng() % (12 - g));
    const SurfaceLink L = random_link(g, k, rng);
    const std::string tag = "g=" + std::to_string(g) + " k=" + std::to_string(k);
    ck(validate_link(L).ok(), tag + " failed validation");
    ck(L.surface.genus == g && static_cast<int>(L.k()) == k, tag + " wrong size");
    ck(static_cast<int>(L.s()) == k - g + 1, tag + " s != k-g+1");
    Rational total(0);
    long long chi = 0;
    for (const auto& r : L.regions) {
      total += r.area;
      const long long kj = static_cast<long long>(r.boundary.size());
      ck(kj == r.boundary_count, tag + " boundary_count mismatch");
      chi += 2 - kj;
    }
    ck(total == L.surface.total_area, tag + " areas do not sum to total");
    ck(chi == 2 - 2 * g, tag + " Euler characteristic mismatch");
  }
  return o;
}

Outcome c3_identity() {
  Outcome o;
  Check ck{o};
  const Rational eta(1, 8);
  const SurfaceLink L = build_parallel_link(3, eta);
  const Rational lambda = (1 + 2 * eta * 2) / 4;
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> cd(-10, 10);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<long long> c(L.s());
    for (auto& x : c) x = cd(rng);
    const DiscClass cls = make_class(L, c);
    ck(check_monotonicity_identity(L, eta, cls), "library rejected a class");
    Rational omega(0);
    long long delta = 0, mu = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      omega += c[i] * L.regions[i].area;
      delta += 2 * (L.regions[i].boundary_count - 1) * c[i];
      mu += 2 * c[i];
    }
    ck(omega + eta * delta == lambda / 2 * mu, "direct identity fails");
    const auto inv = class_invariants(L, cls);
    ck(inv.area == omega && inv.delta == delta && inv.maslov == mu, "invariants disagree with direct sums");
  }
  return o;
}

Outcome c4_critical() {
  Outcome o;
  Check ck{o};
  std::mt19937_64 rng(404);
  auto zero_grad = [&](const SurfaceLink& L, const std::string& tag) {
    for (const auto& g : gradient_at_ones(build_potential(L)))
      ck(g.re == 0 && g.im == 0, tag + ": gradient at ones is non-zero");
  };
  for (int k = 1; k <= 8; ++k) {
    for (int rep = 0; rep < 5; ++rep) zero_grad(random_genus0_link(k, rng), "tree k=" + std::to_string(k));
    for (int g = 1; g <= 3 && g < k; ++g) zero_grad(random_link(g, k, rng, false), "genus link k=" + std::to_string(k));
    if (k == 1 || parallel_feasible(k, Rational(1, 16))) zero_grad(build_parallel_link(k, Rational(1, 16)), "parallel");
  }
  for (int k = 1; k <= 4; ++k) {
    const DiscPotential W = clifford_potential(k);
    const auto res = find_critical_points(W);
    const std::string tag = "clifford k=" + std::to_string(k);
    ck(static_cast<int>(res.points.size()) == k + 1, tag + ": " + std::to_string(res.points.size()) + " points");
    std::vector<bool> seen(k + 1, false);
    for (const auto& p : res.points) {
      // all coordinates equal a (k+1)-th root of unity
      const Complex z0 = p.coords[0];
      const double turn = std::arg(z0) / (2 * M_PI) * (k + 1);
      const int j = ((static_cast<int>(std::lround(turn)) % (k + 1)) + (k + 1)) % (k + 1);
      const Complex zeta = std::polar(1.0, 2 * M_PI * j / (k + 1));
      double dist = 0;
      for (const auto& x : p.coords) dist = std::max(dist, std::abs(x - zeta));
      ck(dist < 1e-10, tag + ": point off the root-of-unity ansatz");
      ck(!seen[j], tag + ": repeated root");
      seen[j] = true;
      // residual from the closed-form gradient 1 - 1/(x_i prod x)
      Complex prod = 1;
      for (const auto& x : p.coords) prod *= x;
      double r = 0;
      for (const auto& x : p.coords) r = std::max(r, std::abs(1.0 - 1.0 / (x * prod)));
      ck(r < 1e-10, tag + ": residual " + str(r));
      ck(p.non_degenerate, tag + ": degenerate point");
      ck(std::abs(std::abs(p.hessian_det) - (k + 1)) < 1e-8, tag + ": |det Hess| != k+1");
    }
  }
  return o;
}

Outcome c5_handleslide() {
  Outcome o;
  Check ck{o};
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 5);
    const SurfaceLink L = random_genus0_link(k, rng);
    const DiscPotential W = specialize(build_potential(L));
    const std::size_t i = rng() % W.nvars();
    std::size_t j = rng() % (W.nvars() - 1);
    if (j >= i) ++j;
    const int eps = (rng() & 1) ? 1 : -1;
    const DiscPotential Ws = handleslide(W, i, j, eps);
    const auto before = find_critical_points(W);
    const auto after = find_critical_points(Ws);
    const std::string tag = "trial " + std::to_string(trial);
    ck(!before.points.empty(), tag + ": no critical points");
    ck(before.points.size() == after.points.size(), tag + ": point count changed");
    for (const auto& p : before.points) {
      const auto q = handleslide_point(p.coords, i, j, eps);
      const auto ev = eval_grad_hess(Ws, q);
      double r = 0;
      for (const auto& g : ev.gradient) r = std::max(r, std::abs(g));
      ck(r < 1e-8, tag + ": image is not critical, residual " + str(r));
      const CriticalPoint* match = nullptr;
      for (const auto& a : after.points) {
        double d = 0;
        for (std::size_t v = 0; v < q.size(); ++v) d = std::max(d, std::abs(a.coords[v] - q[v]));
        if (d < 1e-7) match = &a;
      }
      ck(match != nullptr, tag + ": image not found by the solver");
      if (match) ck(match->non_degenerate == p.non_degenerate, tag + ": non-degeneracy changed");
    }
  }
  return o;
}

Outcome c6_calabi() {
  Outcome o;
  Check ck{o};
  std::vector<EquidistributedLink> links;
  for (int m = 10; m <= 100; ++m) links.push_back(build_equidistributed_link(m, Rational(0)));
  const auto rows = calabi_property_table(Hamiltonian::z_profile("z - 1/2"), links);
  ck(rows.size() == links.size(), "row count");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    ck(std::abs(row.target) < 1e-12, "target is not the mean 0");
    if (r > 0) ck(row.gap < rows[r - 1].gap, "gap not decreasing at m=" + std::to_string(row.m));
    if (row.m == 50) ck(row.gap < 0.05, "gap(50) = " + str(row.gap));
    const Rational alpha(1, row.m + 1);
    ck(row.alpha == alpha, "alpha_m differs from 1/(m+1)");
    Rational dev = row.alpha_times_count - 1;
    if (dev < 0) dev = -dev;
    ck(row.alpha_times_count == alpha * row.m && dev < Rational(1, row.m), "alpha_m (k_m + l_m) off at m=" + std::to_string(row.m));
  }
  return o;
}

Outcome c7_twist() {
  Outcome o;
  Check ck{o};
  const TwistProfile prof = make_twist_profile(Expr::parse("r^-4"), 0.38);
  ck(prof.divergent, "r^-4 not recognised as divergent");
  const auto hs = twist_truncations(prof, 20);
  const auto lv = truncation_levels(prof, 20);
  std::vector<double> cal;
  for (const auto& h : hs) cal.push_back(integrate(h));
  for (std::size_t i = 1; i < cal.size(); ++i) ck(cal[i] > cal[i - 1], "integrals not increasing at i=" + std::to_string(i + 1));
  ck(cal.back() > 10 * cal.front(), "F_20 / F_1 = " + str(cal.back() / cal.front()));
  // midpoint rule on 2 pi^2 int r^3 min(f, c) dr as an independent check of F_1 and F_20
  for (std::size_t idx : {std::size_t{0}, std::size_t{19}}) {
    const int n = 400000;
    const double hstep = prof.radius / n;
    double s = 0;
    for (int q = 0; q < n; ++q) {
      const double r = (q + 0.5) * hstep;
      s += r * r * r * std::min(prof.value(r), lv[idx]);
    }
    const double oracle = 2 * M_PI * M_PI * s * hstep;
    ck(std::abs(oracle - cal[idx]) < 1e-6 * (1 + oracle), "Cal(F_" + std::to_string(idx + 1) + ") " + str(cal[idx]) + " vs " + str(oracle));
  }
  std::vector<EquidistributedLink> links;
  for (int m : {10, 20, 30, 40, 50}) links.push_back(build_equidistributed_link(m, Rational(0)));
  const auto z = zeta_divergence_table(prof, 20, links, build_parallel_link(1, Rational(0)));
  double best = -1;
  for (const auto& row : z.rows) {
    ck(row.lower <= row.upper, "inverted bound");
    ck(row.base == 0.0, "base link value not pinned to 0");
    best = std::max(best, row.lower);
  }
  ck(best > 5, "largest lower bound " + str(best));
  o.note = o.pass ? "max lower bound " + str(best) + ", F_20/F_1 = " + str(cal.back() / cal.front()) : o.note;
  return o;
}

Outcome c8_quasi() {
  Outcome o;
  Check ck{o};
  const DefectBound d = defect_bound(2, Rational(0));
  ck(d.defect == 1, "defect(2,0) = " + format_rational(d.defect));
  // lambda = 1/3, 2 (k+1) lambda / k = 1
  ck(d.lambda == Rational(1, 3), "lambda(2,0)");
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto coef = [&] { return str(U(rng)); };
  double min_slack = 1e300;
  for (int trial = 0; trial < 20; ++trial) {
    const std::string e = "(" + coef() + ")*z + (" + coef() + ")*z^2 + (" + coef() + ")*sin(6.283185307179586*" +
                          std::to_string(1 + trial % 4) + "*z) + (" + coef() + ")";
    const Hamiltonian h = Hamiltonian::z_profile(e);
    for (int k = 1; k <= 3; ++k) {
      const Rational eta = k == 1 ? Rational(0) : Rational(static_cast<long long>(rng() % 5), 24 * k);
      const auto r = duality_check(h, build_parallel_link(k, eta), eta);
      const Rational lam = (1 + 2 * eta * (k - 1)) / (k + 1);
      ck(r.rhs == (k + 1) * lam / k, "duality constant differs from (k+1) lambda / k");
      ck(r.holds && r.slack >= 0, "slack " + str(r.slack) + " for " + e);
      min_slack = std::min(min_slack, r.slack);
    }
  }
  const auto rows = quasicalabi_check(Hamiltonian::z_profile("z - 1/2"), 50, 50, [](int) { return Rational(0); });
  ck(rows.size() == 1 && rows[0].radius() < 0.1, "radius at k=50 is " + (rows.empty() ? std::string("?") : str(rows[0].radius())));
  if (o.pass) o.note = "min slack " + str(min_slack) + ", radius(50) " + str(rows[0].radius());
  return o;
}

Outcome c9_scl() {
  Outcome o;
  Check ck{o};
  const auto rows = scl_lower_bound(2, 20);
  ck(rows.size() == 19, "row count");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const int n = r.n;
    ck(r.f_value == static_cast<double>(n) && r.exact, "f_" + std::to_string(n) + " = " + str(r.f_value));
    // equator: lambda 1/2, defect 2; level link with 2n-1 circles and eta 0: lambda 1/(2n)
    const Rational d1 = Rational(2 * 2, 1) * Rational(1, 2) / 1;
    const Rational dn = Rational(2 * 2 * n) * Rational(1, 2 * n) / (2 * n - 1);
    const Rational D = d1 + dn;
    ck(r.defect_l1 == d1 && r.defect_ln == dn && r.defect_sum == D, "defects at n=" + std::to_string(n));
    ck(r.scl_lower >= n / to_double(D), "scl bound below n/D at n=" + std::to_string(n));
    if (i > 0) ck(r.scl_lower > rows[i - 1].scl_lower, "not increasing at n=" + std::to_string(n));
  }
  if (o.pass) o.note = "scl(20) >= " + str(rows.back().scl_lower);
  return o;
}

std::string random_profile(std::mt19937_64& rng, bool time_dependent) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::ostringstream e;
  e.precision(17);
  e << "(" << U(rng) << ")*z + (" << U(rng) << ")*z^3 + (" << U(rng) << ")*cos(" << 1 + rng() % 7 << "*z)";
  if (time_dependent) e << " + (" << U(rng) << ")*sin(3*t)*z";
  return e.str();
}

Outcome c10_engine() {
  Outcome o;
  Check ck{o};
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  int adapted = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::string tag = "pair " + std::to_string(trial);
    const int k = 1 + static_cast<int>(rng() % 6);
    const Rational eta = k == 1 ? Rational(0) : Rational(static_cast<long long>(rng() % 3), 4 * k * (k - 1) + 1);
    const bool equi = k >= 2 && trial % 4 == 3;
    const SurfaceLink link = equi ? build_equidistributed_link(k, Rational(0)).link : build_parallel_link(k, eta);
    const std::optional<Rational> e = equi ? std::optional<Rational>(Rational(0)) : std::optional<Rational>(eta);

    // link-adapted: a(t) g(z) on horizontal circles
    if (!equi) {
      const double a0 = U(rng), a1 = U(rng);
      const std::string g = random_profile(rng, false);
      const Expr ge = Expr::parse(g);
      const Hamiltonian ha = Hamiltonian::z_profile("((" + str(a0) + ") + (" + str(a1) + ")*t^2) * (" + g + ")");
      const auto b = bound(ha, link, e);
      double avg = 0;
      for (const auto& c : link.circles) avg += ge.eval(Point{0, to_double(c.realization.level), 0});
      avg /= static_cast<double>(k);
      const double oracle = (std::stod(str(a0)) + std::stod(str(a1)) / 3) * avg;
      ck(b.width() == 0.0, tag + ": adapted input has width " + str(b.width()));
      ck(std::abs(b.mid() - oracle) < 1e-10 * (1 + std::abs(oracle)), tag + ": adapted value " + str(b.mid()) + " vs " + str(oracle));
      ++adapted;
    }

    Hamiltonian h;
    if (trial % 3 == 0) {
      // theta-dependent grid on the sphere
      GridData gd;
      gd.nx = 5 + static_cast<int>(rng() % 6);
      gd.ntheta = 3 + static_cast<int>(rng() % 5);
      for (int q = 0; q < gd.nx * gd.ntheta; ++q) gd.values.push_back(U(rng));
      h = Hamiltonian::grid(Model::sphere, gd);
    } else {
      h = Hamiltonian::z_profile(random_profile(rng, trial % 3 == 1));
    }

    const auto base = bound(h, link, e);
    ck(base.lower <= base.upper, tag + ": inverted interval");

    // shift equivariance: the added constant is exactly the recorded shift value
    const double sa = std::stod(str(U(rng))), sb = std::stod(str(U(rng)));
    const auto sh = bound(add_shift(h, Expr::parse("(" + str(sa) + ")*cos(2*t) + (" + str(sb) + ")")), link, e);
    const double analytic = sa * std::sin(2.0) / 2 + sb;
    const auto& step = sh.derivation.back();
    ck(step.rule == Rule::Shift, tag + ": no shift step recorded");
    ck(std::abs(step.lower - analytic) < 1e-13, tag + ": shift value " + str(step.lower) + " vs " + str(analytic));
    ck(sh.lower == base.lower + step.lower && sh.upper == base.upper + step.lower, tag + ": shift not equivariant");

    // Hofer propagation: int min (H' - H) <= c(H') - c(H) <= int max (H' - H)
    const Expr pert = Expr::parse("0.1 * (" + random_profile(rng, false) + ")");
    const auto bp = bound(add(h, Hamiltonian::z_profile(pert)), link, e);
    double pmin = 1e300, pmax = -1e300;
    for (int q = 0; q <= 200000; ++q) {
      const double v = pert.eval(Point{0, q / 200000.0, 0});
      pmin = std::min(pmin, v);
      pmax = std::max(pmax, v);
    }
    const double slackw = 0.5 * (base.width() + bp.width()) + 1e-9;
    const double diff = bp.mid() - base.mid();
    ck(diff >= pmin - slackw && diff <= pmax + slackw,
       tag + ": Hofer propagation violated, " + str(diff) + " outside [" + str(pmin) + ", " + str(pmax) + "]");

    // rules switched on one at a time, in a random order
    std::vector<bool BoundOptions::*> flags{&BoundOptions::lagrangian_control, &BoundOptions::hofer_lipschitz,
                                            &BoundOptions::monotonicity, &BoundOptions::support_control,
                                            &BoundOptions::exact_link_adapted, &BoundOptions::subadditivity};
    std::shuffle(flags.begin(), flags.end(), rng);
    BoundOptions opts;
    for (auto f : flags) opts.*f = false;
    opts.monotonicity = true;  // needs one finite rule to start from
    Interval prev = Interval::entire();
    for (auto f : flags) {
      opts.*f = true;
      const auto b = bound(h, link, e, opts);
      ck(prev.contains(Interval(b.lower, b.upper)), tag + ": enabling a rule widened the interval");
      prev = Interval(b.lower, b.upper);
    }
  }
  if (o.pass) o.note = std::to_string(adapted) + " link-adapted cases";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double limit_s;  // 0 = no runtime requirement
  };
  const std::vector<Criterion> all = {
      {"1 lambda closed form", c1_lambda, 1.0},
      {"2 link consistency", c2_consistency, 0.0},
      {"3 monotonicity identity", c3_identity, 1.0},
      {"4 potential critical points", c4_critical, 10.0},
      {"5 handleslide invariance", c5_handleslide, 0.0},
      {"6 Calabi property", c6_calabi, 30.0},
      {"7 infinite twist", c7_twist, 60.0},
      {"8 quasimorphism arithmetic", c8_quasi, 0.0},
      {"9 scl divergence", c9_scl, 0.0},
      {"10 bound engine soundness", c10_engine, 0.0},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs >= c.limit_s) {
      if (o.pass) o.note = "runtime " + str(secs) + " s over " + str(c.limit_s) + " s";
      o.pass = false;
    }
    if (!o.pass) ++failed;
    std::printf("%s  criterion %-30s %8.3f s  %s\n", o.pass ? "PASS" : "FAIL", c.name, secs, o.note.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
