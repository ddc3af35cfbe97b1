#include <doctest.h>

#include "linkspec/disc_potential.hpp"
#include "linkspec/error.hpp"
#include "linkspec/surface_link.hpp"

#include <cmath>
#include <random>

using namespace linkspec;

namespace {

Complex direct_eval(const DiscPotential& w, const std::vector<Complex>& x) {
  Complex s = 0;
  for (const auto& m : w.monomials) {
    Complex term(to_double(m.coeff.re), to_double(m.coeff.im));
    for (std::size_t i = 0; i < x.size(); ++i) term *= std::pow(x[i], static_cast<double>(m.exponent[i]));
    s += term;
  }
  return s;
}

std::vector<Complex> random_point(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> U(0.5, 1.5), A(-3.0, 3.0);
  std::vector<Complex> x(n);
  for (auto& c : x) c = std::polar(U(rng), A(rng));
  return x;
}

}  // namespace

TEST_CASE("potential of parallel circles") {
  const SurfaceLink L = build_parallel_link(2, Rational(0));
  const DiscPotential W = build_potential(L);
  CHECK(W.nvars() == 2);
  CHECK(W.monomials.size() == L.s());
  for (long long s : exponent_sums(W)) CHECK(s == 0);
  for (const auto& g : gradient_at_ones(W)) CHECK(g == ComplexRational{Rational(0), Rational(0)});
  // T exponents: A_j + 2 (k_j - 1) eta, all equal to lambda on a monotone link
  const Rational eta(1, 12);
  const SurfaceLink M = build_parallel_link(3, eta);
  const DiscPotential Wt = build_potential(M, eta);
  for (const auto& m : Wt.monomials) CHECK(m.area_exponent == check_monotone(M, eta).lambda.value());
  for (const auto& m : specialize(Wt).monomials) CHECK(m.area_exponent == 0);
  CHECK_FALSE(to_string(W).empty());
}

TEST_CASE("evaluation, gradient and Hessian against finite differences") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const SurfaceLink L = random_genus0_link(2 + static_cast<int>(rng() % 4), rng);
    const DiscPotential W = specialize(build_potential(L));
    const auto x = random_point(rng, W.nvars());
    const auto ev = eval_grad_hess(W, x);
    CHECK(std::abs(ev.value - direct_eval(W, x)) < 1e-12);
    const double h = 1e-6;
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const Complex fd = (direct_eval(W, xp) - direct_eval(W, xm)) / (2 * h);
      CHECK(std::abs(fd - ev.gradient[i]) < 1e-6);
      const auto gp = eval_grad_hess(W, xp).gradient, gm = eval_grad_hess(W, xm).gradient;
      for (std::size_t j = 0; j < x.size(); ++j) {
        CHECK(std::abs((gp[j] - gm[j]) / (2 * h) - ev.hessian[i][j]) < 1e-5);
        CHECK(std::abs(ev.hessian[i][j] - ev.hessian[j][i]) < 1e-12);
      }
    }
  }
  const DiscPotential C = clifford_potential(2);
  CHECK_THROWS_AS(eval_grad_hess(C, {Complex(0), Complex(1)}), ValidationError);
  CHECK_THROWS_AS(eval_grad_hess(C, {Complex(1)}), ValidationError);
}

TEST_CASE("Clifford critical points are the roots of unity") {
  for (int k = 1; k <= 5; ++k) {
    const auto res = find_critical_points(clifford_potential(k));
    REQUIRE(res.points.size() == static_cast<std::size_t>(k + 1));
    for (const auto& p : res.points) {
      for (const auto& x : p.coords) {
        CHECK(std::abs(std::pow(x, k + 1) - 1.0) < 1e-10);
        CHECK(std::abs(x - p.coords[0]) < 1e-10);
      }
      CHECK(p.non_degenerate);
      CHECK(std::abs(p.hessian_det) == doctest::Approx(k + 1).epsilon(1e-9));
      CHECK(p.residual < 1e-10);
    }
  }
}

TEST_CASE("solver is deterministic for a fixed seed") {
  std::mt19937_64 rng(52);
  const DiscPotential W = specialize(build_potential(random_genus0_link(4, rng)));
  SolverOptions o;
  o.seed = 99;
  const auto a = find_critical_points(W, o);
  const auto b = find_critical_points(W, o);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].coords == b.points[i].coords);
}

TEST_CASE("degenerate critical points are reported as such") {
  // (x - 1)^3 = x^3 - 3x^2 + 3x - 1 has a triple critical point at 1
  DiscPotential W;
  W.variables = {"x"};
  auto mono = [](long long c, long long e) {
    Monomial m;
    m.coeff = {Rational(c), Rational(0)};
    m.exponent = {e};
    return m;
  };
  W.monomials = {mono(1, 3), mono(-3, 2), mono(3, 1)};
  const auto ev = eval_grad_hess(W, {Complex(1.0)});
  CHECK(std::abs(ev.gradient[0]) < 1e-15);
  CHECK(std::abs(ev.hessian[0][0]) < 1e-15);
  const auto res = find_critical_points(W);
  REQUIRE(res.points.size() == 1);
  CHECK(std::abs(res.points[0].coords[0] - 1.0) < 1e-6);
  CHECK_FALSE(res.points[0].non_degenerate);
}

TEST_CASE("handleslides are invertible monomial substitutions") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const DiscPotential W = specialize(build_potential(random_genus0_link(3 + static_cast<int>(rng() % 3), rng)));
    const std::size_t i = 0, j = 1 + rng() % (W.nvars() - 1);
    const int eps = trial % 2 ? 1 : -1;
    const DiscPotential S = handleslide(W, i, j, eps);
    const auto x = random_point(rng, W.nvars());
    const auto y = handleslide_point(x, i, j, eps);
    // W(x) = S(y): the substitution only renames coordinates
    CHECK(std::abs(direct_eval(W, x) - direct_eval(S, y)) < 1e-11);
    const DiscPotential back = handleslide(S, i, j, -eps);
    CHECK(std::abs(direct_eval(back, x) - direct_eval(W, x)) < 1e-11);
    const auto xb = handleslide_point(y, i, j, -eps);
    for (std::size_t v = 0; v < x.size(); ++v) CHECK(std::abs(xb[v] - x[v]) < 1e-13);
  }
  CHECK_THROWS_AS(handleslide(clifford_potential(2), 0, 0, 1), ValidationError);
  CHECK_THROWS_AS(handleslide(clifford_potential(2), 0, 1, 2), ValidationError);
}

TEST_CASE("net-zero circles are flagged") {
  std::mt19937_64 rng(54);
  bool seen = false;
  for (int trial = 0; trial < 200 && !seen; ++trial) {
    const SurfaceLink L = random_link(1, 2, rng, true);
    const DiscPotential W = build_potential(L);
    if (!W.warnings.empty()) {
      seen = true;
      CHECK(W.warnings.front().find("circle") != std::string::npos);
    }
  }
  CHECK(seen);
}
