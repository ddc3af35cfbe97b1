#include <doctest.h>

#include "linkspec/error.hpp"
#include "linkspec/quasimorphism.hpp"

#include <cmath>
#include <random>
#include <string>

using namespace linkspec;

namespace {

double level_average(const Hamiltonian& h, const SurfaceLink& L) {
  double s = 0;
  for (const auto& c : L.circles) s += h(0, to_double(c.realization.level));
  return s / static_cast<double>(L.k());
}

Hamiltonian random_profile(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  const Expr e = Expr(U(rng)) * Expr::parse("z^3") + Expr(U(rng)) * Expr::parse("sin(4*z)") + Expr(U(rng));
  return Hamiltonian::z_profile(e);
}

}  // namespace

TEST_CASE("defect of parallel links") {
  for (int k = 1; k <= 8; ++k)
    for (const Rational eta : {Rational(0), Rational(1, 4 * k * k + 4)}) {
      const DefectBound d = defect_bound(k, eta);
      // 2 (k+1) lambda / k with (k+1) lambda = 1 + 2 eta (k-1)
      CHECK(d.defect == 2 * (1 + 2 * eta * (k - 1)) / k);
      CHECK(d.duality_constant() * 2 == d.defect);
      const DefectBound e = defect_bound(build_parallel_link(k, eta), eta);
      CHECK(e.defect == d.defect);
      CHECK(e.lambda == d.lambda);
    }
  CHECK(defect_bound(2, Rational(0)).defect == 1);
  CHECK_THROWS_AS(defect_bound(build_parallel_link(3, Rational(1, 8)), Rational(0)), ValidationError);
}

TEST_CASE("homogenization") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const Hamiltonian h = mean_normalize(random_profile(rng));
    const SurfaceLink L = build_parallel_link(1 + trial % 5, Rational(0));
    const QuasiValue q = homogenize(h, L, 7);
    CHECK(q.exact);
    CHECK(q.error_bound == 0.0);
    CHECK(q.value() == doctest::Approx(level_average(h, L)).epsilon(1e-12));
    CHECK(q.mu_lo() == q.mu_hi());
  }
  // theta-dependent: an enclosure with the defect/n slack
  GridData g;
  g.nx = 3;
  g.ntheta = 3;
  g.values = {1, -1, 0, 2, 0, -2, 1, 1, -2};
  const Hamiltonian gh = mean_normalize(Hamiltonian::grid(Model::sphere, g));
  const SurfaceLink L = build_parallel_link(2, Rational(0));
  const QuasiValue q = homogenize(gh, L, 4);
  CHECK_FALSE(q.exact);
  CHECK(q.error_bound == doctest::Approx(1.0 / 4));
  CHECK(q.lower <= q.upper);
  CHECK(q.mu_lo() < q.lower);
  CHECK_THROWS_AS(homogenize(Hamiltonian::z_profile("z"), L, 2), ValidationError);
  CHECK_THROWS_AS(homogenize(mean_normalize(Hamiltonian::z_profile("t*z")), L, 2), ValidationError);
  CHECK_THROWS_AS(homogenize(mean_normalize(Hamiltonian::z_profile("z")), L, 0), ValidationError);
}

TEST_CASE("duality inequality") {
  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 12; ++trial) {
    const int k = 1 + trial % 3;
    const SurfaceLink L = build_parallel_link(k, Rational(0));
    const DualityResult r = duality_check(random_profile(rng), L);
    CHECK(r.holds);
    CHECK(r.rhs == Rational(1, k));
    // level-preserving H: c(H) + c(H-bar) = 0
    CHECK(std::abs(r.lhs) < 1e-12);
    CHECK(r.slack == doctest::Approx(1.0 / k - r.lhs));
  }
}

TEST_CASE("scl family") {
  for (int n = 2; n <= 6; ++n) {
    const Hamiltonian h = scl_family_hamiltonian(n);
    CHECK(std::abs(integrate(h)) < 1e-12);
    REQUIRE(h.support().has_value());
    CHECK(h.support()->lo == 0.0);
    CHECK(h.support()->hi == doctest::Approx(0.75 / n));
    CHECK(h(0, 0.75 / n + 1e-9) == 0.0);
    CHECK(h(0, 1.0 / (2 * n)) == doctest::Approx(n * (2.0 * n - 1)).epsilon(1e-12));
    const SurfaceLink L = scl_family_link(n);
    CHECK(L.k() == static_cast<std::size_t>(2 * n - 1));
    CHECK(level_average(h, L) == doctest::Approx(n).epsilon(1e-12));
  }
  const auto rows = scl_lower_bound(2, 5);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r.exact);
    CHECK(r.f_value == doctest::Approx(r.n).epsilon(1e-12));
    CHECK(r.defect_sum == 2 + Rational(2, 2 * r.n - 1));
    CHECK(r.scl_lower == doctest::Approx(r.n / (2.0 + 2.0 / (2 * r.n - 1))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(scl_family_hamiltonian(1), ValidationError);
  CHECK_THROWS_AS(scl_lower_bound(1, 3), ValidationError);
}

TEST_CASE("independence witnesses") {
  const IndependenceWitness w =
      independence_witness({{1, Rational(0)}, {2, Rational(0)}, {3, Rational(1, 20)}, {2, Rational(1, 8)}});
  REQUIRE(w.members.size() == 4);
  CHECK(w.triangular_unit);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(w.matrix[i][i] == 1.0);
    for (std::size_t j = i + 1; j < 4; ++j) CHECK(w.matrix[i][j] == 0.0);
    // the witness bump meets only its own distinguishing circle among the later links
    const auto& m = w.members[i];
    CHECK(m.witness(0, to_double(m.level)) == doctest::Approx(m.k));
  }
  try {
    // 1/2 and 1/3, 2/3 both sit inside 1/3, 1/2, 2/3
    independence_witness({{1, Rational(0)}, {2, Rational(0)}, {3, Rational(1, 12)}, {2, Rational(1, 8)}});
    FAIL("expected an inseparable family");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("circles not separable") != std::string::npos);
  }
  CHECK_THROWS_AS(independence_witness({{2, Rational(0)}, {2, Rational(0)}}), ValidationError);
  CHECK_THROWS_AS(independence_witness({}), ValidationError);
}

TEST_CASE("quasi-Calabi rows") {
  const Hamiltonian h = mean_normalize(Hamiltonian::z_profile("z^2"));
  const auto rows = quasicalabi_check(h, 1, 6, [](int) { return Rational(0); });
  REQUIRE(rows.size() == 6);
  for (const auto& r : rows) {
    CHECK(r.d_k == Rational(1, r.k));
    CHECK(r.c_lo == r.c_hi);
    CHECK(r.c_lo == doctest::Approx(level_average(h, build_parallel_link(r.k, Rational(0)))).epsilon(1e-12));
    CHECK(r.mu_hi - r.mu_lo == doctest::Approx(2.0 / r.k));
    CHECK(r.radius() >= std::abs(r.c_lo));
  }
  CHECK_THROWS_AS(quasicalabi_check(h, 2, 3, [](int) { return Rational(1); }), ValidationError);
  CHECK_THROWS_AS(quasicalabi_check(h, 1, 3, [](int) { return Rational(0); }, LinkFamily::equidistributed),
                  ValidationError);
  CHECK_THROWS_AS(quasicalabi_check(Hamiltonian::z_profile("z"), 1, 2, [](int) { return Rational(0); }),
                  ValidationError);
}

TEST_CASE("fragmentation witness vanishes on cap-supported H") {
  const FragmentationWitness w = fragmentation_witness(Rational(1, 4));
  CHECK(w.l1.k() == 1);
  CHECK(w.l2.k() == 2);
  CHECK(check_monotone(w.l2, w.eta2).is_monotone);
  const Hamiltonian h = Hamiltonian::z_profile("max(0.2 - z, 0)^2").with_support({0.0, 0.2});
  const auto [lo, hi] = fragmentation_value(w, h);
  CHECK(lo == doctest::Approx(0.0));
  CHECK(hi == doctest::Approx(0.0));
  CHECK_THROWS_AS(fragmentation_value(w, Hamiltonian::z_profile("z").with_support({0.0, 0.4})), ValidationError);
  CHECK_THROWS_AS(fragmentation_witness(Rational(1, 2)), ValidationError);
}
