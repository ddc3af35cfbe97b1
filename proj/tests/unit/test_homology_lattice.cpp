#include <doctest.h>

#include "linkspec/error.hpp"
#include "linkspec/homology_lattice.hpp"
#include "linkspec/surface_link.hpp"

#include <random>

using namespace linkspec;

TEST_CASE("basic and sphere classes") {
  const SurfaceLink L = build_parallel_link(3, Rational(1, 8));
  const DiscClass u0 = basic_class(L, 0);
  CHECK(u0.coeffs == std::vector<long long>{1, 0, 0, 0});
  const auto inv = class_invariants(L, u0);
  CHECK(inv.maslov == 2);
  CHECK(inv.area == L.regions[0].area);
  CHECK(inv.delta == 0);

  const auto s = class_invariants(L, sphere_class(L));
  CHECK(s.area == 1);
  CHECK(s.maslov == 2 * static_cast<long long>(L.s()));
  // delta of the sphere: sum of 2 (k_j - 1) over regions = 2 (2k - (k+1))
  CHECK(s.delta == 2 * (2 * 3 - 4));
}

TEST_CASE("monotonicity identity on random classes") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> cd(-6, 6);
  for (int k = 1; k <= 6; ++k) {
    const Rational eta = k == 1 ? Rational(3) : Rational(1, 4 * k * k);
    const SurfaceLink L = build_parallel_link(k, eta);
    const Rational lambda = check_monotone(L, eta).lambda.value();
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<long long> c(L.s());
      for (auto& x : c) x = cd(rng);
      const DiscClass cls = make_class(L, c);
      CHECK(check_monotonicity_identity(L, eta, cls));
      const auto inv = class_invariants(L, cls);
      CHECK(inv.area + eta * inv.delta == lambda / 2 * inv.maslov);
    }
  }
  // monotone random trees
  for (int k = 2; k <= 7; ++k) {
    const Rational eta(1, 60);
    const SurfaceLink L = random_monotone_genus0_link(k, eta, rng);
    std::vector<long long> c(L.s());
    for (auto& x : c) x = cd(rng);
    CHECK(check_monotonicity_identity(L, eta, make_class(L, c)));
  }
}

TEST_CASE("identity requires a monotone link") {
  const SurfaceLink L = build_parallel_link(3, Rational(1, 8));
  CHECK_THROWS_AS(check_monotonicity_identity(L, Rational(0), basic_class(L, 0)), ValidationError);
}

TEST_CASE("basis tags tie classes to their link") {
  const SurfaceLink A = build_parallel_link(2, Rational(0));
  const SurfaceLink B = build_parallel_link(2, Rational(1, 10));
  const DiscClass c = basic_class(A, 1);
  CHECK_THROWS_AS(class_invariants(B, c), ValidationError);
  CHECK_THROWS_AS(make_class(A, {1, 2}), ValidationError);
}

TEST_CASE("Riemann-Hurwitz and the index identity") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> cd(0, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 7);
    const SurfaceLink L = random_genus0_link(k, rng);
    std::vector<long long> c(L.s());
    for (auto& x : c) x = cd(rng);
    const DiscClass cls = make_class(L, c);
    long long chi = k;
    for (std::size_t i = 0; i < c.size(); ++i) chi -= 2 * (L.regions[i].boundary_count - 1) * c[i];
    CHECK(riemann_hurwitz(L, cls) == chi);
    const auto id = index_identity(L, cls);
    CHECK(id.holds);
    long long mu = 0;
    for (long long x : c) mu += 2 * x;
    CHECK(id.vdim_u_plus_3 == k + mu);
  }
  const SurfaceLink L = build_parallel_link(2, Rational(0));
  CHECK_THROWS_AS(riemann_hurwitz(L, make_class(L, {1, -1, 0})), ValidationError);
}
