#include <doctest.h>

#include "linkspec/equidistributed.hpp"
#include "linkspec/error.hpp"
#include "linkspec/link_io.hpp"
#include "linkspec/surface_link.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

using namespace linkspec;

namespace {

std::string data(const std::string& name) {
  const char* dir = std::getenv("LINKSPEC_TEST_DATA");
  return std::string(dir ? dir : "tests/data") + "/" + name;
}

bool has_message(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("parallel link levels and lambda from the gaps") {
  for (int k = 1; k <= 9; ++k) {
    for (const Rational eta : {Rational(0), Rational(1, 40), Rational(1, 10)}) {
      if (!parallel_feasible(k, eta)) continue;
      const SurfaceLink L = build_parallel_link(k, eta);
      REQUIRE(L.k() == static_cast<std::size_t>(k));
      REQUIRE(L.s() == static_cast<std::size_t>(k + 1));
      CHECK(validate_link(L).ok());
      // areas read off the circle heights; monotone value 2 eta (k_j - 1) + A_j must agree
      std::vector<Rational> z;
      for (const auto& c : L.circles) z.push_back(c.realization.level);
      for (std::size_t j = 1; j < z.size(); ++j) CHECK(z[j] > z[j - 1]);
      const Rational cap_s = z.front(), cap_n = 1 - z.back();
      CHECK(cap_s == cap_n);
      for (std::size_t j = 1; j < z.size(); ++j) CHECK(z[j] - z[j - 1] + 2 * eta == cap_s);
      const auto rep = check_monotone(L, eta);
      CHECK(rep.is_monotone);
      CHECK(*rep.lambda == cap_s);
      CHECK(lambda_closed_form(k, eta) == cap_s);
    }
  }
}

TEST_CASE("parallel feasibility boundary") {
  CHECK(parallel_feasible(1, Rational(5)));
  CHECK(parallel_feasible(3, Rational(1, 5)));
  CHECK_FALSE(parallel_feasible(3, Rational(1, 4)));
  CHECK_FALSE(parallel_feasible(0, Rational(0)));
  CHECK_FALSE(parallel_feasible(2, Rational(-1, 8)));
  CHECK_THROWS_AS(build_parallel_link(2, Rational(1, 4)), ValidationError);
}

TEST_CASE("monotonicity fails for the wrong eta") {
  const SurfaceLink L = build_parallel_link(3, Rational(1, 8));
  CHECK_FALSE(check_monotone(L, Rational(0)).is_monotone);
  CHECK_FALSE(check_monotone(L, Rational(0)).lambda.has_value());
  const auto e = monotone_eta(L);
  REQUIRE(e.has_value());
  CHECK(*e == Rational(1, 8));
  // every region of the single equator has one boundary circle, so any eta works
  CHECK(monotone_eta(build_parallel_link(1, Rational(0))) == Rational(0));
}

TEST_CASE("random links satisfy the counting relations") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int g = trial % 4;
    const int k = g + 1 + static_cast<int>(rng() % 8);
    const SurfaceLink L = random_link(g, k, rng);
    CHECK(validate_link(L).ok());
    CHECK(static_cast<int>(L.s()) == k - g + 1);
    Rational total(0);
    for (const auto& r : L.regions) {
      total += r.area;
      CHECK(r.area > 0);
    }
    CHECK(total == L.surface.total_area);
    // every circle has exactly two incidences
    for (const auto& c : L.circles) {
      int n = 0;
      for (const auto& r : L.regions)
        for (const auto& b : r.boundary) n += b.circle == c.id;
      CHECK(n == 2);
    }
  }
}

TEST_CASE("random monotone trees are monotone") {
  std::mt19937_64 rng(32);
  for (int k = 1; k <= 8; ++k) {
    const Rational eta(1, 50);
    const SurfaceLink L = random_monotone_genus0_link(k, eta, rng);
    CHECK(validate_link(L).ok());
    CHECK(check_monotone(L, eta).is_monotone);
  }
}

TEST_CASE("validator catches malformed links") {
  const SurfaceLink bad_area = load_link(data("invalid_areas.json"));
  const auto r1 = validate_link(bad_area);
  CHECK_FALSE(r1.ok());
  CHECK(has_message(r1.violations, "areas sum"));
  const auto r2 = validate_link(load_link(data("unknown_circle.json")));
  CHECK(has_message(r2.violations, "unknown circle 'c9'"));
  CHECK_THROWS_AS(require_valid(bad_area), ValidationError);

  SurfaceLink L = build_parallel_link(2, Rational(0));
  L.regions[0].area = Rational(-1, 3);
  L.regions[1].area = Rational(1);
  CHECK_FALSE(validate_link(L).ok());
}

TEST_CASE("self-loop circles are flagged but accepted") {
  std::mt19937_64 rng(77);
  bool seen = false;
  for (int trial = 0; trial < 200 && !seen; ++trial) {
    const SurfaceLink L = random_link(1, 2, rng, true);
    for (const auto& r : L.regions)
      for (std::size_t i = 0; i < r.boundary.size(); ++i)
        for (std::size_t j = i + 1; j < r.boundary.size(); ++j)
          if (r.boundary[i].circle == r.boundary[j].circle) {
            seen = true;
            const auto rep = validate_link(L);
            CHECK(rep.ok());
            CHECK(has_message(rep.warnings, "degenerate"));
          }
  }
  CHECK(seen);
}

TEST_CASE("link JSON round trip and parse errors") {
  const SurfaceLink L = build_parallel_link(4, Rational(1, 30));
  const SurfaceLink back = parse_link(link_to_json(L));
  CHECK(back.fingerprint() == L.fingerprint());
  CHECK(link_to_json(back) == link_to_json(L));
  for (std::size_t i = 0; i < L.k(); ++i) CHECK(back.circles[i].realization.level == L.circles[i].realization.level);

  const auto tmp = std::filesystem::temp_directory_path() / "linkspec_link_roundtrip.json";
  save_link(L, tmp.string());
  CHECK(load_link(tmp.string()).fingerprint() == L.fingerprint());
  std::filesystem::remove(tmp);

  try {
    load_link(data("missing_area.json"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("regions[0].area") != std::string::npos);
  }
  CHECK_THROWS_AS(load_link(data("malformed.json")), ParseError);
  CHECK_THROWS_AS(load_link(data("no_such_file.json")), IoError);
  CHECK_THROWS_AS(parse_link(R"({"genus": 0, "circles": [], "regions": [{"id": "a", "area": "x"}]})"), ParseError);
}

TEST_CASE("equidistributed links") {
  CHECK(equidistributed_eta_ok(5, Rational(0)));
  CHECK_FALSE(equidistributed_eta_ok(5, Rational(1, 40)));
  CHECK(equidistributed_eta_ok(5, Rational(1, 41)));
  CHECK_FALSE(equidistributed_eta_ok(1, Rational(0)));
  for (int m : {4, 8, 16, 32, 64}) {
    const auto e = build_equidistributed_link(m, Rational(0));
    CHECK(e.alpha == Rational(1, m + 1));
    CHECK(e.alpha * m + e.complement_area == 1);
    CHECK(e.noncontractible == 0);
    CHECK(validate_link(e.link).ok());
    CHECK(check_monotone(e.link, Rational(0)).is_monotone);
    CHECK(e.diameters.size() == static_cast<std::size_t>(m));
  }
  // the helical layout only starts shrinking once the strip wraps several times
  double prev = 10;
  for (int m : {32, 64, 128, 256}) {
    const double d = build_equidistributed_link(m, Rational(0)).max_diameter;
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 0.4);
  const Rational eta(1, 200);
  const auto e = build_equidistributed_link(6, eta);
  // alpha = complement + 2 eta (m - 1) with m alpha + complement = 1
  CHECK(e.alpha == (1 + 2 * eta * 5) / 7);
  CHECK(check_monotone(e.link, eta).is_monotone);
  const auto seq = build_equidistributed_sequence(6, [](int) { return Rational(0); });
  CHECK(seq.size() == 5);
  CHECK(seq.front().m == 2);
}
