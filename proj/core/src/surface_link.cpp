#include "linkspec/surface_link.hpp"

#include "linkspec/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace linkspec {

std::array<double, 2> CircleRealization::z_range() const {
  switch (kind) {
    case Kind::z_level: {
      const double z = to_double(level);
      return {z, z};
    }
    case Kind::polygon: {
      if (polygon.empty()) break;
      double lo = polygon.front()[0], hi = lo;
      for (const auto& p : polygon) {
        lo = std::min(lo, p[0]);
        hi = std::max(hi, p[0]);
      }
      return {lo, hi};
    }
    default:
      break;
  }
  throw ValidationError("circle has no z realization");
}

int SurfaceLink::circle_index(const std::string& id) const {
  for (std::size_t i = 0; i < circles.size(); ++i)
    if (circles[i].id == id) return static_cast<int>(i);
  return -1;
}

std::uint64_t SurfaceLink::fingerprint() const {
  std::ostringstream os;
  os << surface.genus << '|' << surface.total_area << '|';
  for (const auto& c : circles) os << c.id << ',' << c.contractible << ';';
  os << '|';
  for (const auto& r : regions) {
    os << r.id << ':' << r.area << ':';
    for (const auto& b : r.boundary) os << b.circle << (b.sign > 0 ? '+' : '-');
    os << ';';
  }
  const std::string s = os.str();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

ValidationReport validate_link(const SurfaceLink& link) {
  ValidationReport rep;
  auto bad = [&](const std::string& m) { rep.violations.push_back(m); };
  const auto& S = link.surface;
  if (S.genus < 0) bad("genus must be non-negative");
  if (S.total_area <= 0) bad("total_area must be positive");

  std::set<std::string> ids;
  for (const auto& c : link.circles) {
    if (c.id.empty()) bad("circle with empty id");
    if (!ids.insert(c.id).second) bad("duplicate circle id '" + c.id + "'");
    if (c.orientation != 1 && c.orientation != -1)
      bad("circle '" + c.id + "' orientation must be +1 or -1");
    const auto& re = c.realization;
    if (re.kind == CircleRealization::Kind::z_level && (re.level <= 0 || re.level >= 1))
      bad("circle '" + c.id + "' z-level must lie strictly inside (0,1)");
    if (re.kind == CircleRealization::Kind::r_level && re.level <= 0)
      bad("circle '" + c.id + "' r-level must be positive");
    if (re.kind == CircleRealization::Kind::polygon && re.polygon.size() < 3)
      bad("circle '" + c.id + "' polygon needs at least 3 vertices");
  }

  std::set<std::string> region_ids;
  // circle id -> list of (region index, sign)
  std::map<std::string, std::vector<std::pair<std::size_t, int>>> seen;
  Rational area_sum = 0;
  long euler = 0;
  for (std::size_t j = 0; j < link.regions.size(); ++j) {
    const auto& r = link.regions[j];
    if (!region_ids.insert(r.id).second) bad("duplicate region id '" + r.id + "'");
    if (r.area <= 0) bad("region '" + r.id + "' area must be positive");
    if (r.boundary_count != static_cast<int>(r.boundary.size()))
      bad("region '" + r.id + "' boundary_count " + std::to_string(r.boundary_count) +
          " differs from its " + std::to_string(r.boundary.size()) + " boundary incidences");
    for (const auto& b : r.boundary) {
      if (!ids.count(b.circle)) bad("region '" + r.id + "' references unknown circle '" + b.circle + "'");
      if (b.sign != 1 && b.sign != -1) bad("region '" + r.id + "' incidence sign must be +1 or -1");
      seen[b.circle].push_back({j, b.sign});
    }
    area_sum += r.area;
    euler += 2 - r.boundary_count;
  }
  if (area_sum != S.total_area)
    bad("region areas sum to " + format_rational(area_sum) + ", expected total_area " +
        format_rational(S.total_area));
  if (euler != 2 - 2L * S.genus)
    bad("sum of (2 - k_j) is " + std::to_string(euler) + ", expected 2 - 2g = " +
        std::to_string(2 - 2L * S.genus));
  const long k = static_cast<long>(link.circles.size());
  const long s = static_cast<long>(link.regions.size());
  if (s != k - S.genus + 1)
    bad("s = " + std::to_string(s) + " but k - g + 1 = " + std::to_string(k - S.genus + 1));
  if (s < 2) bad("at least two complement regions are required");

  for (const auto& c : link.circles) {
    const auto it = seen.find(c.id);
    const std::size_t n = it == seen.end() ? 0 : it->second.size();
    if (n != 2) {
      bad("circle '" + c.id + "' has " + std::to_string(n) + " boundary incidences, expected 2");
      continue;
    }
    const auto& a = it->second[0];
    const auto& b = it->second[1];
    if (a.second == b.second)
      bad("circle '" + c.id + "' has equal incidence signs on both sides");
    if (a.first == b.first) {
      if (c.contractible)
        bad("contractible circle '" + c.id + "' has the same region on both sides");
      rep.warnings.push_back("circle '" + c.id + "' bounds region '" + link.regions[a.first].id +
                             "' on both sides (degenerate for potential purposes)");
    }
  }
  return rep;
}

void require_valid(const SurfaceLink& link) {
  const auto rep = validate_link(link);
  if (rep.ok()) return;
  std::string msg = "invalid link:";
  for (const auto& v : rep.violations) msg += "\n  " + v;
  throw ValidationError(msg);
}

MonotonicityReport check_monotone(const SurfaceLink& link, const Rational& eta) {
  if (eta < 0) throw ValidationError("eta must be non-negative, got " + format_rational(eta));
  require_valid(link);
  MonotonicityReport rep;
  rep.eta = eta;
  for (const auto& r : link.regions) rep.values.push_back(2 * eta * (r.boundary_count - 1) + r.area);
  rep.is_monotone = std::all_of(rep.values.begin(), rep.values.end(),
                                [&](const Rational& v) { return v == rep.values.front(); });
  if (rep.is_monotone) rep.lambda = rep.values.front();
  return rep;
}

bool parallel_feasible(int k, const Rational& eta) {
  if (k < 1 || eta < 0) return false;
  return k == 1 || eta < Rational(1, 4);
}

Rational lambda_closed_form(int k, const Rational& eta) {
  if (!parallel_feasible(k, eta))
    throw ValidationError("infeasible (k, eta) = (" + std::to_string(k) + ", " +
                          format_rational(eta) + "): need k >= 1, eta >= 0 and eta < 1/4 when k >= 2");
  return (1 + 2 * eta * (k - 1)) / (k + 1);
}

SurfaceLink build_parallel_link(int k, const Rational& eta) {
  const Rational lambda = lambda_closed_form(k, eta);
  SurfaceLink link;
  std::vector<Rational> z(k);
  for (int j = 0; j < k; ++j) {
    z[j] = lambda + j * (lambda - 2 * eta);
    Circle c;
    c.id = "c" + std::to_string(j + 1);
    c.realization = CircleRealization::z_at(z[j]);
    link.circles.push_back(c);
  }
  // Band below circle j is band j, band k is above the top circle.
  std::vector<Region> bands(k + 1);
  for (int j = 0; j < k; ++j) {
    const int south = z[j] * 2 <= 1 ? 1 : -1;
    bands[j].boundary.push_back({link.circles[j].id, south});
    bands[j + 1].boundary.push_back({link.circles[j].id, -south});
  }
  bands[0].id = "south";
  bands[0].area = z[0];
  bands[k].id = "north";
  bands[k].area = 1 - z[k - 1];
  for (int j = 1; j < k; ++j) {
    bands[j].id = "annulus" + std::to_string(j);
    bands[j].area = z[j] - z[j - 1];
  }
  link.regions.push_back(bands[0]);
  link.regions.push_back(bands[k]);
  for (int j = 1; j < k; ++j) link.regions.push_back(bands[j]);
  for (auto& r : link.regions) r.boundary_count = static_cast<int>(r.boundary.size());
  return link;
}

namespace {

struct Graph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;
};

// s - 1 tree edges followed by `extra` random edges.
Graph random_graph(int s, int extra, std::mt19937_64& rng, bool allow_loops) {
  Graph g;
  g.vertices = s;
  std::vector<int> order(s);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 1; i < s; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    g.edges.push_back({order[pick(rng)], order[i]});
  }
  std::uniform_int_distribution<int> any(0, s - 1);
  for (int e = 0; e < extra; ++e) {
    int a = any(rng), b = any(rng);
    while (!allow_loops && a == b) b = any(rng);
    g.edges.push_back({a, b});
  }
  return g;
}

// Cycle rank of the components left after deleting edge `skip`, as seen from
// each endpoint; -1 when the edge is not a bridge.
std::pair<int, int> sides_cycle_rank(const Graph& g, std::size_t skip) {
  std::vector<int> comp(g.vertices, -1);
  int ncomp = 0;
  for (int v = 0; v < g.vertices; ++v) {
    if (comp[v] >= 0) continue;
    std::vector<int> stack{v};
    comp[v] = ncomp;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (e == skip) continue;
        const auto [a, b] = g.edges[e];
        int w = -1;
        if (a == u) w = b;
        else if (b == u) w = a;
        if (w >= 0 && comp[w] < 0) {
          comp[w] = ncomp;
          stack.push_back(w);
        }
      }
    }
    ++ncomp;
  }
  const auto [a, b] = g.edges[skip];
  if (comp[a] == comp[b]) return {-1, -1};
  auto rank = [&](int c) {
    int nv = 0, ne = 0;
    for (int v = 0; v < g.vertices; ++v) nv += comp[v] == c;
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      if (e != skip && comp[g.edges[e].first] == c) ++ne;
    return ne - nv + 1;
  };
  return {rank(comp[a]), rank(comp[b])};
}

SurfaceLink link_from_graph(const Graph& g, int genus, std::vector<Rational> areas, std::mt19937_64& rng) {
  SurfaceLink link;
  link.surface.genus = genus;
  link.regions.resize(g.vertices);
  for (int v = 0; v < g.vertices; ++v) link.regions[v].id = "B" + std::to_string(v + 1);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    Circle c;
    c.id = "c" + std::to_string(e + 1);
    const auto [ra, rb] = sides_cycle_rank(g, e);
    c.contractible = ra == 0 || rb == 0;
    link.circles.push_back(c);
    const int sign = coin(rng) ? 1 : -1;
    link.regions[g.edges[e].first].boundary.push_back({c.id, sign});
    link.regions[g.edges[e].second].boundary.push_back({c.id, -sign});
  }
  for (int v = 0; v < g.vertices; ++v) {
    link.regions[v].boundary_count = static_cast<int>(link.regions[v].boundary.size());
    link.regions[v].area = areas[v];
  }
  return link;
}

std::vector<Rational> random_areas(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w(1, 97);
  std::vector<long> ws(n);
  long total = 0;
  for (auto& x : ws) total += x = w(rng);
  std::vector<Rational> out;
  for (long x : ws) out.push_back(Rational(x, total));
  return out;
}

}  // namespace

SurfaceLink random_link(int genus, int k, std::mt19937_64& rng, bool allow_loops) {
  if (genus < 0 || k < genus + 1)
    throw ValidationError("random_link needs genus >= 0 and k >= genus + 1");
  const int s = k - genus + 1;
  const Graph g = random_graph(s, genus, rng, allow_loops);
  return link_from_graph(g, genus, random_areas(s, rng), rng);
}

SurfaceLink random_genus0_link(int k, std::mt19937_64& rng) { return random_link(0, k, rng, false); }

SurfaceLink random_monotone_genus0_link(int k, const Rational& eta, std::mt19937_64& rng) {
  if (k < 1) throw ValidationError("random_monotone_genus0_link needs k >= 1");
  const Graph g = random_graph(k + 1, 0, rng, false);
  std::vector<int> degree(k + 1, 0);
  for (const auto& [a, b] : g.edges) ++degree[a], ++degree[b];
  const Rational lambda = (1 + 2 * eta * (k - 1)) / (k + 1);
  std::vector<Rational> areas;
  for (int d : degree) {
    const Rational a = lambda - 2 * eta * (d - 1);
    if (a <= 0) throw ValidationError("eta too large for this tree: a region would have area <= 0");
    areas.push_back(a);
  }
  return link_from_graph(g, 0, areas, rng);
}

}  // namespace linkspec

namespace linkspec {

std::optional<Rational> monotone_eta(const SurfaceLink& link) {
  require_valid(link);
  const auto& R = link.regions;
  // 2 eta (k_a - k_b) = A_b - A_a for any two regions with k_a != k_b
  std::optional<Rational> eta;
  for (std::size_t j = 1; j < R.size() && !eta; ++j)
    if (R[j].boundary_count != R[0].boundary_count)
      eta = (R[0].area - R[j].area) / (2 * (R[j].boundary_count - R[0].boundary_count));
  if (!eta) eta = Rational(0);
  if (*eta < 0) return std::nullopt;
  if (!check_monotone(link, *eta).is_monotone) return std::nullopt;
  return eta;
}

}  // namespace linkspec
