#include "commands.hpp"

#include "linkspec/equidistributed.hpp"
#include "linkspec/error.hpp"
#include "linkspec/hamiltonian_io.hpp"
#include "linkspec/link_io.hpp"
#include "linkspec/spectral_calculus.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <ostream>

namespace linkspec::cli {

using nlohmann::json;

Range parse_range(const std::string& text, const char* what) {
  const auto dots = text.find("..");
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size())
      throw ValidationError(std::string(what) + ": '" + text + "' is not an integer range (use lo..hi)");
    return v;
  };
  Range r;
  if (dots == std::string::npos) {
    r.lo = r.hi = to_int(text);
  } else {
    r.lo = to_int(text.substr(0, dots));
    r.hi = to_int(text.substr(dots + 2));
  }
  if (r.hi < r.lo) throw ValidationError(std::string(what) + ": empty range '" + text + "'");
  return r;
}

std::vector<int> range_values(const Range& r, int step) {
  if (step < 1) throw ValidationError("step must be >= 1");
  std::vector<int> v;
  for (int x = r.lo; x <= r.hi; x += step) v.push_back(x);
  return v;
}

EtaRule parse_eta_rule(const std::string& text) {
  if (text == "zero") return [](int) { return Rational(0); };
  if (text == "quarter")
    return [](int k) { return k < 2 ? Rational(0) : Rational(1, 4 * static_cast<long long>(k) * (k - 1)); };
  const Rational c = parse_rational(text);
  if (c < 0) throw ValidationError("eta must be non-negative");
  return [c](int) { return c; };
}

TruncationRule parse_truncation_rule(const std::string& text) {
  if (text == "radius") return TruncationRule::radius;
  if (text == "linear") return TruncationRule::linear;
  throw ValidationError("unknown truncation rule '" + text + "' (radius or linear)");
}

LinkFamily parse_link_family(const std::string& text) {
  if (text == "parallel") return LinkFamily::parallel;
  if (text == "equidistributed") return LinkFamily::equidistributed;
  throw ValidationError("unknown link family '" + text + "' (parallel or equidistributed)");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Table calabi_table(const Hamiltonian& h, const std::vector<int>& ms, const EtaRule& eta) {
  std::vector<EquidistributedLink> links;
  for (int m : ms) links.push_back(build_equidistributed_link(m, eta(m)));
  const auto rows = calabi_property_table(h, links);
  Table t("calabi-table", {{"m", ColumnType::integer},
                           {"k_m", ColumnType::integer},
                           {"alpha_m", ColumnType::rational},
                           {"lower", ColumnType::real},
                           {"upper", ColumnType::real},
                           {"target", ColumnType::real},
                           {"gap", ColumnType::real},
                           {"alpha_times_count", ColumnType::rational},
                           {"complement_area", ColumnType::rational},
                           {"max_diameter", ColumnType::real}});
  for (const auto& r : rows)
    t.add_row({static_cast<long long>(r.m), static_cast<long long>(r.k), r.alpha, r.bound.lower, r.bound.upper,
               r.target, r.gap, r.alpha_times_count, r.complement_area, r.max_diameter});
  return t;
}

Table zeta_table(const ZetaParams& p) {
  const TwistProfile prof = make_twist_profile(Expr::parse(p.f), p.radius);
  std::vector<EquidistributedLink> links;
  for (int m : p.ms) links.push_back(build_equidistributed_link(m, Rational(0)));
  const SurfaceLink base = build_parallel_link(1, Rational(0));
  const ZetaTable z = zeta_divergence_table(prof, p.count, links, base, p.rule);
  if (p.summary) {
    Table t("zeta-summary", {{"m", ColumnType::integer}, {"zeta_lower", ColumnType::real}});
    for (const auto& [m, v] : z.zeta_lower) t.add_row({static_cast<long long>(m), v});
    return t;
  }
  Table t("zeta", {{"m", ColumnType::integer},
                   {"i", ColumnType::integer},
                   {"level", ColumnType::real},
                   {"calabi", ColumnType::real},
                   {"lower", ColumnType::real},
                   {"upper", ColumnType::real},
                   {"base", ColumnType::real}});
  for (const auto& r : z.rows)
    t.add_row({static_cast<long long>(r.m), static_cast<long long>(r.i), r.level, r.calabi, r.lower, r.upper, r.base});
  return t;
}

Table twist_table(const std::string& f, double radius, int levels, TruncationRule rule) {
  if (levels < 1) throw ValidationError("--levels must be >= 1");
  const TwistProfile prof = make_twist_profile(Expr::parse(f), radius);
  const auto hs = twist_truncations(prof, levels, rule);
  const auto lv = truncation_levels(prof, levels, rule);
  Table t("twist", {{"i", ColumnType::integer}, {"level", ColumnType::real}, {"calabi", ColumnType::real}});
  for (std::size_t i = 0; i < hs.size(); ++i)
    t.add_row({static_cast<long long>(i + 1), lv[i], integrate(hs[i])});
  return t;
}

Table scl_table(const Range& n) {
  const auto rows = scl_lower_bound(n.lo, n.hi);
  Table t("scl", {{"n", ColumnType::integer},
                  {"f_n", ColumnType::real},
                  {"exact", ColumnType::boolean},
                  {"defect_l1", ColumnType::rational},
                  {"defect_ln", ColumnType::rational},
                  {"defect_sum", ColumnType::rational},
                  {"scl_lower", ColumnType::real}});
  for (const auto& r : rows)
    t.add_row({static_cast<long long>(r.n), r.f_value, r.exact, r.defect_l1, r.defect_ln, r.defect_sum, r.scl_lower});
  return t;
}

Table quasicalabi_table(const Hamiltonian& h, const Range& k, const EtaRule& eta, LinkFamily family) {
  const auto rows = quasicalabi_check(h, k.lo, k.hi, eta, family);
  Table t("quasicalabi", {{"k", ColumnType::integer},
                          {"eta", ColumnType::rational},
                          {"lambda", ColumnType::rational},
                          {"D_k", ColumnType::rational},
                          {"c_lo", ColumnType::real},
                          {"c_hi", ColumnType::real},
                          {"mu_lo", ColumnType::real},
                          {"mu_hi", ColumnType::real},
                          {"radius", ColumnType::real}});
  for (const auto& r : rows)
    t.add_row({static_cast<long long>(r.k), r.eta, r.lambda, r.d_k, r.c_lo, r.c_hi, r.mu_lo, r.mu_hi, r.radius()});
  return t;
}

Table crit_table(const CriticalPointSearch& s, std::size_t nvars) {
  std::vector<Column> cols{{"index", ColumnType::integer}};
  for (std::size_t i = 1; i <= nvars; ++i) {
    cols.push_back({"re_x" + std::to_string(i), ColumnType::real});
    cols.push_back({"im_x" + std::to_string(i), ColumnType::real});
  }
  for (const char* c : {"residual", "det_re", "det_im"}) cols.push_back({c, ColumnType::real});
  cols.push_back({"non_degenerate", ColumnType::boolean});
  Table t("crit", cols);
  long long idx = 0;
  for (const auto& p : s.points) {
    std::vector<Cell> row{++idx};
    for (const auto& x : p.coords) {
      row.push_back(x.real() + 0.0);
      row.push_back(x.imag() + 0.0);
    }
    row.push_back(p.residual);
    row.push_back(p.hessian_det.real() + 0.0);
    row.push_back(p.hessian_det.imag() + 0.0);
    row.push_back(p.non_degenerate);
    t.add_row(std::move(row));
  }
  return t;
}

Table independence_table(const IndependenceWitness& w) {
  std::vector<Column> cols{{"k", ColumnType::integer},
                           {"eta", ColumnType::rational},
                           {"lambda", ColumnType::rational},
                           {"level", ColumnType::rational},
                           {"half_width", ColumnType::real}};
  for (std::size_t j = 0; j < w.members.size(); ++j) cols.push_back({"mu_" + std::to_string(j + 1), ColumnType::real});
  Table t("independence", cols);
  for (std::size_t i = 0; i < w.members.size(); ++i) {
    const auto& m = w.members[i];
    std::vector<Cell> row{static_cast<long long>(m.k), m.eta, m.lambda, m.level, m.half_width};
    for (double v : w.matrix[i]) row.push_back(v + 0.0);
    t.add_row(std::move(row));
  }
  return t;
}

std::vector<std::pair<int, Rational>> parse_family(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("family: malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("family") || !j["family"].is_array())
    throw ParseError("family: field 'family': expected an array");
  std::vector<std::pair<int, Rational>> out;
  const json& f = j["family"];
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::string where = "family[" + std::to_string(i) + "]";
    if (!f[i].is_object() || !f[i].contains("k") || !f[i]["k"].is_number_integer())
      throw ParseError("family: field '" + where + ".k': expected an integer");
    Rational eta{0};
    if (f[i].contains("eta")) {
      const json& e = f[i]["eta"];
      if (e.is_string()) {
        try {
          eta = parse_rational(e.get<std::string>());
        } catch (const Error& err) {
          throw ParseError("family: field '" + where + ".eta': " + err.what());
        }
      } else if (e.is_number_integer()) {
        eta = Rational(e.get<long long>());
      } else {
        throw ParseError("family: field '" + where + ".eta': expected \"p/q\"");
      }
    }
    out.emplace_back(f[i]["k"].get<int>(), eta);
  }
  return out;
}

namespace {

namespace fs = std::filesystem;

struct ScenarioContext {
  fs::path dir;
  const json* inputs;
  std::string name;

  std::string path(const std::string& p) const {
    const fs::path q(p);
    return (q.is_absolute() ? q : dir / q).string();
  }
  bool has(const char* key) const { return inputs->contains(key); }
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ParseError("scenario '" + name + "': field 'inputs." + key + "': " + msg);
  }
  std::string str(const char* key, const std::string& def = "") const {
    if (!has(key)) {
      if (def.empty()) fail(key, "missing");
      return def;
    }
    const json& v = (*inputs)[key];
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    fail(key, "expected a string");
  }
  int integer(const char* key, int def) const {
    if (!has(key)) return def;
    const json& v = (*inputs)[key];
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<int>();
  }
  double number(const char* key, double def) const {
    if (!has(key)) return def;
    const json& v = (*inputs)[key];
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }
  Hamiltonian hamiltonian() const {
    if (!has("hamiltonian")) fail("hamiltonian", "missing");
    const json& v = (*inputs)["hamiltonian"];
    if (v.is_string()) return load_hamiltonian(path(v.get<std::string>()));
    return parse_hamiltonian(v.dump());
  }
  SurfaceLink link() const {
    if (!has("link")) fail("link", "missing");
    const json& v = (*inputs)["link"];
    if (v.is_string()) return load_link(path(v.get<std::string>()));
    return parse_link(v.dump());
  }
};

Table scenario_table(const std::string& task, const ScenarioContext& c) {
  if (task == "calabi-table")
    return calabi_table(c.hamiltonian(), range_values(parse_range(c.str("m"), "m"), c.integer("step", 1)),
                        parse_eta_rule(c.str("eta_rule", "zero")));
  if (task == "zeta") {
    ZetaParams p;
    p.f = c.str("f", p.f);
    p.radius = c.number("radius", p.radius);
    p.count = c.integer("count", p.count);
    p.ms = range_values(parse_range(c.str("m"), "m"), c.integer("step", 1));
    p.rule = parse_truncation_rule(c.str("rule", "radius"));
    p.summary = c.has("summary") && (*c.inputs)["summary"].is_boolean() && (*c.inputs)["summary"].get<bool>();
    return zeta_table(p);
  }
  if (task == "twist")
    return twist_table(c.str("f", "r^-4"), c.number("radius", 0.38), c.integer("levels", 20),
                       parse_truncation_rule(c.str("rule", "radius")));
  if (task == "scl") {
    Range r = parse_range(c.str("n", "2..20"), "n");
    r.lo = std::max(r.lo, 2);
    return scl_table(r);
  }
  if (task == "quasicalabi")
    return quasicalabi_table(c.hamiltonian(), parse_range(c.str("k"), "k"), parse_eta_rule(c.str("eta_rule", "zero")),
                             parse_link_family(c.str("links", "parallel")));
  if (task == "crit") {
    SolverOptions o;
    o.starts = c.integer("starts", o.starts);
    o.seed = static_cast<std::uint64_t>(c.integer("seed", static_cast<int>(o.seed)));
    DiscPotential w;
    if (c.has("clifford")) {
      w = clifford_potential(c.integer("clifford", 1));
    } else {
      const SurfaceLink L = c.link();
      require_valid(L);
      w = specialize(build_potential(L));
    }
    return crit_table(find_critical_points(w, o), w.nvars());
  }
  if (task == "independence") {
    if (!c.has("family")) c.fail("family", "missing");
    const json& f = (*c.inputs)["family"];
    const std::string text = f.is_string() ? read_text_file(c.path(f.get<std::string>())) : json{{"family", f}}.dump();
    return independence_table(independence_witness(parse_family(text)));
  }
  throw ParseError("scenario '" + c.name + "': field 'task': unknown task '" + task + "'");
}

}  // namespace

void run_scenario(const std::string& path, std::ostream& out) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError("scenario: malformed JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ParseError("scenario: top level must be an object");
  if (!j.contains("name") || !j["name"].is_string()) throw ParseError("scenario: field 'name': expected a string");
  if (!j.contains("task") || !j["task"].is_string()) throw ParseError("scenario: field 'task': expected a string");
  static const json empty = json::object();
  const json& inputs = j.contains("inputs") ? j["inputs"] : empty;
  if (!inputs.is_object()) throw ParseError("scenario: field 'inputs': expected an object");

  ScenarioContext ctx{fs::path(path).parent_path(), &inputs, j["name"].get<std::string>()};
  const Table t = scenario_table(j["task"].get<std::string>(), ctx);

  json outputs = j.contains("outputs") ? j["outputs"] : json::array();
  if (outputs.is_object()) outputs = json::array({outputs});
  if (!outputs.is_array()) throw ParseError("scenario: field 'outputs': expected an array");
  if (outputs.empty()) {
    out << to_csv(t);
    return;
  }
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const json& o = outputs[i];
    const std::string where = "outputs[" + std::to_string(i) + "]";
    if (!o.is_object() || !o.contains("path") || !o["path"].is_string())
      throw ParseError("scenario: field '" + where + ".path': expected a string");
    const TableFormat f = parse_table_format(o.contains("format") ? o["format"].get<std::string>() : "csv");
    const std::string p = ctx.path(o["path"].get<std::string>());
    emit(t, f, p);
    out << ctx.name << ": wrote " << t.size() << " rows to " << p << "\n";
  }
}

}  // namespace linkspec::cli
