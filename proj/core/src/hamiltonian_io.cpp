#include "linkspec/hamiltonian_io.hpp"

#include "linkspec/error.hpp"
#include "linkspec/link_io.hpp"
#include "linkspec/twist.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace linkspec {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& msg) {
  throw ParseError("hamiltonian: field '" + field + "': " + msg);
}

std::string path_of(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

const json& member(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) field_error(path_of(where, key), "missing");
  return *it;
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = member(obj, key, where);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return to_double(parse_rational(v.get<std::string>()));
    } catch (const Error&) {
    }
  }
  field_error(path_of(where, key), "expected a number");
}

int integer(const json& obj, const char* key, const std::string& where) {
  const json& v = member(obj, key, where);
  if (!v.is_number_integer()) field_error(path_of(where, key), "expected an integer");
  return v.get<int>();
}

Expr expression(const json& obj, const char* key, const std::string& where) {
  const json& v = member(obj, key, where);
  if (!v.is_string()) field_error(path_of(where, key), "expected an expression string");
  try {
    return Expr::parse(v.get<std::string>());
  } catch (const ParseError& e) {
    field_error(path_of(where, key), e.what());
  }
}

Model model_of(const json& obj, const std::string& where) {
  if (!obj.contains("model")) return Model::sphere;
  const json& v = obj["model"];
  if (v == "sphere") return Model::sphere;
  if (v == "disc") return Model::disc;
  field_error(path_of(where, "model"), "expected \"sphere\" or \"disc\"");
}

Hamiltonian node(const json& j, const std::string& where);

Hamiltonian leaf(const json& j, const std::string& where) {
  const json& kind = member(j, "kind", where);
  if (!kind.is_string()) field_error(path_of(where, "kind"), "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "z_profile") {
    const Expr e = expression(j, "expr", where);
    if (e.depends_on(Var::r)) field_error(path_of(where, "expr"), "a z_profile may depend on t and z only");
    return Hamiltonian::z_profile(e);
  }
  if (k == "radial") {
    const Expr e = expression(j, "expr", where);
    if (e.depends_on(Var::z)) field_error(path_of(where, "expr"), "a radial Hamiltonian may depend on t and r only");
    const double R = j.contains("radius") ? number(j, "radius", where) : 1.0;
    if (!(R > 0)) field_error(path_of(where, "radius"), "must be positive");
    return Hamiltonian::radial(e, R);
  }
  if (k == "grid") {
    GridData g;
    const Model m = model_of(j, where);
    const double R = j.contains("radius") ? number(j, "radius", where) : 1.0;
    g.nx = integer(j, "nx", where);
    g.ntheta = integer(j, "ntheta", where);
    g.x_lo = j.contains("x_lo") ? number(j, "x_lo", where) : 0.0;
    g.x_hi = j.contains("x_hi") ? number(j, "x_hi", where) : (m == Model::sphere ? 1.0 : R);
    const json& vals = member(j, "values", where);
    if (!vals.is_array()) field_error(path_of(where, "values"), "expected an array");
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (!vals[i].is_number()) field_error(path_of(where, "values[" + std::to_string(i) + "]"), "expected a number");
      g.values.push_back(vals[i].get<double>());
    }
    try {
      return Hamiltonian::grid(m, std::move(g), R);
    } catch (const ValidationError& e) {
      field_error(where.empty() ? "grid" : where, e.what());
    }
  }
  if (k == "twist") {
    const Expr f = expression(j, "f", where);
    const double R = j.contains("radius") ? number(j, "radius", where) : 1.0;
    const TwistProfile p = make_twist_profile(f, R);
    double level;
    if (j.contains("level")) {
      level = number(j, "level", where);
    } else {
      const int i = integer(j, "index", where);
      TruncationRule rule = TruncationRule::radius;
      if (j.contains("rule")) {
        if (j["rule"] == "linear") rule = TruncationRule::linear;
        else if (j["rule"] != "radius") field_error(path_of(where, "rule"), "expected \"radius\" or \"linear\"");
      }
      level = i <= 0 ? 0.0 : truncation_levels(p, i, rule).back();
    }
    return twist_hamiltonian(p, level);
  }
  field_error(path_of(where, "kind"), "unknown kind '" + k + "'");
}

Hamiltonian arg(const json& j, const std::string& where) { return node(member(j, "arg", where), path_of(where, "arg")); }

std::pair<Hamiltonian, Hamiltonian> args2(const json& j, const std::string& where) {
  const json& a = member(j, "args", where);
  if (!a.is_array() || a.size() != 2) field_error(path_of(where, "args"), "expected two operands");
  return {node(a[0], path_of(where, "args[0]")), node(a[1], path_of(where, "args[1]"))};
}

Hamiltonian composite(const json& j, const std::string& where) {
  const json& op = j["op"];
  if (!op.is_string()) field_error(path_of(where, "op"), "expected a string");
  const std::string o = op.get<std::string>();
  if (o == "add") {
    auto [a, b] = args2(j, where);
    return add(a, b);
  }
  if (o == "compose") {
    auto [a, b] = args2(j, where);
    return compose(a, b);
  }
  if (o == "scale") return scale(arg(j, where), number(j, "factor", where));
  if (o == "bar") return bar(arg(j, where));
  if (o == "power") return compose_power(arg(j, where), integer(j, "n", where));
  if (o == "mean_normalize") return mean_normalize(arg(j, where));
  if (o == "embed_cap") return embed_in_sphere_cap(arg(j, where));
  field_error(path_of(where, "op"), "unknown operation '" + o + "'");
}

// The field must vanish outside the declared band (checked at 9 times when it
// depends on t).
void check_support(const Hamiltonian& h, const Band& b, const std::string& where) {
  const Interval dom = h.domain();
  std::vector<double> times{0.0};
  if (!h.field()->autonomous())
    for (int i = 1; i <= 8; ++i) times.push_back(i / 8.0);
  for (double t : times) {
    for (const Interval piece : {Interval(dom.lo, std::max(dom.lo, b.lo)), Interval(std::min(dom.hi, b.hi), dom.hi)}) {
      if (piece.lo >= b.lo && piece.hi <= b.hi) continue;
      const auto [mn, mx] = field_extrema(*h.field(), t, piece);
      if (std::abs(mn.hi) > 1e-12 || std::abs(mx.lo) > 1e-12)
        field_error(where, "Hamiltonian does not vanish outside the declared band");
    }
  }
}

Hamiltonian node(const json& j, const std::string& where) {
  if (!j.is_object()) field_error(where.empty() ? "(top)" : where, "expected an object");
  Hamiltonian h = j.contains("op") ? composite(j, where) : leaf(j, where);
  if (j.contains("shift")) {
    const Expr s = expression(j, "shift", where);
    if (s.depends_on(Var::z) || s.depends_on(Var::r)) field_error(path_of(where, "shift"), "must depend on t only");
    h = add_shift(h, s);
  }
  if (j.contains("support")) {
    const json& s = j["support"];
    if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number())
      field_error(path_of(where, "support"), "expected [lo, hi]");
    const Band b{s[0].get<double>(), s[1].get<double>()};
    if (!(b.lo <= b.hi)) field_error(path_of(where, "support"), "needs lo <= hi");
    check_support(h, b, path_of(where, "support"));
    h = h.with_support(b);
  }
  return h;
}

}  // namespace

Hamiltonian parse_hamiltonian(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("hamiltonian: malformed JSON: ") + e.what());
  }
  return node(j, "");
}

Hamiltonian load_hamiltonian(const std::string& path) { return parse_hamiltonian(read_text_file(path)); }

}  // namespace linkspec
