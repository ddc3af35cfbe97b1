#include "linkspec/link_io.hpp"

#include "linkspec/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace linkspec {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& msg) {
  throw ParseError("link: field '" + field + "': " + msg);
}

Rational rational_field(const json& j, const std::string& field) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) return from_double(j.get<double>());
  } catch (const ParseError& e) {
    field_error(field, e.what());
  }
  field_error(field, "expected a rational (\"p/q\" string or number)");
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) field_error(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) field_error(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

}  // namespace

SurfaceLink parse_link(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("link: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("link: top level must be an object");
  SurfaceLink link;
  if (j.contains("genus")) {
    if (!j["genus"].is_number_integer()) field_error("genus", "expected an integer");
    link.surface.genus = j["genus"].get<int>();
  }
  if (j.contains("total_area")) link.surface.total_area = rational_field(j["total_area"], "total_area");

  const json& circles = member(j, "circles", "");
  if (!circles.is_array()) field_error("circles", "expected an array");
  for (std::size_t i = 0; i < circles.size(); ++i) {
    const std::string where = "circles[" + std::to_string(i) + "]";
    const json& c = circles[i];
    Circle circ;
    const json& id = member(c, "id", where);
    if (!id.is_string()) field_error(where + ".id", "expected a string");
    circ.id = id.get<std::string>();
    if (c.contains("contractible")) {
      if (!c["contractible"].is_boolean()) field_error(where + ".contractible", "expected a boolean");
      circ.contractible = c["contractible"].get<bool>();
    }
    if (c.contains("orientation")) {
      if (!c["orientation"].is_number_integer()) field_error(where + ".orientation", "expected +1 or -1");
      circ.orientation = c["orientation"].get<int>();
    }
    if (c.contains("z")) {
      circ.realization = CircleRealization::z_at(rational_field(c["z"], where + ".z"));
    } else if (c.contains("r")) {
      circ.realization = CircleRealization::r_at(rational_field(c["r"], where + ".r"));
    } else if (c.contains("polygon")) {
      const json& p = c["polygon"];
      if (!p.is_array()) field_error(where + ".polygon", "expected an array of [z, theta] pairs");
      std::vector<std::array<double, 2>> pts;
      for (std::size_t v = 0; v < p.size(); ++v) {
        if (!p[v].is_array() || p[v].size() != 2 || !p[v][0].is_number() || !p[v][1].is_number())
          field_error(where + ".polygon[" + std::to_string(v) + "]", "expected [z, theta]");
        pts.push_back({p[v][0].get<double>(), p[v][1].get<double>()});
      }
      circ.realization = CircleRealization::loop(std::move(pts));
    }
    link.circles.push_back(std::move(circ));
  }

  const json& regions = member(j, "regions", "");
  if (!regions.is_array()) field_error("regions", "expected an array");
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const std::string where = "regions[" + std::to_string(i) + "]";
    const json& r = regions[i];
    Region reg;
    const json& id = member(r, "id", where);
    if (!id.is_string()) field_error(where + ".id", "expected a string");
    reg.id = id.get<std::string>();
    reg.area = rational_field(member(r, "area", where), where + ".area");
    const json& b = member(r, "boundary", where);
    if (!b.is_array()) field_error(where + ".boundary", "expected an array");
    for (std::size_t e = 0; e < b.size(); ++e) {
      const std::string bw = where + ".boundary[" + std::to_string(e) + "]";
      if (!b[e].is_array() || b[e].size() != 2 || !b[e][0].is_string() || !b[e][1].is_number_integer())
        field_error(bw, "expected [\"circleId\", +1|-1]");
      reg.boundary.push_back({b[e][0].get<std::string>(), b[e][1].get<int>()});
    }
    reg.boundary_count = static_cast<int>(reg.boundary.size());
    if (r.contains("boundary_count")) {
      if (!r["boundary_count"].is_number_integer()) field_error(where + ".boundary_count", "expected an integer");
      reg.boundary_count = r["boundary_count"].get<int>();
    }
    link.regions.push_back(std::move(reg));
  }
  return link;
}

std::string link_to_json(const SurfaceLink& link, int indent) {
  json j;
  j["genus"] = link.surface.genus;
  j["total_area"] = format_rational(link.surface.total_area);
  j["circles"] = json::array();
  for (const auto& c : link.circles) {
    json jc{{"id", c.id}, {"contractible", c.contractible}};
    if (c.orientation != 1) jc["orientation"] = c.orientation;
    switch (c.realization.kind) {
      case CircleRealization::Kind::z_level: jc["z"] = format_rational(c.realization.level); break;
      case CircleRealization::Kind::r_level: jc["r"] = format_rational(c.realization.level); break;
      case CircleRealization::Kind::polygon: {
        json pts = json::array();
        for (const auto& p : c.realization.polygon) pts.push_back({p[0], p[1]});
        jc["polygon"] = pts;
        break;
      }
      case CircleRealization::Kind::none: break;
    }
    j["circles"].push_back(jc);
  }
  j["regions"] = json::array();
  for (const auto& r : link.regions) {
    json b = json::array();
    for (const auto& inc : r.boundary) b.push_back({inc.circle, inc.sign});
    json jr{{"id", r.id}, {"area", format_rational(r.area)}, {"boundary", b}};
    if (r.boundary_count != static_cast<int>(r.boundary.size())) jr["boundary_count"] = r.boundary_count;
    j["regions"].push_back(jr);
  }
  return j.dump(indent);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

SurfaceLink load_link(const std::string& path) { return parse_link(read_text_file(path)); }

void save_link(const SurfaceLink& link, const std::string& path) {
  write_text_file(path, link_to_json(link) + "\n");
}

}  // namespace linkspec
