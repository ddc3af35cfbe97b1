#include "linkspec/table.hpp"

#include "linkspec/error.hpp"
#include "linkspec/link_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace linkspec {

using nlohmann::json;

const char* to_string(ColumnType t) {
  switch (t) {
    case ColumnType::integer: return "integer";
    case ColumnType::real: return "real";
    case ColumnType::rational: return "rational";
    case ColumnType::text: return "text";
    case ColumnType::boolean: return "boolean";
  }
  return "?";
}

namespace {

ColumnType column_type_from(const std::string& s) {
  for (ColumnType t : {ColumnType::integer, ColumnType::real, ColumnType::rational, ColumnType::text,
                       ColumnType::boolean})
    if (s == to_string(t)) return t;
  throw ParseError("table: unknown column type '" + s + "'");
}

bool matches(const Cell& c, ColumnType t) {
  switch (t) {
    case ColumnType::integer: return std::holds_alternative<long long>(c);
    case ColumnType::real: return std::holds_alternative<double>(c);
    case ColumnType::rational: return std::holds_alternative<Rational>(c);
    case ColumnType::text: return std::holds_alternative<std::string>(c);
    case ColumnType::boolean: return std::holds_alternative<bool>(c);
  }
  return false;
}

std::string real_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

double parse_real(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ParseError("table: " + where + ": '" + s + "' is not a number");
  return v;
}

bool is_integer_text(const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct RawField {
  std::string text;
  bool quoted = false;
};

std::vector<std::vector<RawField>> split_csv(std::string_view in) {
  std::vector<std::vector<RawField>> records;
  std::vector<RawField> rec;
  RawField f;
  bool in_quotes = false, any = false;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const char c = in[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < in.size() && in[i + 1] == '"') {
          f.text += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        f.text += c;
      }
      continue;
    }
    if (c == '"') {
      in_quotes = f.quoted = any = true;
    } else if (c == ',') {
      rec.push_back(std::move(f));
      f = {};
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < in.size() && in[i + 1] == '\n') ++i;
      if (any || !f.text.empty()) {
        rec.push_back(std::move(f));
        records.push_back(std::move(rec));
      }
      rec.clear();
      f = {};
      any = false;
    } else {
      f.text += c;
      any = true;
    }
  }
  if (in_quotes) throw ParseError("table: unterminated quoted field");
  if (any || !f.text.empty()) {
    rec.push_back(std::move(f));
    records.push_back(std::move(rec));
  }
  return records;
}

ColumnType infer(const RawField& f) {
  if (f.quoted) return ColumnType::text;
  if (f.text == "true" || f.text == "false") return ColumnType::boolean;
  if (f.text.find('/') != std::string::npos) return ColumnType::rational;
  if (is_integer_text(f.text)) return ColumnType::integer;
  return ColumnType::real;
}

Cell convert(const RawField& f, ColumnType t, const std::string& where) {
  switch (t) {
    case ColumnType::text: return f.text;
    case ColumnType::boolean: return f.text == "true";
    case ColumnType::rational:
      try {
        return parse_rational(f.text);
      } catch (const Error&) {
        throw ParseError("table: " + where + ": '" + f.text + "' is not a rational");
      }
    case ColumnType::integer: return std::stoll(f.text);
    case ColumnType::real: return parse_real(f.text, where);
  }
  return f.text;
}

}  // namespace

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

Table::Table(std::string name, std::vector<Column> columns) : name_(std::move(name)), columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw ValidationError("table '" + name_ + "': row has " + std::to_string(row.size()) + " cells, expected " +
                          std::to_string(columns_.size()));
  for (std::size_t i = 0; i < row.size(); ++i) {
    const ColumnType t = columns_[i].type;
    if (t == ColumnType::real && std::holds_alternative<long long>(row[i]))
      row[i] = static_cast<double>(std::get<long long>(row[i]));
    if (!matches(row[i], t))
      throw ValidationError("table '" + name_ + "': column '" + columns_[i].name + "' expects " + to_string(t));
    if (t == ColumnType::real) row[i] = round12(std::get<double>(row[i]));
  }
  rows_.push_back(std::move(row));
}

int Table::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == name) return static_cast<int>(i);
  return -1;
}

const Cell& Table::at(std::size_t row, std::string_view column) const {
  const int c = column_index(column);
  if (c < 0) throw ValidationError("table '" + name_ + "' has no column '" + std::string(column) + "'");
  return rows_.at(row)[static_cast<std::size_t>(c)];
}

double Table::real(std::size_t row, std::string_view column) const {
  const Cell& c = at(row, column);
  if (auto d = std::get_if<double>(&c)) return *d;
  if (auto i = std::get_if<long long>(&c)) return static_cast<double>(*i);
  if (auto q = std::get_if<Rational>(&c)) return to_double(*q);
  throw ValidationError("column '" + std::string(column) + "' is not numeric");
}

bool Table::operator==(const Table& o) const {
  if (name_ != o.name_ || columns_ != o.columns_ || rows_.size() != o.rows_.size()) return false;
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      const Cell& a = rows_[r][c];
      const Cell& b = o.rows_[r][c];
      if (auto x = std::get_if<double>(&a)) {
        const double y = std::get<double>(b);
        if (!(*x == y || (std::isnan(*x) && std::isnan(y)))) return false;
      } else if (a != b) {
        return false;
      }
    }
  return true;
}

std::string format_cell(const Cell& c) {
  struct V {
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return real_text(v); }
    std::string operator()(const Rational& v) const { return format_rational(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(V{}, c);
}

std::string to_csv(const Table& t) {
  std::ostringstream out;
  for (std::size_t i = 0; i < t.columns().size(); ++i) out << (i ? "," : "") << t.columns()[i].name;
  out << "\n";
  for (const auto& row : t.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      if (auto s = std::get_if<std::string>(&row[i]))
        out << quote(*s);
      else
        out << format_cell(row[i]);
    }
    out << "\n";
  }
  return out.str();
}

Table parse_csv(std::string_view text, std::string name) {
  const auto records = split_csv(text);
  if (records.empty()) throw ParseError("table: missing header row");
  std::vector<Column> cols;
  for (const auto& f : records[0]) cols.push_back({f.text, ColumnType::text});
  const std::size_t n = cols.size();
  for (std::size_t r = 1; r < records.size(); ++r)
    if (records[r].size() != n)
      throw ParseError("table: line " + std::to_string(r + 1) + " has " + std::to_string(records[r].size()) +
                       " fields, expected " + std::to_string(n));
  for (std::size_t c = 0; c < n && records.size() > 1; ++c) {
    ColumnType t = infer(records[1][c]);
    for (std::size_t r = 2; r < records.size(); ++r) {
      const ColumnType u = infer(records[r][c]);
      if (u == t) continue;
      const bool numeric = (t == ColumnType::integer || t == ColumnType::real) &&
                           (u == ColumnType::integer || u == ColumnType::real);
      if (!numeric)
        throw ParseError("table: column '" + cols[c].name + "' mixes " + to_string(t) + " and " + to_string(u));
      t = ColumnType::real;
    }
    cols[c].type = t;
  }
  Table out(std::move(name), cols);
  for (std::size_t r = 1; r < records.size(); ++r) {
    std::vector<Cell> row;
    for (std::size_t c = 0; c < n; ++c)
      row.push_back(convert(records[r][c], cols[c].type, "line " + std::to_string(r + 1) + ", column '" + cols[c].name + "'"));
    out.add_row(std::move(row));
  }
  return out;
}

std::string to_json(const Table& t, int indent) {
  nlohmann::ordered_json j;
  j["schema_version"] = kTableSchemaVersion;
  j["name"] = t.name();
  j["columns"] = nlohmann::ordered_json::array();
  for (const auto& c : t.columns()) j["columns"].push_back({{"name", c.name}, {"type", to_string(c.type)}});
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows()) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& c : row) {
      if (auto i = std::get_if<long long>(&c)) r.push_back(*i);
      else if (auto d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) r.push_back(*d);
        else r.push_back(real_text(*d));
      } else if (auto b = std::get_if<bool>(&c)) r.push_back(*b);
      else r.push_back(format_cell(c));
    }
    j["rows"].push_back(std::move(r));
  }
  return j.dump(indent);
}

Table parse_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("table: ") + e.what());
  }
  auto field = [&](const json& obj, const char* key, const std::string& where) -> const json& {
    if (!obj.is_object() || !obj.contains(key)) throw ParseError("table: missing field '" + where + key + "'");
    return obj.at(key);
  };
  const json& ver = field(j, "schema_version", "");
  if (!ver.is_number_integer() || ver.get<int>() != kTableSchemaVersion)
    throw ParseError("table: field 'schema_version': unsupported value " + ver.dump());
  std::vector<Column> cols;
  const json& cj = field(j, "columns", "");
  if (!cj.is_array()) throw ParseError("table: field 'columns' must be an array");
  for (std::size_t i = 0; i < cj.size(); ++i) {
    const std::string where = "columns[" + std::to_string(i) + "].";
    const json& name = field(cj[i], "name", where);
    const json& type = field(cj[i], "type", where);
    if (!name.is_string() || !type.is_string()) throw ParseError("table: field '" + where + "name/type' must be strings");
    cols.push_back({name.get<std::string>(), column_type_from(type.get<std::string>())});
  }
  const std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "";
  Table out(name, cols);
  const json& rj = field(j, "rows", "");
  if (!rj.is_array()) throw ParseError("table: field 'rows' must be an array");
  for (std::size_t r = 0; r < rj.size(); ++r) {
    if (!rj[r].is_array() || rj[r].size() != cols.size())
      throw ParseError("table: field 'rows[" + std::to_string(r) + "]' must have " + std::to_string(cols.size()) +
                       " cells");
    std::vector<Cell> row;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const json& v = rj[r][c];
      const std::string where = "field 'rows[" + std::to_string(r) + "][" + std::to_string(c) + "]'";
      switch (cols[c].type) {
        case ColumnType::integer:
          if (!v.is_number_integer()) throw ParseError("table: " + where + " must be an integer");
          row.push_back(v.get<long long>());
          break;
        case ColumnType::real:
          if (v.is_number()) row.push_back(v.get<double>());
          else if (v.is_string()) row.push_back(parse_real(v.get<std::string>(), where));
          else throw ParseError("table: " + where + " must be a number");
          break;
        case ColumnType::rational:
          if (!v.is_string()) throw ParseError("table: " + where + " must be a \"p/q\" string");
          row.push_back(convert({v.get<std::string>(), false}, ColumnType::rational, where));
          break;
        case ColumnType::text:
          if (!v.is_string()) throw ParseError("table: " + where + " must be a string");
          row.push_back(v.get<std::string>());
          break;
        case ColumnType::boolean:
          if (!v.is_boolean()) throw ParseError("table: " + where + " must be a boolean");
          row.push_back(v.get<bool>());
          break;
      }
    }
    out.add_row(std::move(row));
  }
  return out;
}

TableFormat parse_table_format(std::string_view s) {
  if (s == "csv") return TableFormat::csv;
  if (s == "json") return TableFormat::json;
  throw ValidationError("unknown table format '" + std::string(s) + "' (csv or json)");
}

std::string emit(const Table& t, TableFormat f) { return f == TableFormat::csv ? to_csv(t) : to_json(t) + "\n"; }

void emit(const Table& t, TableFormat f, const std::string& path) { write_text_file(path, emit(t, f)); }

}  // namespace linkspec
