#pragma once

#include "linkspec/rational.hpp"

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace linkspec {

enum class ColumnType { integer, real, rational, text, boolean };

const char* to_string(ColumnType t);

struct Column {
  std::string name;
  ColumnType type = ColumnType::real;
  bool operator==(const Column&) const = default;
};

using Cell = std::variant<long long, double, Rational, std::string, bool>;

// Reals are rounded to 12 significant digits on insertion so a table survives
// serialization unchanged.
double round12(double v);

class Table {
 public:
  Table() = default;
  Table(std::string name, std::vector<Column> columns);

  const std::string& name() const { return name_; }
  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  // Throws ValidationError on arity or type mismatch. Integers are accepted
  // in real columns.
  void add_row(std::vector<Cell> row);

  int column_index(std::string_view name) const;
  const Cell& at(std::size_t row, std::string_view column) const;
  double real(std::size_t row, std::string_view column) const;

  bool operator==(const Table& other) const;

 private:
  std::string name_;
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
};

inline constexpr int kTableSchemaVersion = 1;

std::string format_cell(const Cell& c);

// Header row of column names; text cells are always quoted.
std::string to_csv(const Table& t);
// Column types inferred from the cells; an empty table gets text columns.
Table parse_csv(std::string_view text, std::string name = "");

std::string to_json(const Table& t, int indent = 2);
Table parse_json(std::string_view text);

enum class TableFormat { csv, json };
TableFormat parse_table_format(std::string_view s);

std::string emit(const Table& t, TableFormat f);
// Writes to path; throws IoError when the target is not writable.
void emit(const Table& t, TableFormat f, const std::string& path);

}  // namespace linkspec
