#include <doctest.h>

#include "linkspec/error.hpp"
#include "linkspec/table.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

using namespace linkspec;

namespace {

Table sample() {
  Table t("sample", {{"n", ColumnType::integer},
                     {"x", ColumnType::real},
                     {"q", ColumnType::rational},
                     {"label", ColumnType::text},
                     {"ok", ColumnType::boolean}});
  t.add_row({1LL, 0.1, Rational(1, 3), std::string("plain"), true});
  t.add_row({-2LL, 3.0, Rational(-7, 2), std::string("comma, \"quoted\""), false});
  t.add_row({3LL, 1e-30, Rational(0), std::string(""), true});
  return t;
}

}  // namespace

TEST_CASE("CSV and JSON round trips") {
  const Table t = sample();
  CHECK(parse_csv(to_csv(t), "sample") == t);
  CHECK(parse_json(to_json(t)) == t);
  CHECK(parse_json(to_json(t, -1)) == t);
  CHECK(parse_csv(emit(t, TableFormat::csv), "sample") == t);

  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> U(-1e6, 1e6);
  Table r("reals", {{"v", ColumnType::real}});
  for (int i = 0; i < 200; ++i) r.add_row({U(rng) / (1 + i)});
  CHECK(parse_csv(to_csv(r), "reals") == r);
  CHECK(parse_json(to_json(r)) == r);
}

TEST_CASE("CSV layout") {
  const Table t = sample();
  std::istringstream in(to_csv(t));
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "n,x,q,label,ok");
  CHECK(first == "1,0.1,1/3,\"plain\",true");
  CHECK(to_csv(t).find("\"comma, \"\"quoted\"\"\"") != std::string::npos);

  const Table empty("empty", {{"a", ColumnType::integer}, {"b", ColumnType::real}});
  CHECK(to_csv(empty) == "a,b\n");
  const Table back = parse_csv(to_csv(empty));
  CHECK(back.size() == 0);
  CHECK(back.columns()[0].type == ColumnType::text);
}

TEST_CASE("reals are rounded to 12 significant digits") {
  CHECK(round12(0.1 + 0.2) == 0.3);
  CHECK(round12(1.0 / 3) == 0.333333333333);
  CHECK(std::isnan(round12(NAN)));
  CHECK(round12(INFINITY) == INFINITY);
  Table t("r", {{"v", ColumnType::real}});
  t.add_row({0.1 + 0.2});
  t.add_row({5LL});
  CHECK(t.real(0, "v") == 0.3);
  CHECK(t.real(1, "v") == 5.0);
  CHECK(std::holds_alternative<double>(t.at(1, "v")));
}

TEST_CASE("non-finite reals survive JSON") {
  Table t("nf", {{"v", ColumnType::real}});
  t.add_row({std::numeric_limits<double>::quiet_NaN()});
  t.add_row({-INFINITY});
  const std::string j = to_json(t);
  CHECK(j.find("null") == std::string::npos);
  const Table back = parse_json(j);
  CHECK(std::isnan(back.real(0, "v")));
  CHECK(back.real(1, "v") == -INFINITY);
  CHECK(back == t);
  CHECK(parse_csv(to_csv(t), "nf") == t);
}

TEST_CASE("JSON starts with the schema version") {
  const std::string j = to_json(sample(), -1);
  CHECK(j.rfind("{\"schema_version\":1,", 0) == 0);
  CHECK_THROWS_AS(parse_json(R"({"schema_version": 2, "name": "x", "columns": [], "rows": []})"), ParseError);
}

TEST_CASE("row validation") {
  Table t = sample();
  CHECK_THROWS_AS(t.add_row({1LL}), ValidationError);
  CHECK_THROWS_AS(t.add_row({1.5, 0.0, Rational(1), std::string("a"), true}), ValidationError);
  CHECK_THROWS_AS(t.add_row({1LL, 0.0, 2LL, std::string("a"), true}), ValidationError);
  CHECK_THROWS_AS(t.at(0, "missing"), ValidationError);
  CHECK_THROWS_AS(t.real(0, "label"), ValidationError);
  CHECK(t.column_index("q") == 2);
  CHECK(t.column_index("nope") < 0);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_csv(""), ParseError);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), ParseError);
  CHECK_THROWS_AS(parse_csv("a\n\"open\n"), ParseError);
  CHECK_THROWS_AS(parse_csv("a\n1\n\"x\"\n"), ParseError);
  CHECK_THROWS_AS(parse_csv("a\n1/0\n"), ParseError);
  CHECK_THROWS_AS(parse_json("{"), ParseError);
  CHECK_THROWS_AS(parse_json(R"({"schema_version": 1, "name": "x", "columns": []})"), ParseError);
  try {
    parse_json(
        R"({"schema_version": 1, "name": "x", "columns": [{"name": "n", "type": "integer"}], "rows": [[1.5]]})");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("rows[0][0]") != std::string::npos);
  }
  CHECK(parse_table_format("json") == TableFormat::json);
  CHECK_THROWS_AS(parse_table_format("xml"), ValidationError);
}

TEST_CASE("emit to files") {
  const auto dir = std::filesystem::temp_directory_path() / "linkspec_table_test";
  std::filesystem::create_directories(dir);
  const auto p = dir / "t.json";
  emit(sample(), TableFormat::json, p.string());
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(parse_json(ss.str()) == sample());
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(emit(sample(), TableFormat::csv, "/nonexistent/dir/t.csv"), IoError);
}
