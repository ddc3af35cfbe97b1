#include <doctest.h>

#include "cli.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string data(const std::string& name) {
  const char* dir = std::getenv("LINKSPEC_TEST_DATA");
  return std::string(dir ? dir : "tests/data") + "/" + name;
}

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result call(std::initializer_list<std::string> args) {
  std::vector<std::string> a{"linkspec"};
  a.insert(a.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : a) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int st = linkspec::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {st, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(call({"--help"}).status == 0);
  CHECK(call({"no-such-command"}).status == 2);
  CHECK(call({}).status == 2);
  const Result bad = call({"validate", data("invalid_areas.json")});
  CHECK(bad.status == 2);
  CHECK(bad.out.find("areas sum") != std::string::npos);
  CHECK(call({"validate", data("parallel2.json")}).status == 0);
  CHECK(call({"validate", data("malformed.json")}).status == 2);
  const Result missing = call({"validate", data("no_such_file.json")});
  CHECK(missing.status == 4);
  CHECK_FALSE(missing.err.empty());
  CHECK(call({"parallel", "-k", "3", "--eta", "1/4"}).status == 2);
  CHECK(call({"calabi", data("height.json"), "--unknown-flag"}).status == 2);
}

TEST_CASE("parallel and monotone") {
  const Result p = call({"parallel", "-k", "3", "--eta", "1/8"});
  REQUIRE(p.status == 0);
  const auto j = nlohmann::json::parse(p.out);
  CHECK(j["circles"].size() == 3);

  const auto dir = std::filesystem::temp_directory_path() / "linkspec_cli_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "p3.json").string();
  const Result w = call({"parallel", "-k", "3", "--eta", "1/8", "-o", path, "--json"});
  REQUIRE(w.status == 0);
  // (1 + 2 eta (k-1)) / (k+1)
  CHECK(nlohmann::json::parse(w.out)["lambda"] == "3/8");
  const Result m = call({"monotone", path, "--json"});
  REQUIRE(m.status == 0);
  const auto mj = nlohmann::json::parse(m.out);
  CHECK(mj["monotone"] == true);
  CHECK(mj["eta"] == "1/8");
  CHECK(mj["lambda"] == "3/8");
  std::filesystem::remove_all(dir);
}

TEST_CASE("scl output is reproducible") {
  const Result a = call({"scl", "-n", "2..6"});
  const Result b = call({"scl", "-n", "2..6"});
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("n,", 0) == 0);
  const Result j = call({"scl", "-n", "2..3", "--json"});
  REQUIRE(j.status == 0);
  const auto t = nlohmann::json::parse(j.out);
  CHECK(t["schema_version"] == 1);
  CHECK(t["rows"].size() == 2);
}

TEST_CASE("scenario files") {
  const Result r = call({"run", data("scl_scenario.json")});
  REQUIRE(r.status == 0);
  CHECK(r.out.find("f_n") != std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "linkspec_scenario_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream s(dir / "s.json");
    s << R"({"name": "crit3", "task": "crit", "inputs": {"clifford": 3},
             "outputs": [{"path": "out.json", "format": "json"}, {"path": "out.csv"}]})";
  }
  const Result w = call({"run", (dir / "s.json").string()});
  REQUIRE(w.status == 0);
  const auto t = nlohmann::json::parse(slurp(dir / "out.json"));
  CHECK(t["rows"].size() == 4);
  CHECK_FALSE(slurp(dir / "out.csv").empty());
  {
    std::ofstream s(dir / "bad.json");
    s << R"({"name": "bad", "task": "scl", "inputs": {"n": [2, 3]}})";
  }
  const Result bad = call({"run", (dir / "bad.json").string()});
  CHECK(bad.status == 2);
  CHECK(bad.err.find("inputs.n") != std::string::npos);
  {
    std::ofstream s(dir / "unknown.json");
    s << R"({"name": "u", "task": "nope"})";
  }
  CHECK(call({"run", (dir / "unknown.json").string()}).status == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("Hamiltonian commands") {
  const Result c = call({"calabi", data("height.json"), "--json"});
  REQUIRE(c.status == 0);
  CHECK(std::abs(nlohmann::json::parse(c.out)["calabi"].get<double>()) < 1e-12);
  const Result d = call({"duality", data("height.json"), data("parallel2.json")});
  CHECK(d.status == 0);
  const Result b = call({"bound", data("cap_bump.json"), data("parallel2.json"), "--json"});
  REQUIRE(b.status == 0);
  const auto bj = nlohmann::json::parse(b.out);
  // normalized bump: -int_0^0.2 (0.2 - z)^2 dz on both circles
  CHECK(bj["lower"].get<double>() == doctest::Approx(-0.008 / 3).epsilon(1e-12));
  CHECK(bj["upper"] == bj["lower"]);
  const Result crit = call({"crit", "--clifford", "2"});
  REQUIRE(crit.status == 0);
  CHECK(crit.out.find("3 critical points") != std::string::npos);
}
