#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = pgn::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json payload(const Result& r) { return nlohmann::json::parse(r.out).at("payload"); }

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << contents;
  return path;
}

}  // namespace

TEST_CASE("formula subcommands") {
  auto delta = invoke({"formula", "delta", "--m", "2", "--n", "1"});
  CHECK(delta.code == 0);
  CHECK(payload(delta).dump().find("\"exact\":\"4/3\"") != std::string::npos);

  auto dani = invoke({"formula", "dani", "--m", "1", "--n", "2", "--omega", "inf"});
  CHECK(dani.code == 0);
  CHECK(payload(dani)["tau"]["exact"] == "1/2");

  auto fk = invoke({"formula", "fk", "--m", "2", "--n", "1", "--k", "1"});
  CHECK(payload(fk)["value"]["exact"] == "4/3");
}

TEST_CASE("exit codes") {
  CHECK(invoke({"formula", "delta", "--m", "0", "--n", "1"}).code == 1);
  CHECK(invoke({"nonsense"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"formula", "delta", "--m", "2", "--n", "1", "--format", "csv"}).code == 2);
  CHECK(invoke({"formula", "delta", "--m", "2", "--n", "1", "--format", "xml"}).code == 2);
  auto missing = invoke({"template", "validate", "/nonexistent/template.json"});
  CHECK(missing.code != 0);
  CHECK_FALSE(missing.err.empty());
}

TEST_CASE("curves print CSV") {
  auto r = invoke({"curves", "sing12", "--samples", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("tau,hd,pd\n0.125,", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
}

TEST_CASE("game run with a singleton Alice scores zero") {
  auto r = invoke({"game", "run", "--m", "1", "--n", "1", "--alice", "singleton", "--turns", "5"});
  CHECK(r.code == 0);
  CHECK(payload(r)["score"]["value"] == 0.0);
}

TEST_CASE("repeat runs are byte identical") {
  const std::vector<std::string> args{"game", "run", "--m", "2", "--n", "1", "--alice", "max-packing", "--seed", "17"};
  auto a = invoke(args), b = invoke(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("options can come from a config file") {
  auto path = temp_file("pgn_cli_test.ini", "format = csv\n");
  auto r = invoke({"--config", path.string(), "curves", "sing12", "--samples", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("tau,hd,pd", 0) == 0);
  auto bad = invoke({"--config", path.string(), "formula", "delta", "--m", "2", "--n", "1"});
  CHECK(bad.code == 2);
  std::filesystem::remove(path);
}

TEST_CASE("a built template validates") {
  auto built = invoke({"template", "build", "pair", "--m", "1", "--n", "2", "--points", "0,0;3,0"});
  REQUIRE(built.code == 0);
  auto path = temp_file("pgn_cli_template.json", built.out);
  auto checked = invoke({"template", "validate", path.string()});
  CHECK(checked.code == 0);
  CHECK(payload(checked)["ok"] == true);
  auto avg = invoke({"template", "average", path.string(), "--from", "0", "--to", "3"});
  CHECK(avg.code == 0);
  CHECK(avg.out.find("4/3") != std::string::npos);
  std::filesystem::remove(path);
}
