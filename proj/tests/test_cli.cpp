#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace {

struct Result {
  int code;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string("'") + SPINAL_CLI + "' " + args + " 2>/dev/null";
  Result r{-1, {}};
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string scenario() { return std::string("'") + SPINAL_SCENARIO + "'"; }

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return "'" + path.string() + "'";
}

}  // namespace

TEST_CASE("tau") {
  auto a5 = cli("--json tau A5");
  CHECK(a5.code == 0);
  CHECK(nlohmann::json::parse(a5.out)["degree"] == 5);
  CHECK(nlohmann::json::parse(cli("--json tau A6").out)["degree"] == 6);
  CHECK(cli("tau C2").code == 1);
  CHECK(cli("tau Q8").code == 2);
  CHECK(cli("tau '{\"degree\": 5, \"generators\": [\"(0 1 2)\", \"(2 3 4)\"]}'").code == 0);
  CHECK(cli("tau '{\"degree\": 5'").code == 2);
}

TEST_CASE("scenario commands") {
  const auto s = scenario();
  auto act = cli("act " + s + " sG1 1.0");
  CHECK(act.code == 0);
  CHECK(act.out == "1.1\n");
  CHECK(cli("quotient " + s + " --level 2").out == "46656000000\n");
  CHECK(cli("quotient " + s + " --level 1").out == "60\n");
  CHECK(cli("check-rep " + s).code == 0);

  auto build = nlohmann::json::parse(cli("--json build " + s).out);
  CHECK(build["generators"].size() == 4);
  CHECK(build["H"]["proper"] == true);

  auto portrait = nlohmann::json::parse(cli("--json portrait " + s + " sG1 --depth 3").out);
  CHECK(portrait["labels"]["1"] == "(0 1 2)");
  CHECK(portrait["labels"]["0.1"] == "(0 1 2)");
  CHECK(portrait["labels"].size() == 2);

  auto cls = nlohmann::json::parse(cli("--json classify " + s + " 'r1^-1 sG2 r1'").out);
  CHECK(cls["k"] == 1);

  auto member = nlohmann::json::parse(cli("--json member " + s + " 'sG2'").out);
  CHECK(member["verdict"] == "no");
  member = nlohmann::json::parse(cli("--json member " + s + " 'r2 r1'").out);
  CHECK(member["verdict"] == "yes");

  auto max = nlohmann::json::parse(cli("--json max A5").out);
  CHECK(max["count"] == 21);

  auto verify = cli("verify " + s + " --suite all");
  CHECK(verify.code == 0);
  CHECK(verify.out.find("maximality: PASS (1080/1080)") != std::string::npos);
}

TEST_CASE("malformed input and failures") {
  const auto s = scenario();
  CHECK(cli("act " + s + " sG9 1.0").code == 2);
  CHECK(cli("act " + s + " sG1 1.x").code == 2);
  CHECK(cli("act " + s + " sG1 1.7").code == 2);
  CHECK(cli("portrait " + s).code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("verify " + s + " --suite nope").code == 2);
  CHECK(cli("build /nonexistent/scenario.json").code == 2);
  CHECK(cli("build " + write_temp("spinal_empty.json", "")).code == 2);
  CHECK(cli("build " + write_temp("spinal_obj.json", "{}")).code == 2);

  const auto seeded = write_temp(
      "spinal_seeded.json", R"j({"S0": "A5", "G": "A5", "components": "diagonal", "ray": 0, "spinal": 0})j");
  auto r = cli("build " + seeded);
  CHECK(r.code == 1);
  CHECK(r.out.empty());
  CHECK(cli("verify " + seeded).code == 1);

  const auto not_onto = write_temp("spinal_not_onto.json", R"j({
    "S0": "A5", "G": "A5", "ray": 0, "spinal": 1,
    "components": [{"target": "A6", "images": ["(0 1 2)", "(0 1 2 3 4)"]}]})j");
  CHECK(cli("check-rep " + not_onto).code == 1);
  CHECK(cli("build " + not_onto).code == 1);

  const auto not_perfect = write_temp("spinal_c2.json", R"j({
    "S0": "A5", "G": {"degree": 3, "generators": ["(0 1)", "(0 1 2)"]},
    "components": "diagonal", "ray": 0, "spinal": 1})j");
  CHECK(cli("build " + not_perfect).code == 1);
}
