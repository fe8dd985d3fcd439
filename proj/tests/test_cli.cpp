#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

using nlohmann::ordered_json;

namespace {

std::string g_cli;
std::string g_models;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + g_cli + " " + args + " 2>/dev/null";
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t got = 0;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) res.out.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

ordered_json parse_report(const RunResult& res) {
  ordered_json j = ordered_json::parse(res.out);
  REQUIRE(j.contains("wall_time_ms"));
  return j;
}

std::string u2_path() { return g_models + "/u2.json"; }
std::string r4_path() { return g_models + "/r4.json"; }

}  // namespace

TEST_CASE("validate accepts the shipped models") {
  for (const std::string& path : {u2_path(), r4_path()}) {
    RunResult res = run("validate " + path);
    CHECK(res.exit_code == 0);
    ordered_json j = parse_report(res);
    CHECK(j["command"] == "validate");
    CHECK(j["results"]["passed"] == true);
    CHECK(j["model"]["n"] >= 1);
    for (const auto& check : j["results"]["checks"]) CHECK(check["passed"] == true);
  }
}

TEST_CASE("validate reports io problems on the io exit code") {
  RunResult res = run("validate /no/such/model.json");
  CHECK(res.exit_code == 1);
  ordered_json j = parse_report(res);
  CHECK(j.contains("error"));
}

TEST_CASE("validate rejects corrupted models on the validation exit code") {
  const auto dir = std::filesystem::temp_directory_path();

  const auto garbled = dir / "cli_garbled_model.json";
  std::ofstream(garbled) << "this is { not json";
  RunResult syntax = run("validate " + garbled.string());
  CHECK(syntax.exit_code == 2);
  std::filesystem::remove(garbled);

  ordered_json model;
  {
    std::ifstream in(g_models + "/u2.json");
    in >> model;
  }
  for (auto& entry : model["eta"][0]) entry = entry.get<double>() * 0.9;
  const auto bent = dir / "cli_bent_model.json";
  std::ofstream(bent) << model.dump(2) << "\n";
  RunResult structural = run("validate " + bent.string());
  CHECK(structural.exit_code == 2);
  ordered_json j = parse_report(structural);
  CHECK(j["results"]["passed"] == false);
  std::filesystem::remove(bent);
}

TEST_CASE("check runs the left-invariant engine over the phi-celestial sphere") {
  RunResult res = run("check " + u2_path() + " --engine koszul");
  CHECK(res.exit_code == 0);
  ordered_json j = parse_report(res);
  CHECK(j["command"] == "check");
  CHECK(j["results"]["engine"] == "koszul");
  CHECK(j["results"]["mode"] == "phi-null");
  const auto& verdict = j["results"]["verdict"];
  CHECK(verdict["passed"] == true);
  const auto& spectrum = verdict["reference_spectrum"];
  REQUIRE(spectrum["eigenvalues"].size() == 2);
  CHECK(std::abs(spectrum["eigenvalues"][0].get<double>() - 1.0) < 1e-9);
  CHECK(std::abs(spectrum["eigenvalues"][1].get<double>() - 5.0) < 1e-9);
  CHECK(spectrum["multiplicities"][0] == 1);
  CHECK(spectrum["multiplicities"][1] == 1);
  CHECK_FALSE(verdict.contains("witness"));
}

TEST_CASE("check fails the full null congruence with the characteristic witness") {
  RunResult res = run("check " + u2_path() + " --engine koszul --mode null");
  CHECK(res.exit_code == 3);
  ordered_json j = parse_report(res);
  const auto& verdict = j["results"]["verdict"];
  CHECK(verdict["passed"] == false);
  REQUIRE(verdict.contains("witness"));
  const auto& witness = verdict["witness"];
  REQUIRE(witness["x"].size() == 4);
  CHECK(std::abs(witness["x"][0].get<double>() - 0.0) < 1e-12);
  CHECK(std::abs(witness["x"][1].get<double>() - 1.0) < 1e-12);
  CHECK(std::abs(witness["x"][2].get<double>() - 0.0) < 1e-12);
  CHECK(std::abs(witness["x"][3].get<double>() - 0.0) < 1e-12);
  for (const auto& lambda : witness["eigenvalues"])
    CHECK(std::abs(lambda.get<double>()) < 1e-9);
}

TEST_CASE("check runs the chart engine on the polynomial model") {
  RunResult res = run("check " + r4_path() + " --engine chart");
  CHECK(res.exit_code == 0);
  ordered_json j = parse_report(res);
  const auto& spectrum = j["results"]["verdict"]["reference_spectrum"];
  REQUIRE(spectrum["eigenvalues"].size() == 1);
  CHECK(std::abs(spectrum["eigenvalues"][0].get<double>() - 1.0) < 1e-9);
  CHECK(spectrum["multiplicities"][0] == 2);
}

TEST_CASE("engines demand the matching model kind") {
  CHECK(run("check " + u2_path() + " --engine chart").exit_code == 2);
  CHECK(run("check " + r4_path() + " --engine koszul").exit_code == 2);
}

TEST_CASE("declared-constant and reconstruction engines agree with the native one") {
  RunResult eq1 = run("check " + u2_path() + " --engine eq1");
  CHECK(eq1.exit_code == 0);
  ordered_json j1 = parse_report(eq1);
  CHECK(std::abs(j1["results"]["verdict"]["reference_spectrum"]["eigenvalues"][1]
                     .get<double>() -
                 5.0) < 1e-9);

  RunResult rec = run("check " + u2_path() + " --engine thm57");
  CHECK(rec.exit_code == 0);
  ordered_json j2 = parse_report(rec);
  CHECK(std::abs(j2["results"]["thm57_parameters"]["c1"].get<double>() - 5.0) < 1e-12);
  CHECK(std::abs(j2["results"]["thm57_parameters"]["c2"].get<double>() - 2.0) < 1e-12);
  CHECK(j2["results"]["verdict"]["passed"] == true);
}

TEST_CASE("published tables reproduce") {
  for (const std::string table : {"u2", "thm44", "r4", "remark58", "prop59"}) {
    RunResult res = run("reproduce --table " + table);
    INFO("table ", table);
    CHECK(res.exit_code == 0);
    ordered_json j = parse_report(res);
    CHECK(j["command"] == "reproduce");
    CHECK(j["model"].is_null());
    CHECK(j["results"]["passed"] == true);
    for (const auto& row : j["results"]["rows"]) {
      INFO("row ", row["label"].get<std::string>());
      CHECK(row["passed"] == true);
    }
  }
}

TEST_CASE("reports are byte-identical across runs modulo timing") {
  const std::string args = "check " + u2_path() + " --engine koszul --seed 7 --count 32";
  ordered_json a = parse_report(run(args));
  ordered_json b = parse_report(run(args));
  a.erase("wall_time_ms");
  b.erase("wall_time_ms");
  CHECK(a.dump() == b.dump());

  ordered_json c = parse_report(run("reproduce --table thm44"));
  ordered_json d = parse_report(run("reproduce --table thm44"));
  c.erase("wall_time_ms");
  d.erase("wall_time_ms");
  CHECK(c.dump() == d.dump());
}

TEST_CASE("the verdict tolerance is configurable through the environment") {
  RunResult res = run("check " + u2_path() + " --engine koszul", "OSSERMAN_TOL=1e-5");
  CHECK(res.exit_code == 0);
  ordered_json j = parse_report(res);
  CHECK(std::abs(j["tolerances"]["verdict"].get<double>() - 1e-5) < 1e-18);

  // An explicit flag overrides the environment.
  RunResult flag =
      run("check " + u2_path() + " --engine koszul --tol 1e-6", "OSSERMAN_TOL=1e-5");
  ordered_json jf = parse_report(flag);
  CHECK(std::abs(jf["tolerances"]["verdict"].get<double>() - 1e-6) < 1e-19);
}

TEST_CASE("command line misuse exits with the validation code") {
  CHECK(run("check " + u2_path() + " --engine warp").exit_code == 2);
  CHECK(run("reproduce --table nope").exit_code == 2);
  CHECK(run("").exit_code == 2);
}

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <cli-binary> <models-dir> [doctest args]\n", argv[0]);
    return 1;
  }
  g_cli = argv[argc - 2];
  g_models = argv[argc - 1];
  doctest::Context context;
  context.applyCommandLine(argc - 2, argv);
  return context.run();
}
