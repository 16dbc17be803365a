#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "framelab/report.hpp"

using namespace framelab;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(FRAMELAB_CLI_PATH) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = std::string("/tmp/framelab_cli_test_") + name;
  std::ofstream(path) << content;
  return path;
}

std::string corpus(const std::string& name) {
  return std::string(FRAMELAB_CORPUS_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("run emits a schema-1 report with the input digest") {
  const auto r = run_cli("run --input " + corpus("full_spark_triple_r2.json"));
  CHECK(r.exit_code == 0);
  const auto rep = nlohmann::json::parse(r.out);
  CHECK(rep["schema"] == "1");
  CHECK(rep["mode"] == "exact");
  CHECK(rep["input_digest"].get<std::string>().size() == 16);
  CHECK(rep["tasks"].size() == 3);
  CHECK(rep["tasks"][0]["spark"] == 3);
  CHECK(rep["tasks"][0]["full_spark"] == true);
  CHECK(rep["tasks"][1]["verdict"] == "CertifiedYes");
  CHECK(rep["tasks"][1]["expect_matched"] == true);
}

TEST_CASE("failed expectations on certified-no set exit code 2") {
  const auto path = write_temp("expect_mismatch.json", R"({
    "mode": "exact", "dim": 2,
    "frame": {"vectors": [["1","0"], ["1","1"]]},
    "tasks": [{"task": "nr", "expect": "yes"}]
  })");
  const auto r = run_cli("run --input " + path);
  CHECK(r.exit_code == 2);
  const auto rep = nlohmann::json::parse(r.out);
  CHECK(rep["tasks"][0]["verdict"] == "CertifiedNo");
  CHECK(rep["tasks"][0]["expect_matched"] == false);
}

TEST_CASE("parse failures exit with code 3") {
  const auto empty = write_temp("empty_family.json",
                                R"({"mode":"exact","frame":{"vectors":[]},"tasks":["nr"]})");
  CHECK(run_cli("run --input " + empty).exit_code == 3);
  const auto zeroden = write_temp(
      "zero_den.json",
      R"({"mode":"exact","dim":2,"frame":{"vectors":[["1/0","0"],["0","1"]]},"tasks":["nr"]})");
  CHECK(run_cli("run --input " + zeroden).exit_code == 3);
  const auto unknown = write_temp(
      "unknown_task.json",
      R"({"mode":"exact","dim":2,"frame":{"vectors":[["1","0"],["0","1"]]},"tasks":["frobnicate"]})");
  CHECK(run_cli("run --input " + unknown).exit_code == 3);
  const auto junk = write_temp("junk.json", "{ not json");
  CHECK(run_cli("run --input " + junk).exit_code == 3);
  const auto floats = write_temp(
      "float_in_exact.json",
      R"({"mode":"exact","dim":2,"frame":{"vectors":[[0.5,0],[0,1]]},"tasks":["nr"]})");
  CHECK(run_cli("run --input " + floats).exit_code == 3);
}

TEST_CASE("exact-only tasks report an error in float mode without crashing") {
  const auto path = write_temp("float_mode.json", R"({
    "mode": "float", "dim": 2,
    "frame": {"vectors": [[1, 0], [0, 1], [1, 1]]},
    "tasks": ["pr", "bounds"]
  })");
  const auto r = run_cli("run --input " + path);
  CHECK(r.exit_code == 0);
  const auto rep = nlohmann::json::parse(r.out);
  CHECK(rep["tasks"][0].contains("error"));
  // frame operator of {e1, e2, e1+e2} is [[2,1],[1,2]]: eigenvalues 1 and 3
  CHECK(rep["tasks"][1]["A"].get<double>() == doctest::Approx(1.0));
  CHECK(rep["tasks"][1]["B"].get<double>() == doctest::Approx(3.0));
}

TEST_CASE("verify accepts every report the tool produces on the corpus") {
  for (const char* name :
       {"fusion_counterexample_r3.json", "t13_converse_gap_r4.json", "full_spark_triple_r2.json",
        "canonical_basis_r3.json", "nr_fail_pair_r2.json", "onb_pair_fusion_r2.json"}) {
    const auto r = run_cli("run --input " + corpus(name));
    REQUIRE(r.exit_code == 0);
    const auto rep_path = write_temp("verify_roundtrip.json", r.out);
    const auto v = run_cli("verify --input " + corpus(name) + " --report " + rep_path);
    CHECK_MESSAGE(v.exit_code == 0, name);
  }
}

TEST_CASE("verify rejects a doctored certificate") {
  const auto r = run_cli("run --input " + corpus("fusion_counterexample_r3.json"));
  REQUIRE(r.exit_code == 0);
  auto rep = nlohmann::json::parse(r.out);
  auto& cert = rep["tasks"][0]["certificate"];
  REQUIRE(cert["kind"] == "coordinate-squares");
  cert["u_sq"][0] = "5";
  const auto rep_path = write_temp("doctored.json", rep.dump());
  const auto v = run_cli("verify --input " + corpus("fusion_counterexample_r3.json") +
                         " --report " + rep_path);
  CHECK(v.exit_code != 0);
}

TEST_CASE("reports are byte-identical across job counts") {
  for (const char* name : {"fusion_counterexample_r3.json", "full_spark_triple_r2.json",
                           "canonical_basis_r3.json", "nr_fail_pair_r2.json"}) {
    const auto r1 = run_cli("run --jobs 1 --input " + corpus(name));
    const auto r8 = run_cli("run --jobs 8 --input " + corpus(name));
    CHECK(r1.exit_code == r8.exit_code);
    CHECK_MESSAGE(r1.out == r8.out, name);
  }
}

TEST_CASE("library-level parse mirrors the CLI rules") {
  CHECK_THROWS_AS(parse_input_text(R"({"mode":"exact","frame":{"vectors":[]}})"), ParseError);
  CHECK_THROWS_AS(parse_input_text(R"({"mode":"warp"})"), ParseError);
  const auto c = parse_input_text(
      R"({"mode":"exact","dim":2,"frame":{"vectors":[["1","0"],["0","1"]]}})");
  CHECK(c.tasks.size() == 1);  // defaults to analyze
  CHECK(c.tasks[0].name == "analyze");
  CHECK(c.mode == Mode::Exact);
  REQUIRE(c.frame);
  CHECK(c.frame->count() == 2);
}
