#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

namespace {

using Json = nlohmann::ordered_json;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string out_path = "/tmp/bbres_cli_out.txt";
  const std::string cmd =
      std::string(BBRES_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  res.output = buf.str();
  return res;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("chern subcommand prints the Chern numbers") {
  CHECK(run_cli("chern --dim 3 --phi c1^3").output == "64\n");
  CHECK(run_cli("chern --dim 3 --phi c1*c2").output == "24\n");
  CHECK(run_cli("chern --dim 3 --phi c3").output == "4\n");
  const RunResult bad = run_cli("chern --dim 3 --phi c2");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("chart subcommand") {
  const RunResult res = run_cli(std::string("chart ") + BBRES_EXAMPLE_SPEC + " --to 2");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("x - x*y + t") != std::string::npos);
  CHECK(res.output.find("x - y^2") != std::string::npos);
  CHECK(res.output.find("-y*z") != std::string::npos);
  CHECK(res.output.find("clearing exponent: 0") != std::string::npos);

  const RunResult same = run_cli(std::string("chart ") + BBRES_EXAMPLE_SPEC + " --to 3");
  CHECK(same.exit_code == 2);
  CHECK(same.output.find("equals source") != std::string::npos);

  CHECK(run_cli("chart /nonexistent.spec --to 2").exit_code == 2);
}

TEST_CASE("residues subcommand writes a machine report, byte-stable") {
  const std::string json_a = "/tmp/bbres_res_a.json";
  const std::string json_b = "/tmp/bbres_res_b.json";
  const RunResult a = run_cli(std::string("residues ") + BBRES_EXAMPLE_SPEC +
                              " --t 0.1 --json " + json_a);
  CHECK(a.exit_code == 0);
  const RunResult b = run_cli(std::string("residues ") + BBRES_EXAMPLE_SPEC +
                              " --t 0.1 --json " + json_b);
  CHECK(b.exit_code == 0);
  const std::string text_a = slurp(json_a);
  CHECK(text_a == slurp(json_b));
  CHECK(a.output == b.output);

  const Json j = Json::parse(text_a);
  CHECK(j["command"] == "residues");
  CHECK(j["singularities"].size() == 4);
  CHECK(j["config"]["seed"].get<std::uint64_t>() == 20240917);

  // The field depends on t, so --t is required.
  CHECK(run_cli(std::string("residues ") + BBRES_EXAMPLE_SPEC).exit_code == 2);
}

TEST_CASE("sweep subcommand rejects too-short grids") {
  const std::string spec_path = "/tmp/bbres_short_grid.spec";
  write_file(spec_path, R"({
    "dim": 3, "chart": 3, "variables": ["x", "y", "z"], "parameter": "t",
    "components": ["x + t*z", "x", "y"],
    "deformation": {"t_start": 0.5, "ratio": 0.5, "count": 2}
  })");
  const RunResult res = run_cli("sweep " + spec_path);
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("at least 3") != std::string::npos);
}

TEST_CASE("sweep subcommand on the shipped example") {
  const std::string json_path = "/tmp/bbres_sweep.json";
  const RunResult res =
      run_cli(std::string("sweep ") + BBRES_EXAMPLE_SPEC + " --json " + json_path);
  CHECK(res.exit_code == 0);
  const Json j = Json::parse(slurp(json_path));
  CHECK(j["grid"].size() == 12);
  CHECK(j["paths"].size() == 4);
  CHECK(j["groups"].size() == 2);
  CHECK(j["groups"][0]["label"] == "L");
  // Human output mentions the grouped limits.
  CHECK(res.output.find("grouped residue limits") != std::string::npos);
}

TEST_CASE("flag overrides are honored and echoed") {
  const std::string json_path = "/tmp/bbres_seeded.json";
  const RunResult res = run_cli(std::string("residues ") + BBRES_EXAMPLE_SPEC +
                                " --t 0.5 --seed 7 --tol-newton 1e-9 --json " + json_path);
  CHECK(res.exit_code == 0);
  const Json j = Json::parse(slurp(json_path));
  CHECK(j["config"]["seed"] == 7);
  CHECK(j["config"]["tolerances"]["newton"].get<double>() == 1e-9);
}

TEST_CASE("unknown arguments exit with code 2") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("chern --dim 3").exit_code == 2);
}
