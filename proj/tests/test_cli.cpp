#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pointopt/kernels.hpp"

using nlohmann::json;

namespace {

const std::string kCli = POINTOPT_CLI_PATH;

struct RunResult {
  int exit_code = -1;
  std::string out;  // stdout: machine-readable payload
  std::string err;  // stderr: human summary, or structured error JSON
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  const std::string out_path = "/tmp/pointopt_cli_test_stdout.txt";
  const std::string err_path = "/tmp/pointopt_cli_test_stderr.txt";
  const std::string cmd =
      kCli + " " + args + " > " + out_path + " 2> " + err_path;
  const int rc = std::system(cmd.c_str());
  return {WEXITSTATUS(rc), slurp(out_path), slurp(err_path)};
}

json run_json(const std::string& args, int expect_code = 0) {
  const RunResult r = run(args);
  REQUIRE(r.exit_code == expect_code);
  return json::parse(expect_code == 0 ? r.out : r.err);
}

}  // namespace

TEST_CASE("spectrum: canonical loop json output") {
  const json j =
      run_json("spectrum --setting loop --n 4 --config canonical --alpha -2");
  CHECK(j.at("lambda1").get<double>() < 0.0);
  CHECK(j.at("alpha").get<double>() == -2.0);
  CHECK(j.at("N").get<int>() == 4);
  CHECK(j.at("config").at("setting") == "loop");
  CHECK(j.at("runspec").at("schema_version").get<int>() >= 1);
  CHECK(std::fabs(j.at("residual").get<double>()) < 1e-10);
}

TEST_CASE("spectrum: sphere builtin and repulsive loop") {
  const json o =
      run_json("spectrum --setting sphere --n 6 --config octahedron --alpha -1");
  CHECK(o.at("lambda1").get<double>() < 0.0);

  const json p =
      run_json("spectrum --setting loop --n 3 --config canonical --alpha 5");
  const double lam = p.at("lambda1").get<double>();
  CHECK(lam > 0.0);
  CHECK(lam < 9.0 / 4.0);  // below the dirichlet limit
}

TEST_CASE("spectrum: json config file round trip") {
  const std::string cfg_path = "/tmp/pointopt_cli_test_cfg.json";
  {
    std::ofstream f(cfg_path);
    f << "{\"schema_version\":1,\"setting\":\"loop\",\"N\":2,"
      << "\"sites\":[0.0,3.141592653589793]}";
  }
  const json j = run_json("spectrum --setting loop --n 2 --config " + cfg_path +
                          " --alpha -1");
  CHECK(j.at("N").get<int>() == 2);
  CHECK(j.at("lambda1").get<double>() < 0.0);
}

TEST_CASE("spectrum: output file is written atomically") {
  const std::string out_path = "/tmp/pointopt_cli_test_out.json";
  std::remove(out_path.c_str());
  const RunResult r = run("spectrum --setting loop --n 3 --config canonical "
                          "--alpha -1 --out " + out_path);
  CHECK(r.exit_code == 0);
  std::ifstream in(out_path);
  REQUIRE(in.good());
  const json j = json::parse(in);
  CHECK(j.at("lambda1").get<double>() < 0.0);
}

TEST_CASE("spectrum: csv format") {
  const RunResult r = run("spectrum --setting loop --n 3 --config canonical "
                          "--alpha -1 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("lambda1") != std::string::npos);
  CHECK(r.out.find("\n") != std::string::npos);
}

TEST_CASE("verify: small campaign reports zero violations") {
  const json j = run_json("verify --setting loop --alpha -1 --n 3 --trials 15 "
                          "--seed 5");
  CHECK(j.at("violations").get<int>() == 0);
  CHECK(j.at("trials").get<int>() == 15);
  CHECK(j.at("min_gap").get<double>() > 0.0);
  CHECK(j.at("samples").size() == 15);
}

TEST_CASE("design-check: sharp configurations") {
  const json j = run_json("design-check --setting sphere --n 12");
  CHECK(j.at("design_strength").get<int>() >= 5);
  const json o = run_json("design-check --setting sphere --n 6");
  CHECK(o.at("design_strength").get<int>() == 3);
}

TEST_CASE("asymptotics: weak mode") {
  const json j = run_json(
      "asymptotics --setting loop --mode weak --n 2 --config canonical "
      "--alpha-min 0.0125 --alpha-max 0.2 --alpha-steps 5");
  CHECK(j.at("c1").get<double>() == doctest::Approx(1.0 / pointopt::kPi));
  CHECK(j.at("exponent").get<double>() > 2.5);
  CHECK(j.at("rows").size() == 5);
}

TEST_CASE("asymptotics: strong mode") {
  const json j = run_json(
      "asymptotics --setting loop --mode strong --n 3 --config canonical "
      "--alpha-min 10 --alpha-max 1000 --alpha-steps 4");
  CHECK(j.at("monotone").get<bool>());
  CHECK(j.at("below_dirichlet").get<bool>());
  CHECK(j.at("dirichlet").get<double>() == doctest::Approx(2.25));
}

TEST_CASE("usage errors exit 1 with structured message") {
  for (const std::string bad :
       {std::string("spectrum --setting loop --n 3 --config canonical --alpha 0"),
        std::string("spectrum --setting nowhere --n 3 --config canonical --alpha -1"),
        std::string("spectrum --setting loop --n 3 --config missing-file.json --alpha -1"),
        std::string("design-check --setting sphere --n 7")}) {
    const RunResult r = run(bad);
    CHECK(r.exit_code == 1);
    const json j = json::parse(r.err);
    CHECK(j.at("error") == "usage");
  }
}

TEST_CASE("solver failures exit 2") {
  // nu=3 pair above the critical coupling 1/(8 pi): no bound state
  const RunResult r = run("spectrum --setting sphere --n 2 --config antipodal-pair "
                          "--alpha 0.05");
  CHECK(r.exit_code == 2);
  const json j = json::parse(r.err);
  CHECK(j.at("error") == "solver");
}
