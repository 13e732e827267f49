#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "scenario.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("cavity_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(CAVITY_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path write(const fs::path& dir, const std::string& yaml) {
  const auto p = dir / "scenario.yaml";
  std::ofstream(p) << yaml;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

using namespace cavity::scenario;

TEST_CASE("negative L0 is rejected before any output") {
  const auto dir = scratch("neg");
  const auto cfg = write(dir, "wall: {kind: linear, L0: -1.0, Ldot0: 0.1}\noutput: {dir: " + (dir / "out").string() + "}\n");
  CHECK(run("run --config " + cfg.string(), dir / "log") == exit_usage);
  CHECK(slurp(dir / "log").find("L0") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_AS(parse_config("wall: {kind: linear, L0: 1, speed: 2}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("engin: exact\n"), ConfigError);
}

TEST_CASE("fixed wall has no non-adiabatic force") {
  const auto dir = scratch("fixed");
  const auto cfg = write(dir, "wall: {kind: fixed, L0: 1.3}\noccupation: {mode: zero_temperature, N: 2}\n"
                              "time: {start: 0.0, stop: 2.0, samples: 5}\noutput: {dir: " +
                                  (dir / "out").string() + "}\n");
  REQUIRE(run("run --config " + cfg.string(), dir / "log") == exit_ok);
  std::ifstream in(dir / "out" / "run_exact.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("t,L,Ldot,tau,E,F_ad,F_nonad,F_total,F_fd", 0) == 0);
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    CHECK(std::stod(f[6]) == 0.0);
    ++rows;
  }
  CHECK(rows == 5);
  CHECK(fs::exists(dir / "out" / "run_summary.json"));
}

TEST_CASE("reruns are byte identical") {
  const auto dir = scratch("rerun");
  const std::string body = "wall: {kind: linear, L0: 1.0, Ldot0: 0.02}\nlevel: 1\nengine: all\n"
                           "time: {values: [0.5, 1.0]}\noracle: {grid_points: 255, dt: 1.0e-3}\n";
  const auto a = write(dir, body + "output: {dir: " + (dir / "a").string() + "}\n");
  REQUIRE(run("run --config " + a.string(), dir / "log_a") == exit_ok);
  const auto b = write(dir, body + "output: {dir: " + (dir / "b").string() + "}\n");
  REQUIRE(run("run --config " + b.string(), dir / "log_b") == exit_ok);
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    const auto other = dir / "b" / e.path().filename();
    REQUIRE(fs::exists(other));
    std::string x = slurp(e.path()), y = slurp(other);
    // the summary echoes the output directory nowhere, so files compare whole
    CHECK(x == y);
    ++files;
  }
  CHECK(files >= 5);
}

TEST_CASE("time-averaged compare reports the coefficients") {
  const auto dir = scratch("compare");
  const auto cfg = write(dir, "wall: {kind: linear, L0: 1.0, Ldot0: 0.01}\nmode: time_averaged\n"
                              "output: {dir: " + (dir / "out").string() + "}\n");
  REQUIRE(run("compare --config " + cfg.string(), dir / "log") == exit_ok);
  const auto s = slurp(dir / "out" / "run_summary.json");
  CHECK(s.find("\"C\"") != std::string::npos);
  CHECK(s.find("\"perturbative\"") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "run_perturbative.csv"));
  CHECK_FALSE(fs::exists(dir / "out" / "run_oracle.csv"));
}

TEST_CASE("sweep fits a quadratic law and rejects a still wall") {
  const auto dir = scratch("sweep");
  const auto cfg = write(dir, "wall: {kind: linear, L0: 1.0}\nmode: time_averaged\n"
                              "sweep: {velocities: [0.001, 0.002, 0.005, 0.01, 0.02], paired: true}\n"
                              "output: {dir: " + (dir / "out").string() + "}\n");
  REQUIRE(run("sweep --config " + cfg.string(), dir / "log") == exit_ok);
  const auto s = slurp(dir / "out" / "run_summary.json");
  const auto at = s.find("\"slope\": ");
  REQUIRE(at != std::string::npos);
  CHECK(std::stod(s.substr(at + 9)) == doctest::Approx(2.0).epsilon(0.025));

  const auto bad = write(dir, "wall: {kind: linear, L0: 1.0}\nmode: time_averaged\n"
                              "sweep: {velocities: [0.001, 0.002]}\n");
  CHECK(run("sweep --config " + bad.string(), dir / "log2") == exit_usage);
}

TEST_CASE("roots subcommand") {
  const auto dir = scratch("roots");
  CHECK(run("roots --out-dir " + (dir / "empty").string(), dir / "log") == exit_usage);
  CHECK_FALSE(fs::exists(dir / "empty"));
  REQUIRE(run("roots --hbarB 0.001 0.1 --nmax 3 --out-dir " + (dir / "out").string(), dir / "log2") == exit_ok);
  const auto csv = slurp(dir / "out" / "roots_roots.csv");
  CHECK(csv.rfind("hbarB,n,K,K_semiclassical,rel_dev,status", 0) == 0);
  CHECK(csv.find("4.93444885613") != std::string::npos);
}

TEST_CASE("jtable and schema") {
  const auto dir = scratch("jt");
  REQUIRE(run("jtable --nmax 3 --out-dir " + dir.string(), dir / "log") == exit_ok);
  CHECK(slurp(dir / "jtable_jtable.csv").rfind("n,l,J1,J2,J3\n", 0) == 0);
  REQUIRE(run("--print-schema", dir / "schema") == exit_ok);
  const auto schema = slurp(dir / "schema");
  CHECK(schema.find("engine:") != std::string::npos);
  CHECK_NOTHROW(parse_config(schema));
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, -2.5e-300, 1.0 / 3.0, 123456789.123}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(std::nan("")) == "nan");
}
