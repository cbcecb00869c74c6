#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "shiftspread/pipeline.hpp"

#include <sys/wait.h>

using namespace shiftspread;
namespace fs = std::filesystem;

namespace {

ScenarioConfig reference_config(double c_e, double horizon) {
  ScenarioConfig c;
  c.name = "reference";
  c.scenario = oracle::reference_scenario(c_e);
  c.horizon = horizon;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Runs the CLI with stdout and stderr captured into files under dir; returns the exit status.
int cli(const std::string& args, const fs::path& dir) {
  std::string cmd = std::string(SHIFTSPREAD_CLI) + " " + args + " > " + (dir / "stdout.txt").string() +
                    " 2> " + (dir / "stderr.txt").string();
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("shiftspread_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("verify stops at the first failing assumption and names it") {
  ScenarioConfig c = reference_config(1.0, 20.0);
  c.scenario.b = 0.9;  // b alpha_+ < 1: the predator cannot persist ahead of the shift
  VerifyResult r = verify(c);
  CHECK(r.exit_code == kExitAssumption);
  CHECK(r.report["failing_assumption"] == "H1");
  CHECK_FALSE(r.simulation);
  CHECK_THROWS_AS(require_assumptions(c.scenario), AssumptionFailure);
}

TEST_CASE("verify reports a numerical abort for an under-resolved grid") {
  ScenarioConfig c = reference_config(1.0, 20.0);
  c.dx = 0.25;
  VerifyResult r = verify(c);
  CHECK(r.exit_code == kExitNumerical);
  CHECK(r.report["status"] == "numerical_abort");
  CHECK(r.report["diagnostic"].get<std::string>().find("resolution") != std::string::npos);
}

TEST_CASE("simulation window leaves room for the fastest front") {
  ScenarioConfig c = reference_config(3.0, 50.0);
  SpeedReport p = speed_report(c.scenario);
  double extent = simulation_extent(c, p);
  CHECK(extent >= (3.0 + 1.14815 + 2.0) * 50.0 + c.pad);
  CHECK(extent >= std::abs(p.prey_left) * 50.0 + c.pad);
}

TEST_CASE("certification of both sides passes for the reference scenario") {
  Scenario sc = oracle::reference_scenario(1.0267);
  SpeedReport p = speed_report(sc);
  for (Side side : {Side::Right, Side::Left}) {
    SideCertification cert = certify_side(sc, side, side == Side::Right ? p.prey_right : p.prey_left);
    CHECK(cert.pass);
    CHECK(cert.zero_front == doctest::Approx(cert.classifier_speed).epsilon(1e-8));
  }
}

TEST_CASE("CSV writers produce the documented headers") {
  Trajectory tr;
  tr.t = {0.0, 0.5};
  tr.prey_right = {1.0, 1.5};
  tr.prey_left = {-1.0, NAN};
  tr.predator_right = tr.predator_left = {0.0, 0.0};
  std::string csv = trajectory_csv(tr);
  CHECK(csv.rfind("t,x_right_u,x_left_u,x_right_v,x_left_v\n", 0) == 0);
  CHECK(csv.find("nan") != std::string::npos);

  Scenario sc = oracle::reference_scenario(0.5);
  std::string prof = profile_csv(build_profile(sc, Side::Right), 0.0, 2.0, 4);
  std::istringstream lines(prof);
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 6);
}

TEST_CASE("CLI: assumption failure exits 2 and names the assumption") {
  fs::path dir = scratch("h1");
  std::ofstream(dir / "bad.toml") << slurp(fs::path(SHIFTSPREAD_TEST_DATA) / "compact_middle.toml")
                                  << "\nhorizon_dummy_guard = 0\n";
  // an unknown key is a config error, also exit 2
  CHECK(cli("validate --config " + (dir / "bad.toml").string(), dir) == kExitAssumption);
  CHECK(slurp(dir / "stderr.txt").find("horizon_dummy_guard") != std::string::npos);

  std::string text = slurp(fs::path(SHIFTSPREAD_TEST_DATA) / "compact_middle.toml");
  text.replace(text.find("b = 1.5"), 7, "b = 0.9");
  std::ofstream(dir / "h1.toml") << text;
  CHECK(cli("verify --config " + (dir / "h1.toml").string() + " --out " + dir.string(), dir) ==
        kExitAssumption);
  CHECK(slurp(dir / "stdout.txt").find("H1") != std::string::npos);
  CHECK(slurp(dir / "compact_middle.verify.json").find("\"failing_assumption\": \"H1\"") !=
        std::string::npos);
}

TEST_CASE("CLI: an under-resolved grid exits 3") {
  fs::path dir = scratch("coarse");
  std::ofstream(dir / "coarse.toml") << slurp(fs::path(SHIFTSPREAD_TEST_DATA) / "compact_middle.toml")
                                     << "dx = 0.5\n";
  CHECK(cli("simulate --horizon 10 --config " + (dir / "coarse.toml").string() + " --out " +
                dir.string(),
            dir) == kExitNumerical);
  CHECK(slurp(dir / "stderr.txt").find("resolution") != std::string::npos);
}

TEST_CASE("CLI: identical inputs give byte-identical reports") {
  fs::path dir = scratch("determinism");
  std::string cfg = (fs::path(SHIFTSPREAD_TEST_DATA) / "compact_middle.toml").string();
  std::string reports[2];
  for (int k = 0; k < 2; ++k) {
    fs::path out = dir / std::to_string(k);
    cli("verify --horizon 30 --config " + cfg + " --out " + out.string(), dir);
    reports[k] = slurp(out / "compact_middle.verify.json");
  }
  CHECK_FALSE(reports[0].empty());
  CHECK(reports[0] == reports[1]);
}

TEST_CASE("CLI: speeds, classify and profile emit their outputs") {
  fs::path dir = scratch("outputs");
  std::string cfg = (fs::path(SHIFTSPREAD_TEST_DATA) / "compact_middle.toml").string();
  REQUIRE(cli("speeds --config " + cfg, dir) == 0);
  auto speeds = nlohmann::json::parse(slurp(dir / "stdout.txt"));
  CHECK(speeds["prey_right"].get<double>() == doctest::Approx(1.0267).epsilon(1e-9));
  REQUIRE(cli("classify --config " + cfg + " --out " + dir.string(), dir) == 0);
  CHECK(fs::exists(dir / "compact_middle.classify.json"));
  REQUIRE(cli("profile --samples 50 --config " + cfg + " --out " + dir.string(), dir) == 0);
  CHECK(fs::exists(dir / "compact_middle.profile_right.csv"));
  CHECK(fs::exists(dir / "compact_middle.profile_left.json"));
}

TEST_CASE("CLI: the shipped scenario verifies end to end") {
  fs::path dir = scratch("verify");
  std::string cfg = (fs::path(SHIFTSPREAD_TEST_DATA) / "compact_middle.toml").string();
  CHECK(cli("verify --config " + cfg + " --out " + dir.string(), dir) == kExitPass);
  auto rep = nlohmann::json::parse(slurp(dir / "compact_middle.verify.json"));
  CHECK(rep["status"] == "pass");
  CHECK(rep["checks"].size() >= 6);
}
