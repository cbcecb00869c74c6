#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "shiftspread/config.hpp"

using namespace shiftspread;

namespace {

const std::string kBase = R"(# reference pair
name = "base"
d1 = 1.0
d2 = 0.2
r1 = 1
r2 = 0.5
a = 0.4
b = 1.5
alpha_minus = 1.5
alpha_plus = 1.0
c_e = 1.0267
kernel1 = { family = "uniform", half_width = 1.0 }
kernel2 = { family = "triangle", half_width = 2.0 }
lambda1_r = 1.5   # finite tail on the right
lambda1_l = inf
)";

std::string error_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key;
  }
  return "";
}

}  // namespace

TEST_CASE("key = value configs parse with comments, inline tables and inf") {
  ScenarioConfig c = parse_config(kBase);
  CHECK(c.name == "base");
  CHECK(c.scenario.r1 == 1.0);
  CHECK(c.scenario.c_e == 1.0267);
  CHECK(c.scenario.kernel2.family == KernelFamily::Triangle);
  CHECK(c.scenario.kernel2.half_width == 2.0);
  CHECK(c.scenario.lambda1_r == DecayRate::finite(1.5));
  CHECK(c.scenario.lambda1_l.infinite);
  // omitted decay rates default to compact support
  CHECK(c.scenario.lambda2_r.infinite);
  CHECK(c.horizon == 200.0);
  CHECK(c.resolved_dx() == doctest::Approx(0.125));
  CHECK(c.resolved_prey_threshold() == doctest::Approx(0.01));
}

TEST_CASE("multi-line arrays and tables") {
  ScenarioConfig c = parse_config(kBase + "snapshots = [50,\n  100, # midway\n  200]\nchecks = {\n terrace = true,\n hopf_cole = true }\n");
  REQUIRE(c.snapshots.size() == 3);
  CHECK(c.snapshots[2] == 200.0);
  CHECK(c.checks.terrace);
  CHECK(c.checks.hopf_cole);
  CHECK(c.checks.speeds);
}

TEST_CASE("serialize, parse and JSON are mutually consistent") {
  ScenarioConfig c = parse_config(kBase + "snapshots = [10, 20]\nseed = 7\nhabitat = { shape = \"step\", width = 3 }\n");
  std::string text = serialize_config(c);
  ScenarioConfig back = parse_config(text);
  CHECK(serialize_config(back) == text);
  CHECK(to_json(back).dump() == to_json(c).dump());
  CHECK(back.habitat_shape == HabitatShape::Step);
  CHECK(back.seed == 7);

  ScenarioConfig from_j = parse_config(to_json(c).dump(2));
  CHECK(to_json(from_j).dump() == to_json(c).dump());
  CHECK(from_j.scenario.lambda1_l.infinite);
}

TEST_CASE("errors name the offending key") {
  CHECK(error_key(kBase + "colour = 3\n") == "colour");
  CHECK(error_key(kBase + "d1 = 2\n") == "d1");
  CHECK(error_key(R"(kernel1 = { family = "gaussian" })") == "kernel1.family");
  CHECK(error_key(R"(kernel1 = { family = "uniform", width = 1 })") == "kernel1.width");
  CHECK(error_key("kernel1 = { half_width = -1 }") == "kernel1.half_width");
  CHECK(error_key("lambda1_r = -2") == "lambda1_r");
  CHECK(error_key("lambda1_r = \"fast\"") == "lambda1_r");
  CHECK(error_key("habitat = { shape = \"cliff\" }") == "habitat.shape");
  CHECK(error_key("seed = 1.5") == "seed");
  CHECK(error_key("horizon = 0.1") == "horizon");
  CHECK(error_key("d1 = [1, 2") == "line 1");
  CHECK(error_key("just words") == "line 1");
  CHECK(error_key("{\"d1\": }") == "json");
  CHECK(error_key("{\"prey_initial\": {\"amplitude\": -1}}") == "prey_initial.amplitude");
  CHECK_THROWS_AS(load_config("/nonexistent/scenario.toml"), ConfigError);
}

TEST_CASE("defaults depend on the scenario") {
  ScenarioConfig c = parse_config(kBase);
  InitialData u0 = c.prey_data();
  CHECK(u0.amplitude == 1.5);
  CHECK(u0.right == DecayRate::finite(1.5));
  InitialData v0 = c.predator_data();
  CHECK(v0.amplitude == doctest::Approx(1.25));
  CHECK(c.resolved_predator_threshold() == doctest::Approx(0.005));
  // habitat width follows the widest kernel
  CHECK(c.habitat().width == doctest::Approx(10.0));
}

TEST_CASE("loading from a file uses its contents") {
  auto path = std::filesystem::temp_directory_path() / "shiftspread_config_roundtrip.toml";
  std::ofstream(path) << kBase;
  CHECK(load_config(path.string()).name == "base");
  std::filesystem::remove(path);
}
