#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "shiftspread/classifier.hpp"
#include "shiftspread/simulator.hpp"

namespace shiftspread {

/// Parse or validation error; the message starts with the offending key.
struct ConfigError : std::invalid_argument {
  ConfigError(const std::string& key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key(key) {}
  std::string key;
};

struct InitialShape {
  double amplitude = 0.0;  // 0 selects the species' plateau behind the shift
  double radius = 10.0;
};

/// Which comparisons `verify` turns into pass/fail checks.
struct CheckSelection {
  bool speeds = true;
  bool predator = true;
  bool terrace = false;
  bool hopf_cole = false;
  bool certification = true;
};

/// Scenario plus simulation controls. Zero-valued numeric controls select defaults.
struct ScenarioConfig {
  std::string name;
  Scenario scenario;
  HabitatShape habitat_shape = HabitatShape::LogisticRamp;
  double habitat_width = 0.0;  // 0: 5 x max kernel half-width
  InitialShape prey_initial;
  InitialShape predator_initial;
  double horizon = 200.0;
  double dx = 0.0;  // 0: min half-width / 8
  double dt = 0.0;  // 0: stability bound
  double pad = 20.0;
  double sample_interval = 0.5;
  double prey_threshold = 0.0;      // 0: 0.01 alpha_+
  double predator_threshold = 0.0;  // 0: 0.01 V_+ (or 0.01 V_- when V_+ <= 0)
  std::vector<double> snapshots;
  double tolerance_speed = 0.05;
  double tolerance_abs = 0.03;
  double tolerance_terrace = 0.05;
  double tolerance_hopf_cole = 0.1;
  CheckSelection checks;
  std::uint64_t seed = 0;

  HabitatProfile habitat() const;
  InitialData prey_data() const;
  InitialData predator_data() const;
  double resolved_dx() const;
  double resolved_prey_threshold() const;
  double resolved_predator_threshold() const;
};

/// Accepts the key = value format or a JSON object (first non-blank character '{').
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

nlohmann::ordered_json to_json(const ScenarioConfig& config);
ScenarioConfig from_json(const nlohmann::json& j);
/// Key = value text that parse_config maps back to the same config.
std::string serialize_config(const ScenarioConfig& config);

/// Parses the key = value subset into a JSON object.
/// Values: numbers, inf, true/false, "strings", [arrays], { inline tables }.
nlohmann::json parse_key_values(const std::string& text);

}  // namespace shiftspread
