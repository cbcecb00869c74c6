#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "shiftspread/classifier.hpp"
#include "shiftspread/config.hpp"
#include "shiftspread/simulator.hpp"
#include "shiftspread/viscosity.hpp"

namespace shiftspread {

/// Process exit codes shared by the CLI and verify.
enum ExitCode : int {
  kExitPass = 0,
  kExitCheckFailed = 1,
  kExitAssumption = 2,
  kExitNumerical = 3,
};

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const AssumptionReport& rep);
ordered_json to_json(const RegionLabel& label);
ordered_json to_json(const TerracePrediction& prediction);
ordered_json to_json(const SpeedReport& rep);
ordered_json to_json(const PiecewiseProfile& profile);
ordered_json to_json(const CertificationReport& rep);

/// Raised by the pipeline when an assumption fails; names it.
struct AssumptionFailure : std::runtime_error {
  AssumptionFailure(const std::string& name, const std::string& detail)
      : std::runtime_error(name + ": " + detail), name(name) {}
  std::string name;
};

/// Validates and returns the assumption report; throws AssumptionFailure on the first failure.
AssumptionReport require_assumptions(const Scenario& sc);

/// Certification of one prey side: continuity, boundary, both envelopes, zero front.
struct SideCertification {
  Side side = Side::Right;
  ContinuityReport continuity;
  bool boundary_ok = false;
  CertificationReport sub;
  CertificationReport super;
  double zero_front = 0.0;
  double classifier_speed = 0.0;
  bool pass = false;
};

SideCertification certify_side(const Scenario& sc, Side side, double classifier_speed);
ordered_json to_json(const SideCertification& cert);

/// Half-width of the simulation window: the fastest predicted front plus 2,
/// times the horizon, plus pad and the initial front offsets.
double simulation_extent(const ScenarioConfig& config, const SpeedReport& prediction);

struct SimulationOutcome {
  Model model;
  Grid grid;
  RunResult run;
  std::optional<SpeedEstimate> prey_right, prey_left, predator_right, predator_left;
};

/// Runs the configured simulation. Throws NumericalAbort.
SimulationOutcome simulate(const ScenarioConfig& config, const SpeedReport& prediction);

ordered_json to_json(const std::optional<SpeedEstimate>& est);

std::string trajectory_csv(const Trajectory& trajectory);
std::string snapshot_csv(const State& state, const Grid& grid);
/// Sampled (s, rho) table over [s_lo, s_hi] with n + 1 rows.
std::string profile_csv(const PiecewiseProfile& profile, double s_lo, double s_hi, int n);

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double predicted = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyResult {
  int exit_code = kExitPass;
  ordered_json report;
  std::vector<CheckResult> checks;
  std::optional<SimulationOutcome> simulation;
};

/// classifier, then certification, then simulation, then comparison.
/// Never throws for assumption or numerical failures; they set the exit code.
VerifyResult verify(const ScenarioConfig& config);

}  // namespace shiftspread
