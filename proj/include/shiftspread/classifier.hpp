#pragma once

#include <array>
#include <string>
#include <vector>

#include "shiftspread/roots.hpp"

namespace shiftspread {

enum class Side { Right, Left };
enum class Species { Prey, Predator };
enum class Region { Va, Vb, Vc, Vd, OnBoundaryBand };
/// Boundary curves. A-D bound the right regions, O-S the left ones.
enum class Gamma { None, A, B, C, D, O, P, Q, R, S };

std::string to_string(Side side);
std::string to_string(Species species);
std::string to_string(Region region);
std::string to_string(Gamma gamma);

/// Model parameters and decay rates of the initial data.
struct Scenario {
  double d1 = 1.0, d2 = 1.0;
  double r1 = 1.0, r2 = 1.0;
  double a = 1.0, b = 1.0;
  double alpha_minus = 1.0, alpha_plus = 1.0;
  KernelSpec kernel1, kernel2;
  double c_e = 0.0;
  DecayRate lambda1_r, lambda1_l, lambda2_r, lambda2_l;

  double v_minus() const { return b * alpha_minus - 1.0; }
  double v_plus() const { return b * alpha_plus - 1.0; }
};

SpeciesPair prey_pair(const Scenario& sc);
/// Throws UnsupportedRegime when b alpha_+ <= 1.
SpeciesPair predator_pair(const Scenario& sc);

struct AssumptionCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  /// s_{2,-}^r, s_{1,+}^r, s_{2,-}^l, s_{1,+}^l when computable.
  std::array<double, 4> directional{};
  bool all_pass() const;
  /// Name of the first failing assumption, empty if none.
  std::string first_failure() const;
};

/// Checks (J), (A), (H1), (H2) and the ordering s_{2,-} < s_{1,+} on both sides.
AssumptionReport validate(const Scenario& sc);

struct RegionLabel {
  Side side = Side::Right;
  Species species = Species::Prey;
  Region region = Region::Va;
  Gamma gamma = Gamma::None;
};

/// Raw membership of (lambda, c_e) in Va..Vd from the defining inequalities,
/// without the boundary band. Used by classify and by the partition tests.
std::array<bool, 4> right_membership(const PairRoots& roots, DecayRate lambda, double c_e);
std::array<bool, 4> left_membership(const PairRoots& roots, DecayRate lambda, double c_e);

/// Nearest boundary curve within the band, or Gamma::None.
Gamma right_boundary(const PairRoots& roots, DecayRate lambda, double c_e);
Gamma left_boundary(const PairRoots& roots, DecayRate lambda, double c_e);

RegionLabel classify_right(const PairRoots& roots, DecayRate lambda, double c_e,
                           Species species = Species::Prey);
RegionLabel classify_left(const PairRoots& roots, DecayRate lambda, double c_e,
                          Species species = Species::Prey);

/// Region whose formula applies on a boundary curve.
Region assigned_region(Gamma gamma);

struct SideSpeed {
  double value = 0.0;
  RegionLabel label;
  std::string branch;
};

/// Spreading speed of the pair on each side. Left speeds are signed (negative
/// means the front moves left).
SideSpeed right_speed(const PairRoots& roots, DecayRate lambda, double c_e,
                      Species species = Species::Prey);
SideSpeed left_speed(const PairRoots& roots, DecayRate lambda, double c_e,
                     Species species = Species::Prey);

struct TerraceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double plateau = 0.0;
  std::string plateau_name;
};

struct TerracePrediction {
  /// Case letters a-d; two letters when c_e sits on a case boundary.
  std::string cases;
  std::vector<TerraceInterval> intervals;
  std::string note;
};

struct SpeedReport {
  double prey_right = 0.0;
  double prey_left = 0.0;
  double predator_right_upper = 0.0;
  double predator_left_upper = 0.0;
  /// prey right, prey left, predator right, predator left
  std::vector<RegionLabel> regions;
  std::vector<std::string> formula_branch;
  bool predator_upper_bound_only = true;
  std::string endpoint_note;
  TerracePrediction terrace;
};

struct ScenarioRoots {
  PairRoots prey;
  PairRoots predator;
};

/// Solves both pairs once.
ScenarioRoots solve_pairs(const Scenario& sc);

SideSpeed prey_right_speed(const Scenario& sc, const ScenarioRoots& roots);
SideSpeed prey_left_speed(const Scenario& sc, const ScenarioRoots& roots);

/// Upper bounds for the predator; same dispatch on the predator pair.
std::pair<SideSpeed, SideSpeed> predator_upper_bounds(const Scenario& sc, const ScenarioRoots& roots);

TerracePrediction terrace_prediction(const Scenario& sc, const ScenarioRoots& roots);

/// Full report. Throws UnsupportedRegime if (A) or (H1) fail.
SpeedReport speed_report(const Scenario& sc);

}  // namespace shiftspread
