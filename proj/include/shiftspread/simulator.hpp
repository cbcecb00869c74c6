#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shiftspread/classifier.hpp"
#include "shiftspread/viscosity.hpp"

namespace shiftspread {

/// Raised when a run leaves its admissible numerical envelope.
struct NumericalAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Grid {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t n = 0;

  double dx() const { return (x_max - x_min) / static_cast<double>(n - 1); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
};

/// Grid with spacing dx covering [-extent, extent] (right end rounded up).
Grid make_grid(double extent, double dx);

enum class HabitatShape { Step, LogisticRamp };

/// alpha(z), nonincreasing from alpha_minus at -inf to alpha_plus at +inf.
/// The logistic ramp has the same central slope as a linear ramp of the given width.
struct HabitatProfile {
  HabitatShape shape = HabitatShape::LogisticRamp;
  double width = 5.0;
  double alpha_minus = 1.0;
  double alpha_plus = 1.0;

  double operator()(double z) const;
};

/// Plateau of the given amplitude on [-radius, radius]; beyond it each side
/// decays like exp(-lambda |x|) for a finite rate and is zero for the infinite one.
struct InitialData {
  double amplitude = 1.0;
  double radius = 1.0;
  DecayRate right;
  DecayRate left;

  double operator()(double x) const;
};

/// Right-hand side coefficients of the coupled system.
struct Model {
  double d1 = 1.0, d2 = 1.0;
  double r1 = 1.0, r2 = 1.0;
  double a = 1.0, b = 1.0;
  KernelSpec kernel1, kernel2;
  HabitatProfile habitat;
  double c_e = 0.0;
  /// Predator equation switched off (v stays identically zero).
  bool prey_only = false;

  double v_minus() const { return b * habitat.alpha_minus - 1.0; }
};

Model model_from(const Scenario& sc, HabitatProfile habitat);

struct State {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> v;
};

/// Unit-mass trapezoid weights of J on offsets -K..K with K = floor(h/dx).
std::vector<double> convolution_weights(const KernelSpec& kernel, double dx);

/// d (J * f - f) with edge values extended outside the grid.
std::vector<double> nonlocal_op(const std::vector<double>& field, const std::vector<double>& weights,
                                double d);

/// 0.9 / (max(d1, d2) + reaction Lipschitz bound over the invariant box).
double max_stable_dt(const Model& model);

/// Explicit four-stage Runge-Kutta integrator of the method-of-lines system.
class Stepper {
 public:
  /// Requires dx <= h/8 for both kernels; NumericalAbort otherwise.
  Stepper(Model model, Grid grid);

  /// Advances in place. Throws NumericalAbort on NaN or on leaving the invariant box.
  void step(State& state, double dt);

  const Grid& grid() const { return grid_; }
  const Model& model() const { return model_; }
  /// Largest negative value clamped to zero so far.
  double max_clamp() const { return max_clamp_; }

 private:
  void rhs(double t, const std::vector<double>& u, const std::vector<double>& v,
           std::vector<double>& du, std::vector<double>& dv);

  Model model_;
  Grid grid_;
  std::vector<double> w1_, w2_;
  std::vector<double> xs_;
  std::vector<double> ku_[4], kv_[4];
  std::vector<double> tu_, tv_;
  double max_clamp_ = 0.0;
};

/// One step from a fresh stepper; convenient for tests.
State step(const State& state, const Model& model, const Grid& grid, double dt);

enum class Direction { Right, Left };

/// Outermost crossing of the threshold in the given direction, linearly interpolated.
std::optional<double> front_position(const std::vector<double>& density, const Grid& grid,
                                     Direction direction, double threshold);

struct SpeedEstimate {
  double speed = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
};

/// Least-squares slope over the trailing window [T/2, T], T the last time.
/// NaN positions are skipped. Empty with fewer than 20 samples.
std::optional<SpeedEstimate> estimate_speed(const std::vector<double>& t,
                                            const std::vector<double>& x);

struct HopfColeReport {
  double sup_gap = 0.0;
  double worst_s = 0.0;
  std::size_t samples = 0;
  /// Samples dropped because u sits within 1e20 of the 1e-300 floor there,
  /// where -ln u / t only reflects the floor.
  std::size_t floor_limited = 0;
};

/// sup |-ln u(s t, t)/t - rho(s)| over s in [s_lo, s_hi] with rho(s) > rho_min,
/// on 401 evenly spaced s values.
HopfColeReport hopf_cole_diagnostic(const State& state, const Grid& grid,
                                    const PiecewiseProfile& profile, double s_lo, double s_hi,
                                    double rho_min = 0.1);

struct TerraceDeviation {
  TerraceInterval interval;
  double sup_deviation = 0.0;
  bool skipped = false;
};

/// Per interval of the prediction, sup |u - plateau| over the interval shrunk
/// by 5% of its length on each end, scaled by t.
std::vector<TerraceDeviation> terrace_check(const State& state, const Grid& grid,
                                            const TerracePrediction& prediction);

struct RunConfig {
  double horizon = 200.0;
  double dt = 0.0;  // 0 selects max_stable_dt
  double sample_interval = 0.5;
  double prey_threshold = 0.0;      // absolute density
  double predator_threshold = 0.0;  // absolute density
  std::vector<double> snapshot_times;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<double> prey_right, prey_left, predator_right, predator_left;
};

struct RunResult {
  State final_state;
  Trajectory trajectory;
  std::vector<State> snapshots;
  double dt = 0.0;
  double max_clamp = 0.0;
};

/// Throws NumericalAbort as soon as a front comes within 5 kernel half-widths of an edge.
RunResult run(const Model& model, const Grid& grid, const InitialData& u0, const InitialData& v0,
              const RunConfig& config);

}  // namespace shiftspread
