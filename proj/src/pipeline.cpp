#include "shiftspread/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace shiftspread {

namespace {

constexpr double kContinuityTol = 1e-10;
constexpr double kZeroFrontTol = 1e-8;

// NaN and infinities have no JSON spelling; null keeps reports parseable.
ordered_json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

double initial_offset(const InitialData& d, double threshold, const DecayRate& rate) {
  if (rate.infinite || d.amplitude <= threshold) return d.radius;
  return d.radius + std::log(d.amplitude / threshold) / rate.value;
}

}  // namespace

ordered_json to_json(const AssumptionReport& rep) {
  ordered_json checks = ordered_json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  return {{"all_pass", rep.all_pass()},
          {"first_failure", rep.first_failure()},
          {"checks", checks},
          {"directional_speeds",
           {{"s2_minus_r", num(rep.directional[0])},
            {"s1_plus_r", num(rep.directional[1])},
            {"s2_minus_l", num(rep.directional[2])},
            {"s1_plus_l", num(rep.directional[3])}}}};
}

ordered_json to_json(const RegionLabel& label) {
  return {{"side", to_string(label.side)},
          {"species", to_string(label.species)},
          {"region", to_string(label.region)},
          {"gamma", to_string(label.gamma)}};
}

ordered_json to_json(const TerracePrediction& prediction) {
  ordered_json intervals = ordered_json::array();
  for (const auto& iv : prediction.intervals) {
    intervals.push_back({{"s_lo", num(iv.lo)},
                         {"s_hi", num(iv.hi)},
                         {"plateau", num(iv.plateau)},
                         {"plateau_name", iv.plateau_name}});
  }
  return {{"cases", prediction.cases}, {"intervals", intervals}, {"note", prediction.note}};
}

ordered_json to_json(const SpeedReport& rep) {
  ordered_json regions = ordered_json::array();
  for (const auto& r : rep.regions) regions.push_back(to_json(r));
  return {{"prey_right", num(rep.prey_right)},
          {"prey_left", num(rep.prey_left)},
          {"predator_right_upper", num(rep.predator_right_upper)},
          {"predator_left_upper", num(rep.predator_left_upper)},
          {"regions", regions},
          {"formula_branch", rep.formula_branch},
          {"predator_upper_bound_only", rep.predator_upper_bound_only},
          {"endpoint_note", rep.endpoint_note},
          {"terrace", to_json(rep.terrace)}};
}

ordered_json to_json(const PiecewiseProfile& profile) {
  ordered_json pieces = ordered_json::array();
  for (const auto& p : profile.pieces()) {
    ordered_json j;
    switch (p.kind) {
      case PieceKind::Affine:
        j["kind"] = "affine";
        j["slope"] = num(p.slope);
        j["level"] = p.level == Level::Minus ? "minus" : "plus";
        break;
      case PieceKind::LagrangianArc:
        j["kind"] = "lagrangian_arc";
        j["level"] = p.level == Level::Minus ? "minus" : "plus";
        break;
      case PieceKind::Zero:
        j["kind"] = "zero";
        break;
    }
    j["s_lo"] = std::isinf(p.lo) ? ordered_json(p.lo < 0 ? "-inf" : "inf") : ordered_json(p.lo);
    j["s_hi"] = std::isinf(p.hi) ? ordered_json(p.hi < 0 ? "-inf" : "inf") : ordered_json(p.hi);
    pieces.push_back(j);
  }
  return {{"side", to_string(profile.side())},
          {"construction", profile.construction()},
          {"zero_front", num(profile.zero_front())},
          {"pieces", pieces}};
}

ordered_json to_json(const CertificationReport& rep) {
  return {{"pass", rep.pass},
          {"worst_residual", num(rep.worst_residual)},
          {"worst_s", num(rep.worst_s)},
          {"worst_slope", num(rep.worst_slope)},
          {"grid_size", rep.grid_size},
          {"grid_points", rep.grid_points},
          {"kink_sweeps", rep.kink_sweeps},
          {"detail", rep.detail}};
}

AssumptionReport require_assumptions(const Scenario& sc) {
  AssumptionReport rep = validate(sc);
  if (!rep.all_pass()) {
    std::string name = rep.first_failure();
    std::string detail;
    for (const auto& c : rep.checks) {
      if (c.name == name) detail = c.detail;
    }
    throw AssumptionFailure(name, detail);
  }
  return rep;
}

SideCertification certify_side(const Scenario& sc, Side side, double classifier_speed) {
  SideCertification out;
  out.side = side;
  PiecewiseProfile profile = build_profile(sc, side);
  out.continuity = check_continuity(profile);
  out.boundary_ok = check_boundary(profile, side == Side::Right ? sc.lambda1_r : sc.lambda1_l);
  out.sub = certify_subsolution(profile, field_rbar(sc));
  out.super = certify_supersolution(profile, field_runder(sc));
  out.zero_front = profile.zero_front();
  out.classifier_speed = classifier_speed;
  out.pass = out.continuity.value_gap <= kContinuityTol &&
             out.continuity.tangency_gap <= kContinuityTol && out.boundary_ok && out.sub.pass &&
             out.super.pass && std::abs(out.zero_front - classifier_speed) <= kZeroFrontTol;
  return out;
}

ordered_json to_json(const SideCertification& c) {
  return {{"side", to_string(c.side)},
          {"pass", c.pass},
          {"continuity_value_gap", num(c.continuity.value_gap)},
          {"continuity_tangency_gap", num(c.continuity.tangency_gap)},
          {"boundary_ok", c.boundary_ok},
          {"subsolution_vs_rbar", to_json(c.sub)},
          {"supersolution_vs_runder", to_json(c.super)},
          {"zero_front", num(c.zero_front)},
          {"classifier_speed", num(c.classifier_speed)}};
}

double simulation_extent(const ScenarioConfig& config, const SpeedReport& prediction) {
  const Scenario& sc = config.scenario;
  double cstar = min_speed(prey_pair(sc).env_minus).c_star;
  double fastest = std::abs(sc.c_e) + cstar;
  for (double s : {prediction.prey_right, prediction.prey_left, prediction.predator_right_upper,
                   prediction.predator_left_upper}) {
    if (std::isfinite(s)) fastest = std::max(fastest, std::abs(s));
  }
  InitialData u0 = config.prey_data();
  InitialData v0 = config.predator_data();
  double pt = config.resolved_prey_threshold();
  double vt = config.resolved_predator_threshold();
  double offset = std::max({initial_offset(u0, pt, u0.right), initial_offset(u0, pt, u0.left),
                            initial_offset(v0, vt, v0.right), initial_offset(v0, vt, v0.left)});
  return (fastest + 2.0) * config.horizon + config.pad + offset;
}

SimulationOutcome simulate(const ScenarioConfig& config, const SpeedReport& prediction) {
  SimulationOutcome out;
  out.model = model_from(config.scenario, config.habitat());
  out.grid = make_grid(simulation_extent(config, prediction), config.resolved_dx());
  RunConfig rc;
  rc.horizon = config.horizon;
  rc.dt = config.dt;
  rc.sample_interval = config.sample_interval;
  rc.prey_threshold = config.resolved_prey_threshold();
  rc.predator_threshold = config.resolved_predator_threshold();
  rc.snapshot_times = config.snapshots;
  out.run = run(out.model, out.grid, config.prey_data(), config.predator_data(), rc);
  const Trajectory& tr = out.run.trajectory;
  out.prey_right = estimate_speed(tr.t, tr.prey_right);
  out.prey_left = estimate_speed(tr.t, tr.prey_left);
  out.predator_right = estimate_speed(tr.t, tr.predator_right);
  out.predator_left = estimate_speed(tr.t, tr.predator_left);
  return out;
}

ordered_json to_json(const std::optional<SpeedEstimate>& est) {
  if (!est) return nullptr;
  return {{"speed", num(est->speed)}, {"stderr", num(est->stderr_)}, {"samples", est->samples}};
}

std::string trajectory_csv(const Trajectory& tr) {
  std::string out = "t,x_right_u,x_left_u,x_right_v,x_left_v\n";
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    out += csv_number(tr.t[i]) + "," + csv_number(tr.prey_right[i]) + "," +
           csv_number(tr.prey_left[i]) + "," + csv_number(tr.predator_right[i]) + "," +
           csv_number(tr.predator_left[i]) + "\n";
  }
  return out;
}

std::string snapshot_csv(const State& state, const Grid& grid) {
  std::string out = "x,u,v\n";
  for (std::size_t i = 0; i < grid.n; ++i) {
    out += csv_number(grid.x(i)) + "," + csv_number(state.u[i]) + "," + csv_number(state.v[i]) + "\n";
  }
  return out;
}

std::string profile_csv(const PiecewiseProfile& profile, double s_lo, double s_hi, int n) {
  std::string out = "s,rho\n";
  for (int k = 0; k <= n; ++k) {
    double s = s_lo + (s_hi - s_lo) * static_cast<double>(k) / n;
    out += csv_number(s) + "," + csv_number(profile.value(s)) + "\n";
  }
  return out;
}

namespace {

CheckResult speed_check(const std::string& name, const std::optional<SpeedEstimate>& est,
                        double predicted, const ScenarioConfig& c) {
  CheckResult r{name, std::nan(""), predicted, 0.0, false, ""};
  r.tolerance = std::max(c.tolerance_speed * std::abs(predicted), c.tolerance_abs);
  if (!est) {
    r.detail = "no front in the trailing window";
    return r;
  }
  r.measured = est->speed;
  r.pass = std::abs(r.measured - predicted) <= r.tolerance;
  return r;
}

// Right bound caps the signed speed from above; the left bound caps the leftward magnitude.
CheckResult bound_check(const std::string& name, const std::optional<SpeedEstimate>& est,
                        double bound, bool right, const ScenarioConfig& c) {
  CheckResult r{name, std::nan(""), bound, c.tolerance_abs, true, ""};
  if (!est) {
    r.detail = "predator front absent; the bound holds vacuously";
    return r;
  }
  r.measured = est->speed;
  r.pass = right ? r.measured <= bound + r.tolerance : r.measured >= bound - r.tolerance;
  return r;
}

ordered_json to_json(const CheckResult& r) {
  return {{"name", r.name},
          {"measured", num(r.measured)},
          {"predicted", num(r.predicted)},
          {"tolerance", num(r.tolerance)},
          {"pass", r.pass},
          {"detail", r.detail}};
}

}  // namespace

VerifyResult verify(const ScenarioConfig& config) {
  VerifyResult res;
  ordered_json& rep = res.report;
  rep["config"] = to_json(config);
  const Scenario& sc = config.scenario;

  AssumptionReport assumptions = validate(sc);
  rep["assumptions"] = to_json(assumptions);
  if (!assumptions.all_pass()) {
    res.exit_code = kExitAssumption;
    rep["status"] = "assumption_failure";
    rep["failing_assumption"] = assumptions.first_failure();
    rep["exit_code"] = res.exit_code;
    return res;
  }

  SpeedReport prediction = speed_report(sc);
  rep["prediction"] = to_json(prediction);

  if (config.checks.certification) {
    ordered_json certs = ordered_json::array();
    for (Side side : {Side::Right, Side::Left}) {
      double speed = side == Side::Right ? prediction.prey_right : prediction.prey_left;
      SideCertification cert = certify_side(sc, side, speed);
      certs.push_back(to_json(cert));
      res.checks.push_back({"certification_" + to_string(side), cert.zero_front, speed,
                            kZeroFrontTol, cert.pass, ""});
    }
    rep["certification"] = certs;
  }

  try {
    res.simulation = simulate(config, prediction);
  } catch (const NumericalAbort& e) {
    res.exit_code = kExitNumerical;
    rep["status"] = "numerical_abort";
    rep["diagnostic"] = e.what();
    rep["exit_code"] = res.exit_code;
    return res;
  }
  const SimulationOutcome& sim = *res.simulation;
  rep["simulation"] = {{"grid", {{"x_min", sim.grid.x_min}, {"x_max", sim.grid.x_max}, {"n", sim.grid.n}}},
                       {"dx", sim.grid.dx()},
                       {"dt", sim.run.dt},
                       {"max_clamp", sim.run.max_clamp},
                       {"prey_right", to_json(sim.prey_right)},
                       {"prey_left", to_json(sim.prey_left)},
                       {"predator_right", to_json(sim.predator_right)},
                       {"predator_left", to_json(sim.predator_left)}};

  if (config.checks.speeds) {
    res.checks.push_back(speed_check("prey_right_speed", sim.prey_right, prediction.prey_right, config));
    res.checks.push_back(speed_check("prey_left_speed", sim.prey_left, prediction.prey_left, config));
  }
  if (config.checks.predator) {
    res.checks.push_back(bound_check("predator_right_bound", sim.predator_right,
                                     prediction.predator_right_upper, true, config));
    res.checks.push_back(bound_check("predator_left_bound", sim.predator_left,
                                     prediction.predator_left_upper, false, config));
  }
  if (config.checks.terrace) {
    ordered_json devs = ordered_json::array();
    for (const auto& d : terrace_check(sim.run.final_state, sim.grid, prediction.terrace)) {
      CheckResult r{"terrace_" + d.interval.plateau_name, d.sup_deviation, d.interval.plateau,
                    config.tolerance_terrace, d.skipped || d.sup_deviation <= config.tolerance_terrace,
                    d.skipped ? "empty shrunk interval, skipped" : ""};
      devs.push_back({{"s_lo", num(d.interval.lo)},
                      {"s_hi", num(d.interval.hi)},
                      {"plateau", num(d.interval.plateau)},
                      {"sup_deviation", num(d.sup_deviation)},
                      {"skipped", d.skipped}});
      res.checks.push_back(r);
    }
    rep["terrace_deviations"] = devs;
  }
  if (config.checks.hopf_cole) {
    PiecewiseProfile profile = build_profile(sc, Side::Right);
    HopfColeReport hc = hopf_cole_diagnostic(sim.run.final_state, sim.grid, profile, 0.0,
                                             profile.zero_front() + 2.0);
    rep["hopf_cole"] = {{"sup_gap", num(hc.sup_gap)}, {"worst_s", num(hc.worst_s)}, {"samples", hc.samples},
                         {"floor_limited", hc.floor_limited}};
    res.checks.push_back({"hopf_cole_gap", hc.sup_gap, 0.0, config.tolerance_hopf_cole,
                          hc.samples > 0 && hc.sup_gap <= config.tolerance_hopf_cole,
                          hc.samples > 0 ? "" : "no s with rho > 0.1 inside the window"});
  }

  ordered_json checks = ordered_json::array();
  bool all = true;
  for (const auto& c : res.checks) {
    checks.push_back(to_json(c));
    all = all && c.pass;
  }
  rep["checks"] = checks;
  res.exit_code = all ? kExitPass : kExitCheckFailed;
  rep["status"] = all ? "pass" : "check_failed";
  rep["exit_code"] = res.exit_code;
  return res;
}

}  // namespace shiftspread
