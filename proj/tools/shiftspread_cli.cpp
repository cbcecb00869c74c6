// Command line entry point: validate / speeds / classify / profile / simulate / verify.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "shiftspread/pipeline.hpp"

namespace fs = std::filesystem;
using namespace shiftspread;

namespace {

struct Options {
  std::string config;
  std::string out;
  double tolerance_speed = 0.0;
  double horizon = 0.0;
  std::vector<double> snapshots;
  int jobs = 1;
  int samples = 400;
};

ScenarioConfig load(const Options& opt, const std::string& path) {
  ScenarioConfig c = load_config(path);
  if (opt.tolerance_speed > 0.0) c.tolerance_speed = opt.tolerance_speed;
  if (opt.horizon > 0.0) c.horizon = opt.horizon;
  if (!opt.snapshots.empty()) c.snapshots = opt.snapshots;
  if (c.name.empty()) c.name = fs::path(path).stem().string();
  return c;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

/// Writes to out/name when --out is set, else to stdout.
void emit(const Options& opt, const std::string& name, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    write_file(fs::path(opt.out) / name, text);
  }
}

int cmd_validate(const Options& opt) {
  ScenarioConfig c = load(opt, opt.config);
  AssumptionReport rep = validate(c.scenario);
  emit(opt, c.name + ".validate.json", to_json(rep).dump(2) + "\n");
  if (!rep.all_pass()) {
    std::cerr << "assumption failed: " << rep.first_failure() << "\n";
    return kExitAssumption;
  }
  return kExitPass;
}

int cmd_speeds(const Options& opt, bool classify_only) {
  ScenarioConfig c = load(opt, opt.config);
  require_assumptions(c.scenario);
  SpeedReport rep = speed_report(c.scenario);
  ordered_json j = to_json(rep);
  if (classify_only) {
    j = {{"regions", j["regions"]}, {"formula_branch", j["formula_branch"]}, {"terrace", j["terrace"]}};
  }
  emit(opt, c.name + (classify_only ? ".classify.json" : ".speeds.json"), j.dump(2) + "\n");
  return kExitPass;
}

int cmd_profile(const Options& opt) {
  ScenarioConfig c = load(opt, opt.config);
  require_assumptions(c.scenario);
  std::string text;
  for (Side side : {Side::Right, Side::Left}) {
    PiecewiseProfile p = build_profile(c.scenario, side);
    double reach = std::abs(p.zero_front()) + 2.0;
    double lo = side == Side::Right ? 0.0 : -reach;
    double hi = side == Side::Right ? reach : 0.0;
    std::string csv = profile_csv(p, lo, hi, opt.samples);
    std::string desc = to_json(p).dump(2) + "\n";
    if (opt.out.empty()) {
      // description as comment lines keeps the stream gnuplot-readable
      std::istringstream lines(desc);
      for (std::string line; std::getline(lines, line);) text += "# " + line + "\n";
      text += csv + "\n";
    } else {
      std::string tag = to_string(side);
      write_file(fs::path(opt.out) / (c.name + ".profile_" + tag + ".json"), desc);
      write_file(fs::path(opt.out) / (c.name + ".profile_" + tag + ".csv"), csv);
    }
  }
  if (opt.out.empty()) std::cout << text;
  return kExitPass;
}

int cmd_simulate(const Options& opt) {
  ScenarioConfig c = load(opt, opt.config);
  require_assumptions(c.scenario);
  SpeedReport prediction = speed_report(c.scenario);
  SimulationOutcome sim = simulate(c, prediction);
  fs::path dir = opt.out.empty() ? fs::path(".") : fs::path(opt.out);
  write_file(dir / (c.name + ".trajectory.csv"), trajectory_csv(sim.run.trajectory));
  for (const auto& snap : sim.run.snapshots) {
    std::ostringstream name;
    name << c.name << ".snapshot_t" << snap.t << ".csv";
    write_file(dir / name.str(), snapshot_csv(snap, sim.grid));
  }
  ordered_json summary = {{"config", to_json(c)},
                          {"prediction", to_json(prediction)},
                          {"dx", sim.grid.dx()},
                          {"dt", sim.run.dt},
                          {"max_clamp", sim.run.max_clamp},
                          {"prey_right", to_json(sim.prey_right)},
                          {"prey_left", to_json(sim.prey_left)},
                          {"predator_right", to_json(sim.predator_right)},
                          {"predator_left", to_json(sim.predator_left)}};
  ordered_json terrace = ordered_json::array();
  for (const auto& d : terrace_check(sim.run.final_state, sim.grid, prediction.terrace)) {
    terrace.push_back({{"s_lo", d.interval.lo},
                       {"s_hi", d.interval.hi},
                       {"plateau", d.interval.plateau},
                       {"sup_deviation", d.sup_deviation},
                       {"skipped", d.skipped}});
  }
  summary["terrace_deviations"] = terrace;
  PiecewiseProfile profile = build_profile(c.scenario, Side::Right);
  HopfColeReport hc = hopf_cole_diagnostic(sim.run.final_state, sim.grid, profile, 0.0,
                                           profile.zero_front() + 2.0);
  summary["hopf_cole"] = {{"sup_gap", hc.sup_gap}, {"worst_s", hc.worst_s}, {"samples", hc.samples},
                       {"floor_limited", hc.floor_limited}};
  write_file(dir / (c.name + ".summary.json"), summary.dump(2) + "\n");
  return kExitPass;
}

/// Returns the worst exit code: 3 over 2 over 1 over 0.
int combine(int a, int b) {
  auto rank = [](int code) { return code == kExitNumerical ? 3 : code == kExitAssumption ? 2 : code; };
  return rank(a) >= rank(b) ? a : b;
}

int cmd_verify(const Options& opt) {
  std::vector<fs::path> paths;
  if (fs::is_directory(opt.config)) {
    for (const auto& e : fs::directory_iterator(opt.config)) {
      auto ext = e.path().extension().string();
      if (e.is_regular_file() && (ext == ".toml" || ext == ".cfg" || ext == ".json")) {
        paths.push_back(e.path());
      }
    }
    std::sort(paths.begin(), paths.end());
  } else {
    paths.push_back(opt.config);
  }
  fs::path dir = opt.out.empty() ? fs::path(".") : fs::path(opt.out);
  std::vector<int> codes(paths.size(), kExitPass);
  std::atomic<std::size_t> next{0};
  std::mutex io;
  auto worker = [&]() {
    for (std::size_t i = next++; i < paths.size(); i = next++) {
      ScenarioConfig c;
      try {
        c = load(opt, paths[i].string());
      } catch (const ConfigError& e) {
        std::lock_guard<std::mutex> lock(io);
        std::cerr << paths[i].string() << ": " << e.what() << "\n";
        codes[i] = kExitAssumption;
        continue;
      }
      VerifyResult r = verify(c);
      write_file(dir / (c.name + ".verify.json"), r.report.dump(2) + "\n");
      codes[i] = r.exit_code;
      std::lock_guard<std::mutex> lock(io);
      std::cout << c.name << ": " << r.report["status"].get<std::string>() << " (exit " << r.exit_code
                << ")\n";
      if (r.report.contains("failing_assumption")) {
        std::cout << "  failing assumption: " << r.report["failing_assumption"].get<std::string>() << "\n";
      }
      if (r.report.contains("diagnostic")) {
        std::cout << "  " << r.report["diagnostic"].get<std::string>() << "\n";
      }
      for (const auto& ch : r.checks) {
        if (!ch.pass) {
          std::cout << "  FAIL " << ch.name << ": measured " << ch.measured << ", predicted "
                    << ch.predicted << ", tolerance " << ch.tolerance << "\n";
        }
      }
    }
  };
  int jobs = std::clamp(opt.jobs, 1, static_cast<int>(std::max<std::size_t>(paths.size(), 1)));
  std::vector<std::thread> pool;
  for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  int code = kExitPass;
  for (int c : codes) code = combine(code, c);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spreading speeds of a nonlocal predator-prey system in a shifting habitat"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Scenario config file (verify also takes a directory)")
        ->required();
    sub->add_option("--out", opt.out, "Output directory");
    sub->add_option("--tolerance-speed", opt.tolerance_speed, "Relative speed tolerance override");
    sub->add_option("--horizon", opt.horizon, "Simulation horizon T override");
    sub->add_option("--snapshots", opt.snapshots, "Snapshot times t1,t2,...")->delimiter(',');
    sub->add_option("--jobs", opt.jobs, "Concurrent scenarios for verify")->check(CLI::PositiveNumber);
  };
  auto* validate_cmd = app.add_subcommand("validate", "Check model assumptions");
  auto* speeds_cmd = app.add_subcommand("speeds", "Predicted spreading speeds as JSON");
  auto* classify_cmd = app.add_subcommand("classify", "Region labels and terrace layout as JSON");
  auto* profile_cmd = app.add_subcommand("profile", "Rate profiles as JSON plus (s, rho) CSV");
  auto* simulate_cmd = app.add_subcommand("simulate", "Integrate the system and track fronts");
  auto* verify_cmd = app.add_subcommand("verify", "Theory against simulation; exit 0 iff all pass");
  for (auto* sub : {validate_cmd, speeds_cmd, classify_cmd, profile_cmd, simulate_cmd, verify_cmd}) {
    add_common(sub);
  }
  profile_cmd->add_option("--samples", opt.samples, "Rows of the sampled table")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) return cmd_validate(opt);
    if (*speeds_cmd) return cmd_speeds(opt, false);
    if (*classify_cmd) return cmd_speeds(opt, true);
    if (*profile_cmd) return cmd_profile(opt);
    if (*simulate_cmd) return cmd_simulate(opt);
    if (*verify_cmd) return cmd_verify(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitAssumption;
  } catch (const AssumptionFailure& e) {
    std::cerr << "assumption failed: " << e.what() << "\n";
    return kExitAssumption;
  } catch (const UnsupportedRegime& e) {
    std::cerr << "assumption failed: " << e.what() << "\n";
    return kExitAssumption;
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
