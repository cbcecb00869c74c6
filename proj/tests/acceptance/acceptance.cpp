// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Every tolerance used for a verdict is a named constant below.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "shiftspread/pipeline.hpp"

using namespace shiftspread;

namespace {

// C1
constexpr int kLegendreQ = 1000;
constexpr int kLegendreGrid = 100000;
constexpr double kLegendreTol = 1e-6;
constexpr double kZeroAtCStar = 1e-8;
constexpr double kSignSlack = 1e-8;
// C2
constexpr int kRootDraws = 50;
constexpr double kResidualTol = 1e-10;
constexpr double kOracleTol = 1e-8;
// C3
constexpr int kPartitionGrid = 200;
constexpr int kRequiredPaths = 40;
constexpr double kJumpTol = 1e-6;
// C4
constexpr double kContinuityTol = 1e-10;
constexpr double kZeroFrontTol = 1e-8;
constexpr std::size_t kCertGridPoints = 10000;
// C5-C10
constexpr double kHorizon = 200.0;
constexpr double kSpeedRel = 0.05;
constexpr double kSpeedAbs = 0.03;
constexpr double kWitnessWidths = 3.0;
constexpr double kTerraceTol = 0.05;
constexpr double kPredatorSlack = 0.03;
constexpr double kHopfColeTol = 0.1;
constexpr double kRefinementRel = 0.01;

struct Verdict {
  bool pass = true;
  std::string summary;
  void require(bool ok) { pass = pass && ok; }
};

void report(int id, const Verdict& v, double seconds) {
  std::printf("criterion %2d: %s  (%.1f s)  %s\n", id, v.pass ? "PASS" : "FAIL", seconds,
              v.summary.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double rel_scale(std::initializer_list<double> terms) {
  double s = 1.0;
  for (double t : terms) s = std::max(s, std::abs(t));
  return s;
}

bool close(double x, double ref, double rel) { return std::abs(x - ref) <= rel * rel_scale({ref}); }

// ---------------------------------------------------------------------------- C1

Verdict legendre() {
  Verdict v;
  const HamiltonianEnv envs[] = {
      {1.0, 1.0, 1.5, {KernelFamily::Uniform, 1.0}},
      {0.2, 0.5, 1.25, {KernelFamily::Triangle, 1.0}},
      {2.0, 0.3, 0.6, {KernelFamily::RaisedCosine, 0.7}},
      {0.5, 1.8, 2.2, {KernelFamily::Uniform, 2.0}},
  };
  double worst = 0.0, worst_zero = 0.0;
  int sign_violations = 0;
  for (const auto& e : envs) {
    double cs = min_speed(e).c_star;
    double p_max = 1.25 * lagrangian_slope(e, 3.0 * cs);
    std::vector<double> ps(kLegendreGrid), hs(kLegendreGrid);
    for (int i = 0; i < kLegendreGrid; ++i) {
      ps[i] = -p_max + 2.0 * p_max * i / (kLegendreGrid - 1);
      hs[i] = H(e, ps[i]);
    }
    double step = ps[1] - ps[0];
    for (int k = 0; k < kLegendreQ; ++k) {
      double q = -3.0 * cs + 6.0 * cs * k / (kLegendreQ - 1);
      int best = 0;
      for (int i = 1; i < kLegendreGrid; ++i) {
        if (ps[i] * q - hs[i] > ps[best] * q - hs[best]) best = i;
      }
      // golden section inside the bracketing cells removes the grid bias
      double a = ps[best] - step, b = ps[best] + step;
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      for (int it = 0; it < 80; ++it) {
        double x1 = b - g * (b - a), x2 = a + g * (b - a);
        if (x1 * q - H(e, x1) > x2 * q - H(e, x2)) b = x2; else a = x1;
      }
      double pm = 0.5 * (a + b);
      double brute = std::max(ps[best] * q - hs[best], pm * q - H(e, pm));
      double L = lagrangian(e, q);
      worst = std::max(worst, std::abs(L - brute));
      if (std::abs(q) < cs - kSignSlack && !(L < 0.0)) ++sign_violations;
      if (std::abs(q) > cs + kSignSlack && !(L > 0.0)) ++sign_violations;
    }
    worst_zero = std::max({worst_zero, std::abs(lagrangian(e, cs)), std::abs(lagrangian(e, -cs))});
  }
  v.require(worst <= kLegendreTol);
  v.require(worst_zero <= kZeroAtCStar);
  v.require(sign_violations == 0);
  v.summary = fmt("max |L - brute| = %.2e, max |L(+-c*)| = %.2e, sign-law violations = %.0f", worst,
                  worst_zero, sign_violations);
  return v;
}

// ---------------------------------------------------------------------------- C2

struct RootTally {
  double residual = 0.0;  // worst relative residual
  double oracle = 0.0;    // worst relative oracle gap
  double identity = 0.0;
  int missing = 0;

  void res(double r, std::initializer_list<double> terms) {
    residual = std::max(residual, std::abs(r) / rel_scale(terms));
  }
  void orc(double x, std::optional<double> ref) {
    if (!ref) {
      ++missing;
      return;
    }
    oracle = std::max(oracle, std::abs(x - *ref) / rel_scale({*ref}));
  }
  void id(double x, double ref) { identity = std::max(identity, std::abs(x - ref) / rel_scale({ref})); }
};

void root_pair(const PairRoots& R, std::mt19937_64& rng, RootTally& t) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double cm = R.min_minus().c_star, mum = R.min_minus().mu_star;
  const double mup = R.min_plus().mu_star;

  double mu0 = R.mu0();
  auto f0 = [&](double mu) { return R.H_plus(mu) - cm * mu; };
  t.res(f0(mu0), {R.H_plus(mu0)});
  t.orc(mu0, oracle::scan_bisect(f0, 1e-9, mup));
  t.id(R.k_curve(mu0), cm);

  double cbar = R.c_bar();
  auto phi = [&](double c) { return c * mup - R.H_plus(mup) - R.L_minus(c); };
  t.res(phi(cbar), {cbar * mup});
  t.orc(cbar, oracle::scan_bisect(phi, cm, cm + 30.0, 30000));
  t.id(R.g_curve(R.slope_at_c_bar()), cbar);
  t.id(R.p_bar(cbar), mup);

  double c = cm + (cbar - cm + 1.0) * U(rng);
  double pl = R.L_slope(c);
  auto fb = [&](double p) { return c * p - R.H_plus(p) - R.L_minus(c); };
  double pb = R.p_bar(c);
  t.res(fb(pb), {c * pb, R.L_minus(c)});
  t.orc(pb, oracle::scan_bisect(fb, 0.0, pl));
  HatRoots hr = R.check_hat_p(c);
  t.res(fb(hr.p_check), {c * hr.p_check});
  t.orc(hr.p_check, oracle::scan_bisect(fb, 0.0, pl));
  t.res(fb(hr.p_hat), {c * hr.p_hat});
  t.orc(hr.p_hat, oracle::scan_bisect(fb, pl, pl + 60.0, 60000));

  double lambda = mum * (0.2 + 0.75 * U(rng));
  double cs = std::max(R.c_plus(lambda), R.k_curve(lambda)) + 0.05 + 2.0 * U(rng);
  auto ps = R.p_star(cs, lambda);
  if (!ps) {
    ++t.missing;
  } else {
    double target = cs * lambda - R.H_plus(lambda);
    auto g = [&](double p) { return cs * p - R.H_minus(p) - target; };
    t.res(g(*ps), {cs * *ps, target});
    t.orc(*ps, oracle::scan_bisect(g, lambda, R.L_slope(cs)));
  }

  double lu = mum * (0.2 + 1.3 * U(rng));
  double cu = (lu <= mum ? R.c_minus(lu) : R.dH(lu)) + 0.02 + 2.0 * U(rng);
  double pu = R.p_under(cu, lu);
  double target = cu * lu - R.H_minus(lu);
  auto fu = [&](double p) { return cu * p - R.H_plus(p) - target; };
  t.res(fu(pu), {cu * pu, target});
  t.orc(pu, oracle::scan_bisect(fu, 0.0, std::min(lu, R.L_slope(cu))));
}

Verdict root_suite() {
  Verdict v;
  std::mt19937_64 rng(20240607);
  RootTally t;
  int rejected = 0;
  for (int k = 0; k < kRootDraws; ++k) {
    try {
      PairRoots R(oracle::random_pair(rng));
      root_pair(R, rng, t);
    } catch (const std::exception&) {
      ++rejected;
    }
  }
  for (const SpeciesPair& pair : {oracle::reference_prey(), oracle::reference_predator()}) {
    root_pair(PairRoots(pair), rng, t);
  }
  v.require(t.residual <= kResidualTol);
  v.require(t.oracle <= kOracleTol);
  v.require(t.identity <= kOracleTol);
  v.require(t.missing == 0 && rejected == 0);
  v.summary = fmt("residual %.1e, oracle gap %.1e, identities %.1e, failed draws %.0f", t.residual,
                  t.oracle, t.identity, t.missing + rejected);
  return v;
}

// ---------------------------------------------------------------------------- C3

SideSpeed side_speed(const PairRoots& R, Side side, DecayRate lambda, double c_e) {
  return side == Side::Right ? right_speed(R, lambda, c_e) : left_speed(R, lambda, c_e);
}

Region effective(const SideSpeed& s) {
  return s.label.region == Region::OnBoundaryBand ? assigned_region(s.label.gamma) : s.label.region;
}

Verdict partition() {
  Verdict v;
  int multi = 0, band = 0, points = 0;
  int paths = 0;
  double worst_jump = 0.0;
  for (const SpeciesPair& pair : {oracle::reference_prey(), oracle::reference_predator()}) {
    PairRoots R(pair);
    double mum = R.min_minus().mu_star, cm = R.min_minus().c_star;
    auto count = [](std::array<bool, 4> m) { return m[0] + m[1] + m[2] + m[3]; };
    for (int i = 0; i < kPartitionGrid; ++i) {
      DecayRate lambda = DecayRate::finite(3.0 * mum * (i + 1) / kPartitionGrid);
      for (int j = 0; j < kPartitionGrid; ++j) {
        double c_e = -4.0 * cm + 8.0 * cm * j / (kPartitionGrid - 1);
        for (Side side : {Side::Right, Side::Left}) {
          RegionLabel l = side == Side::Right ? classify_right(R, lambda, c_e) : classify_left(R, lambda, c_e);
          ++points;
          if (l.region == Region::OnBoundaryBand) {
            ++band;
            continue;
          }
          auto m = side == Side::Right ? right_membership(R, lambda, c_e) : left_membership(R, lambda, c_e);
          if (count(m) != 1) ++multi;
        }
      }
    }
    // paths: sweeps in c_e at fixed lambda; each label change is one crossing
    for (int i = 0; i <= 12; ++i) {
      DecayRate lambda = i == 0 ? DecayRate::infinity() : DecayRate::finite(mum * 0.2 * i);
      for (Side side : {Side::Right, Side::Left}) {
        double lo = side == Side::Right ? -1.0 : -4.0 * cm;
        double hi = side == Side::Right ? 4.0 * cm : 1.0;
        const int n = 400;
        Region prev = effective(side_speed(R, side, lambda, lo));
        double prev_c = lo;
        for (int k = 1; k <= n; ++k) {
          double c = lo + (hi - lo) * k / n;
          Region cur = effective(side_speed(R, side, lambda, c));
          if (cur != prev) {
            double a = prev_c, b = c;
            while (b - a > 1e-10) {
              double mid = 0.5 * (a + b);
              (effective(side_speed(R, side, lambda, mid)) == prev ? a : b) = mid;
            }
            worst_jump = std::max(worst_jump, std::abs(side_speed(R, side, lambda, a).value -
                                                       side_speed(R, side, lambda, b).value));
            ++paths;
          }
          prev = cur;
          prev_c = c;
        }
      }
    }
  }
  v.require(multi == 0);
  v.require(paths >= kRequiredPaths);
  v.require(worst_jump <= kJumpTol);
  v.summary = fmt("%.0f grid points, %.0f in band, %.0f with != 1 region; %.0f crossings", points, band,
                  multi, paths) +
              fmt(", max speed jump %.1e", worst_jump);
  return v;
}

// ---------------------------------------------------------------------------- C4

struct CertCase {
  const char* name;
  Side side;
  double c_e;
  DecayRate lambda;
  Region region;
};

Verdict certification() {
  Verdict v;
  const CertCase cases[] = {
      {"right Va", Side::Right, 0.5, DecayRate::finite(1.5), Region::Va},
      {"right Vb", Side::Right, 1.05, DecayRate::finite(1.5), Region::Vb},
      {"right Vc", Side::Right, 1.4, DecayRate::finite(3.0), Region::Vc},
      {"right Vd", Side::Right, 3.0, DecayRate::finite(0.7), Region::Vd},
      {"left Va", Side::Left, 0.5, DecayRate::finite(1.5), Region::Va},
      {"left Vb", Side::Left, -1.25, DecayRate::finite(3.0), Region::Vb},
      {"left Vc", Side::Left, -1.5, DecayRate::finite(1.5), Region::Vc},
      {"left Vd", Side::Left, -2.5, DecayRate::finite(3.0), Region::Vd},
      {"right compact slow", Side::Right, 0.7, DecayRate::infinity(), Region::Va},
      {"right compact middle", Side::Right, 1.0, DecayRate::infinity(), Region::Vb},
      {"right compact fast", Side::Right, 1.45, DecayRate::infinity(), Region::Vc},
      {"left compact", Side::Left, -1.5, DecayRate::infinity(), Region::Vb},
      {"left compact far", Side::Left, -2.5, DecayRate::infinity(), Region::Vd},
  };
  int passed = 0, total = 0;
  std::string failures;
  double worst_front = 0.0, worst_gap = 0.0;
  for (const auto& c : cases) {
    Scenario sc = oracle::reference_scenario(c.c_e);
    (c.side == Side::Right ? sc.lambda1_r : sc.lambda1_l) = c.lambda;
    ScenarioRoots roots = solve_pairs(sc);
    SideSpeed speed = c.side == Side::Right ? prey_right_speed(sc, roots) : prey_left_speed(sc, roots);
    SideCertification cert = certify_side(sc, c.side, speed.value);
    bool ok = speed.label.region == c.region && cert.pass &&
              cert.continuity.value_gap <= kContinuityTol &&
              cert.continuity.tangency_gap <= kContinuityTol && cert.boundary_ok && cert.sub.pass &&
              cert.super.pass && cert.sub.grid_size >= kCertGridPoints &&
              cert.super.grid_size >= kCertGridPoints && cert.super.kink_sweeps > 0 &&
              std::abs(cert.zero_front - speed.value) <= kZeroFrontTol;
    worst_front = std::max(worst_front, std::abs(cert.zero_front - speed.value));
    worst_gap = std::max({worst_gap, cert.continuity.value_gap, cert.continuity.tangency_gap});
    ++total;
    if (ok) ++passed; else failures += std::string(" ") + c.name;
    v.require(ok);
  }
  v.summary = fmt("%.0f/%.0f profiles certified, max |zero_front - speed| = %.1e, max continuity gap = %.1e",
                  passed, total, worst_front, worst_gap) +
              (failures.empty() ? "" : "; failed:" + failures);
  return v;
}

// ---------------------------------------------------------------------------- simulations

struct Sim {
  std::string name;
  ScenarioConfig config;
  SpeedReport prediction;
  std::optional<SimulationOutcome> outcome;
  std::string error;
};

ScenarioConfig sim_config(const std::string& name, double c_e, DecayRate l1r, DecayRate l1l) {
  ScenarioConfig c;
  c.name = name;
  c.scenario = oracle::reference_scenario(c_e);
  c.scenario.lambda1_r = l1r;
  c.scenario.lambda1_l = l1l;
  c.horizon = kHorizon;
  c.snapshots = {50.0, 100.0};
  return c;
}

Sim run_sim(ScenarioConfig config) {
  Sim s;
  s.name = config.name;
  s.config = config;
  s.prediction = speed_report(config.scenario);
  try {
    s.outcome = simulate(config, s.prediction);
  } catch (const std::exception& e) {
    s.error = e.what();
  }
  return s;
}

double speed_tol(double predicted) { return std::max(kSpeedRel * std::abs(predicted), kSpeedAbs); }

/// Checks one prey speed; appends "name m/p" to the summary.
bool speed_ok(const Sim& s, Side side, std::string& summary) {
  if (!s.outcome) {
    summary += " " + s.name + " aborted(" + s.error + ")";
    return false;
  }
  const auto& est = side == Side::Right ? s.outcome->prey_right : s.outcome->prey_left;
  double p = side == Side::Right ? s.prediction.prey_right : s.prediction.prey_left;
  if (!est) {
    summary += " " + s.name + " no-front";
    return false;
  }
  bool ok = std::abs(est->speed - p) <= speed_tol(p);
  summary += " " + s.name + fmt(" %.4f/%.4f", est->speed, p) + (ok ? "" : "!");
  return ok;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  bool all = true;
  auto timed = [&](int id, auto&& fn) {
    auto t0 = clock::now();
    Verdict v = fn();
    report(id, v, std::chrono::duration<double>(clock::now() - t0).count());
    all = all && v.pass;
  };

  timed(1, legendre);
  timed(2, root_suite);
  timed(3, partition);
  timed(4, certification);

  const double c_plus = min_speed(oracle::reference_prey().env_plus).c_star;
  const double c_minus = min_speed(oracle::reference_prey().env_minus).c_star;
  const DecayRate inf = DecayRate::infinity();
  const auto fin = [](double l) { return DecayRate::finite(l); };

  std::map<std::string, Sim> sims;
  auto t_sims = clock::now();
  for (ScenarioConfig c : {
           sim_config("compact_slow", c_plus - 0.2, inf, inf),
           sim_config("compact_mid", 0.5 * (c_plus + c_minus), inf, inf),
           sim_config("compact_fast", c_minus + 0.3, inf, inf),
           sim_config("right_va", 0.5, fin(1.5), inf),
           sim_config("right_vb", 1.05, fin(1.5), inf),
           sim_config("right_vc", 1.4, fin(3.0), inf),
           sim_config("right_vd", 3.0, fin(0.7), inf),
           sim_config("left_va", 0.5, inf, fin(1.5)),
           sim_config("left_vb", -1.25, inf, fin(3.0)),
           sim_config("left_vc", -1.5, inf, fin(1.5)),
           sim_config("left_vd", -2.5, inf, fin(3.0)),
           sim_config("terrace_b", 1.2, fin(0.5), inf),
           sim_config("terrace_c", -1.2, fin(0.5), fin(0.8)),
       }) {
    sims.emplace(c.name, run_sim(c));
  }
  double sim_seconds = std::chrono::duration<double>(clock::now() - t_sims).count();
  std::printf("# %zu simulations at T = %.0f took %.1f s\n", sims.size(), kHorizon, sim_seconds);

  // C5: compact data, prey right speeds c*_+ / c_e / c*_-
  timed(5, [&] {
    Verdict v;
    v.summary = "measured/predicted:";
    double expected[] = {c_plus, 0.5 * (c_plus + c_minus), c_minus};
    int k = 0;
    for (const char* n : {"compact_slow", "compact_mid", "compact_fast"}) {
      const Sim& s = sims.at(n);
      v.require(close(s.prediction.prey_right, expected[k++], 1e-9));
      v.require(speed_ok(s, Side::Right, v.summary));
    }
    return v;
  });

  // C6: exponential data, one scenario per region and side, plus the nonlocal witness
  timed(6, [&] {
    Verdict v;
    v.summary = "measured/predicted:";
    const std::pair<const char*, Region> right[] = {
        {"right_va", Region::Va}, {"right_vb", Region::Vb}, {"right_vc", Region::Vc}, {"right_vd", Region::Vd}};
    const std::pair<const char*, Region> left[] = {
        {"left_va", Region::Va}, {"left_vb", Region::Vb}, {"left_vc", Region::Vc}, {"left_vd", Region::Vd}};
    for (const auto& [n, region] : right) {
      const Sim& s = sims.at(n);
      v.require(s.prediction.regions[0].region == region);
      v.require(speed_ok(s, Side::Right, v.summary));
    }
    for (const auto& [n, region] : left) {
      const Sim& s = sims.at(n);
      v.require(s.prediction.regions[1].region == region);
      v.require(speed_ok(s, Side::Left, v.summary));
    }
    const Sim& w = sims.at("right_vd");
    PairRoots R(prey_pair(w.config.scenario));
    auto ps = R.p_star(w.config.scenario.c_e, w.config.scenario.lambda1_r.value);
    v.require(ps.has_value());
    if (ps && w.outcome && w.outcome->prey_right) {
      double witness = R.c_minus(*ps);
      double m = w.outcome->prey_right->speed;
      double tol = speed_tol(witness);
      double s1r = directional_speed(R.plus(), w.config.scenario.lambda1_r);
      double gap = std::min({std::abs(m - s1r), std::abs(m - w.config.scenario.c_e), std::abs(m - c_minus)});
      v.require(std::abs(m - witness) <= tol);
      v.require(gap >= kWitnessWidths * tol);
      v.summary += fmt("; witness c_-(p*) = %.4f, nearest competitor %.2f tolerance widths away", witness,
                       gap / tol);
    }
    return v;
  });

  // C7: terrace plateaus, one scenario per case
  timed(7, [&] {
    Verdict v;
    const std::pair<const char*, char> cases[] = {
        {"compact_fast", 'a'}, {"terrace_b", 'b'}, {"terrace_c", 'c'}, {"left_vd", 'd'}};
    for (const auto& [n, letter] : cases) {
      const Sim& s = sims.at(n);
      v.require(s.prediction.terrace.cases.find(letter) != std::string::npos);
      if (!s.outcome) {
        v.require(false);
        v.summary += std::string(" ") + n + " aborted";
        continue;
      }
      double worst = 0.0;
      int used = 0;
      for (const auto& d : terrace_check(s.outcome->run.final_state, s.outcome->grid, s.prediction.terrace)) {
        if (d.skipped) continue;
        ++used;
        worst = std::max(worst, d.sup_deviation);
      }
      v.require(used > 0 && worst <= kTerraceTol);
      v.summary += std::string(" (") + letter + ") " + n + fmt(" sup dev %.4f over %.0f intervals;", worst, used);
    }
    return v;
  });

  // C8: predator fronts stay behind their upper bounds
  timed(8, [&] {
    Verdict v;
    double worst = -INFINITY;
    int checked = 0;
    for (const char* n : {"compact_slow", "compact_mid", "compact_fast", "right_va", "right_vb", "right_vc",
                          "right_vd", "left_va", "left_vb", "left_vc", "left_vd"}) {
      const Sim& s = sims.at(n);
      if (!s.outcome) {
        v.require(false);
        continue;
      }
      // excess over the bound in the direction of travel
      if (s.outcome->predator_right) {
        worst = std::max(worst, s.outcome->predator_right->speed - s.prediction.predator_right_upper);
        ++checked;
      }
      if (s.outcome->predator_left) {
        worst = std::max(worst, s.prediction.predator_left_upper - s.outcome->predator_left->speed);
        ++checked;
      }
    }
    v.require(checked > 0 && worst <= kPredatorSlack);
    v.summary = fmt("%.0f predator fronts, largest excess over bound %.4f (allowed %.2f)", checked, worst,
                    kPredatorSlack);
    return v;
  });

  // C9: -ln u / t against the rate profile at T = 50, 100, 200
  timed(9, [&] {
    Verdict v;
    for (const char* n : {"right_va", "right_vd"}) {
      const Sim& s = sims.at(n);
      if (!s.outcome || s.outcome->run.snapshots.size() != 2) {
        v.require(false);
        continue;
      }
      PiecewiseProfile profile = build_profile(s.config.scenario, Side::Right);
      double hi = profile.zero_front() + 2.0;
      std::vector<double> gaps;
      for (const State* st : {&s.outcome->run.snapshots[0], &s.outcome->run.snapshots[1],
                              &s.outcome->run.final_state}) {
        HopfColeReport hc = hopf_cole_diagnostic(*st, s.outcome->grid, profile, 0.0, hi);
        v.require(hc.samples > 0);
        gaps.push_back(hc.sup_gap);
      }
      v.require(gaps[2] <= kHopfColeTol && gaps[1] < gaps[0] && gaps[2] < gaps[1]);
      v.summary += std::string(" ") + n + fmt(" gaps %.3f > %.3f > %.3f;", gaps[0], gaps[1], gaps[2]);
    }
    return v;
  });

  // C10: halving dx and dt
  timed(10, [&] {
    Verdict v;
    const Sim& base = sims.at("compact_mid");
    if (!base.outcome || !base.outcome->prey_right) {
      v.require(false);
      v.summary = "base run unavailable";
      return v;
    }
    ScenarioConfig fine = base.config;
    fine.dx = 0.5 * base.outcome->grid.dx();
    fine.dt = 0.5 * base.outcome->run.dt;
    fine.snapshots.clear();
    Sim f = run_sim(fine);
    if (!f.outcome || !f.outcome->prey_right) {
      v.require(false);
      v.summary = "refined run failed: " + f.error;
      return v;
    }
    double a = base.outcome->prey_right->speed, b = f.outcome->prey_right->speed;
    double change = std::abs(b - a) / std::abs(a);
    v.require(change < kRefinementRel);
    v.summary = fmt("speed %.6f -> %.6f at dx = %.4f, relative change %.1e", a, b, fine.dx, change);
    return v;
  });

  std::printf("acceptance: %s\n", all ? "ALL PASS" : "FAILURES PRESENT");
  return all ? 0 : 1;
}
