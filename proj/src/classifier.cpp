#include "shiftspread/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace shiftspread {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

struct Candidate {
  Gamma gamma;
  double distance;
};

Gamma nearest(const std::vector<Candidate>& cands) {
  Gamma best = Gamma::None;
  double best_d = kBoundaryBand;
  for (const auto& c : cands) {
    if (c.distance < best_d) {
      best_d = c.distance;
      best = c.gamma;
    }
  }
  return best;
}

RegionLabel resolve(const std::array<bool, 4>& member, Gamma gamma, Side side, Species species,
                    double lambda_value, double c_e) {
  RegionLabel label{side, species, Region::Va, gamma};
  if (gamma != Gamma::None) {
    label.region = Region::OnBoundaryBand;
    return label;
  }
  int count = 0;
  for (int i = 0; i < 4; ++i) {
    if (member[i]) {
      ++count;
      label.region = static_cast<Region>(i);
    }
  }
  if (count != 1) {
    throw std::logic_error("region partition violated at lambda=" + fmt(lambda_value) +
                           " c_e=" + fmt(c_e) + " side=" + to_string(side) +
                           " hits=" + std::to_string(count));
  }
  return label;
}

std::string species_index(Species species) { return species == Species::Prey ? "1" : "2"; }

}  // namespace

std::string to_string(Side side) { return side == Side::Right ? "right" : "left"; }
std::string to_string(Species species) { return species == Species::Prey ? "prey" : "predator"; }

std::string to_string(Region region) {
  switch (region) {
    case Region::Va:
      return "Va";
    case Region::Vb:
      return "Vb";
    case Region::Vc:
      return "Vc";
    case Region::Vd:
      return "Vd";
    case Region::OnBoundaryBand:
      return "OnBoundaryBand";
  }
  return "?";
}

std::string to_string(Gamma gamma) {
  switch (gamma) {
    case Gamma::None:
      return "none";
    case Gamma::A:
      return "gamma_a";
    case Gamma::B:
      return "gamma_b";
    case Gamma::C:
      return "gamma_c";
    case Gamma::D:
      return "gamma_d";
    case Gamma::O:
      return "gamma_o";
    case Gamma::P:
      return "gamma_p";
    case Gamma::Q:
      return "gamma_q";
    case Gamma::R:
      return "gamma_r";
    case Gamma::S:
      return "gamma_s";
  }
  return "?";
}

SpeciesPair prey_pair(const Scenario& sc) {
  HamiltonianEnv minus{sc.d1, sc.r1, sc.alpha_minus, sc.kernel1};
  HamiltonianEnv plus{sc.d1, sc.r1, sc.alpha_plus, sc.kernel1};
  return {minus, plus};
}

SpeciesPair predator_pair(const Scenario& sc) {
  if (!(sc.v_plus() > 0.0)) {
    throw UnsupportedRegime("predator pair: b*alpha_plus - 1 must be positive");
  }
  HamiltonianEnv minus{sc.d2, sc.r2, sc.v_minus(), sc.kernel2};
  HamiltonianEnv plus{sc.d2, sc.r2, sc.v_plus(), sc.kernel2};
  return {minus, plus};
}

bool AssumptionReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

std::string AssumptionReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.pass) return c.name;
  }
  return {};
}

AssumptionReport validate(const Scenario& sc) {
  AssumptionReport rep;
  rep.directional.fill(std::nan(""));

  bool kernels_ok = true;
  std::string kdetail;
  for (const auto* k : {&sc.kernel1, &sc.kernel2}) {
    try {
      validate(*k);
    } catch (const std::exception& e) {
      kernels_ok = false;
      kdetail = e.what();
    }
  }
  rep.checks.push_back({"J", kernels_ok, kernels_ok ? "named symmetric compact kernels" : kdetail});

  bool positive = sc.d1 > 0 && sc.d2 > 0 && sc.r1 > 0 && sc.r2 > 0 && sc.a > 0 && sc.b > 0 &&
                  std::isfinite(sc.c_e);
  rep.checks.push_back({"parameters", positive, "d1,d2,r1,r2,a,b > 0 and c_e finite"});

  bool decay_ok = true;
  for (const auto* l : {&sc.lambda1_r, &sc.lambda1_l, &sc.lambda2_r, &sc.lambda2_l}) {
    if (!l->infinite && !(l->value > 0.0 && std::isfinite(l->value))) decay_ok = false;
  }
  rep.checks.push_back({"I", decay_ok, "decay rates positive or inf"});

  bool a_ok = sc.alpha_minus > sc.alpha_plus && sc.alpha_plus > 0.0;
  rep.checks.push_back({"A", a_ok,
                        "alpha_minus=" + fmt(sc.alpha_minus) + " alpha_plus=" + fmt(sc.alpha_plus)});

  bool h1 = sc.v_plus() > 0.0;
  rep.checks.push_back({"H1", h1, "V_plus=b*alpha_plus-1=" + fmt(sc.v_plus())});

  double h2v = sc.alpha_plus - sc.a * sc.v_minus();
  rep.checks.push_back({"H2", h2v > 0.0, "alpha_plus-a*V_minus=" + fmt(h2v)});

  if (kernels_ok && positive && decay_ok && a_ok && h1) {
    SpeciesPair prey = prey_pair(sc);
    SpeciesPair pred = predator_pair(sc);
    double s2r = directional_speed(pred.env_minus, sc.lambda2_r);
    double s1r = directional_speed(prey.env_plus, sc.lambda1_r);
    double s2l = directional_speed(pred.env_minus, sc.lambda2_l);
    double s1l = directional_speed(prey.env_plus, sc.lambda1_l);
    rep.directional = {s2r, s1r, s2l, s1l};
    bool fu = s2r < s1r && s2l < s1l;
    rep.checks.push_back({"FU", fu,
                          "s2-^r=" + fmt(s2r) + " s1+^r=" + fmt(s1r) + " s2-^l=" + fmt(s2l) +
                              " s1+^l=" + fmt(s1l)});
  } else {
    rep.checks.push_back({"FU", false, "not evaluated: earlier assumption failed"});
  }
  return rep;
}

std::array<bool, 4> right_membership(const PairRoots& roots, DecayRate lambda, double c_e) {
  double cm = roots.min_minus().c_star;
  double cp = roots.min_plus().c_star;
  if (lambda.infinite) return {c_e < cp, cp < c_e && c_e < cm, c_e > cm, false};
  double l = lambda.value;
  double mum = roots.min_minus().mu_star;
  double mup = roots.min_plus().mu_star;
  double mu0 = roots.mu0();
  double s_plus = roots.c_plus(std::min(l, mup));
  bool va = c_e < s_plus;
  bool vb = l > mu0 && s_plus < c_e && c_e < cm;
  bool vc = (l > mu0 && l < mum && cm < c_e && c_e < roots.k_curve(l)) || (l >= mum && c_e > cm);
  bool vd = l < mum && c_e > std::max(roots.c_plus(l), roots.k_curve(l));
  return {va, vb, vc, vd};
}

std::array<bool, 4> left_membership(const PairRoots& roots, DecayRate lambda, double c_e) {
  double ct = -c_e;
  double cm = roots.min_minus().c_star;
  double cbar = roots.c_bar();
  if (lambda.infinite) return {ct < cm, cm < ct && ct < cbar, false, ct > cbar};
  double l = lambda.value;
  double mum = roots.min_minus().mu_star;
  double mup = roots.min_plus().mu_star;
  double lc = roots.slope_at_c_bar();
  double s_minus = roots.c_minus(std::min(l, mum));
  bool va = ct < s_minus;
  bool vb = l > mum && cm < ct && ct < std::min(roots.dH(l), cbar);
  bool vc = (l <= mup && ct > roots.c_minus(l)) ||
            (mup < l && l < mum && roots.c_minus(l) < ct && ct < roots.g_curve(l)) ||
            (mum <= l && l < lc && roots.dH(l) < ct && ct < roots.g_curve(l));
  bool vd = (mup < l && l <= lc && ct > roots.g_curve(l)) || (l > lc && ct > cbar);
  return {va, vb, vc, vd};
}

Gamma right_boundary(const PairRoots& roots, DecayRate lambda, double c_e) {
  double cm = roots.min_minus().c_star;
  double cp = roots.min_plus().c_star;
  std::vector<Candidate> cands;
  if (lambda.infinite) {
    cands = {{Gamma::B, std::abs(c_e - cp)}, {Gamma::D, std::abs(c_e - cm)}};
    return nearest(cands);
  }
  double l = lambda.value;
  double mum = roots.min_minus().mu_star;
  double mup = roots.min_plus().mu_star;
  double mu0 = roots.mu0();
  if (l <= mup) cands.push_back({Gamma::A, std::abs(c_e - roots.c_plus(l))});
  if (l >= mup) cands.push_back({Gamma::B, std::abs(c_e - cp)});
  if (l >= mu0 && l < mum) cands.push_back({Gamma::C, std::abs(c_e - roots.k_curve(l))});
  if (l >= mu0) cands.push_back({Gamma::D, std::abs(c_e - cm)});
  return nearest(cands);
}

Gamma left_boundary(const PairRoots& roots, DecayRate lambda, double c_e) {
  double ct = -c_e;
  double cm = roots.min_minus().c_star;
  double cbar = roots.c_bar();
  std::vector<Candidate> cands;
  if (lambda.infinite) {
    cands = {{Gamma::P, std::abs(ct - cm)}, {Gamma::R, std::abs(ct - cbar)}};
    return nearest(cands);
  }
  double l = lambda.value;
  double mum = roots.min_minus().mu_star;
  double mup = roots.min_plus().mu_star;
  double lc = roots.slope_at_c_bar();
  if (l <= mum) cands.push_back({Gamma::O, std::abs(ct - roots.c_minus(l))});
  if (l >= mum) cands.push_back({Gamma::P, std::abs(ct - cm)});
  if (l > mup && l <= lc) cands.push_back({Gamma::Q, std::abs(ct - roots.g_curve(l))});
  if (l >= lc) cands.push_back({Gamma::R, std::abs(ct - cbar)});
  if (l >= mum && l <= lc) cands.push_back({Gamma::S, std::abs(ct - roots.dH(l))});
  return nearest(cands);
}

RegionLabel classify_right(const PairRoots& roots, DecayRate lambda, double c_e, Species species) {
  Gamma g = right_boundary(roots, lambda, c_e);
  std::array<bool, 4> member{};
  if (g == Gamma::None) member = right_membership(roots, lambda, c_e);
  return resolve(member, g, Side::Right, species, lambda.infinite ? INFINITY : lambda.value, c_e);
}

RegionLabel classify_left(const PairRoots& roots, DecayRate lambda, double c_e, Species species) {
  Gamma g = left_boundary(roots, lambda, c_e);
  std::array<bool, 4> member{};
  if (g == Gamma::None) member = left_membership(roots, lambda, c_e);
  return resolve(member, g, Side::Left, species, lambda.infinite ? INFINITY : lambda.value, c_e);
}

Region assigned_region(Gamma gamma) {
  switch (gamma) {
    case Gamma::A:
    case Gamma::B:
    case Gamma::O:
    case Gamma::P:
      return Region::Va;
    case Gamma::D:
    case Gamma::S:
      return Region::Vb;
    case Gamma::C:
      return Region::Vc;
    case Gamma::Q:
    case Gamma::R:
      return Region::Vd;
    case Gamma::None:
      break;
  }
  throw std::logic_error("assigned_region: no curve");
}

SideSpeed right_speed(const PairRoots& roots, DecayRate lambda, double c_e, Species species) {
  SideSpeed out;
  out.label = classify_right(roots, lambda, c_e, species);
  Region region = out.label.region == Region::OnBoundaryBand ? assigned_region(out.label.gamma)
                                                             : out.label.region;
  std::string i = species_index(species);
  switch (region) {
    case Region::Va:
      if (lambda.infinite) {
        out.value = roots.min_plus().c_star;
        out.branch = "Va: c*_{" + i + ",+}";
      } else {
        out.value = roots.c_plus(std::min(lambda.value, roots.min_plus().mu_star));
        out.branch = "Va: s_{" + i + ",+}^r = c_{" + i + ",+}(min(lambda, mu*_{" + i + ",+}))";
      }
      break;
    case Region::Vb:
      out.value = c_e;
      out.branch = "Vb: c_e (front locked to the habitat edge)";
      break;
    case Region::Vc:
      out.value = roots.min_minus().c_star;
      out.branch = "Vc: c*_{" + i + ",-}";
      break;
    case Region::Vd: {
      auto p = roots.p_star(c_e, lambda.value);
      if (!p) throw std::runtime_error("right_speed: p* not found in Vd");
      out.value = roots.c_minus(*p);
      out.branch = "Vd: c_{" + i + ",-}(p*) with p*=" + fmt(*p);
      break;
    }
    case Region::OnBoundaryBand:
      break;
  }
  if (out.label.gamma != Gamma::None) out.branch += " [on " + to_string(out.label.gamma) + "]";
  return out;
}

SideSpeed left_speed(const PairRoots& roots, DecayRate lambda, double c_e, Species species) {
  SideSpeed out;
  out.label = classify_left(roots, lambda, c_e, species);
  Region region = out.label.region == Region::OnBoundaryBand ? assigned_region(out.label.gamma)
                                                             : out.label.region;
  std::string i = species_index(species);
  double ct = -c_e;
  switch (region) {
    case Region::Va:
      if (lambda.infinite) {
        out.value = -roots.min_minus().c_star;
        out.branch = "Va: -c*_{" + i + ",-}";
      } else {
        out.value = -roots.c_minus(std::min(lambda.value, roots.min_minus().mu_star));
        out.branch = "Va: -s_{" + i + ",-}^l = -c_{" + i + ",-}(min(lambda, mu*_{" + i + ",-}))";
      }
      break;
    case Region::Vb: {
      double p = roots.p_bar(ct);
      out.value = -roots.c_plus(p);
      out.branch = "Vb: -c_{" + i + ",+}(p_bar) with p_bar=" + fmt(p);
      break;
    }
    case Region::Vc: {
      double p = roots.p_under(ct, lambda.value);
      out.value = -roots.c_plus(p);
      out.branch = "Vc: -c_{" + i + ",+}(p_under) with p_under=" + fmt(p);
      break;
    }
    case Region::Vd:
      out.value = -roots.min_plus().c_star;
      out.branch = "Vd: -c*_{" + i + ",+}";
      break;
    case Region::OnBoundaryBand:
      break;
  }
  if (out.label.gamma != Gamma::None) out.branch += " [on " + to_string(out.label.gamma) + "]";
  return out;
}

ScenarioRoots solve_pairs(const Scenario& sc) {
  return {PairRoots(prey_pair(sc)), PairRoots(predator_pair(sc))};
}

SideSpeed prey_right_speed(const Scenario& sc, const ScenarioRoots& roots) {
  return right_speed(roots.prey, sc.lambda1_r, sc.c_e, Species::Prey);
}

SideSpeed prey_left_speed(const Scenario& sc, const ScenarioRoots& roots) {
  return left_speed(roots.prey, sc.lambda1_l, sc.c_e, Species::Prey);
}

std::pair<SideSpeed, SideSpeed> predator_upper_bounds(const Scenario& sc,
                                                      const ScenarioRoots& roots) {
  SideSpeed r = right_speed(roots.predator, sc.lambda2_r, sc.c_e, Species::Predator);
  SideSpeed l = left_speed(roots.predator, sc.lambda2_l, sc.c_e, Species::Predator);
  r.branch = "upper bound only; " + r.branch;
  l.branch = "upper bound only (leftward magnitude); " + l.branch;
  return {r, l};
}

TerracePrediction terrace_prediction(const Scenario& sc, const ScenarioRoots& roots) {
  double s1p_r = directional_speed(roots.prey.plus(), sc.lambda1_r);
  double s1m_l = directional_speed(roots.prey.minus(), sc.lambda1_l);
  double s2m_r = directional_speed(roots.predator.minus(), sc.lambda2_r);
  double s2m_l = directional_speed(roots.predator.minus(), sc.lambda2_l);
  double cu_r = prey_right_speed(sc, roots).value;
  double cu_l = prey_left_speed(sc, roots).value;
  double c = sc.c_e;
  double am = sc.alpha_minus, ap = sc.alpha_plus;

  auto in_case = [&](char k, double band) {
    switch (k) {
      case 'a':
        return c >= s1p_r - band;
      case 'b':
        return s2m_r - band < c && c < s1p_r + band;
      case 'c':
        return -s1m_l - band < c && c < -s2m_l + band;
      default:
        return c <= -s1m_l + band;
    }
  };

  TerracePrediction out;
  char literal = 0;
  for (char k : {'a', 'b', 'c', 'd'}) {
    if (in_case(k, 0.0) && literal == 0) literal = k;
  }
  for (char k : {'a', 'b', 'c', 'd'}) {
    if (in_case(k, kBoundaryBand)) out.cases.push_back(k);
  }
  if (literal == 0) {
    out.note = "c_e lies in [-s_{2,-}^l, s_{2,-}^r]: no terrace layout is asserted there";
    return out;
  }
  auto add = [&](double lo, double hi, bool minus) {
    if (hi > lo) out.intervals.push_back({lo, hi, minus ? am : ap, minus ? "alpha_minus" : "alpha_plus"});
  };
  switch (literal) {
    case 'a':
      add(s2m_r, cu_r, true);
      add(-s1m_l, -s2m_l, true);
      break;
    case 'b':
      add(c, s1p_r, false);
      add(s2m_r, c, true);
      add(-s1m_l, -s2m_l, true);
      break;
    case 'c':
      add(s2m_r, s1p_r, false);
      add(c, -s2m_l, false);
      add(-s1m_l, c, true);
      break;
    default:
      add(s2m_r, s1p_r, false);
      add(cu_l, -s2m_l, false);
      break;
  }
  if (out.cases.size() > 1) out.note = "c_e on a case boundary; adjacent layouts coincide there";
  return out;
}

SpeedReport speed_report(const Scenario& sc) {
  ScenarioRoots roots = solve_pairs(sc);
  SpeedReport rep;
  SideSpeed ur = prey_right_speed(sc, roots);
  SideSpeed ul = prey_left_speed(sc, roots);
  auto [vr, vl] = predator_upper_bounds(sc, roots);
  rep.prey_right = ur.value;
  rep.prey_left = ul.value;
  rep.predator_right_upper = vr.value;
  rep.predator_left_upper = vl.value;
  rep.regions = {ur.label, ul.label, vr.label, vl.label};
  rep.formula_branch = {ur.branch, ul.branch, vr.branch, vl.branch};
  rep.endpoint_note =
      "predator right bound with compact data uses the c_e branch on (c*_{2,+}, c*_{2,-}] "
      "(closed right end) while the prey analogue is open; the branches agree at the endpoint";
  if (sc.lambda2_r.infinite &&
      std::abs(sc.c_e - roots.predator.min_minus().c_star) <= kBoundaryBand) {
    rep.endpoint_note += "; this scenario sits on that endpoint";
  }
  rep.terrace = terrace_prediction(sc, roots);
  return rep;
}

}  // namespace shiftspread
