#include "shiftspread/roots.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "shiftspread/root_finding.hpp"

namespace shiftspread {

namespace {

bool same_species(const HamiltonianEnv& a, const HamiltonianEnv& b) {
  return a.d == b.d && a.r == b.r && a.kernel.family == b.kernel.family &&
         a.kernel.half_width == b.kernel.half_width;
}

double smallest_root_or_throw(const ScalarFn& f, const ScalarFn& df, double lo, double hi,
                              const char* what) {
  auto root = smallest_root(f, df, lo, hi, scan_step(lo, hi));
  if (!root) throw std::runtime_error(std::string(what) + ": no sign change in bracket");
  return *root;
}

}  // namespace

PairRoots::PairRoots(SpeciesPair pair) : pair_(std::move(pair)) {
  if (!same_species(pair_.env_minus, pair_.env_plus)) {
    throw std::invalid_argument("PairRoots: both levels must share d, r and kernel");
  }
  if (!(pair_.env_plus.level > 0.0) || pair_.env_minus.level < pair_.env_plus.level) {
    throw UnsupportedRegime("PairRoots: requires level_minus >= level_plus > 0");
  }
  min_minus_ = min_speed(pair_.env_minus);
  min_plus_ = min_speed(pair_.env_plus);

  if (pair_.env_minus.level == pair_.env_plus.level) {
    mu0_ = min_plus_.mu_star;
    c_bar_ = std::numeric_limits<double>::quiet_NaN();
    slope_c_bar_ = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  double c_target = min_minus_.c_star;
  mu0_ = smallest_root_or_throw([&](double mu) { return H_plus(mu) - c_target * mu; },
                                [&](double mu) { return dH(mu) - c_target; }, 0.0,
                                min_plus_.mu_star, "mu0");
  c_bar_ = solve_c_bar();
  slope_c_bar_ = L_slope(c_bar_);
}

double PairRoots::dH(double p) const { return shiftspread::dH(pair_.env_plus, p); }

HatRoots PairRoots::check_hat_p(double c_e) const {
  if (c_e < min_minus_.c_star - kBoundaryBand) {
    throw std::domain_error("check_hat_p: requires c_e >= c*_-");
  }
  double c = std::max(c_e, min_minus_.c_star);
  double pl = L_slope(c);
  double lm = L_minus(c);
  auto f = [&](double p) { return c * p - H_plus(p) - lm; };
  auto df = [&](double p) { return c - dH(p); };
  if (f(pl) <= 1e-12) return {pl, pl};
  double p_check = smallest_root_or_throw(f, df, 0.0, pl, "check_hat_p");
  double hi = pl + 1.0;
  for (int i = 0; i < 200 && f(hi) >= 0.0; ++i) hi = pl + 2.0 * (hi - pl);
  double p_hat = solve_bracketed(f, df, pl, hi);
  return {p_check, p_hat};
}

std::optional<double> PairRoots::p_star(double c_e, double lambda) const {
  double target = c_e * lambda - H_plus(lambda);
  auto g = [&](double p) { return c_e * p - H_minus(p) - target; };
  auto dg = [&](double p) { return c_e - dH(p); };
  if (std::abs(g(lambda)) <= 1e-13 * (1.0 + std::abs(target))) return lambda;
  double pl = L_slope(c_e);
  if (!(lambda < pl)) return std::nullopt;
  double g_end = g(pl);
  if (std::abs(g_end) <= 1e-12) return pl;
  if (g_end < 0.0) return std::nullopt;
  return smallest_root(g, dg, lambda, pl, scan_step(lambda, pl));
}

double PairRoots::p_bar(double c_tilde) const {
  if (c_tilde < min_minus_.c_star - kBoundaryBand) {
    throw std::domain_error("p_bar: requires c_tilde >= c*_-");
  }
  double c = std::max(c_tilde, min_minus_.c_star);
  double pl = L_slope(c);
  double lm = L_minus(c);
  auto f = [&](double p) { return c * p - H_plus(p) - lm; };
  auto df = [&](double p) { return c - dH(p); };
  if (f(pl) <= 1e-12) return pl;
  return smallest_root_or_throw(f, df, 0.0, pl, "p_bar");
}

double PairRoots::solve_c_bar() const {
  double target = min_plus_.mu_star;
  auto f = [&](double c) { return p_bar(c) - target; };
  // implicit derivative of p_bar: (L'(c) - p) / (c - H'(p))
  auto df = [&](double c) {
    double p = p_bar(c);
    return (L_slope(c) - p) / (c - dH(p));
  };
  double lo = min_minus_.c_star + 1e-8;
  double width = 1.0;
  for (int i = 0; i < 200 && f(lo + width) <= 0.0; ++i) width *= 2.0;
  return solve_bracketed(f, df, lo, lo + width);
}

bool PairRoots::in_under_domain(double c_tilde, double lambda) const {
  if (!(lambda > 0.0)) return false;
  if (lambda <= min_minus_.mu_star) return c_tilde >= c_minus(lambda) - kBoundaryBand;
  return c_tilde >= dH(lambda) - kBoundaryBand;
}

double PairRoots::p_under(double c_tilde, double lambda) const {
  if (!in_under_domain(c_tilde, lambda)) {
    throw std::domain_error("p_under: (c, lambda) outside its domain");
  }
  double target = c_tilde * lambda - H_minus(lambda);
  auto f = [&](double p) { return c_tilde * p - H_plus(p) - target; };
  auto df = [&](double p) { return c_tilde - dH(p); };
  double hi = std::min(lambda, L_slope(c_tilde));
  return smallest_root_or_throw(f, df, 0.0, hi, "p_under");
}

double PairRoots::k_curve(double mu) const {
  double ms = min_minus_.mu_star;
  if (!(mu > 0.0) || !(mu < ms)) throw std::domain_error("k_curve: mu outside (0, mu*_-)");
  return (H_minus(ms) - H_plus(mu)) / (ms - mu);
}

double PairRoots::g_curve(double mu) const {
  double ms = min_plus_.mu_star;
  if (!(mu > ms) || mu > slope_c_bar_ + kBoundaryBand) {
    throw std::domain_error("g_curve: mu outside (mu*_+, L'(c_bar)]");
  }
  return (H_minus(mu) - H_plus(ms)) / (mu - ms);
}

}  // namespace shiftspread
