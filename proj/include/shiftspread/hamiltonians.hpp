#pragma once

#include <stdexcept>
#include <string>

#include "shiftspread/kernels.hpp"

namespace shiftspread {

/// H(p) = d (M(p) - 1) + r * level for one species at one habitat level.
struct HamiltonianEnv {
  double d = 1.0;
  double r = 1.0;
  double level = 1.0;
  KernelSpec kernel;
};

/// Error for parameter regimes the speed theory does not cover.
struct UnsupportedRegime : std::domain_error {
  using std::domain_error::domain_error;
};

/// Exponential decay rate of initial data; the infinite case stands for
/// compactly supported data and is a separate branch everywhere.
struct DecayRate {
  bool infinite = true;
  double value = 0.0;

  static DecayRate infinity() { return {true, 0.0}; }
  static DecayRate finite(double lambda) { return {false, lambda}; }
  bool operator==(const DecayRate&) const = default;
};

std::string to_string(const DecayRate& rate);

/// Minimiser of the speed curve c(mu) = H(mu)/mu on (0, inf).
struct MinSpeed {
  double mu_star = 0.0;
  double c_star = 0.0;
};

double H(const HamiltonianEnv& env, double p);
double dH(const HamiltonianEnv& env, double p);
double d2H(const HamiltonianEnv& env, double p);

/// Level-free part d (M(p) - 1).
double H_dispersal(const HamiltonianEnv& env, double p);

/// c(mu) = H(mu)/mu, mu > 0.
double speed_curve(const HamiltonianEnv& env, double mu);

/// Solves mu H'(mu) = H(mu). Requires level > 0.
MinSpeed min_speed(const HamiltonianEnv& env);

/// The p with H'(p) = q. Independent of the level.
double lagrangian_slope(const HamiltonianEnv& env, double q);

/// L(q) = sup_p (p q - H(p)), evaluated at p = lagrangian_slope(q).
double lagrangian(const HamiltonianEnv& env, double q);

/// c(min(lambda, mu*)); c* for the infinite rate.
double directional_speed(const HamiltonianEnv& env, DecayRate lambda);

}  // namespace shiftspread
