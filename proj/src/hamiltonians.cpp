#include "shiftspread/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shiftspread/root_finding.hpp"

namespace shiftspread {

namespace {

// Grows hi geometrically from `hi` until pred(hi) holds.
template <class Pred>
double grow_until(double hi, const Pred& pred) {
  for (int i = 0; i < 200 && !pred(hi); ++i) hi *= 2.0;
  return hi;
}

}  // namespace

std::string to_string(const DecayRate& rate) {
  if (rate.infinite) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << rate.value;
  return os.str();
}

double H_dispersal(const HamiltonianEnv& env, double p) { return env.d * (mgf(env.kernel, p) - 1.0); }

double H(const HamiltonianEnv& env, double p) { return H_dispersal(env, p) + env.r * env.level; }

double dH(const HamiltonianEnv& env, double p) { return env.d * mgf_d1(env.kernel, p); }

double d2H(const HamiltonianEnv& env, double p) { return env.d * mgf_d2(env.kernel, p); }

double speed_curve(const HamiltonianEnv& env, double mu) {
  if (!(mu > 0.0)) throw std::domain_error("speed_curve: mu must be positive");
  return H(env, mu) / mu;
}

MinSpeed min_speed(const HamiltonianEnv& env) {
  if (!(env.level > 0.0)) {
    throw UnsupportedRegime("min_speed: level must be positive (got " + std::to_string(env.level) + ")");
  }
  auto tangency = [&](double mu) { return mu * dH(env, mu) - H(env, mu); };
  auto tangency_d = [&](double mu) { return mu * d2H(env, mu); };
  double lo = 1e-6;
  double hi = grow_until(1.0, [&](double x) { return tangency(x) > 0.0; });
  double mu = solve_bracketed(tangency, tangency_d, lo, hi);
  return {mu, dH(env, mu)};
}

double lagrangian_slope(const HamiltonianEnv& env, double q) {
  if (!std::isfinite(q)) throw std::domain_error("lagrangian_slope: non-finite q");
  if (q == 0.0) return 0.0;
  double target = std::abs(q);
  auto f = [&](double p) { return dH(env, p) - target; };
  auto df = [&](double p) { return d2H(env, p); };
  double hi = grow_until(1.0, [&](double x) { return f(x) > 0.0; });
  double p = solve_bracketed(f, df, 0.0, hi);
  return q > 0.0 ? p : -p;
}

double lagrangian(const HamiltonianEnv& env, double q) {
  double p = lagrangian_slope(env, q);
  return q * p - H(env, p);
}

double directional_speed(const HamiltonianEnv& env, DecayRate lambda) {
  MinSpeed ms = min_speed(env);
  if (lambda.infinite) return ms.c_star;
  if (!(lambda.value > 0.0)) throw std::domain_error("directional_speed: lambda must be positive");
  if (lambda.value >= ms.mu_star) return ms.c_star;
  return speed_curve(env, lambda.value);
}

}  // namespace shiftspread
