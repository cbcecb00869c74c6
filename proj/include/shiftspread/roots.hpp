#pragma once

#include <optional>

#include "shiftspread/hamiltonians.hpp"

namespace shiftspread {

/// One species seen at the two habitat levels; env_minus is the better one.
struct SpeciesPair {
  HamiltonianEnv env_minus;
  HamiltonianEnv env_plus;
};

struct HatRoots {
  double p_check = 0.0;
  double p_hat = 0.0;
};

/// Band used for every "on the curve" comparison.
inline constexpr double kBoundaryBand = 1e-9;

/// Auxiliary roots of a species pair. The level-dependent constants
/// (mu*, c* at both levels, mu0, c_bar) are solved once at construction.
/// Requires env_minus.level >= env_plus.level > 0 and identical d, r, kernel;
/// equal levels are accepted as a degenerate case with c_bar left NaN.
class PairRoots {
 public:
  explicit PairRoots(SpeciesPair pair);

  const SpeciesPair& pair() const { return pair_; }
  const HamiltonianEnv& minus() const { return pair_.env_minus; }
  const HamiltonianEnv& plus() const { return pair_.env_plus; }
  const MinSpeed& min_minus() const { return min_minus_; }
  const MinSpeed& min_plus() const { return min_plus_; }

  /// Smallest mu with c_+(mu) = c*_-; lies in (0, mu*_+).
  double mu0() const { return mu0_; }

  /// Roots p_check < L'(c_e) < p_hat of c_e p - H_+(p) = L_-(c_e); c_e >= c*_-.
  HatRoots check_hat_p(double c_e) const;

  /// Smallest root in (lambda, L'(c_e)] of c_e p - H_-(p) = c_e lambda - H_+(lambda).
  /// Empty when the right-hand side exceeds L_-(c_e).
  std::optional<double> p_star(double c_e, double lambda) const;

  /// Smallest root in (0, L'(c)) of c p - H_+(p) = L_-(c); c >= c*_-.
  double p_bar(double c_tilde) const;

  /// The c > c*_- with p_bar(c) = mu*_+.
  double c_bar() const { return c_bar_; }
  /// L'(c_bar).
  double slope_at_c_bar() const { return slope_c_bar_; }

  /// Smallest root in (0, min(lambda, L'(c))) of c p - H_+(p) = c lambda - H_-(lambda).
  double p_under(double c_tilde, double lambda) const;
  /// Membership of (c, lambda) in the domain of p_under, with the boundary band.
  bool in_under_domain(double c_tilde, double lambda) const;

  /// k(mu) = (H_-(mu*_-) - H_+(mu)) / (mu*_- - mu) on (0, mu*_-).
  double k_curve(double mu) const;
  /// g(mu) = (H_-(mu) - H_+(mu*_+)) / (mu - mu*_+) on (mu*_+, L'(c_bar)].
  double g_curve(double mu) const;

  // Shorthands over the two levels.
  double H_minus(double p) const { return H(pair_.env_minus, p); }
  double H_plus(double p) const { return H(pair_.env_plus, p); }
  double dH(double p) const;
  double c_minus(double mu) const { return speed_curve(pair_.env_minus, mu); }
  double c_plus(double mu) const { return speed_curve(pair_.env_plus, mu); }
  double L_minus(double q) const { return lagrangian(pair_.env_minus, q); }
  double L_plus(double q) const { return lagrangian(pair_.env_plus, q); }
  double L_slope(double q) const { return lagrangian_slope(pair_.env_plus, q); }

 private:
  double solve_c_bar() const;

  SpeciesPair pair_;
  MinSpeed min_minus_;
  MinSpeed min_plus_;
  double mu0_ = 0.0;
  double c_bar_ = 0.0;
  double slope_c_bar_ = 0.0;
};

}  // namespace shiftspread
