#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shiftspread/classifier.hpp"

namespace shiftspread {

enum class PieceKind { Affine, LagrangianArc, Zero };
enum class Level { Minus, Plus };

/// One building block of a rate profile on [lo, hi].
/// Affine: slope * s - H_level(slope). LagrangianArc: L_level(s). Zero: 0.
struct Piece {
  PieceKind kind = PieceKind::Zero;
  double slope = 0.0;
  Level level = Level::Plus;
  double lo = 0.0;
  double hi = 0.0;
};

/// Piecewise rate function rho(s) on [0, inf) (right) or (-inf, 0] (left).
/// Pieces are ordered by increasing s and share endpoints.
class PiecewiseProfile {
 public:
  PiecewiseProfile(Side side, SpeciesPair pair, std::vector<Piece> pieces, std::string construction);

  Side side() const { return side_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const SpeciesPair& pair() const { return pair_; }
  const std::string& construction() const { return construction_; }
  /// Interior piece junctions.
  std::vector<double> breakpoints() const;
  /// Edge of the zero set {rho = 0} away from s = 0.
  double zero_front() const { return zero_front_; }

  double value(double s) const;
  double piece_value(const Piece& piece, double s) const;
  double piece_slope(const Piece& piece, double s) const;
  /// One-sided derivatives.
  double slope_left(double s) const;
  double slope_right(double s) const;

 private:
  std::size_t locate(double s) const;

  Side side_;
  SpeciesPair pair_;
  std::vector<Piece> pieces_;
  std::string construction_;
  double zero_front_ = 0.0;
};

/// Builds the profile for the region containing (lambda, c_e) on one side.
/// Boundary-band points use the region their curve is assigned to.
PiecewiseProfile build_profile(const PairRoots& roots, DecayRate lambda, double c_e, Side side);
/// Prey profile of a scenario.
PiecewiseProfile build_profile(const Scenario& sc, Side side);

/// Largest |left value - right value| over breakpoints, and largest slope
/// mismatch over junctions of an affine piece with an arc of the same level.
struct ContinuityReport {
  double value_gap = 0.0;
  double tangency_gap = 0.0;
};
ContinuityReport check_continuity(const PiecewiseProfile& profile);

/// rho(0) = 0 and terminal slope lambda (finite) or terminal arc (infinite).
bool check_boundary(const PiecewiseProfile& profile, DecayRate lambda);

enum class FieldKind { RBar, RUnder1, RUnder2, RUnder3, R0 };
std::string to_string(FieldKind kind);

/// Piecewise constant reaction field. values[i] holds on (thresholds[i-1], thresholds[i]).
struct CoefficientField {
  FieldKind kind = FieldKind::RBar;
  std::vector<double> thresholds;
  std::vector<double> values;

  /// Upper envelope R*: max of adjacent values at a threshold.
  double upper(double s) const;
  /// Lower envelope R_*: min of adjacent values at a threshold.
  double lower(double s) const;
};

/// Prey field above the subsolution: r1 alpha_- behind c_e, r1 alpha_+ ahead.
CoefficientField field_rbar(const Scenario& sc);
/// Prey field below the supersolution; picks the ladder case from c_e and the
/// predator directional speeds s_{2,-}^r, s_{2,-}^l.
CoefficientField field_runder(const Scenario& sc);
/// Predator field r2 V_- behind c_e, r2 V_+ ahead.
CoefficientField field_r0(const Scenario& sc);

struct CertificationReport {
  bool pass = true;
  double worst_residual = 0.0;
  double worst_s = 0.0;
  double worst_slope = 0.0;
  /// Nodes of the uniform sampling grid; grid_points counts those evaluated
  /// (kink neighbourhoods and, for subsolutions, the zero set are skipped).
  std::size_t grid_size = 0;
  std::size_t grid_points = 0;
  std::size_t kink_sweeps = 0;
  std::string detail;
};

/// Viscosity supersolution of min{rho - s rho' + H(rho') + R(s), rho} = 0 with R*.
CertificationReport certify_supersolution(const PiecewiseProfile& profile,
                                          const CoefficientField& field);
/// Viscosity subsolution (inequality <= 0 where rho > 0) with R_*.
CertificationReport certify_subsolution(const PiecewiseProfile& profile,
                                        const CoefficientField& field);

/// rho(c) where positive.
std::optional<double> large_deviation_rate(const PiecewiseProfile& profile, double c);

}  // namespace shiftspread
