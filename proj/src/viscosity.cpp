#include "shiftspread/viscosity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "shiftspread/root_finding.hpp"

namespace shiftspread {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kResidualTol = 1e-8;
constexpr double kKinkExclusion = 1e-6;
constexpr int kGridPoints = 10000;
constexpr int kSweepSamples = 100;

Piece zero(double lo, double hi) { return {PieceKind::Zero, 0.0, Level::Plus, lo, hi}; }
Piece affine(double slope, Level level, double lo, double hi) {
  return {PieceKind::Affine, slope, level, lo, hi};
}
Piece arc(Level level, double lo, double hi) { return {PieceKind::LagrangianArc, 0.0, level, lo, hi}; }

// Larger root nu_2 > mu*_+ of c_+(nu) = c_e.
double nu_two(const PairRoots& roots, double c_e) {
  double mup = roots.min_plus().mu_star;
  if (c_e <= roots.min_plus().c_star) return mup;
  auto f = [&](double p) { return roots.H_plus(p) - c_e * p; };
  auto df = [&](double p) { return roots.dH(p) - c_e; };
  double hi = mup + 1.0;
  for (int i = 0; i < 200 && f(hi) <= 0.0; ++i) hi = mup + 2.0 * (hi - mup);
  return solve_bracketed(f, df, mup, hi);
}

// Crossing of the lines p s - H_+(p) and q s - H_+(q).
double crossing(const PairRoots& roots, double p, double q) {
  return (roots.H_plus(q) - roots.H_plus(p)) / (q - p);
}

std::vector<Piece> right_pieces(const PairRoots& roots, DecayRate lambda, double c_e, Region region,
                                std::string& name) {
  double l = lambda.infinite ? kInf : lambda.value;
  double cm = roots.min_minus().c_star;
  double cp = roots.min_plus().c_star;
  double tail = lambda.infinite ? kInf : roots.dH(l);
  std::vector<Piece> ps;
  switch (region) {
    case Region::Va:
      if (!lambda.infinite && l < roots.min_plus().mu_star) {
        name = "right Va: max{0, lambda s - H_+(lambda)}";
        double z = roots.c_plus(l);
        ps = {zero(0.0, z), affine(l, Level::Plus, z, kInf)};
      } else {
        name = lambda.infinite ? "right compact, c_e <= c*_+: L_+ beyond c*_+"
                               : "right Va: L_+ on [c*_+, H'(lambda)), affine beyond";
        ps = {zero(0.0, cp), arc(Level::Plus, cp, tail), affine(l, Level::Plus, tail, kInf)};
      }
      break;
    case Region::Vb: {
      double nu2 = nu_two(roots, c_e);
      if (!lambda.infinite && l < nu2) {
        name = "right Vb: min of the lambda and nu_2 half-lines";
        double sh = crossing(roots, l, nu2);
        ps = {zero(0.0, c_e), affine(nu2, Level::Plus, c_e, sh), affine(l, Level::Plus, sh, kInf)};
      } else {
        name = lambda.infinite ? "right compact, c*_+ < c_e < c*_-: nu_2 half-line then L_+"
                               : "right Vb: nu_2 half-line, L_+, lambda half-line";
        double t = roots.dH(nu2);
        ps = {zero(0.0, c_e), affine(nu2, Level::Plus, c_e, t), arc(Level::Plus, t, tail),
              affine(l, Level::Plus, tail, kInf)};
      }
      break;
    }
    case Region::Vc: {
      HatRoots hat = roots.check_hat_p(c_e);
      double th = roots.dH(hat.p_hat);
      if (lambda.infinite) {
        name = "right compact, c_e >= c*_-: L_-, p_hat half-line, L_+";
        ps = {zero(0.0, cm), arc(Level::Minus, cm, c_e), affine(hat.p_hat, Level::Plus, c_e, th),
              arc(Level::Plus, th, kInf)};
      } else if (l <= hat.p_check * (1.0 + 1e-12)) {
        auto p = roots.p_star(c_e, l);
        if (!p) throw std::runtime_error("build_profile: p* missing in right Vc");
        name = "right Vc, lambda <= p_check: L_-, p* half-line, lambda half-line";
        double t = roots.dH(*p);
        ps = {zero(0.0, cm), arc(Level::Minus, cm, t), affine(*p, Level::Minus, t, c_e),
              affine(l, Level::Plus, c_e, kInf)};
      } else if (l < hat.p_hat) {
        name = "right Vc, p_check < lambda < p_hat: L_-, p_hat and lambda half-lines";
        double sh = crossing(roots, l, hat.p_hat);
        ps = {zero(0.0, cm), arc(Level::Minus, cm, c_e), affine(hat.p_hat, Level::Plus, c_e, sh),
              affine(l, Level::Plus, sh, kInf)};
      } else {
        name = "right Vc, lambda >= p_hat: L_-, p_hat half-line, L_+, lambda half-line";
        ps = {zero(0.0, cm), arc(Level::Minus, cm, c_e), affine(hat.p_hat, Level::Plus, c_e, th),
              arc(Level::Plus, th, tail), affine(l, Level::Plus, tail, kInf)};
      }
      break;
    }
    case Region::Vd: {
      auto p = roots.p_star(c_e, l);
      if (!p) throw std::runtime_error("build_profile: p* missing in right Vd");
      name = "right Vd: max{0, p* s - H_-(p*)} behind c_e, lambda half-line ahead";
      double z = roots.c_minus(*p);
      ps = {zero(0.0, z), affine(*p, Level::Minus, z, c_e), affine(l, Level::Plus, c_e, kInf)};
      break;
    }
    case Region::OnBoundaryBand:
      throw std::logic_error("right_pieces: unresolved band");
  }
  return ps;
}

std::vector<Piece> left_pieces(const PairRoots& roots, DecayRate lambda, double c_e, Region region,
                               std::string& name) {
  double l = lambda.infinite ? kInf : lambda.value;
  double ct = -c_e;
  double cm = roots.min_minus().c_star;
  double cp = roots.min_plus().c_star;
  double tail = lambda.infinite ? -kInf : -roots.dH(l);
  std::vector<Piece> ps;
  switch (region) {
    case Region::Va:
      if (!lambda.infinite && l < roots.min_minus().mu_star) {
        name = "left Va: max{0, -lambda s - H_-(lambda)}";
        double z = -roots.c_minus(l);
        ps = {affine(-l, Level::Minus, -kInf, z), zero(z, 0.0)};
      } else {
        name = lambda.infinite ? "left compact, c_e >= -c*_-: L_- before -c*_-"
                               : "left Va: lambda half-line, L_- up to -c*_-";
        ps = {affine(-l, Level::Minus, -kInf, tail), arc(Level::Minus, tail, -cm), zero(-cm, 0.0)};
      }
      break;
    case Region::Vb: {
      double p = roots.p_bar(ct);
      double z = -roots.c_plus(p);
      name = lambda.infinite ? "left compact, -c_bar < c_e < -c*_-: L_-, then max{0, -p_bar s - H_+(p_bar)}"
                             : "left Vb: lambda half-line, L_-, max{0, -p_bar s - H_+(p_bar)}";
      ps = {affine(-l, Level::Minus, -kInf, tail), arc(Level::Minus, tail, c_e),
            affine(-p, Level::Plus, c_e, z), zero(z, 0.0)};
      break;
    }
    case Region::Vc: {
      double p = roots.p_under(ct, l);
      double z = -roots.c_plus(p);
      name = "left Vc: lambda half-line behind c_e, max{0, -p_under s - H_+(p_under)}";
      ps = {affine(-l, Level::Minus, -kInf, c_e), affine(-p, Level::Plus, c_e, z), zero(z, 0.0)};
      break;
    }
    case Region::Vd:
      if (!lambda.infinite && (l <= roots.slope_at_c_bar() || ct > roots.dH(l))) {
        double p = roots.p_under(ct, l);
        double t = -roots.dH(p);
        name = "left Vd: lambda half-line, p_under half-line, L_+ up to -c*_+";
        ps = {affine(-l, Level::Minus, -kInf, c_e), affine(-p, Level::Plus, c_e, t),
              arc(Level::Plus, t, -cp), zero(-cp, 0.0)};
      } else {
        double p = roots.p_bar(ct);
        double t = -roots.dH(p);
        name = lambda.infinite ? "left compact, c_e <= -c_bar: L_-, p_bar half-line, L_+"
                               : "left Vd: lambda half-line, L_-, p_bar half-line, L_+";
        ps = {affine(-l, Level::Minus, -kInf, tail), arc(Level::Minus, tail, c_e),
              affine(-p, Level::Plus, c_e, t), arc(Level::Plus, t, -cp), zero(-cp, 0.0)};
      }
      break;
    case Region::OnBoundaryBand:
      throw std::logic_error("left_pieces: unresolved band");
  }
  return ps;
}

const HamiltonianEnv& env_of(const SpeciesPair& pair, Level level) {
  return level == Level::Minus ? pair.env_minus : pair.env_plus;
}

std::string describe(const char* what, double s, double slope, double residual) {
  std::ostringstream os;
  os.precision(10);
  os << what << " at s=" << s << " slope=" << slope << " residual=" << residual;
  return os.str();
}

struct Checker {
  const PiecewiseProfile& profile;
  const CoefficientField& field;
  bool super;
  CertificationReport rep;
  double worst_violation = -kInf;

  double residual(double s, double rho, double p, double r) const {
    return rho - s * p + H_dispersal(profile.pair().env_plus, p) + r;
  }

  // Signed violation; positive means the inequality fails.
  void record(double s, double p, double res, const char* what) {
    double violation = super ? -res : res;
    if (violation > worst_violation) {
      worst_violation = violation;
      rep.worst_residual = res;
      rep.worst_s = s;
      rep.worst_slope = p;
    }
    if (violation > kResidualTol && rep.pass) {
      rep.pass = false;
      rep.detail = describe(what, s, p, res);
    }
  }

  void run() {
    std::vector<double> bps = profile.breakpoints();
    double span = std::max(1.0, 2.0 * std::abs(profile.zero_front()));
    for (double b : bps) span = std::max(span, 1.5 * std::abs(b));
    span += 1.0;
    double sign = profile.side() == Side::Right ? 1.0 : -1.0;

    rep.grid_size = kGridPoints;
    for (int i = 0; i < kGridPoints; ++i) {
      double s = sign * span * static_cast<double>(i) / (kGridPoints - 1);
      bool near_kink = std::any_of(bps.begin(), bps.end(),
                                   [&](double b) { return std::abs(s - b) < kKinkExclusion; });
      if (near_kink) continue;
      double rho = profile.value(s);
      if (!super && !(rho > 1e-12)) continue;
      double p = profile.slope_right(s);
      double r = super ? field.upper(s) : field.lower(s);
      record(s, p, residual(s, rho, p, r), "classical");
      ++rep.grid_points;
    }

    for (double b : bps) {
      double dl = profile.slope_left(b);
      double dr = profile.slope_right(b);
      double rho = profile.value(b);
      bool convex = dl <= dr + 1e-12;
      bool concave = dl >= dr - 1e-12;
      if (super && !convex) continue;
      if (!super && (!concave || !(rho > 1e-12))) continue;
      double lo = std::min(dl, dr), hi = std::max(dl, dr);
      double r = super ? field.upper(b) : field.lower(b);
      for (int k = 0; k < kSweepSamples; ++k) {
        double p = lo + (hi - lo) * static_cast<double>(k) / (kSweepSamples - 1);
        record(b, p, residual(b, rho, p, r), "kink");
      }
      ++rep.kink_sweeps;
    }
    if (rep.pass) rep.detail = super ? "supersolution holds" : "subsolution holds";
  }
};

}  // namespace

PiecewiseProfile::PiecewiseProfile(Side side, SpeciesPair pair, std::vector<Piece> pieces,
                                   std::string construction)
    : side_(side), pair_(std::move(pair)), construction_(std::move(construction)) {
  for (const auto& p : pieces) {
    if (p.hi > p.lo) pieces_.push_back(p);
  }
  if (pieces_.empty()) throw std::logic_error("PiecewiseProfile: no pieces");
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    if (pieces_[i].hi != pieces_[i + 1].lo) {
      throw std::logic_error("PiecewiseProfile: pieces do not share endpoints");
    }
  }
  for (const auto& p : pieces_) {
    if (p.kind == PieceKind::Zero) zero_front_ = side_ == Side::Right ? p.hi : p.lo;
  }
}

std::vector<double> PiecewiseProfile::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) out.push_back(pieces_[i].hi);
  return out;
}

std::size_t PiecewiseProfile::locate(double s) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (s >= pieces_[i].lo && s <= pieces_[i].hi) return i;
  }
  throw std::domain_error("PiecewiseProfile: s outside the profile domain");
}

double PiecewiseProfile::piece_value(const Piece& piece, double s) const {
  switch (piece.kind) {
    case PieceKind::Zero:
      return 0.0;
    case PieceKind::Affine:
      return piece.slope * s - H(env_of(pair_, piece.level), piece.slope);
    case PieceKind::LagrangianArc:
      return lagrangian(env_of(pair_, piece.level), s);
  }
  return 0.0;
}

double PiecewiseProfile::piece_slope(const Piece& piece, double s) const {
  switch (piece.kind) {
    case PieceKind::Zero:
      return 0.0;
    case PieceKind::Affine:
      return piece.slope;
    case PieceKind::LagrangianArc:
      return lagrangian_slope(env_of(pair_, piece.level), s);
  }
  return 0.0;
}

double PiecewiseProfile::value(double s) const { return piece_value(pieces_[locate(s)], s); }

double PiecewiseProfile::slope_left(double s) const {
  for (const auto& p : pieces_) {
    if (s > p.lo && s <= p.hi) return piece_slope(p, s);
  }
  return piece_slope(pieces_[locate(s)], s);
}

double PiecewiseProfile::slope_right(double s) const {
  for (const auto& p : pieces_) {
    if (s >= p.lo && s < p.hi) return piece_slope(p, s);
  }
  return piece_slope(pieces_[locate(s)], s);
}

PiecewiseProfile build_profile(const PairRoots& roots, DecayRate lambda, double c_e, Side side) {
  RegionLabel label = side == Side::Right ? classify_right(roots, lambda, c_e)
                                          : classify_left(roots, lambda, c_e);
  Region region =
      label.region == Region::OnBoundaryBand ? assigned_region(label.gamma) : label.region;
  std::string name;
  std::vector<Piece> pieces = side == Side::Right ? right_pieces(roots, lambda, c_e, region, name)
                                                  : left_pieces(roots, lambda, c_e, region, name);
  return PiecewiseProfile(side, roots.pair(), std::move(pieces), name);
}

PiecewiseProfile build_profile(const Scenario& sc, Side side) {
  PairRoots roots(prey_pair(sc));
  return build_profile(roots, side == Side::Right ? sc.lambda1_r : sc.lambda1_l, sc.c_e, side);
}

ContinuityReport check_continuity(const PiecewiseProfile& profile) {
  ContinuityReport rep;
  const auto& ps = profile.pieces();
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    double b = ps[i].hi;
    if (!std::isfinite(b)) continue;
    rep.value_gap = std::max(
        rep.value_gap, std::abs(profile.piece_value(ps[i], b) - profile.piece_value(ps[i + 1], b)));
    bool tangent_pair = ps[i].level == ps[i + 1].level &&
                        ((ps[i].kind == PieceKind::Affine && ps[i + 1].kind == PieceKind::LagrangianArc) ||
                         (ps[i].kind == PieceKind::LagrangianArc && ps[i + 1].kind == PieceKind::Affine));
    if (tangent_pair) {
      rep.tangency_gap = std::max(
          rep.tangency_gap, std::abs(profile.piece_slope(ps[i], b) - profile.piece_slope(ps[i + 1], b)));
    }
  }
  return rep;
}

bool check_boundary(const PiecewiseProfile& profile, DecayRate lambda) {
  if (profile.value(0.0) != 0.0) return false;
  const Piece& terminal =
      profile.side() == Side::Right ? profile.pieces().back() : profile.pieces().front();
  if (lambda.infinite) return terminal.kind == PieceKind::LagrangianArc;
  double expected = profile.side() == Side::Right ? lambda.value : -lambda.value;
  return terminal.kind == PieceKind::Affine && std::abs(terminal.slope - expected) <= 1e-12;
}

std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::RBar:
      return "RBar";
    case FieldKind::RUnder1:
      return "RUnder1";
    case FieldKind::RUnder2:
      return "RUnder2";
    case FieldKind::RUnder3:
      return "RUnder3";
    case FieldKind::R0:
      return "R0";
  }
  return "?";
}

double CoefficientField::upper(double s) const {
  auto below = std::lower_bound(thresholds.begin(), thresholds.end(), s) - thresholds.begin();
  auto upto = std::upper_bound(thresholds.begin(), thresholds.end(), s) - thresholds.begin();
  return std::max(values[below], values[upto]);
}

double CoefficientField::lower(double s) const {
  auto below = std::lower_bound(thresholds.begin(), thresholds.end(), s) - thresholds.begin();
  auto upto = std::upper_bound(thresholds.begin(), thresholds.end(), s) - thresholds.begin();
  return std::min(values[below], values[upto]);
}

CoefficientField field_rbar(const Scenario& sc) {
  return {FieldKind::RBar, {sc.c_e}, {sc.r1 * sc.alpha_minus, sc.r1 * sc.alpha_plus}};
}

CoefficientField field_runder(const Scenario& sc) {
  SpeciesPair pred = predator_pair(sc);
  double s2r = directional_speed(pred.env_minus, sc.lambda2_r);
  double s2l = directional_speed(pred.env_minus, sc.lambda2_l);
  double am = sc.r1 * sc.alpha_minus;
  double ap = sc.r1 * sc.alpha_plus;
  double hunt = sc.r1 * sc.a * sc.v_minus();
  double c = sc.c_e;
  if (c > s2r) return {FieldKind::RUnder1, {-s2l, s2r, c}, {am, am - hunt, am, ap}};
  if (c >= -s2l) return {FieldKind::RUnder2, {-s2l, c, s2r}, {am, am - hunt, ap - hunt, ap}};
  return {FieldKind::RUnder3, {c, -s2l, s2r}, {am, ap, ap - hunt, ap}};
}

CoefficientField field_r0(const Scenario& sc) {
  return {FieldKind::R0, {sc.c_e}, {sc.r2 * sc.v_minus(), sc.r2 * sc.v_plus()}};
}

CertificationReport certify_supersolution(const PiecewiseProfile& profile,
                                          const CoefficientField& field) {
  Checker c{profile, field, true, {}};
  c.run();
  return c.rep;
}

CertificationReport certify_subsolution(const PiecewiseProfile& profile,
                                        const CoefficientField& field) {
  Checker c{profile, field, false, {}};
  c.run();
  return c.rep;
}

std::optional<double> large_deviation_rate(const PiecewiseProfile& profile, double c) {
  if (profile.side() == Side::Right ? c < 0.0 : c > 0.0) return std::nullopt;
  double v = profile.value(c);
  if (v > 0.0) return v;
  return std::nullopt;
}

}  // namespace shiftspread
