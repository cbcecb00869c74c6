#include "shiftspread/root_finding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shiftspread {

double solve_bracketed(const ScalarFn& f, const ScalarFn& df, double lo, double hi,
                       double xtol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::domain_error("solve_bracketed: no sign change on bracket");
  }
  // orient so that f(xl) < 0 < f(xh)
  double xl = lo, xh = hi;
  if (flo > 0.0) std::swap(xl, xh);

  double x = 0.5 * (lo + hi);
  double dx_old = std::abs(hi - lo);
  double dx = dx_old;
  double fx = f(x);
  double dfx = df ? df(x) : 0.0;
  for (int it = 0; it < max_iter; ++it) {
    bool newton_ok = df && dfx != 0.0 && std::isfinite(dfx);
    double x_new = x;
    if (newton_ok) {
      x_new = x - fx / dfx;
      double a = std::min(xl, xh), b = std::max(xl, xh);
      newton_ok = x_new > a && x_new < b && std::abs(2.0 * fx) <= std::abs(dx_old * dfx);
    }
    dx_old = dx;
    if (newton_ok) {
      dx = x_new - x;
      x = x_new;
    } else {
      dx = 0.5 * (xh - xl);
      x = xl + dx;
    }
    if (std::abs(dx) <= xtol * std::max(1.0, std::abs(x))) return x;
    fx = f(x);
    if (fx == 0.0) return x;
    if (df) dfx = df(x);
    if (fx < 0.0) {
      xl = x;
    } else {
      xh = x;
    }
    if (std::abs(xh - xl) <= xtol * std::max(1.0, std::abs(x))) return x;
  }
  return x;
}

double scan_step(double lo, double hi) { return std::min(1e-2, (hi - lo) / 100.0); }

std::optional<double> smallest_root(const ScalarFn& f, const ScalarFn& df, double lo,
                                    double hi, double step) {
  if (!(hi > lo) || !(step > 0.0)) return std::nullopt;
  double a = lo;
  double fa = f(a);
  if (fa == 0.0) return a;
  while (a < hi) {
    double b = std::min(hi, a + step);
    double fb = f(b);
    if (fb == 0.0) return b;
    if ((fa > 0.0) != (fb > 0.0)) return solve_bracketed(f, df, a, b);
    a = b;
    fa = fb;
  }
  return std::nullopt;
}

}  // namespace shiftspread
