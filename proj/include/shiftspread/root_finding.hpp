#pragma once

#include <functional>
#include <optional>

namespace shiftspread {

using ScalarFn = std::function<double(double)>;

/// Root of f in [lo, hi] where f(lo) and f(hi) differ in sign (or one vanishes).
/// Newton steps from df are accepted only while they stay inside the shrinking
/// bracket; otherwise the step bisects.
double solve_bracketed(const ScalarFn& f, const ScalarFn& df, double lo, double hi,
                       double xtol = 1e-15, int max_iter = 200);

/// First sign change of f scanning forward from lo with the given step, then
/// polished by solve_bracketed. Empty when f keeps one sign on [lo, hi].
std::optional<double> smallest_root(const ScalarFn& f, const ScalarFn& df, double lo,
                                    double hi, double step);

/// Default scan step min(1e-2, (hi - lo)/100).
double scan_step(double lo, double hi);

}  // namespace shiftspread
