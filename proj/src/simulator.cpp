#include "shiftspread/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace shiftspread {

namespace {

constexpr double kFloor = 1e-300;
constexpr double kBoxSlack = 1e-9;
constexpr double kClampLimit = 1e-12;
constexpr double kMeasurable = 1e-280;

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

void convolve(const std::vector<double>& f, const std::vector<double>& w, double d,
              std::vector<double>& out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
  const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(w.size() / 2);
  out.resize(f.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    if (i >= k && i + k < n) {
      const double* fi = f.data() + i - k;
      for (std::ptrdiff_t j = 0; j <= 2 * k; ++j) acc += w[j] * fi[j];
    } else {
      for (std::ptrdiff_t j = -k; j <= k; ++j) {
        std::ptrdiff_t idx = std::clamp<std::ptrdiff_t>(i + j, 0, n - 1);
        acc += w[j + k] * f[idx];
      }
    }
    out[i] = d * (acc - f[i]);
  }
}

}  // namespace

Grid make_grid(double extent, double dx) {
  if (!(extent > 0.0) || !(dx > 0.0)) throw std::invalid_argument("make_grid: bad extent or dx");
  auto cells = static_cast<std::size_t>(std::ceil(2.0 * extent / dx));
  return {-extent, -extent + static_cast<double>(cells) * dx, cells + 1};
}

double HabitatProfile::operator()(double z) const {
  if (shape == HabitatShape::Step) return z <= 0.0 ? alpha_minus : alpha_plus;
  // logistic with central slope (alpha_plus - alpha_minus) / width
  double e = 4.0 * z / width;
  double sig = e > 0.0 ? std::exp(-e) / (1.0 + std::exp(-e)) : 1.0 / (1.0 + std::exp(e));
  return alpha_plus + (alpha_minus - alpha_plus) * sig;
}

double InitialData::operator()(double x) const {
  double ax = std::abs(x);
  if (ax <= radius) return amplitude;
  const DecayRate& rate = x > 0.0 ? right : left;
  if (rate.infinite) return 0.0;
  double v = amplitude * std::exp(-rate.value * (ax - radius));
  return v < kFloor ? 0.0 : v;
}

Model model_from(const Scenario& sc, HabitatProfile habitat) {
  habitat.alpha_minus = sc.alpha_minus;
  habitat.alpha_plus = sc.alpha_plus;
  Model m;
  m.d1 = sc.d1;
  m.d2 = sc.d2;
  m.r1 = sc.r1;
  m.r2 = sc.r2;
  m.a = sc.a;
  m.b = sc.b;
  m.kernel1 = sc.kernel1;
  m.kernel2 = sc.kernel2;
  m.habitat = habitat;
  m.c_e = sc.c_e;
  return m;
}

std::vector<double> convolution_weights(const KernelSpec& kernel, double dx) {
  validate(kernel);
  double ratio = kernel.half_width / dx;
  auto k = static_cast<std::ptrdiff_t>(std::floor(ratio + 1e-9));
  if (k < 1) throw NumericalAbort("convolution_weights: dx exceeds the kernel half-width");
  std::vector<double> w(static_cast<std::size_t>(2 * k + 1));
  bool exact_end = std::abs(ratio - static_cast<double>(k)) < 1e-9;
  double total = 0.0;
  for (std::ptrdiff_t j = -k; j <= k; ++j) {
    double val = density(kernel, static_cast<double>(j) * dx);
    if (exact_end && std::abs(j) == k) val *= 0.5;
    w[static_cast<std::size_t>(j + k)] = val;
    total += val;
  }
  for (double& x : w) x /= total;
  return w;
}

std::vector<double> nonlocal_op(const std::vector<double>& field, const std::vector<double>& weights,
                                double d) {
  std::vector<double> out;
  convolve(field, weights, d, out);
  return out;
}

double max_stable_dt(const Model& m) {
  double am = m.habitat.alpha_minus;
  double vm = std::max(m.v_minus(), 0.0);
  double prey_row = m.r1 * (2.0 * am + m.a * vm) + m.r1 * m.a * am;
  double pred_row = m.prey_only ? 0.0 : m.r2 * m.b * vm + m.r2 * (1.0 + 2.0 * vm + m.b * am);
  double lip = std::max(prey_row, pred_row);
  return 0.9 / (std::max(m.d1, m.d2) + lip);
}

Stepper::Stepper(Model model, Grid grid) : model_(std::move(model)), grid_(grid) {
  double dx = grid_.dx();
  for (const KernelSpec* k : {&model_.kernel1, &model_.kernel2}) {
    if (dx > k->half_width / 8.0 * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "resolution: dx=" << dx << " exceeds half_width/8=" << k->half_width / 8.0;
      throw NumericalAbort(os.str());
    }
  }
  w1_ = convolution_weights(model_.kernel1, dx);
  w2_ = convolution_weights(model_.kernel2, dx);
  xs_.resize(grid_.n);
  for (std::size_t i = 0; i < grid_.n; ++i) xs_[i] = grid_.x(i);
  for (auto* arr : {&ku_, &kv_}) {
    for (auto& k : *arr) k.resize(grid_.n);
  }
  tu_.resize(grid_.n);
  tv_.resize(grid_.n);
}

void Stepper::rhs(double t, const std::vector<double>& u, const std::vector<double>& v,
                  std::vector<double>& du, std::vector<double>& dv) {
  convolve(u, w1_, model_.d1, du);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
  const double shift = model_.c_e * t;
  if (model_.prey_only) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      du[i] += model_.r1 * u[i] * (model_.habitat(xs_[i] - shift) - u[i]);
      dv[i] = 0.0;
    }
    return;
  }
  convolve(v, w2_, model_.d2, dv);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double alpha = model_.habitat(xs_[i] - shift);
    du[i] += model_.r1 * u[i] * (alpha - u[i] - model_.a * v[i]);
    dv[i] += model_.r2 * v[i] * (-1.0 + model_.b * u[i] - v[i]);
  }
}

void Stepper::step(State& s, double dt) {
  const std::size_t n = grid_.n;
  if (s.u.size() != n || s.v.size() != n) throw std::invalid_argument("Stepper: state size mismatch");
  static constexpr double kNodes[4] = {0.0, 0.5, 0.5, 1.0};
  for (int stage = 0; stage < 4; ++stage) {
    const std::vector<double>* u = &s.u;
    const std::vector<double>* v = &s.v;
    if (stage > 0) {
      double h = kNodes[stage] * dt;
      for (std::size_t i = 0; i < n; ++i) {
        tu_[i] = s.u[i] + h * ku_[stage - 1][i];
        tv_[i] = s.v[i] + h * kv_[stage - 1][i];
      }
      u = &tu_;
      v = &tv_;
    }
    rhs(s.t + kNodes[stage] * dt, *u, *v, ku_[stage], kv_[stage]);
  }
  const double u_max = model_.habitat.alpha_minus + kBoxSlack;
  const double v_max = std::max(model_.v_minus(), 0.0) + kBoxSlack;
  for (std::size_t i = 0; i < n; ++i) {
    double u = s.u[i] + dt / 6.0 * (ku_[0][i] + 2.0 * ku_[1][i] + 2.0 * ku_[2][i] + ku_[3][i]);
    double v = s.v[i] + dt / 6.0 * (kv_[0][i] + 2.0 * kv_[1][i] + 2.0 * kv_[2][i] + kv_[3][i]);
    if (!std::isfinite(u) || !std::isfinite(v)) {
      throw NumericalAbort("step: non-finite density at x=" + std::to_string(xs_[i]));
    }
    if (u < 0.0) {
      max_clamp_ = std::max(max_clamp_, -u);
      u = 0.0;
    }
    if (v < 0.0) {
      max_clamp_ = std::max(max_clamp_, -v);
      v = 0.0;
    }
    if (u > u_max || v > v_max) {
      std::ostringstream os;
      os << "step: invariant box left at x=" << xs_[i] << " (u=" << u << ", v=" << v << ")";
      throw NumericalAbort(os.str());
    }
    // flush values that would turn subnormal
    s.u[i] = u < kFloor ? 0.0 : u;
    s.v[i] = v < kFloor ? 0.0 : v;
  }
  if (max_clamp_ > kClampLimit) {
    throw NumericalAbort("step: negative clamp " + std::to_string(max_clamp_) + " exceeds 1e-12");
  }
  s.t += dt;
}

State step(const State& state, const Model& model, const Grid& grid, double dt) {
  Stepper stepper(model, grid);
  State next = state;
  stepper.step(next, dt);
  return next;
}

std::optional<double> front_position(const std::vector<double>& density, const Grid& grid,
                                     Direction direction, double threshold) {
  const std::size_t n = density.size();
  if (n == 0) return std::nullopt;
  if (direction == Direction::Right) {
    for (std::size_t i = n; i-- > 0;) {
      if (density[i] >= threshold) {
        if (i + 1 == n) return grid.x(i);
        double f = (density[i] - threshold) / (density[i] - density[i + 1]);
        return grid.x(i) + f * grid.dx();
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (density[i] >= threshold) {
        if (i == 0) return grid.x(0);
        double f = (density[i] - threshold) / (density[i] - density[i - 1]);
        return grid.x(i) - f * grid.dx();
      }
    }
  }
  return std::nullopt;
}

std::optional<SpeedEstimate> estimate_speed(const std::vector<double>& t,
                                            const std::vector<double>& x) {
  if (t.empty() || t.size() != x.size()) return std::nullopt;
  double t_end = t.back();
  double t_start = 0.5 * t_end;
  std::vector<double> ts, xs;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= t_start && std::isfinite(x[i])) {
      ts.push_back(t[i]);
      xs.push_back(x[i]);
    }
  }
  const std::size_t m = ts.size();
  if (m < 20) return std::nullopt;
  double tm = 0.0, xm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    tm += ts[i];
    xm += xs[i];
  }
  tm /= static_cast<double>(m);
  xm /= static_cast<double>(m);
  double stt = 0.0, stx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    stt += (ts[i] - tm) * (ts[i] - tm);
    stx += (ts[i] - tm) * (xs[i] - xm);
  }
  double slope = stx / stt;
  double sse = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double r = xs[i] - xm - slope * (ts[i] - tm);
    sse += r * r;
  }
  double se = std::sqrt(sse / static_cast<double>(m - 2) / stt);
  return SpeedEstimate{slope, se, m};
}

HopfColeReport hopf_cole_diagnostic(const State& state, const Grid& grid,
                                    const PiecewiseProfile& profile, double s_lo, double s_hi,
                                    double rho_min) {
  if (!(state.t > 0.0)) throw std::invalid_argument("hopf_cole_diagnostic: t must be positive");
  HopfColeReport rep;
  constexpr int kSamples = 400;
  for (int k = 0; k <= kSamples; ++k) {
    double s = s_lo + (s_hi - s_lo) * static_cast<double>(k) / kSamples;
    double rho = profile.value(s);
    if (!(rho > rho_min)) continue;
    double x = s * state.t;
    double pos = (x - grid.x_min) / grid.dx();
    if (pos < 0.0 || pos > static_cast<double>(grid.n - 1)) continue;
    auto i = static_cast<std::size_t>(std::floor(pos));
    std::size_t j = std::min(i + 1, grid.n - 1);
    if (std::min(state.u[i], state.u[j]) < kMeasurable) {
      ++rep.floor_limited;
      continue;
    }
    double f = pos - static_cast<double>(i);
    // interpolate in log space
    double lu = (1.0 - f) * std::log(state.u[i]) + f * std::log(state.u[j]);
    double gap = std::abs(-lu / state.t - rho);
    ++rep.samples;
    if (gap > rep.sup_gap) {
      rep.sup_gap = gap;
      rep.worst_s = s;
    }
  }
  return rep;
}

std::vector<TerraceDeviation> terrace_check(const State& state, const Grid& grid,
                                            const TerracePrediction& prediction) {
  std::vector<TerraceDeviation> out;
  for (const auto& iv : prediction.intervals) {
    TerraceDeviation dev{iv, 0.0, false};
    double eta = 0.05 * (iv.hi - iv.lo);
    double lo = (iv.lo + eta) * state.t;
    double hi = (iv.hi - eta) * state.t;
    bool any = false;
    for (std::size_t i = 0; i < grid.n; ++i) {
      double x = grid.x(i);
      if (x < lo || x > hi) continue;
      any = true;
      dev.sup_deviation = std::max(dev.sup_deviation, std::abs(state.u[i] - iv.plateau));
    }
    dev.skipped = !any;
    out.push_back(dev);
  }
  return out;
}

RunResult run(const Model& model, const Grid& grid, const InitialData& u0, const InitialData& v0,
              const RunConfig& config) {
  Stepper stepper(model, grid);
  RunResult res;
  State s;
  s.u.resize(grid.n);
  s.v.resize(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    s.u[i] = u0(grid.x(i));
    s.v[i] = model.prey_only ? 0.0 : v0(grid.x(i));
  }
  double dt_max = max_stable_dt(model);
  double dt = config.dt > 0.0 ? config.dt : dt_max;
  if (dt > dt_max * (1.0 + 1e-12)) {
    throw NumericalAbort("run: dt " + std::to_string(dt) + " exceeds the stability bound " +
                         std::to_string(dt_max));
  }
  // land exactly on sample times
  double sample = config.sample_interval;
  auto per_sample = static_cast<int>(std::ceil(sample / dt - 1e-9));
  dt = sample / per_sample;
  res.dt = dt;

  double margin = 5.0 * std::max(model.kernel1.half_width, model.kernel2.half_width);
  auto record = [&]() {
    auto& tr = res.trajectory;
    tr.t.push_back(s.t);
    auto pos = [&](const std::vector<double>& f, Direction d, double thr) {
      auto x = front_position(f, grid, d, thr);
      if (x && (*x < grid.x_min + margin || *x > grid.x_max - margin)) {
        std::ostringstream os;
        os << "margin: front at x=" << *x << " within " << margin << " of the domain edge at t=" << s.t;
        throw NumericalAbort(os.str());
      }
      return x ? *x : nan();
    };
    tr.prey_right.push_back(pos(s.u, Direction::Right, config.prey_threshold));
    tr.prey_left.push_back(pos(s.u, Direction::Left, config.prey_threshold));
    tr.predator_right.push_back(pos(s.v, Direction::Right, config.predator_threshold));
    tr.predator_left.push_back(pos(s.v, Direction::Left, config.predator_threshold));
  };

  std::vector<double> snaps = config.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;
  auto steps = static_cast<long>(std::llround(config.horizon / sample));
  record();
  for (long k = 0; k < steps; ++k) {
    for (int j = 0; j < per_sample; ++j) stepper.step(s, dt);
    s.t = static_cast<double>(k + 1) * sample;  // suppress drift from repeated sums
    record();
    while (next_snap < snaps.size() && snaps[next_snap] <= s.t + 1e-9) {
      res.snapshots.push_back(s);
      ++next_snap;
    }
  }
  res.max_clamp = stepper.max_clamp();
  res.final_state = std::move(s);
  return res;
}

}  // namespace shiftspread
