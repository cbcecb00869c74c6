#include "shiftspread/kernels.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace shiftspread {

namespace {

// 10-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kNodes = {0.1488743389816312, 0.4333953941292472,
                                          0.6794095682990244, 0.8650633666889845,
                                          0.9739065285171717};
constexpr std::array<double, 5> kWeights = {0.2955242247147529, 0.2692667193099963,
                                            0.2190863625159820, 0.1494513491505806,
                                            0.0666713443086881};

// Below this |p h| the closed forms lose digits to cancellation in the
// derivatives, so the even power series is summed instead.
constexpr double kSeriesCutoff = 1.0;
constexpr int kSeriesTerms = 14;

template <class F>
double gauss_legendre(const F& f, double a, double b) {
  double mid = 0.5 * (a + b);
  double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < kNodes.size(); ++i) {
    sum += kWeights[i] * (f(mid - half * kNodes[i]) + f(mid + half * kNodes[i]));
  }
  return sum * half;
}

// floor is an absolute error level the recursion never tightens past, so
// round-off on small subintervals cannot force further splits.
template <class F>
double adaptive(const F& f, double a, double b, double whole, double tol, double floor, int depth) {
  double mid = 0.5 * (a + b);
  double left = gauss_legendre(f, a, mid);
  double right = gauss_legendre(f, mid, b);
  double refined = left + right;
  if (depth <= 0 || std::abs(refined - whole) <= std::max(tol, floor)) return refined;
  return adaptive(f, a, mid, left, 0.5 * tol, floor, depth - 1) +
         adaptive(f, mid, b, right, 0.5 * tol, floor, depth - 1);
}

// Absolute tolerance 1e-12, relaxed to 1e-14 of the integral of |f|.
template <class F>
double integrate(const F& f, double a, double b) {
  constexpr double kAbsTol = 1e-12;
  double magnitude = gauss_legendre([&f](double y) { return std::abs(f(y)); }, a, b);
  return adaptive(f, a, b, gauss_legendre(f, a, b), kAbsTol, 1e-14 * magnitude, 20);
}

// Coefficients c_j of sum_j c_j x^{2j}.
double uniform_coeff(int j) {
  double fact = 1.0;
  for (int k = 2; k <= 2 * j + 1; ++k) fact *= k;
  return 1.0 / fact;
}

double triangle_coeff(int j) {
  double fact = 1.0;
  for (int k = 2; k <= 2 * j + 2; ++k) fact *= k;
  return 2.0 / fact;
}

double series(KernelFamily family, double x, int order) {
  double x2 = x * x;
  auto coeff = [family](int j) {
    return family == KernelFamily::Uniform ? uniform_coeff(j) : triangle_coeff(j);
  };
  double sum = 0.0;
  for (int j = kSeriesTerms - 1; j >= 0; --j) {
    double term = 0.0;
    if (order == 0) {
      term = coeff(j);
    } else if (order == 1) {
      term = 2.0 * (j + 1) * coeff(j + 1);
    } else {
      term = 2.0 * (j + 1) * (2.0 * j + 1.0) * coeff(j + 1);
    }
    sum = sum * x2 + term;
  }
  return order == 1 ? sum * x : sum;
}

double closed_form(KernelFamily family, double x, int order) {
  if (std::abs(x) < kSeriesCutoff) return series(family, x, order);
  double sh = std::sinh(x);
  double ch = std::cosh(x);
  if (family == KernelFamily::Uniform) {
    if (order == 0) return sh / x;
    if (order == 1) return (x * ch - sh) / (x * x);
    return ((x * x + 2.0) * sh - 2.0 * x * ch) / (x * x * x);
  }
  if (order == 0) {
    double q = std::sinh(0.5 * x) / (0.5 * x);
    return q * q;
  }
  if (order == 1) return 2.0 * (x * sh - 2.0 * ch + 2.0) / (x * x * x);
  return 2.0 * (x * x * ch - 4.0 * x * sh + 6.0 * ch - 6.0) / (x * x * x * x);
}

double evaluate(const KernelSpec& spec, double p, int order) {
  if (!std::isfinite(p)) throw std::domain_error("kernel moment: non-finite p");
  validate(spec);
  if (spec.family == KernelFamily::RaisedCosine) return mgf_quadrature(spec, p, order);
  double h = spec.half_width;
  return std::pow(h, order) * closed_form(spec.family, p * h, order);
}

}  // namespace

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Uniform:
      return "uniform";
    case KernelFamily::Triangle:
      return "triangle";
    case KernelFamily::RaisedCosine:
      return "raised_cosine";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "uniform") return KernelFamily::Uniform;
  if (s == "triangle") return KernelFamily::Triangle;
  if (s == "raised_cosine" || s == "raisedcosine") return KernelFamily::RaisedCosine;
  throw std::invalid_argument("unknown kernel family '" + name + "'");
}

void validate(const KernelSpec& spec) {
  if (!(spec.half_width > 0.0) || !std::isfinite(spec.half_width)) {
    throw std::invalid_argument("kernel half_width must be positive and finite");
  }
}

double density(const KernelSpec& spec, double y) {
  double h = spec.half_width;
  double a = std::abs(y);
  if (a > h) return 0.0;
  switch (spec.family) {
    case KernelFamily::Uniform:
      return 0.5 / h;
    case KernelFamily::Triangle:
      return (h - a) / (h * h);
    case KernelFamily::RaisedCosine:
      return (1.0 + std::cos(std::numbers::pi * y / h)) / (2.0 * h);
  }
  return 0.0;
}

double mgf(const KernelSpec& spec, double p) { return evaluate(spec, p, 0); }
double mgf_d1(const KernelSpec& spec, double p) { return evaluate(spec, p, 1); }
double mgf_d2(const KernelSpec& spec, double p) { return evaluate(spec, p, 2); }

double mgf_quadrature(const KernelSpec& spec, double p, int order) {
  if (!std::isfinite(p)) throw std::domain_error("kernel moment: non-finite p");
  validate(spec);
  auto integrand = [&](double y) {
    return std::pow(y, order) * density(spec, y) * std::exp(p * y);
  };
  // split at the origin: the triangle density has its kink there
  return integrate(integrand, -spec.half_width, 0.0) + integrate(integrand, 0.0, spec.half_width);
}

}  // namespace shiftspread
