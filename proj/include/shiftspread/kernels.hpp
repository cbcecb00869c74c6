#pragma once

#include <string>

namespace shiftspread {

enum class KernelFamily { Uniform, Triangle, RaisedCosine };

/// Symmetric unit-mass density supported on [-half_width, half_width].
struct KernelSpec {
  KernelFamily family = KernelFamily::Uniform;
  double half_width = 1.0;
};

std::string to_string(KernelFamily family);
/// Accepts "uniform", "triangle", "raised_cosine" (case-insensitive).
KernelFamily parse_kernel_family(const std::string& name);

/// Throws std::invalid_argument unless half_width is positive and finite.
void validate(const KernelSpec& spec);

/// J(y); zero outside the support.
double density(const KernelSpec& spec, double y);

/// M(p) = integral of J(y) exp(p y). Closed forms for Uniform and Triangle,
/// adaptive Gauss-Legendre for RaisedCosine.
double mgf(const KernelSpec& spec, double p);
double mgf_d1(const KernelSpec& spec, double p);
double mgf_d2(const KernelSpec& spec, double p);

/// Quadrature path for every family: integral of y^order J(y) exp(p y), order in {0,1,2}.
double mgf_quadrature(const KernelSpec& spec, double p, int order);

}  // namespace shiftspread
