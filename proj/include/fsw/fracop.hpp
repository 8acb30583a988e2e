#pragma once

// Fractional operator calculus on periodic grids. All operators are Fourier
// multipliers in lambda = n / L:
//   Riesz potential  I_g      : (2 pi |lambda|)^{-g}, zero at lambda = 0
//   modified         K_g f(x) = I_g f(x) - I_g f(0)
//   Bessel potential J_s      : (1 + |lambda|^2)^{s/2}

#include <cstddef>

#include "fsw/grid.hpp"

namespace fsw {

SampledField riesz_apply(const SampledField& field, double gamma);

/// Normalization C_g = pi^{d/2} 2^g Gamma(g/2) / Gamma(d/2 - g/2) of the kernel
/// k_g(x) = |x|^{g-d} / C_g. Throws ParameterError unless 0 < g < d.
double riesz_constant(double gamma, std::size_t d);

/// Same expression, analytically continued to any gamma > 0 where it is
/// finite and non-zero (used by the modified kernel for gamma >= d).
double riesz_constant_continued(double gamma, std::size_t d);

SampledField modified_apply(const SampledField& field, double gamma);

/// ||K_g(x, .)||_{L^p(R^d)} by adaptive quadrature, where
/// K_g(x, y) = k_g(x - y) - k_g(y). Requires p > 1 and
/// d(1 - 1/p) < g < d(1 - 1/p) + 1.
double kernel_norm(const Point& x, std::size_t d, double gamma, double p);

SampledField bessel_apply(const SampledField& field, double s);

/// Equivalent Sobolev norm ||f||_{L^p} + ||((2 pi |.|)^s f^)^vee||_{L^p}
/// (the second term is ||I_{-s} f||_p). Requires s >= 0 and 1 < p < inf.
double sobolev_norm(const SampledField& field, double p, double s);

/// The J_s form ||J_s f||_{L^p}.
double bessel_sobolev_norm(const SampledField& field, double p, double s);

/// Weighted Fourier norm (int |f^(lambda)|^p (1 + |lambda|^2)^{-w} dlambda)^{1/p}
/// with weight exponent w (defaults to d), the continuous transform being
/// approximated by h^d times the DFT on the lattice n / L.
double weighted_fourier_norm(const SampledField& field, double p, double weight_exponent = -1.0);

struct LaplacianCheck {
  double residual = 0.0;
  /// +1 if Delta(I_g f) = I_{g-2} f matched, -1 if Delta(I_g f) = -I_{g-2} f.
  int sign = 0;
};

/// Compares the spectral Laplacian of I_g f with I_{g-2} f under both signs and
/// reports the better one (relative l^2 difference). Requires g > 2.
LaplacianCheck laplacian_identity_check(const SampledField& field, double gamma);

/// Spectral Laplacian (multiplier -4 pi^2 |lambda|^2).
SampledField laplacian(const SampledField& field);

/// Relative l^2 difference ||a - b|| / max(||b||, tiny).
double relative_l2(const SampledField& a, const SampledField& b);

}  // namespace fsw
