#pragma once

// Verification and measurement on sampled fields: wavelet norm sandwiches,
// the weighted Fourier sampling bound, distribution bounds for dilated
// pairings, goodness of fit, spectral slopes and graph dimension estimates.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fsw/grid.hpp"
#include "fsw/stable.hpp"
#include "fsw/synthesis.hpp"
#include "fsw/test_function.hpp"
#include "fsw/wavelet.hpp"

namespace fsw {

struct BoundReport {
  double lower = 0.0;
  double value = 0.0;
  double upper = 0.0;
  /// Empirical constant: value / (upper without constant) for norm
  /// sandwiches, lhs / rhs for the sampling bound.
  double constant = 0.0;
  double p = 0.0;
  double s = 0.0;
  double gamma = 0.0;
  double a = 1.0;
  /// lower <= value <= upper, with a relative slack of 1e-12 for rounding.
  bool pass() const noexcept;
  std::string describe() const;
};

struct DimensionEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double eps_min = 0.0;
  double eps_max = 0.0;
  std::string method;
};

/// Checks 1 < p <= 2 with d(1/p - 1/2) < s < r (p = 2: 0 <= s < r).
void check_sobolev_window(double p, double s, std::size_t d, const WaveletBasis& basis);

/// ||f||_2 <= (sum |<f, psi>|^p)^{1/p} <= C ||f||_{H^p_s}. The report holds
/// lower = ||f||_2, value = the l^p coefficient norm, upper = sobolev_norm(f)
/// (constant not applied) and constant = value / upper.
BoundReport t1_bounds(const SampledField& f, double p, double s, const WaveletBasis& basis);
BoundReport t1_bounds(const TestFunction& f, const Grid& grid, double p, double s,
                      const WaveletBasis& basis);

/// Corpus maximum of t1_bounds(...).constant over test_corpus(d, count, L).
/// Cached per (p, s, basis, grid, count).
double t1_constant(double p, double s, const WaveletBasis& basis, const Grid& grid,
                   std::size_t count = 20);

/// || (sum_{jke} |<f, psi>|^2 w_j (2^j / L)^d 1_{I_jk})^{1/2} ||_{L^p} with
/// w_j = (1 + (2^j / L)^{2s}) / 2, scaling atoms included at the coarsest
/// level. For s = 0 and p = 2 this equals ||f||_2.
double square_function_norm(const SampledField& f, double p, double s, const WaveletBasis& basis,
                            int j_min = 0);

/// Constant 2^d sup_l sum_k |phi(l - k)| int (1 + |l|^2)^d |phi| for the
/// sampling kernel phi = chi^, chi a smooth cutoff equal to 1 on
/// [-1/4, 1/4]^d and vanishing outside [-1/2, 1/2]^d.
double sampling_constant(std::size_t d);

/// Weighted Fourier norm of f (supported in [-1/4, 1/4)^d, centred
/// coordinates) against the lattice sum over integer frequencies:
/// value = ||f||^p, upper = C sum_k |f^(k)|^p (1 + |k|^2)^{-d} with
/// C = sampling_constant(d), constant = value / lattice sum. Requires an
/// integer domain length and 1 <= p <= 2.
BoundReport weighted_sampling_bound(const SampledField& f, double p);

/// Scale bounds for a^{d/2 + g} <X_g, phi(a .)>: lower = a^{d/2} ||(I_g phi)(a .)||_2
/// on the grid,
/// value = pair_scale sigma(a), upper = C (a^{d(1/2 - 1/p)} ||I_g phi||_p +
/// a^{d(1/2 - 1/p) + s} ||I_{g - s} phi||_p). A larger SpS scale means a
/// smaller distribution function on x > 0, so the scale ordering is the
/// ordering of the distribution functions. If constant <= 0 the empirical
/// t1_constant for (p, s) is used.
BoundReport ss_bounds(const TestFunction& phi, double gamma, double p, double s, double a,
                      const WaveletBasis& basis, const Grid& grid, const TruncationSpec& trunc,
                      double constant = 0.0);

/// Kolmogorov-Smirnov distance between the sample and the law. Requires n >= 100.
double ecdf_ks(std::span<const double> samples, const StableLaw& law);

struct PeriodogramFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> frequencies;
  std::vector<double> power;
};

/// Radially averaged periodogram over shells |n| in [band_lo, band_hi] (in
/// units of the fundamental frequency 1/L), and its log-log least squares
/// line. Defaults to the band (0, Nyquist / 4].
PeriodogramFit periodogram(const SampledField& field, double band_lo = 1.0, double band_hi = -1.0);
double periodogram_slope(const SampledField& field, double band_lo = 1.0, double band_hi = -1.0);

/// sum over ordered node pairs x != x' of (|x - x'|^2 + |f(x) - f(x')|^2)^{-rho/2} h^{2d},
/// on the non-periodic box [0, L)^d.
double frostman_energy(const SampledField& field, double rho);

/// Every other node per axis (spacing doubled).
SampledField coarsen(const SampledField& field);

/// Box-counting dimension of the graph of a d = 1 field with 2^J samples,
/// J >= 12, normalized to the unit square. Each column of width eps = 2^{-m}
/// contributes osc / eps boxes (osc over the column and its right endpoint),
/// for m = 3 .. J - 5. A constant field reports 1.
DimensionEstimate box_dimension(const SampledField& field);

/// Excess kurtosis of the sample.
double excess_kurtosis(std::span<const double> values);

/// Nearest-neighbour increments f(x + h e_a) - f(x) along every axis (periodic).
std::vector<double> increments(const SampledField& field);

}  // namespace fsw
