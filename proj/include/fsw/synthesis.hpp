#pragma once

// Realizations of the random fractional wavelet series
//   X_g = sum eta_{jke} I_g psi_{jk}^e      (generalized process, via pairings)
//   Y_g = sum eta_{jke} K_g psi_{jk}^e      (pointwise field)
// with eta iid SpS, truncated to a finite window of scales on a periodic grid.

#include <cstdint>
#include <vector>

#include "fsw/grid.hpp"
#include "fsw/stable.hpp"
#include "fsw/test_function.hpp"
#include "fsw/wavelet.hpp"

namespace fsw {

/// Finite window of atoms: wavelets with j_min <= j <= j_max (all translates
/// on the grid, all non-zero orientations) plus, optionally, the scaling
/// atoms at level j_min.
struct TruncationSpec {
  int j_min = 0;
  int j_max = 0;
  bool include_scaling = true;

  /// Default window for a grid with side 2^J: j in [0, J-1] with scaling atoms.
  static TruncationSpec full(const Grid& grid);

  /// Throws ParameterError unless 0 <= j_min <= j_max < J.
  void validate(const Grid& grid) const;

  /// True if every atom of `inner` is also in this window.
  bool contains(const TruncationSpec& inner) const noexcept;

  bool keeps(int level, bool scaling) const noexcept;
};

/// Zeroes every coefficient outside the window. The coefficient field must be
/// decomposed down to trunc.j_min.
void restrict_to(CoeffField& coeffs, const TruncationSpec& trunc);

/// Parameter-window validation mode. `unsafe` skips the checks so negative
/// controls can be computed outside the admissible range.
struct WindowPolicy {
  bool unsafe = false;
};

/// Admissible range for pairings <X_g, phi>: d(1/p - 1/2) < g <= d(1 - 1/p),
/// p >= 4/3, g < r; for p = 2, 0 <= g <= d/2.
void check_pairing_window(double gamma, double p, std::size_t d, const WaveletBasis& basis);

/// Admissible range for the pointwise field: d/2 < g <= d(1 - 1/p) + 1 with
/// p > 1, g < r; for p = 2, d/2 <= g <= d/2 + 1.
void check_field_window(double gamma, double p, std::size_t d, const WaveletBasis& basis);

struct PairingResult {
  /// SpS scale of a^{d/2 + g} <X_g, phi(a .)>.
  double sigma = 0.0;
  /// a^{d/2} ||(I_g phi)(a .)||_{L^2}, which equals ||I_g phi||_{L^2} by scaling.
  double l2 = 0.0;
  double p = 2.0;
  double dilation = 1.0;
  /// Wavelet coefficients <(I_g phi)(a .), psi_{jk}^e> within the window.
  CoeffField coefficients;
};

/// (I_g phi)(a .) sampled on `grid`, computed as a^g I_g[phi(a .)].
SampledField dilated_potential(const TestFunction& phi, double gamma, double a, const Grid& grid);

PairingResult pair_scale(const TestFunction& phi, double gamma, double p, double a,
                         const WaveletBasis& basis, const Grid& grid, const TruncationSpec& trunc,
                         WindowPolicy policy = {});

/// n draws of <X_g, phi> = sum eta_{jke} <I_g phi, psi_{jk}^e> over the
/// window. Draw m uses stream m of `seed`, so results do not depend on the
/// thread count.
std::vector<double> pair_sample(const TestFunction& phi, double gamma, const StableLaw& law,
                                const WaveletBasis& basis, const Grid& grid,
                                const TruncationSpec& trunc, std::size_t n, std::uint64_t seed,
                                WindowPolicy policy = {});

/// Same, from precomputed pairing coefficients.
std::vector<double> pair_sample(const CoeffField& coefficients, const StableLaw& law,
                                std::size_t n, std::uint64_t seed);

/// iid SpS coefficients over the window (zero elsewhere), in storage order.
CoeffField draw_coefficients(const StableLaw& law, const Grid& grid, const TruncationSpec& trunc,
                             std::uint64_t seed);

/// sum eta psi over the window: wavelet white noise restricted to the window.
SampledField wavelet_noise(const StableLaw& law, const Grid& grid, const WaveletBasis& basis,
                           const TruncationSpec& trunc, std::uint64_t seed);

/// Y_g = K_g(sum eta psi); Y_g(0) = 0 exactly.
SampledField field_y(double gamma, const StableLaw& law, const Grid& grid,
                     const WaveletBasis& basis, const TruncationSpec& trunc, std::uint64_t seed,
                     WindowPolicy policy = {});

/// X_g-type field I_g(sum eta psi) sampled on the grid (no window check; a
/// smoothed observation of the generalized process).
SampledField field_x(double gamma, const StableLaw& law, const Grid& grid,
                     const WaveletBasis& basis, const TruncationSpec& trunc, std::uint64_t seed);

/// Exact SpS scale of Y_g(x) - Y_g(x') for the truncated series:
/// (sum |<K_g(x,.) - K_g(x',.), psi>|^p)^{1/p}. Points are snapped to the
/// nearest grid node.
double increment_scale(double gamma, const StableLaw& law, const Point& x, const Point& x_prime,
                       const WaveletBasis& basis, const Grid& grid, const TruncationSpec& trunc,
                       WindowPolicy policy = {});

struct TailReport {
  /// Excluded mass (pairings: sum |c|^p; fields: weighted Fourier norm) per rung.
  std::vector<double> residuals;
  /// residual[i+1] / residual[i].
  std::vector<double> ratios;
  bool strictly_decreasing = false;
  /// Some consecutive ratio exceeds 0.95: the excluded mass is not decaying.
  bool plateau = false;
};

/// Validates that the ladder is nested (each rung contains the previous one).
void check_ladder(const std::vector<TruncationSpec>& ladder, const Grid& grid);

/// p-th power coefficient mass of <I_g phi, psi> outside each rung, relative
/// to the full window of the grid.
TailReport pairing_tails(const TestFunction& phi, double gamma, double p,
                         const WaveletBasis& basis, const Grid& grid,
                         const std::vector<TruncationSpec>& ladder, WindowPolicy policy = {});

/// Weighted Fourier norm (exponent d, order p) of K_g applied to the part of
/// a fixed realization sum eta psi that lies outside each rung.
TailReport field_tails(double gamma, const StableLaw& law, const WaveletBasis& basis,
                       const Grid& grid, const std::vector<TruncationSpec>& ladder,
                       std::uint64_t seed, WindowPolicy policy = {});

}  // namespace fsw
