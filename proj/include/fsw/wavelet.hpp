#pragma once

// Periodized, tensor-product orthonormal wavelet bases on [0, L)^d and the
// fast wavelet transform between sampled fields and coefficient fields.
//
// Atoms are L^2-normalized. A coefficient field of a grid with 2^J points per
// axis stores wavelet atoms psi_{jk}^e for j_min <= j < J and e in
// {0,1}^d \ {0}, plus scaling atoms at the coarsest level j_min, in the usual
// Mallat layout: along each axis, position 2^j e_a + k_a.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "fsw/grid.hpp"

namespace fsw {

enum class WaveletFamily { daubechies };

class WaveletBasis {
 public:
  /// Daubechies orders 1..10 are supported (order 1 is Haar). Throws
  /// ParameterError for unsupported orders or dimensions outside 1..3.
  static WaveletBasis build(WaveletFamily family, int order, std::size_t d);

  WaveletFamily family() const noexcept { return family_; }
  int order() const noexcept { return order_; }
  std::size_t dim() const noexcept { return d_; }
  /// Estimated Holder regularity of the mother wavelet.
  double regularity() const noexcept { return regularity_; }

  const std::vector<double>& lowpass() const noexcept { return lowpass_; }
  const std::vector<double>& highpass() const noexcept { return highpass_; }

  bool operator==(const WaveletBasis& o) const noexcept {
    return family_ == o.family_ && order_ == o.order_ && d_ == o.d_;
  }

 private:
  WaveletFamily family_ = WaveletFamily::daubechies;
  int order_ = 1;
  std::size_t d_ = 1;
  double regularity_ = 0.0;
  std::vector<double> lowpass_;
  std::vector<double> highpass_;
};

/// Minimum-phase Daubechies low-pass filter with `order` vanishing moments,
/// obtained by spectral factorization. sum h = sqrt(2).
std::vector<double> daubechies_lowpass(int order);

struct DyadicIndex {
  int j = 0;
  std::vector<std::int64_t> k;
  /// Orientation bits; all zero marks a scaling atom.
  std::vector<int> e;

  bool is_scaling() const noexcept;
  bool operator==(const DyadicIndex&) const = default;
};

struct Cube {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// 2^{-j} (k + [0,1)^d), optionally scaled by the domain length L.
Cube dyadic_cube(const DyadicIndex& index, double length = 1.0);

class CoeffField {
 public:
  CoeffField() = default;
  /// Zero coefficients for a cube grid of side 2^J, decomposed down to j_min.
  CoeffField(Grid grid, int j_min);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return grid_.dim(); }
  int levels() const noexcept { return levels_; }
  int j_min() const noexcept { return j_min_; }
  int j_max() const noexcept { return levels_ - 1; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  /// Storage position of an atom. Throws ParameterError if out of range.
  std::size_t position(const DyadicIndex& index) const;
  DyadicIndex index_at(std::size_t position) const;
  /// Scale level of the atom stored at `position`; scaling atoms report j_min
  /// and set `scaling`.
  int level_at(std::size_t position, bool& scaling) const noexcept;

  double& at(const DyadicIndex& index) { return data_[position(index)]; }
  double at(const DyadicIndex& index) const { return data_[position(index)]; }

  /// sum |c|^p over all stored atoms (p = 2 gives the energy).
  double lp_sum(double p) const;

 private:
  Grid grid_;
  int levels_ = 0;
  int j_min_ = 0;
  std::vector<double> data_;
};

/// Forward periodized transform of a field on a cube grid with side 2^J,
/// J > j_min >= 0. Samples are weighted by h^{d/2} so that coefficients
/// approximate <f, psi_{jk}^e> and sum c^2 = sum f^2 h^d.
CoeffField analyze(const SampledField& field, const WaveletBasis& basis, int j_min = 0);

/// Inverse of analyze.
SampledField synthesize(const CoeffField& coeffs, const WaveletBasis& basis);

}  // namespace fsw
