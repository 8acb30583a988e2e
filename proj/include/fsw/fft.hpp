#pragma once

// Real-to-complex FFTs on periodic grids and radial Fourier multipliers.
// Frequencies follow lambda = n / L per axis (the e^{-2 pi i lambda x}
// convention), so a radial multiplier m is applied as m(|lambda|).

#include <complex>
#include <functional>
#include <vector>

#include "fsw/grid.hpp"

namespace fsw {

struct Spectrum {
  Grid grid;
  /// Half-complex layout: last axis keeps n/2 + 1 bins. Unnormalized DFT.
  std::vector<std::complex<double>> bins;

  /// Calls f(bin_value, frequency_vector, |frequency|, multiplicity) for every
  /// stored bin. Multiplicity is 2 for bins whose conjugate partner is not
  /// stored, else 1.
  void for_each(const std::function<void(std::complex<double>&, const Point&, double, int)>& f);
};

Spectrum forward(const SampledField& f);
SampledField inverse(const Spectrum& s);

/// Returns (m(|lambda|) f^)^vee for a real radial multiplier m.
SampledField apply_radial_multiplier(const SampledField& f,
                                     const std::function<double(double)>& m);

}  // namespace fsw
