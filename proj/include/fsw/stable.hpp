#pragma once

// Symmetric p-stable (SpS) laws with characteristic function
//   Phi(xi) = exp(-sigma^p |xi|^p),   0 < p <= 2, sigma > 0.
// Note the convention: p = 2 is a centred Gaussian with variance 2 sigma^2,
// p = 1 is Cauchy with scale sigma.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fsw/rng.hpp"

namespace fsw {

class StableLaw {
 public:
  /// Throws ParameterError unless 0 < p <= 2 and sigma > 0.
  StableLaw(double p, double sigma = 1.0);

  double p() const noexcept { return p_; }
  double sigma() const noexcept { return sigma_; }

  bool operator==(const StableLaw&) const = default;

 private:
  double p_;
  double sigma_;
};

double char_fn(const StableLaw& law, double xi);

/// One Chambers-Mallows-Stuck draw from `law`.
double draw(const StableLaw& law, Stream& stream);

/// n iid draws. Draws are generated in fixed blocks, each from its own
/// substream of (seed, stream_id), so the result is independent of the
/// number of threads. Throws ParameterError for n == 0.
std::vector<double> sample_sps(const StableLaw& law, std::size_t n, std::uint64_t seed,
                               std::uint64_t stream_id = 0);

/// Distribution function by Gil-Pelaez inversion of the characteristic
/// function; exact closed forms for p = 1 and p = 2. Throws QuadratureError
/// if the absolute error target (1e-6) is not met.
double sps_cdf(const StableLaw& law, double x);

/// Density of the law, by cosine inversion of the characteristic function.
double sps_pdf(const StableLaw& law, double x);

/// (E|eta|^r)^{1/r} = C_r sigma for 0 < r < p, with C_r^r obtained by
/// integrating |x|^r against the unit-scale density. Throws ParameterError
/// ("infinite moment") when r >= p.
double fractional_moment(const StableLaw& law, double r);

/// Scale of a sum of independent SpS variables sharing the same p:
/// (sum sigma_i^p)^{1/p}. Throws ParameterError on mixed p or empty input.
double scale_of_sum(std::span<const StableLaw> laws);

/// Empirical characteristic function (real part) of a sample at xi.
double empirical_char_fn(std::span<const double> samples, double xi);

}  // namespace fsw
