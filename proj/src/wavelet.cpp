#include "fsw/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>
#include <string>

#include <Eigen/Core>
#include <unsupported/Eigen/Polynomials>

#include "fsw/error.hpp"

namespace fsw {

namespace {

constexpr int kMaxOrder = 10;

// Holder exponents of the Daubechies mother wavelets (Daubechies 1992,
// Rioul 1992). Haar is discontinuous; it is listed with its L^2-Sobolev
// exponent 1/2.
constexpr std::array<double, kMaxOrder + 1> kHolder = {
    0.0, 0.5, 0.5500, 1.0878, 1.6179, 1.9690, 2.1891, 2.4604, 2.7608, 3.0736, 3.3614};

double binomial(int n, int k) {
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                             std::lgamma(n - k + 1.0)));
}

// Newton polish of a root of the polynomial with ascending coefficients c.
std::complex<long double> polish(const std::vector<long double>& c, std::complex<long double> z) {
  for (int it = 0; it < 8; ++it) {
    std::complex<long double> f = 0, df = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      df = df * z + f;
      f = f * z + c[i];
    }
    if (std::abs(df) == 0) break;
    z -= f / df;
  }
  return z;
}

void check_dimension(std::size_t d) {
  if (d < 1 || d > kMaxDim) {
    throw ParameterError("wavelet dimension must be between 1 and 3, got " + std::to_string(d));
  }
}

// One periodized analysis step on a line of even length m.
void analysis_step(const double* in, double* lo, double* hi, std::size_t m,
                   const std::vector<double>& h, const std::vector<double>& g) {
  const std::size_t half = m / 2;
  for (std::size_t k = 0; k < half; ++k) {
    double a = 0.0, b = 0.0;
    for (std::size_t n = 0; n < h.size(); ++n) {
      const double v = in[(2 * k + n) % m];
      a += h[n] * v;
      b += g[n] * v;
    }
    lo[k] = a;
    hi[k] = b;
  }
}

void synthesis_step(const double* lo, const double* hi, double* out, std::size_t m,
                    const std::vector<double>& h, const std::vector<double>& g) {
  std::fill(out, out + m, 0.0);
  const std::size_t half = m / 2;
  for (std::size_t k = 0; k < half; ++k) {
    for (std::size_t n = 0; n < h.size(); ++n) {
      out[(2 * k + n) % m] += h[n] * lo[k] + g[n] * hi[k];
    }
  }
}

// Applies a 1-D step along every axis of the leading block [0, m)^d.
template <typename Step>
void block_pass(std::vector<double>& data, const Grid& grid, std::size_t m, bool forward,
                Step&& step) {
  const std::size_t d = grid.dim();
  const std::size_t n = grid.side(0);
  std::vector<std::size_t> stride(d, 1);
  for (std::size_t a = d - 1; a-- > 0;) stride[a] = stride[a + 1] * n;

  std::vector<double> line(m), a_half(m / 2), b_half(m / 2), out(m);
  auto run_axis = [&](std::size_t axis) {
    // Enumerate the starting points of lines along `axis` within the block.
    std::size_t lines = 1;
    for (std::size_t a = 0; a < d; ++a) {
      if (a != axis) lines *= m;
    }
    for (std::size_t l = 0; l < lines; ++l) {
      std::size_t rest = l, base = 0;
      for (std::size_t a = d; a-- > 0;) {
        if (a == axis) continue;
        base += (rest % m) * stride[a];
        rest /= m;
      }
      const std::size_t s = stride[axis];
      for (std::size_t i = 0; i < m; ++i) line[i] = data[base + i * s];
      if (forward) {
        step(line.data(), a_half.data(), b_half.data(), out.data());
        for (std::size_t i = 0; i < m / 2; ++i) {
          data[base + i * s] = a_half[i];
          data[base + (i + m / 2) * s] = b_half[i];
        }
      } else {
        std::copy(line.begin(), line.begin() + m / 2, a_half.begin());
        std::copy(line.begin() + m / 2, line.end(), b_half.begin());
        step(line.data(), a_half.data(), b_half.data(), out.data());
        for (std::size_t i = 0; i < m; ++i) data[base + i * s] = out[i];
      }
    }
  };
  if (forward) {
    for (std::size_t axis = 0; axis < d; ++axis) run_axis(axis);
  } else {
    for (std::size_t axis = d; axis-- > 0;) run_axis(axis);
  }
}

void check_transform_grid(const Grid& grid, std::size_t basis_dim, int j_min) {
  const int levels = grid.dyadic_levels();
  if (levels < 1) {
    throw ParameterError("wavelet transform needs a cube grid with power-of-two side >= 2");
  }
  if (grid.dim() != basis_dim) {
    throw ParameterError("wavelet basis dimension does not match the grid");
  }
  if (j_min < 0 || j_min >= levels) {
    throw ParameterError("coarsest level j_min=" + std::to_string(j_min) +
                         " outside [0, " + std::to_string(levels - 1) + "]");
  }
}

}  // namespace

std::vector<double> daubechies_lowpass(int order) {
  if (order < 1 || order > kMaxOrder) {
    throw ParameterError("unsupported Daubechies order " + std::to_string(order) +
                         " (supported: 1.." + std::to_string(kMaxOrder) + ")");
  }
  const int n = order;
  // P(y) = sum_{k<N} C(N-1+k, k) y^k; each root y_i yields the pair z, 1/z of
  // z^2 - (2 - 4 y_i) z + 1 and the minimum-phase factor keeps |z| < 1.
  std::vector<std::complex<long double>> zeros;
  if (n > 1) {
    Eigen::VectorXd coeffs(n);
    std::vector<long double> coeffs_ld(n);
    for (int k = 0; k < n; ++k) {
      coeffs(k) = binomial(n - 1 + k, k);
      coeffs_ld[k] = coeffs(k);
    }
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
    for (const auto& root : solver.roots()) {
      const auto y = polish(coeffs_ld, {root.real(), root.imag()});
      const auto b = 2.0L - 4.0L * y;
      const auto disc = std::sqrt(b * b - 4.0L);
      auto z = (b - disc) / 2.0L;
      if (std::abs(z) > 1.0L) z = (b + disc) / 2.0L;
      zeros.push_back(z);
    }
  }
  for (int i = 0; i < n; ++i) zeros.emplace_back(-1.0L, 0.0L);

  // Expand prod (z - z_i) in ascending powers.
  std::vector<std::complex<long double>> poly{1.0L};
  for (const auto& z0 : zeros) {
    std::vector<std::complex<long double>> next(poly.size() + 1, 0.0L);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= z0 * poly[i];
    }
    poly = std::move(next);
  }
  long double total = 0.0L;
  for (const auto& c : poly) total += c.real();
  std::vector<double> h(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) {
    h[i] = static_cast<double>(poly[i].real() * std::sqrt(2.0L) / total);
  }
  // Largest taps first (minimum phase ordering used in the literature).
  if (std::abs(h.front()) < std::abs(h.back())) std::reverse(h.begin(), h.end());
  return h;
}

WaveletBasis WaveletBasis::build(WaveletFamily family, int order, std::size_t d) {
  check_dimension(d);
  WaveletBasis b;
  b.family_ = family;
  b.order_ = order;
  b.d_ = d;
  b.lowpass_ = daubechies_lowpass(order);
  const std::size_t len = b.lowpass_.size();
  b.highpass_.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    b.highpass_[i] = ((i % 2 == 0) ? 1.0 : -1.0) * b.lowpass_[len - 1 - i];
  }
  b.regularity_ = kHolder[static_cast<std::size_t>(order)];
  return b;
}

bool DyadicIndex::is_scaling() const noexcept {
  return std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
}

Cube dyadic_cube(const DyadicIndex& index, double length) {
  Cube c;
  const double width = length * std::ldexp(1.0, -index.j);
  for (auto k : index.k) {
    c.lower.push_back(width * static_cast<double>(k));
    c.upper.push_back(width * static_cast<double>(k + 1));
  }
  return c;
}

CoeffField::CoeffField(Grid grid, int j_min) : grid_(std::move(grid)), j_min_(j_min) {
  levels_ = grid_.dyadic_levels();
  if (levels_ < 1) {
    throw ParameterError("coefficient fields need a cube grid with power-of-two side >= 2");
  }
  if (j_min < 0 || j_min >= levels_) {
    throw ParameterError("coarsest level j_min=" + std::to_string(j_min) + " outside [0, " +
                         std::to_string(levels_ - 1) + "]");
  }
  data_.assign(grid_.count(), 0.0);
}

std::size_t CoeffField::position(const DyadicIndex& index) const {
  const std::size_t d = dim();
  if (index.k.size() != d || index.e.size() != d) {
    throw ParameterError("dyadic index has wrong dimension");
  }
  const bool scaling = index.is_scaling();
  if (scaling ? index.j != j_min_ : (index.j < j_min_ || index.j > j_max())) {
    throw ParameterError("dyadic index level " + std::to_string(index.j) +
                         " not stored in this coefficient field");
  }
  const std::int64_t width = std::int64_t{1} << index.j;
  MultiIndex q{};
  for (std::size_t a = 0; a < d; ++a) {
    if (index.k[a] < 0 || index.k[a] >= width) {
      throw ParameterError("dyadic translate out of range for level " + std::to_string(index.j));
    }
    q[a] = static_cast<std::size_t>(index.e[a] * width + index.k[a]);
  }
  return grid_.ravel(q);
}

int CoeffField::level_at(std::size_t pos, bool& scaling) const noexcept {
  const auto q = grid_.unravel(pos);
  int j = j_min_ - 1;
  for (std::size_t a = 0; a < dim(); ++a) {
    int l = j_min_ - 1;
    if (q[a] >= (std::size_t{1} << j_min_)) {
      l = 0;
      while ((std::size_t{2} << l) <= q[a]) ++l;
    }
    j = std::max(j, l);
  }
  scaling = (j == j_min_ - 1);
  return scaling ? j_min_ : j;
}

DyadicIndex CoeffField::index_at(std::size_t pos) const {
  bool scaling = false;
  const int j = level_at(pos, scaling);
  const auto q = grid_.unravel(pos);
  DyadicIndex idx;
  idx.j = j;
  const std::size_t width = std::size_t{1} << j;
  for (std::size_t a = 0; a < dim(); ++a) {
    const int e = (!scaling && q[a] >= width) ? 1 : 0;
    idx.e.push_back(e);
    idx.k.push_back(static_cast<std::int64_t>(e ? q[a] - width : q[a]));
  }
  return idx;
}

double CoeffField::lp_sum(double p) const {
  double acc = 0.0;
  if (p == 2.0) {
    for (double c : data_) acc += c * c;
  } else {
    for (double c : data_) acc += std::pow(std::abs(c), p);
  }
  return acc;
}

CoeffField analyze(const SampledField& field, const WaveletBasis& basis, int j_min) {
  check_transform_grid(field.grid, basis.dim(), j_min);
  CoeffField out(field.grid, j_min);
  auto& data = out.data();
  const double w = std::sqrt(field.grid.cell_volume());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = field.values[i] * w;

  const auto& h = basis.lowpass();
  const auto& g = basis.highpass();
  for (int level = out.levels() - 1; level >= j_min; --level) {
    const std::size_t m = std::size_t{2} << level;
    block_pass(data, field.grid, m, true, [&](const double* in, double* lo, double* hi, double*) {
      analysis_step(in, lo, hi, m, h, g);
    });
  }
  return out;
}

SampledField synthesize(const CoeffField& coeffs, const WaveletBasis& basis) {
  check_transform_grid(coeffs.grid(), basis.dim(), coeffs.j_min());
  std::vector<double> data = coeffs.data();
  const auto& h = basis.lowpass();
  const auto& g = basis.highpass();
  for (int level = coeffs.j_min(); level < coeffs.levels(); ++level) {
    const std::size_t m = std::size_t{2} << level;
    block_pass(data, coeffs.grid(), m, false,
               [&](const double*, double* lo, double* hi, double* out) {
                 synthesis_step(lo, hi, out, m, h, g);
               });
  }
  const double w = 1.0 / std::sqrt(coeffs.grid().cell_volume());
  for (double& v : data) v *= w;
  return SampledField(coeffs.grid(), std::move(data));
}

}  // namespace fsw
