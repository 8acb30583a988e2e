#include "fsw/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fsw/error.hpp"
#include "fsw/fracop.hpp"

namespace fsw {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void check_grid(const Grid& grid, const WaveletBasis& basis) {
  if (grid.dim() != basis.dim()) {
    throw ParameterError("grid dimension " + std::to_string(grid.dim()) +
                         " does not match basis dimension " + std::to_string(basis.dim()));
  }
  if (grid.dyadic_levels() < 1) {
    throw ParameterError("synthesis needs a cube grid with power-of-two side");
  }
}

void check_regularity(double gamma, const WaveletBasis& basis) {
  if (!(gamma < basis.regularity())) {
    throw ParameterError("gamma = " + fmt(gamma) + " violates gamma < r = " +
                         fmt(basis.regularity()) + " (Daubechies order " +
                         std::to_string(basis.order()) + ")");
  }
}

// Keep-mask of a rung expressed in a decomposition down to `j0` <= rung.j_min.
// Scaling atoms at j0 and wavelets below rung.j_min belong to the rung's
// scaling space when the rung keeps its scaling atoms.
bool rung_keeps(const TruncationSpec& t, int level, bool scaling) {
  if (scaling) return t.include_scaling;
  if (level >= t.j_min) return level <= t.j_max;
  return t.include_scaling;
}

}  // namespace

TruncationSpec TruncationSpec::full(const Grid& grid) {
  const int J = grid.dyadic_levels();
  if (J < 1) throw ParameterError("full truncation needs a cube grid with power-of-two side");
  return TruncationSpec{0, J - 1, true};
}

void TruncationSpec::validate(const Grid& grid) const {
  const int J = grid.dyadic_levels();
  if (J < 1) throw ParameterError("truncation needs a cube grid with power-of-two side");
  if (j_min < 0) throw ParameterError("truncation j_min must be >= 0");
  if (j_min > j_max) {
    throw ParameterError("truncation violates j_min <= j_max (" + std::to_string(j_min) + " > " +
                         std::to_string(j_max) + ")");
  }
  if (j_max >= J) {
    throw ParameterError("truncation j_max = " + std::to_string(j_max) +
                         " exceeds grid resolution (2^j_max must be below the side " +
                         std::to_string(grid.side(0)) + ")");
  }
}

bool TruncationSpec::keeps(int level, bool scaling) const noexcept {
  return rung_keeps(*this, level, scaling);
}

bool TruncationSpec::contains(const TruncationSpec& inner) const noexcept {
  const int j0 = std::min(j_min, inner.j_min);
  const int j1 = std::max(j_max, inner.j_max);
  if (inner.keeps(j0, true) && !keeps(j0, true)) return false;
  for (int j = j0; j <= j1; ++j) {
    if (inner.keeps(j, false) && !keeps(j, false)) return false;
  }
  return true;
}

void restrict_to(CoeffField& coeffs, const TruncationSpec& trunc) {
  if (coeffs.j_min() > trunc.j_min) {
    throw ParameterError("coefficients are not decomposed down to the truncation's j_min");
  }
  auto& c = coeffs.data();
  for (std::size_t i = 0; i < c.size(); ++i) {
    bool scaling = false;
    const int j = coeffs.level_at(i, scaling);
    if (!trunc.keeps(j, scaling)) c[i] = 0.0;
  }
}

void check_pairing_window(double gamma, double p, std::size_t d, const WaveletBasis& basis) {
  const double dd = static_cast<double>(d);
  if (!(p > 0.0 && p <= 2.0)) throw ParameterError("p = " + fmt(p) + " outside (0, 2]");
  if (p == 2.0) {
    if (!(gamma >= 0.0)) throw ParameterError("gamma = " + fmt(gamma) + " violates gamma >= 0");
    if (!(gamma <= dd / 2.0)) {
      throw ParameterError("gamma = " + fmt(gamma) + " violates gamma <= d/2 = " + fmt(dd / 2.0));
    }
  } else {
    if (!(p > 4.0 / 3.0)) {
      throw ParameterError("p = " + fmt(p) + " violates p > 4/3 (the gamma window is empty)");
    }
    const double lo = dd * (1.0 / p - 0.5);
    const double hi = dd * (1.0 - 1.0 / p);
    if (!(gamma > lo)) {
      throw ParameterError("gamma = " + fmt(gamma) + " violates gamma > d(1/p - 1/2) = " + fmt(lo));
    }
    if (!(gamma <= hi)) {
      throw ParameterError("gamma = " + fmt(gamma) + " violates gamma <= d(1 - 1/p) = " + fmt(hi));
    }
  }
  check_regularity(gamma, basis);
}

void check_field_window(double gamma, double p, std::size_t d, const WaveletBasis& basis) {
  const double dd = static_cast<double>(d);
  if (!(p > 1.0 && p <= 2.0)) throw ParameterError("p = " + fmt(p) + " violates 1 < p <= 2");
  const double lo = dd / 2.0;
  const double hi = dd * (1.0 - 1.0 / p) + 1.0;
  if (p == 2.0) {
    if (!(gamma >= lo)) throw ParameterError("gamma = " + fmt(gamma) + " violates gamma >= d/2 = " + fmt(lo));
  } else if (!(gamma > lo)) {
    throw ParameterError("gamma = " + fmt(gamma) + " violates gamma > d/2 = " + fmt(lo));
  }
  if (!(gamma <= hi)) {
    throw ParameterError("gamma = " + fmt(gamma) + " violates gamma <= d(1 - 1/p) + 1 = " + fmt(hi));
  }
  check_regularity(gamma, basis);
}

SampledField dilated_potential(const TestFunction& phi, double gamma, double a, const Grid& grid) {
  if (!(a > 0.0)) throw ParameterError("dilation must be positive");
  SampledField g = riesz_apply(phi.sample(grid, a), gamma);
  const double s = std::pow(a, gamma);
  for (double& v : g.values) v *= s;
  return g;
}

PairingResult pair_scale(const TestFunction& phi, double gamma, double p, double a,
                         const WaveletBasis& basis, const Grid& grid, const TruncationSpec& trunc,
                         WindowPolicy policy) {
  check_grid(grid, basis);
  trunc.validate(grid);
  if (phi.dim() != grid.dim()) throw ParameterError("test function dimension mismatch");
  if (!policy.unsafe) check_pairing_window(gamma, p, grid.dim(), basis);
  if (!(p > 0.0 && p <= 2.0)) throw ParameterError("p outside (0, 2]");

  const SampledField g = dilated_potential(phi, gamma, a, grid);
  PairingResult out;
  out.p = p;
  out.dilation = a;
  out.coefficients = analyze(g, basis, trunc.j_min);
  restrict_to(out.coefficients, trunc);
  const double ad = std::pow(a, static_cast<double>(grid.dim()) / 2.0);
  out.sigma = ad * std::pow(out.coefficients.lp_sum(p), 1.0 / p);
  out.l2 = ad * lp_norm(g, 2.0);
  return out;
}

std::vector<double> pair_sample(const CoeffField& coefficients, const StableLaw& law,
                                std::size_t n, std::uint64_t seed) {
  std::vector<double> w;
  for (double c : coefficients.data()) {
    if (c != 0.0) w.push_back(c);
  }
  std::vector<double> out(n, 0.0);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t m = 0; m < count; ++m) {
    Stream s(seed, static_cast<std::uint64_t>(m));
    double acc = 0.0;
    for (double c : w) acc += c * draw(law, s);
    out[static_cast<std::size_t>(m)] = acc;
  }
  return out;
}

std::vector<double> pair_sample(const TestFunction& phi, double gamma, const StableLaw& law,
                                const WaveletBasis& basis, const Grid& grid,
                                const TruncationSpec& trunc, std::size_t n, std::uint64_t seed,
                                WindowPolicy policy) {
  const auto r = pair_scale(phi, gamma, law.p(), 1.0, basis, grid, trunc, policy);
  return pair_sample(r.coefficients, law, n, seed);
}

CoeffField draw_coefficients(const StableLaw& law, const Grid& grid, const TruncationSpec& trunc,
                             std::uint64_t seed) {
  trunc.validate(grid);
  CoeffField c(grid, trunc.j_min);
  const auto eta = sample_sps(law, grid.count(), seed, 0);
  auto& data = c.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    bool scaling = false;
    const int j = c.level_at(i, scaling);
    data[i] = trunc.keeps(j, scaling) ? eta[i] : 0.0;
  }
  return c;
}

SampledField wavelet_noise(const StableLaw& law, const Grid& grid, const WaveletBasis& basis,
                           const TruncationSpec& trunc, std::uint64_t seed) {
  check_grid(grid, basis);
  return synthesize(draw_coefficients(law, grid, trunc, seed), basis);
}

SampledField field_y(double gamma, const StableLaw& law, const Grid& grid,
                     const WaveletBasis& basis, const TruncationSpec& trunc, std::uint64_t seed,
                     WindowPolicy policy) {
  check_grid(grid, basis);
  if (!policy.unsafe) check_field_window(gamma, law.p(), grid.dim(), basis);
  SampledField y = modified_apply(wavelet_noise(law, grid, basis, trunc, seed), gamma);
  y.values[0] = 0.0;
  return y;
}

SampledField field_x(double gamma, const StableLaw& law, const Grid& grid,
                     const WaveletBasis& basis, const TruncationSpec& trunc, std::uint64_t seed) {
  check_grid(grid, basis);
  return riesz_apply(wavelet_noise(law, grid, basis, trunc, seed), gamma);
}

double increment_scale(double gamma, const StableLaw& law, const Point& x, const Point& x_prime,
                       const WaveletBasis& basis, const Grid& grid, const TruncationSpec& trunc,
                       WindowPolicy policy) {
  check_grid(grid, basis);
  trunc.validate(grid);
  if (!policy.unsafe) check_field_window(gamma, law.p(), grid.dim(), basis);
  const std::size_t i = grid.nearest(x);
  const std::size_t k = grid.nearest(x_prime);
  if (i == k) return 0.0;
  SampledField spikes(grid);
  spikes[i] = 1.0;
  spikes[k] = -1.0;
  CoeffField c = analyze(riesz_apply(spikes, gamma), basis, trunc.j_min);
  restrict_to(c, trunc);
  const double p = law.p();
  return std::pow(c.lp_sum(p), 1.0 / p) / grid.cell_volume();
}

void check_ladder(const std::vector<TruncationSpec>& ladder, const Grid& grid) {
  if (ladder.empty()) throw ParameterError("empty truncation ladder");
  for (const auto& t : ladder) t.validate(grid);
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (!ladder[i].contains(ladder[i - 1])) {
      throw ParameterError("truncation ladder is not nested at rung " + std::to_string(i));
    }
  }
}

namespace {

int ladder_floor(const std::vector<TruncationSpec>& ladder) {
  int j0 = ladder.front().j_min;
  for (const auto& t : ladder) j0 = std::min(j0, t.j_min);
  return j0;
}

TailReport finish(std::vector<double> residuals) {
  TailReport r;
  r.residuals = std::move(residuals);
  r.strictly_decreasing = true;
  for (std::size_t i = 1; i < r.residuals.size(); ++i) {
    const double prev = r.residuals[i - 1];
    r.ratios.push_back(prev > 0.0 ? r.residuals[i] / prev : 0.0);
    if (!(r.residuals[i] < prev)) r.strictly_decreasing = false;
    if (r.ratios.back() > 0.95) r.plateau = true;
  }
  return r;
}

}  // namespace

TailReport pairing_tails(const TestFunction& phi, double gamma, double p,
                         const WaveletBasis& basis, const Grid& grid,
                         const std::vector<TruncationSpec>& ladder, WindowPolicy policy) {
  check_grid(grid, basis);
  check_ladder(ladder, grid);
  if (!policy.unsafe) check_pairing_window(gamma, p, grid.dim(), basis);
  const CoeffField c = analyze(dilated_potential(phi, gamma, 1.0, grid), basis, ladder_floor(ladder));
  const double total = c.lp_sum(p);
  std::vector<double> res;
  for (const auto& t : ladder) {
    double out = 0.0;
    const auto& data = c.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
      bool scaling = false;
      const int j = c.level_at(i, scaling);
      if (!t.keeps(j, scaling)) out += std::pow(std::abs(data[i]), p);
    }
    res.push_back(total > 0.0 ? out / total : 0.0);
  }
  return finish(std::move(res));
}

TailReport field_tails(double gamma, const StableLaw& law, const WaveletBasis& basis,
                       const Grid& grid, const std::vector<TruncationSpec>& ladder,
                       std::uint64_t seed, WindowPolicy policy) {
  check_grid(grid, basis);
  check_ladder(ladder, grid);
  if (!policy.unsafe) check_field_window(gamma, law.p(), grid.dim(), basis);
  const int j0 = ladder_floor(ladder);
  const CoeffField eta = draw_coefficients(law, grid, TruncationSpec{j0, grid.dyadic_levels() - 1, true}, seed);
  std::vector<double> res;
  for (const auto& t : ladder) {
    CoeffField excluded = eta;
    auto& data = excluded.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
      bool scaling = false;
      const int j = excluded.level_at(i, scaling);
      if (t.keeps(j, scaling)) data[i] = 0.0;
    }
    const SampledField y = modified_apply(synthesize(excluded, basis), gamma);
    res.push_back(weighted_fourier_norm(y, law.p()));
  }
  return finish(std::move(res));
}

}  // namespace fsw
