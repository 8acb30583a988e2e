#include "fsw/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "fsw/error.hpp"
#include "fsw/fft.hpp"
#include "fsw/fracop.hpp"

namespace fsw {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_error = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_error = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return fit;
}

// Smooth cutoff: 1 on |x| <= 1/4, 0 on |x| >= 1/2.
double cutoff(double x) {
  const double t = (0.5 - std::abs(x)) * 4.0;
  if (t >= 1.0) return 1.0;
  if (t <= 0.0) return 0.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

}  // namespace

bool BoundReport::pass() const noexcept {
  const double slack = 1e-12;
  return lower <= value * (1.0 + slack) + 1e-300 && value <= upper * (1.0 + slack) + 1e-300;
}

std::string BoundReport::describe() const {
  std::ostringstream os;
  os.precision(10);
  os << "lower=" << lower << " value=" << value << " upper=" << upper << " constant=" << constant
     << " p=" << p << " s=" << s << " gamma=" << gamma << " a=" << a;
  return os.str();
}

void check_sobolev_window(double p, double s, std::size_t d, const WaveletBasis& basis) {
  if (!(p > 1.0 && p <= 2.0)) throw ParameterError("p = " + fmt(p) + " violates 1 < p <= 2");
  if (p == 2.0) {
    if (!(s >= 0.0)) throw ParameterError("s = " + fmt(s) + " violates s >= 0");
  } else {
    const double lo = static_cast<double>(d) * (1.0 / p - 0.5);
    if (!(s > lo)) throw ParameterError("s = " + fmt(s) + " violates s > d(1/p - 1/2) = " + fmt(lo));
  }
  if (!(s < basis.regularity())) {
    throw ParameterError("s = " + fmt(s) + " violates s < r = " + fmt(basis.regularity()));
  }
}

BoundReport t1_bounds(const SampledField& f, double p, double s, const WaveletBasis& basis) {
  if (f.grid.dim() != basis.dim()) throw ParameterError("field and basis dimensions differ");
  check_sobolev_window(p, s, f.grid.dim(), basis);
  const CoeffField c = analyze(f, basis, 0);
  BoundReport r;
  r.p = p;
  r.s = s;
  r.lower = lp_norm(f, 2.0);
  r.value = std::pow(c.lp_sum(p), 1.0 / p);
  r.upper = sobolev_norm(f, p, s);
  r.constant = r.upper > 0.0 ? r.value / r.upper : 0.0;
  return r;
}

BoundReport t1_bounds(const TestFunction& f, const Grid& grid, double p, double s,
                      const WaveletBasis& basis) {
  return t1_bounds(f.sample(grid), p, s, basis);
}

double t1_constant(double p, double s, const WaveletBasis& basis, const Grid& grid,
                   std::size_t count) {
  using Key = std::tuple<double, double, int, std::size_t, std::size_t, double, std::size_t>;
  static std::mutex mutex;
  static std::map<Key, double> cache;
  const Key key{p, s, basis.order(), basis.dim(), grid.side(0), grid.spacing(), count};
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const auto corpus = test_corpus(grid.dim(), count, grid.length(0));
  double best = 0.0;
  for (const auto& phi : corpus) best = std::max(best, t1_bounds(phi, grid, p, s, basis).constant);
  std::lock_guard<std::mutex> lock(mutex);
  cache[key] = best;
  return best;
}

double square_function_norm(const SampledField& f, double p, double s, const WaveletBasis& basis,
                            int j_min) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("square_function_norm requires 1 <= p < inf");
  if (!(s >= 0.0 && s <= basis.regularity())) throw ParameterError("square_function_norm requires 0 <= s <= r");
  const CoeffField c = analyze(f, basis, j_min);
  const Grid& grid = f.grid;
  const std::size_t d = grid.dim();
  const int J = c.levels();
  const double L = grid.length(0);

  std::vector<std::vector<double>> cells(static_cast<std::size_t>(J));
  for (int j = j_min; j < J; ++j) cells[static_cast<std::size_t>(j)].assign(std::size_t{1} << (j * static_cast<int>(d)), 0.0);

  const auto& data = c.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i] == 0.0) continue;
    bool scaling = false;
    const int j = c.level_at(i, scaling);
    const auto q = grid.unravel(i);
    const std::size_t mask = (std::size_t{1} << j) - 1;
    std::size_t cell = 0;
    for (std::size_t a = 0; a < d; ++a) cell = (cell << j) | (q[a] & mask);
    const double freq = std::ldexp(1.0, j) / L;
    const double w = 0.5 * (1.0 + std::pow(freq, 2.0 * s)) * std::pow(freq, static_cast<double>(d));
    cells[static_cast<std::size_t>(j)][cell] += data[i] * data[i] * w;
  }

  double acc = 0.0;
  for (std::size_t n = 0; n < grid.count(); ++n) {
    const auto m = grid.unravel(n);
    double s2 = 0.0;
    for (int j = j_min; j < J; ++j) {
      std::size_t cell = 0;
      for (std::size_t a = 0; a < d; ++a) cell = (cell << j) | (m[a] >> (J - j));
      s2 += cells[static_cast<std::size_t>(j)][cell];
    }
    acc += std::pow(s2, p / 2.0);
  }
  return std::pow(acc * grid.cell_volume(), 1.0 / p);
}

double sampling_constant(std::size_t d) {
  if (d < 1 || d > kMaxDim) throw ParameterError("sampling_constant requires 1 <= d <= 3");
  static std::once_flag once;
  static double sup_sum = 0.0;
  static std::vector<double> moments;  // int |phi_1| l^{2m} dl, m = 0..3
  std::call_once(once, [] {
    const std::size_t per_unit = 4096;
    const std::size_t n = std::size_t{1} << 18;
    const Grid g({n}, 1.0 / static_cast<double>(per_unit));
    SampledField chi(g);
    for (std::size_t i = 0; i < n; ++i) chi[i] = cutoff(g.centred_node(i)[0]);
    Spectrum spec = forward(chi);
    const double h = g.spacing();
    const double L = g.length(0);
    std::vector<double> phi(spec.bins.size());
    for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = std::abs(spec.bins[k].real()) * h;
    moments.assign(4, 0.0);
    for (std::size_t k = 0; k < phi.size(); ++k) {
      const double lambda = static_cast<double>(k) / L;
      const double w = (k == 0 ? 1.0 : 2.0) / L;
      for (int m = 0; m < 4; ++m) moments[static_cast<std::size_t>(m)] += w * phi[k] * std::pow(lambda, 2 * m);
    }
    const auto step = static_cast<std::size_t>(L);
    for (std::size_t off = 0; off <= step / 2; ++off) {
      double acc = 0.0;
      for (std::size_t k = off; k < phi.size(); k += step) acc += phi[k];
      for (std::size_t k = step - off; k < phi.size(); k += step) acc += phi[k];
      sup_sum = std::max(sup_sum, acc);
    }
  });

  // int (1 + |l|^2)^d prod |phi_1(l_a)| dl, expanded multinomially.
  const int dd = static_cast<int>(d);
  std::vector<double> fact{1, 1, 2, 6};
  double integral = 0.0;
  std::vector<int> m(d, 0);
  while (true) {
    int used = 0;
    for (int v : m) used += v;
    if (used <= dd) {
      double term = fact[static_cast<std::size_t>(dd)] / fact[static_cast<std::size_t>(dd - used)];
      for (int v : m) term *= moments[static_cast<std::size_t>(v)] / fact[static_cast<std::size_t>(v)];
      integral += term;
    }
    std::size_t a = 0;
    while (a < d && ++m[a] > dd) m[a++] = 0;
    if (a == d) break;
  }
  return std::pow(2.0, dd) * std::pow(sup_sum, dd) * integral;
}

BoundReport weighted_sampling_bound(const SampledField& f, double p) {
  if (!(p >= 1.0 && p <= 2.0)) throw ParameterError("weighted_sampling_bound requires 1 <= p <= 2");
  const Grid& grid = f.grid;
  const std::size_t d = grid.dim();
  for (std::size_t a = 0; a < d; ++a) {
    const double L = grid.length(a);
    if (L < 1.0 || std::abs(L - std::round(L)) > 1e-9) {
      throw ParameterError("weighted_sampling_bound needs an integer domain length >= 1, got " + fmt(L));
    }
  }
  double inside = 0.0, outside = 0.0;
  for (std::size_t i = 0; i < grid.count(); ++i) {
    const Point x = grid.centred_node(i);
    bool in = true;
    for (std::size_t a = 0; a < d; ++a) in = in && x[a] >= -0.25 && x[a] < 0.25;
    (in ? inside : outside) += f[i] * f[i];
  }
  if (outside > 1e-9 * (inside + outside)) {
    throw ParameterError("support violation: relative mass " + fmt(outside / (inside + outside)) +
                         " outside [-1/4, 1/4)^d");
  }

  BoundReport r;
  r.p = p;
  r.value = std::pow(weighted_fourier_norm(f, p), p);
  Spectrum spec = forward(f);
  const double hd = grid.cell_volume();
  double lattice = 0.0;
  spec.for_each([&](std::complex<double>& bin, const Point& lambda, double norm_lambda, int mult) {
    for (std::size_t a = 0; a < d; ++a) {
      if (std::abs(lambda[a] - std::round(lambda[a])) > 1e-9) return;
    }
    lattice += mult * std::pow(std::abs(bin) * hd, p) *
               std::pow(1.0 + norm_lambda * norm_lambda, -static_cast<double>(d));
  });
  r.upper = sampling_constant(d) * lattice;
  r.constant = lattice > 0.0 ? r.value / lattice : 0.0;
  return r;
}

BoundReport ss_bounds(const TestFunction& phi, double gamma, double p, double s, double a,
                      const WaveletBasis& basis, const Grid& grid, const TruncationSpec& trunc,
                      double constant) {
  check_pairing_window(gamma, p, grid.dim(), basis);
  if (!(s > gamma)) throw ParameterError("s = " + fmt(s) + " violates s > gamma = " + fmt(gamma));
  const double C = constant > 0.0 ? constant : t1_constant(p, s, basis, grid);
  const PairingResult pr = pair_scale(phi, gamma, p, a, basis, grid, trunc);
  const SampledField base = phi.sample(grid);
  const double n1 = lp_norm(riesz_apply(base, gamma), p);
  const double n2 = lp_norm(riesz_apply(base, gamma - s), p);
  const double e = static_cast<double>(grid.dim()) * (0.5 - 1.0 / p);

  BoundReport r;
  r.p = p;
  r.s = s;
  r.gamma = gamma;
  r.a = a;
  r.constant = C;
  r.lower = pr.l2;
  r.value = pr.sigma;
  r.upper = C * (std::pow(a, e) * n1 + std::pow(a, e + s) * n2);
  return r;
}

double ecdf_ks(std::span<const double> samples, const StableLaw& law) {
  if (samples.size() < 100) {
    throw ParameterError("ecdf_ks needs at least 100 samples, got " + std::to_string(samples.size()));
  }
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  std::vector<double> F(x.size());
  const auto count = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < count; ++i) F[static_cast<std::size_t>(i)] = sps_cdf(law, x[static_cast<std::size_t>(i)]);
  double D = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n;
    D = std::max({D, above - F[i], F[i] - below});
  }
  return D;
}

PeriodogramFit periodogram(const SampledField& field, double band_lo, double band_hi) {
  const Grid& grid = field.grid;
  if (!grid.is_cube()) throw ParameterError("periodogram needs a cube grid");
  const double L = grid.length(0);
  const double nyquist = static_cast<double>(grid.side(0)) / 2.0;
  if (band_hi < 0.0) band_hi = nyquist / 4.0;
  if (!(band_lo > 0.0) || band_hi > nyquist / 4.0 + 1e-9 || band_hi < band_lo) {
    throw ParameterError("empty or invalid periodogram band [" + fmt(band_lo) + ", " + fmt(band_hi) +
                         "]; it must lie in (0, Nyquist/4 = " + fmt(nyquist / 4.0) + "]");
  }
  Spectrum spec = forward(field);
  const auto shells = static_cast<std::size_t>(std::floor(band_hi)) + 1;
  std::vector<double> power(shells, 0.0), weight(shells, 0.0);
  const double hd = grid.cell_volume();
  double volume = 1.0;
  for (std::size_t a = 0; a < grid.dim(); ++a) volume *= grid.length(a);
  spec.for_each([&](std::complex<double>& bin, const Point&, double norm_lambda, int mult) {
    const double r = norm_lambda * L;
    const auto shell = static_cast<std::size_t>(std::lround(r));
    if (shell >= shells || shell < band_lo || shell > band_hi) return;
    power[shell] += mult * std::norm(bin * hd) / volume;
    weight[shell] += mult;
  });
  PeriodogramFit fit;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < shells; ++k) {
    if (weight[k] == 0.0 || power[k] <= 0.0) continue;
    const double lambda = static_cast<double>(k) / L;
    fit.frequencies.push_back(lambda);
    fit.power.push_back(power[k] / weight[k]);
    lx.push_back(std::log(lambda));
    ly.push_back(std::log(power[k] / weight[k]));
  }
  if (lx.size() < 2) throw ParameterError("empty periodogram band");
  const LineFit line = least_squares(lx, ly);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  return fit;
}

double periodogram_slope(const SampledField& field, double band_lo, double band_hi) {
  return periodogram(field, band_lo, band_hi).slope;
}

double frostman_energy(const SampledField& field, double rho) {
  if (!(rho > 0.0)) throw ParameterError("frostman_energy requires rho > 0");
  const Grid& grid = field.grid;
  const std::size_t d = grid.dim();
  const double h = grid.spacing();
  const auto n = static_cast<std::int64_t>(grid.count());
  for (double v : field.values) {
    if (!std::isfinite(v)) throw ParameterError("frostman_energy needs a finite field");
  }
  const double e = -rho / 2.0;
  double acc = 0.0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : acc)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto mi = grid.unravel(static_cast<std::size_t>(i));
    const double fi = field.values[static_cast<std::size_t>(i)];
    double local = 0.0;
    for (std::int64_t k = i + 1; k < n; ++k) {
      const auto mk = grid.unravel(static_cast<std::size_t>(k));
      double r2 = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        const double dx = (static_cast<double>(mi[a]) - static_cast<double>(mk[a])) * h;
        r2 += dx * dx;
      }
      const double df = fi - field.values[static_cast<std::size_t>(k)];
      local += std::pow(r2 + df * df, e);
    }
    acc += local;
  }
  return 2.0 * acc * std::pow(h, 2.0 * static_cast<double>(d));
}

SampledField coarsen(const SampledField& field) {
  const Grid& g = field.grid;
  std::vector<std::size_t> shape;
  for (std::size_t s : g.shape()) {
    if (s < 2 || s % 2 != 0) throw ParameterError("coarsen needs even sides");
    shape.push_back(s / 2);
  }
  SampledField out(Grid(shape, 2.0 * g.spacing()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    MultiIndex m = out.grid.unravel(i);
    for (std::size_t a = 0; a < shape.size(); ++a) m[a] *= 2;
    out[i] = field[g.ravel(m)];
  }
  return out;
}

DimensionEstimate box_dimension(const SampledField& field) {
  if (field.grid.dim() != 1) throw ParameterError("box_dimension needs a d = 1 field");
  const int J = field.grid.dyadic_levels();
  if (J < 12) throw ParameterError("box_dimension needs 2^J samples with J >= 12 (insufficient resolution)");
  const auto& v = field.values;
  const std::size_t n = v.size();
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  DimensionEstimate est;
  est.eps_min = std::ldexp(1.0, -(J - 5));
  est.eps_max = std::ldexp(1.0, -3);
  est.method = "box";
  if (*hi_it == *lo_it) {
    est.estimate = 1.0;
    return est;
  }
  const double range = *hi_it - *lo_it;

  // Column oscillation count: N(eps) = sum over columns of osc / eps, with the
  // graph scaled to the unit square.
  std::vector<double> lx, ly;
  for (int m = 3; m <= J - 5; ++m) {
    const std::size_t cols = std::size_t{1} << m;
    const std::size_t per = n / cols;
    const double eps = std::ldexp(1.0, -m);
    double boxes = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      double a = v[c * per], b = a;
      for (std::size_t i = c * per; i <= (c + 1) * per; ++i) {
        const double t = v[i % n];
        a = std::min(a, t);
        b = std::max(b, t);
      }
      boxes += (b - a) / range / eps;
    }
    lx.push_back(m * std::log(2.0));
    ly.push_back(std::log(boxes));
  }
  const LineFit fit = least_squares(lx, ly);
  est.estimate = fit.slope;
  est.std_error = fit.slope_error;
  return est;
}

double excess_kurtosis(std::span<const double> values) {
  if (values.size() < 4) throw ParameterError("excess_kurtosis needs at least 4 values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double c = (v - mean) * (v - mean);
    m2 += c;
    m4 += c * c;
  }
  m2 /= static_cast<double>(values.size());
  m4 /= static_cast<double>(values.size());
  if (m2 == 0.0) return 0.0;
  return m4 / (m2 * m2) - 3.0;
}

std::vector<double> increments(const SampledField& field) {
  const Grid& g = field.grid;
  std::vector<double> out;
  out.reserve(g.count() * g.dim());
  for (std::size_t a = 0; a < g.dim(); ++a) {
    for (std::size_t i = 0; i < g.count(); ++i) {
      MultiIndex m = g.unravel(i);
      m[a] = (m[a] + 1) % g.side(a);
      out.push_back(field[g.ravel(m)] - field[i]);
    }
  }
  return out;
}

}  // namespace fsw
