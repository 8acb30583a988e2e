#include "fsw/stable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fsw/error.hpp"

namespace fsw {

namespace {

using std::numbers::pi;

constexpr std::size_t kBlock = 4096;
constexpr double kCdfTolerance = 1e-6;

// Beyond this unit-scale abscissa the density is replaced by its tail series.
constexpr double kTailStart = 30.0;
constexpr int kTailTerms = 6;

bool is_cauchy(double p) { return p == 1.0; }
bool is_gaussian(double p) { return p == 2.0; }

boost::math::quadrature::ooura_fourier_sin<double>& sin_integrator() {
  thread_local boost::math::quadrature::ooura_fourier_sin<double> integrator(1e-10);
  return integrator;
}

boost::math::quadrature::ooura_fourier_cos<double>& cos_integrator() {
  thread_local boost::math::quadrature::ooura_fourier_cos<double> integrator(1e-10);
  return integrator;
}

// Unit-scale density for 0 < p < 2, p != 1, evaluated at u >= 0.
double unit_pdf_numeric(double p, double u) {
  if (u < (p >= 1.0 ? 0.1 : 0.01)) {
    // f(u) = (1 / (pi p)) sum_k (-1)^k Gamma((2k+1)/p) / (2k)! u^{2k}
    double sum = 0.0;
    for (int k = 0; k < 40; ++k) {
      const double term = std::exp(std::lgamma((2.0 * k + 1.0) / p) - std::lgamma(2.0 * k + 1.0)) *
                          std::pow(u, 2 * k);
      sum += (k % 2 == 0) ? term : -term;
      if (term < 1e-17 * std::abs(sum)) break;
    }
    return sum / (pi * p);
  }
  auto f = [p](double t) { return std::exp(-std::pow(t, p)); };
  auto [value, rel_err] = cos_integrator().integrate(f, u);
  if (!(std::abs(value * rel_err) <= 1e-9) && u < kTailStart) {
    throw QuadratureError("stable density inversion did not converge at x=" +
                              std::to_string(u),
                          std::abs(value * rel_err));
  }
  return value / pi;
}

// Term k (k >= 1) of the large-|x| expansion of the unit density:
//   f(x) ~ (1/pi) sum_k (-1)^{k+1} Gamma(kp+1)/k! sin(k pi p / 2) x^{-kp-1}.
double tail_coefficient(double p, int k) {
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;
  return sign * std::tgamma(k * p + 1.0) / std::tgamma(k + 1.0) *
         std::sin(k * pi * p / 2.0) / pi;
}

double unit_pdf(double p, double u) {
  u = std::abs(u);
  if (is_gaussian(p)) return std::exp(-u * u / 4.0) / (2.0 * std::sqrt(pi));
  if (is_cauchy(p)) return 1.0 / (pi * (1.0 + u * u));
  return unit_pdf_numeric(p, u);
}

}  // namespace

StableLaw::StableLaw(double p, double sigma) : p_(p), sigma_(sigma) {
  if (!(p > 0.0 && p <= 2.0)) {
    throw ParameterError("stability index must satisfy 0 < p <= 2, got p=" +
                         std::to_string(p));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("stable scale must be positive, got sigma=" +
                         std::to_string(sigma));
  }
}

double char_fn(const StableLaw& law, double xi) {
  return std::exp(-std::pow(law.sigma() * std::abs(xi), law.p()));
}

double draw(const StableLaw& law, Stream& stream) {
  const double p = law.p();
  const double u = pi * (stream.uniform_open() - 0.5);
  if (is_cauchy(p)) return law.sigma() * std::tan(u);
  const double w = stream.exponential();
  const double head = std::sin(p * u) / std::pow(std::cos(u), 1.0 / p);
  const double tail = std::pow(std::cos((1.0 - p) * u) / w, (1.0 - p) / p);
  return law.sigma() * head * tail;
}

std::vector<double> sample_sps(const StableLaw& law, std::size_t n, std::uint64_t seed,
                               std::uint64_t stream_id) {
  if (n == 0) throw ParameterError("sample_sps: n must be at least 1");
  std::vector<double> out(n);
  const auto blocks = static_cast<std::int64_t>((n + kBlock - 1) / kBlock);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    Stream stream = Stream::substream(seed, stream_id, static_cast<std::uint64_t>(b));
    const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
    const std::size_t end = std::min(n, begin + kBlock);
    for (std::size_t i = begin; i < end; ++i) out[i] = draw(law, stream);
  }
  return out;
}

double sps_cdf(const StableLaw& law, double x) {
  const double p = law.p();
  const double u = x / law.sigma();
  if (u == 0.0) return 0.5;
  if (is_cauchy(p)) return 0.5 + std::atan(u) / pi;
  if (is_gaussian(p)) return 0.5 * std::erfc(-u / 2.0);
  if (std::isinf(u)) return u > 0 ? 1.0 : 0.0;

  // F(u) = 1/2 + (1/pi) int_0^inf sin(u t) exp(-t^p) / t dt
  auto f = [p](double t) { return std::exp(-std::pow(t, p)) / t; };
  auto [value, rel_err] = sin_integrator().integrate(f, std::abs(u));
  const double abs_err = std::abs(value * rel_err) / pi;
  if (!(abs_err <= kCdfTolerance)) {
    throw QuadratureError("Gil-Pelaez inversion did not converge at x=" + std::to_string(x),
                          abs_err);
  }
  const double half = value / pi;
  return std::clamp(u > 0 ? 0.5 + half : 0.5 - half, 0.0, 1.0);
}

double sps_pdf(const StableLaw& law, double x) {
  const double u = std::abs(x) / law.sigma();
  const double p = law.p();
  if (!is_gaussian(p) && !is_cauchy(p) && u > kTailStart) {
    double sum = 0.0;
    for (int k = 1; k <= kTailTerms; ++k) {
      sum += tail_coefficient(p, k) * std::pow(u, -k * p - 1.0);
    }
    return sum / law.sigma();
  }
  return unit_pdf(p, u) / law.sigma();
}

double fractional_moment(const StableLaw& law, double r) {
  const double p = law.p();
  if (!(r > 0.0)) throw ParameterError("fractional_moment: order r must be positive");
  if (r >= p && !is_gaussian(p)) {
    throw ParameterError("infinite moment: E|eta|^r = inf for r >= p (r=" +
                         std::to_string(r) + ", p=" + std::to_string(p) + ")");
  }

  // E|eta_1|^r = 2 int_0^inf x^r f(x) dx, split at kTailStart; the tail of a
  // non-Gaussian law is integrated term by term from its power series.
  const double head_end = is_gaussian(p) ? 60.0 : kTailStart;
  auto integrand = [p, r](double x) { return std::pow(x, r) * unit_pdf(p, x); };
  double err = 0.0;
  double head = 0.0;
  {
    // x^r is not smooth at the origin: tanh-sinh on the first piece.
    boost::math::quadrature::tanh_sinh<double> ts;
    double piece_err = 0.0;
    head += ts.integrate(integrand, 0.0, 1.0, 1e-11, &piece_err);
    err += piece_err * std::abs(head);
  }
  for (double a = 1.0; a < head_end;) {
    const double b = std::min(head_end, 2.0 * a);
    double piece_err = 0.0;
    head += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, a, b, 15, 1e-11, &piece_err);
    err += piece_err;
    a = b;
  }

  double tail = 0.0;
  if (is_cauchy(p)) {
    // int_X^inf x^r / (pi (1 + x^2)) dx, via the substitution x = 1/t.
    auto g = [r](double t) { return std::pow(t, -r) / (pi * (1.0 + t * t)); };
    boost::math::quadrature::tanh_sinh<double> ts;
    double piece_err = 0.0;
    tail = ts.integrate(g, 0.0, 1.0 / head_end, 1e-11, &piece_err);
    err += piece_err * std::abs(tail);
  } else if (!is_gaussian(p)) {
    for (int k = 1; k <= kTailTerms; ++k) {
      const double e = k * p - r;
      tail += tail_coefficient(p, k) * std::pow(head_end, -e) / e;
    }
  }

  const double moment = 2.0 * (head + tail);
  if (!(2.0 * err <= 1e-6 * moment)) {
    throw QuadratureError("fractional moment quadrature did not converge", 2.0 * err);
  }
  return std::pow(moment, 1.0 / r) * law.sigma();
}

double scale_of_sum(std::span<const StableLaw> laws) {
  if (laws.empty()) throw ParameterError("scale_of_sum: empty list");
  const double p = laws.front().p();
  double acc = 0.0;
  for (const auto& law : laws) {
    if (law.p() != p) throw ParameterError("scale_of_sum: laws have different p");
    acc += std::pow(law.sigma(), p);
  }
  return std::pow(acc, 1.0 / p);
}

double empirical_char_fn(std::span<const double> samples, double xi) {
  double acc = 0.0;
  for (double s : samples) acc += std::cos(xi * s);
  return acc / static_cast<double>(samples.size());
}

}  // namespace fsw
