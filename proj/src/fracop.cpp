#include "fsw/fracop.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fsw/error.hpp"
#include "fsw/fft.hpp"

namespace fsw {

namespace {

using std::numbers::pi;

constexpr double kQuadTol = 1e-9;

double riesz_multiplier(double r, double gamma) {
  if (r == 0.0) return 0.0;
  return std::pow(2.0 * pi * r, -gamma);
}

double sphere_area(std::size_t d) {
  // Surface area of the unit sphere S^{d-2} (the angular measure around an axis).
  const double m = static_cast<double>(d) - 1.0;
  return 2.0 * std::pow(pi, m / 2.0) / std::tgamma(m / 2.0);
}

template <typename F>
double finite_singular(F f, double length) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double err = 0.0, l1 = 0.0;
  const double floor = length * 1e-60;
  return integrator.integrate([&](double t) { return f(std::max(t, floor)); }, 0.0, length,
                              kQuadTol, &err, &l1);
}

template <typename F>
double half_line(F f, double start) {
  thread_local boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0, l1 = 0.0;
  return integrator.integrate([&](double u) { return f(start + u); }, 0.0,
                              std::numeric_limits<double>::infinity(), kQuadTol, &err, &l1);
}

template <typename F>
double smooth(F f, double a, double b) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 10, kQuadTol);
}

}  // namespace

SampledField riesz_apply(const SampledField& field, double gamma) {
  return apply_radial_multiplier(field, [gamma](double r) { return riesz_multiplier(r, gamma); });
}

double riesz_constant_continued(double gamma, std::size_t d) {
  const double dd = static_cast<double>(d);
  const double value = std::pow(pi, dd / 2.0) * std::pow(2.0, gamma) * std::tgamma(gamma / 2.0) /
                       std::tgamma(dd / 2.0 - gamma / 2.0);
  if (!std::isfinite(value) || value == 0.0) {
    throw ParameterError("Riesz normalization is singular at gamma=" + std::to_string(gamma) +
                         ", d=" + std::to_string(d));
  }
  return value;
}

double riesz_constant(double gamma, std::size_t d) {
  if (!(gamma > 0.0 && gamma < static_cast<double>(d))) {
    throw ParameterError("Riesz constant requires 0 < gamma < d, got gamma=" +
                         std::to_string(gamma) + ", d=" + std::to_string(d));
  }
  return riesz_constant_continued(gamma, d);
}

SampledField modified_apply(const SampledField& field, double gamma) {
  SampledField out = riesz_apply(field, gamma);
  const double origin = out[0];
  for (double& v : out.values) v -= origin;
  return out;
}

double kernel_norm(const Point& x, std::size_t d, double gamma, double p) {
  if (d < 1 || d > kMaxDim) throw ParameterError("kernel_norm: dimension must be 1..3");
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("kernel_norm requires 1 < p < inf");
  const double dd = static_cast<double>(d);
  const double lo = dd * (1.0 - 1.0 / p);
  if (!(gamma > lo && gamma < lo + 1.0)) {
    throw ParameterError("kernel_norm requires d(1-1/p) < gamma < d(1-1/p)+1, i.e. " +
                         std::to_string(lo) + " < gamma < " + std::to_string(lo + 1.0) +
                         ", got gamma=" + std::to_string(gamma));
  }
  const double radius = norm(x, d);
  if (radius == 0.0) return 0.0;

  const double expo = gamma - dd;
  // At gamma = d the kernel difference degenerates to a logarithm.
  const bool logarithmic = std::abs(expo) < 1e-6;
  const double inv_c = logarithmic
                           ? -2.0 / (std::pow(pi, dd / 2.0) * std::pow(2.0, dd) * std::tgamma(dd / 2.0))
                           : 1.0 / riesz_constant_continued(gamma, d);
  // |K|^p as a function of a = |y|, b = |y - x| and delta = b - a.
  auto kp_delta = [=](double a, double b, double delta) {
    double diff = 0.0;
    if (std::abs(delta) > 0.5 * a) {
      diff = logarithmic ? std::log(b / a) : std::pow(b, expo) - std::pow(a, expo);
    } else {
      const double rel = std::log1p(delta / a);
      diff = logarithmic ? rel : std::pow(a, expo) * std::expm1(expo * rel);
    }
    return std::pow(std::abs(inv_c * diff), p);
  };
  auto kp = [=](double a, double b) { return kp_delta(a, b, b - a); };
  const double big = radius;
  const double rho = big / 2.0;

  double total = 0.0;
  if (d == 1) {
    total += finite_singular([&](double t) { return kp(t, big - t); }, rho);       // [0, R/2]
    total += finite_singular([&](double t) { return kp(big - t, t); }, rho);       // [R/2, R]
    total += finite_singular([&](double t) { return kp(big + t, t); }, rho);       // [R, 3R/2]
    total += smooth([&](double y) { return kp(y, y - big); }, 1.5 * big, 2.0 * big);
    total += half_line([&](double y) { return kp_delta(y, y - big, -big); }, 2.0 * big);
    total += finite_singular([&](double t) { return kp(t, big + t); }, rho);       // [-R/2, 0]
    total += smooth([&](double u) { return kp(u, big + u); }, rho, 2.0 * big);     // [-2R, -R/2]
    total += half_line([&](double u) { return kp_delta(u, big + u, big); }, 2.0 * big);
  } else {
    const double area = sphere_area(d);
    const double sin_pow = dd - 2.0;
    auto angular = [&](double theta) { return area * std::pow(std::sin(theta), sin_pow); };
    // Polar around the origin: |y| = r, |y - x|^2 = r^2 + R^2 - 2 r R cos(theta).
    auto shell_origin = [&](double r, double theta_lo) {
      return std::pow(r, dd - 1.0) * smooth(
                                          [&](double th) {
                                            const double rhs = big * big - 2.0 * r * big * std::cos(th);
                                            const double b = std::sqrt(std::max(r * r + rhs, 0.0));
                                            return angular(th) * kp_delta(r, b, rhs / (b + r));
                                          },
                                          theta_lo, pi);
    };
    // Polar around x: |y - x| = t, |y|^2 = R^2 + t^2 + 2 t R cos(phi).
    auto shell_x = [&](double t) {
      return std::pow(t, dd - 1.0) * smooth(
                                          [&](double ph) {
                                            const double a2 = big * big + t * t +
                                                              2.0 * t * big * std::cos(ph);
                                            const double a = std::sqrt(std::max(a2, 0.0));
                                            return angular(ph) * kp(a, t);
                                          },
                                          0.0, pi);
    };
    // Lower angular limit outside the ball B(x, rho).
    auto theta_min = [&](double r) {
      const double c = (r * r + big * big - rho * rho) / (2.0 * r * big);
      return c >= 1.0 ? 0.0 : std::acos(std::max(c, -1.0));
    };
    total += finite_singular([&](double r) { return shell_origin(r, 0.0); }, rho);
    total += finite_singular([&](double t) { return shell_x(t); }, rho);
    for (auto [a, b] : {std::pair{rho, big}, std::pair{big, 1.5 * big}}) {
      total += finite_singular([&](double t) { return shell_origin(a + t, theta_min(a + t)); },
                               b - a);
    }
    total += finite_singular(
        [&](double t) { return shell_origin(2.0 * big - t, theta_min(2.0 * big - t)); }, rho);
    total += half_line([&](double r) { return shell_origin(r, 0.0); }, 2.0 * big);
  }
  if (!std::isfinite(total)) {
    throw QuadratureError("kernel_norm quadrature produced a non-finite value", total);
  }
  return std::pow(total, 1.0 / p);
}

SampledField bessel_apply(const SampledField& field, double s) {
  return apply_radial_multiplier(field,
                                 [s](double r) { return std::pow(1.0 + r * r, s / 2.0); });
}

double sobolev_norm(const SampledField& field, double p, double s) {
  if (!(s >= 0.0)) throw ParameterError("sobolev_norm requires s >= 0");
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("sobolev_norm requires 1 < p < inf");
  const SampledField lifted = apply_radial_multiplier(field, [s](double r) {
    return s == 0.0 ? 1.0 : std::pow(2.0 * pi * r, s);
  });
  return lp_norm(field, p) + lp_norm(lifted, p);
}

double bessel_sobolev_norm(const SampledField& field, double p, double s) {
  return lp_norm(bessel_apply(field, s), p);
}

double weighted_fourier_norm(const SampledField& field, double p, double weight_exponent) {
  if (!(p >= 1.0 && p <= 2.0)) throw ParameterError("weighted_fourier_norm requires 1 <= p <= 2");
  const double w = weight_exponent < 0.0 ? static_cast<double>(field.grid.dim()) : weight_exponent;
  Spectrum spec = forward(field);
  const double h_d = field.grid.cell_volume();
  double dlambda = 1.0;
  for (std::size_t a = 0; a < field.grid.dim(); ++a) dlambda /= field.grid.length(a);
  double acc = 0.0;
  spec.for_each([&](std::complex<double>& bin, const Point&, double r, int mult) {
    acc += mult * std::pow(std::abs(bin) * h_d, p) * std::pow(1.0 + r * r, -w);
  });
  return std::pow(acc * dlambda, 1.0 / p);
}

SampledField laplacian(const SampledField& field) {
  return apply_radial_multiplier(field, [](double r) { return -4.0 * pi * pi * r * r; });
}

double relative_l2(const SampledField& a, const SampledField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

LaplacianCheck laplacian_identity_check(const SampledField& field, double gamma) {
  if (!(gamma > 2.0)) throw ParameterError("laplacian_identity_check requires gamma > 2");
  const SampledField lhs = laplacian(riesz_apply(field, gamma));
  SampledField rhs = riesz_apply(field, gamma - 2.0);
  const double plus = relative_l2(lhs, rhs);
  for (double& v : rhs.values) v = -v;
  const double minus = relative_l2(lhs, rhs);
  return plus <= minus ? LaplacianCheck{plus, +1} : LaplacianCheck{minus, -1};
}

}  // namespace fsw
