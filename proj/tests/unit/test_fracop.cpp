#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fsw/error.hpp"
#include "fsw/fracop.hpp"
#include "fsw/stable.hpp"
#include "fsw/test_function.hpp"

using namespace fsw;

namespace {

constexpr double kPi = std::numbers::pi;

SampledField cosine(const Grid& g, std::size_t axis, int k) {
  SampledField f(g);
  for (std::size_t i = 0; i < g.count(); ++i)
    f[i] = std::cos(2.0 * kPi * k * g.node(i)[axis] / g.length(axis));
  return f;
}

SampledField mean_free_noise(const Grid& g, std::uint64_t seed) {
  SampledField f(g, sample_sps(StableLaw(2.0), g.count(), seed));
  double mean = 0.0;
  for (double v : f.values) mean += v;
  mean /= static_cast<double>(f.size());
  for (double& v : f.values) v -= mean;
  return f;
}

// Plancherel closed form of ||K_g(x, .)||_2^2 on the line, 1/2 < g < 3/2.
double kernel_norm_sq_1d(double x, double g) {
  return 2.0 / kPi * std::pow(std::abs(x), 2.0 * g - 1.0) *
         (-std::tgamma(1.0 - 2.0 * g) * std::cos(kPi * (1.0 - 2.0 * g) / 2.0));
}

}  // namespace

TEST_CASE("Riesz multiplier on pure cosines") {
  const Grid g = Grid::cube(1, 256, 0.05);
  for (int k : {1, 3, 17}) {
    const SampledField f = cosine(g, 0, k);
    for (double gamma : {0.3, 1.0, 2.5}) {
      const SampledField r = riesz_apply(f, gamma);
      const double m = std::pow(2.0 * kPi * k / g.length(0), -gamma);
      for (std::size_t i = 0; i < g.count(); ++i) REQUIRE(r[i] == doctest::Approx(m * f[i]).scale(m));
    }
  }
  SampledField c(g);
  for (double& v : c.values) v = 3.0;
  CHECK(lp_norm(riesz_apply(c, 0.5), 2.0) < 1e-12);
}

TEST_CASE("semigroup and self-adjointness") {
  const Grid g = Grid::cube(2, 64, 0.1);
  const SampledField f = mean_free_noise(g, 1), h = mean_free_noise(g, 2);
  const SampledField two = riesz_apply(riesz_apply(f, 0.4), 0.7);
  CHECK(relative_l2(two, riesz_apply(f, 1.1)) < 1e-12);
  CHECK(inner(riesz_apply(f, 0.6), h) == doctest::Approx(inner(f, riesz_apply(h, 0.6))).epsilon(1e-11));
  const SampledField back = bessel_apply(bessel_apply(f, 1.3), -1.3);
  CHECK(relative_l2(back, f) < 1e-12);
  CHECK(relative_l2(riesz_apply(riesz_apply(f, -0.8), 0.8), f) < 1e-11);
}

TEST_CASE("modified potential vanishes at the origin and differs by a constant") {
  const Grid g = Grid::cube(1, 512, 1.0 / 512);
  const SampledField f = mean_free_noise(g, 5);
  const SampledField i = riesz_apply(f, 0.7), k = modified_apply(f, 0.7);
  CHECK(std::abs(k[0]) < 1e-14);
  for (std::size_t n = 0; n < g.count(); ++n) REQUIRE(k[n] == doctest::Approx(i[n] - i[0]).scale(1.0));
}

TEST_CASE("Riesz potential matches direct convolution away from the support") {
  const double L = 128.0;
  const std::size_t n = 1 << 15;
  const Grid g = Grid::cube(1, n, L / n);
  const double gamma = 0.5;
  const TestFunction phi(TestFunction::Shape::bump_derivative, 1, {}, 1.0);
  const SampledField f = phi.sample(g);
  const SampledField r = riesz_apply(f, gamma);
  const double c = riesz_constant(gamma, 1);
  for (double x : {3.0, 5.0, -4.0}) {
    double direct = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = g.centred_node(i)[0];
      if (f[i] != 0.0) direct += std::pow(std::abs(x - y), gamma - 1.0) / c * f[i] * g.spacing();
    }
    const std::size_t at = g.nearest({x < 0 ? x + L : x, 0, 0});
    CAPTURE(x);
    CHECK(r[at] == doctest::Approx(direct).epsilon(2e-3));
  }
}

TEST_CASE("Riesz normalization") {
  for (double gamma : {0.2, 0.5, 0.9}) {
    CHECK(riesz_constant(gamma, 1) ==
          doctest::Approx(2.0 * std::tgamma(gamma) * std::cos(kPi * gamma / 2.0)).epsilon(1e-13));
  }
  CHECK(riesz_constant(1.0, 3) == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-13));
  CHECK_THROWS_AS(riesz_constant(1.0, 1), ParameterError);
  CHECK_THROWS_AS(riesz_constant(0.0, 2), ParameterError);
  CHECK(riesz_constant_continued(1.5, 1) == doctest::Approx(2.0 * std::tgamma(1.5) * std::cos(0.75 * kPi)));
}

TEST_CASE("kernel norm against the Plancherel closed form") {
  for (double gamma : {0.6, 0.75, 1.25, 1.4}) {
    for (double x : {0.5, 1.0, 3.0}) {
      CAPTURE(gamma);
      CAPTURE(x);
      const double expected = std::sqrt(kernel_norm_sq_1d(x, gamma));
      CHECK(kernel_norm({x, 0, 0}, 1, gamma, 2.0) == doctest::Approx(expected).epsilon(1e-6));
    }
  }
  // gamma = d: logarithmic kernel, the closed form is the limit
  const double lim = 0.5 * (kernel_norm_sq_1d(1.0, 1.0 - 1e-4) + kernel_norm_sq_1d(1.0, 1.0 + 1e-4));
  CHECK(kernel_norm({1.0, 0, 0}, 1, 1.0, 2.0) == doctest::Approx(std::sqrt(lim)).epsilon(1e-5));
}

TEST_CASE("kernel norm homogeneity") {
  for (std::size_t d : {1u, 2u}) {
    for (double p : {1.5, 2.0, 3.0}) {
      const double gamma = d * (1.0 - 1.0 / p) + 0.4;
      const double n1 = kernel_norm({1.0, 0, 0}, d, gamma, p);
      const double n2 = kernel_norm({4.0, 0, 0}, d, gamma, p);
      const double slope = std::log(n2 / n1) / std::log(4.0);
      CAPTURE(d);
      CAPTURE(p);
      CHECK(slope == doctest::Approx(gamma - d + d / p).epsilon(1e-4));
    }
  }
  // rotation invariance in d = 2
  const double a = kernel_norm({1.0, 0, 0}, 2, 1.2, 2.0);
  const double b = kernel_norm({std::sqrt(0.5), std::sqrt(0.5), 0}, 2, 1.2, 2.0);
  CHECK(a == doctest::Approx(b).epsilon(1e-6));
  CHECK_THROWS_AS(kernel_norm({1, 0, 0}, 1, 0.2, 2.0), ParameterError);
  CHECK_THROWS_AS(kernel_norm({1, 0, 0}, 1, 1.6, 2.0), ParameterError);
  CHECK_THROWS_AS(kernel_norm({1, 0, 0}, 1, 0.8, 1.0), ParameterError);
}

TEST_CASE("Laplacian sign convention") {
  const Grid g = Grid::cube(2, 64, 1.0 / 64);
  const SampledField f = cosine(g, 1, 3);
  const SampledField lap = laplacian(f);
  const double m = -4.0 * kPi * kPi * 9.0;
  for (std::size_t i = 0; i < g.count(); ++i) REQUIRE(lap[i] == doctest::Approx(m * f[i]).scale(-m));
  const Grid g1 = Grid::cube(1, 1024, 1.0 / 1024);
  const LaplacianCheck check = laplacian_identity_check(band_limited_bump(g1, 20), 2.6);
  CHECK(check.sign == -1);
  CHECK(check.residual < 1e-8);
  CHECK_THROWS_AS(laplacian_identity_check(f, 1.5), ParameterError);
}

TEST_CASE("Sobolev and weighted Fourier norms") {
  const Grid g = Grid::cube(1, 1024, 16.0 / 1024);
  const SampledField f = TestFunction::bump(1, 2.0).sample(g);
  CHECK(sobolev_norm(f, 1.7, 0.0) == doctest::Approx(2.0 * lp_norm(f, 1.7)).epsilon(1e-10));
  CHECK(bessel_sobolev_norm(f, 2.0, 0.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-10));
  CHECK(weighted_fourier_norm(f, 2.0, 0.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-10));
  CHECK(weighted_fourier_norm(f, 1.5) < weighted_fourier_norm(f, 1.5, 0.0));
  CHECK(sobolev_norm(f, 2.0, 1.0) > sobolev_norm(f, 2.0, 0.5));
  // pure cosine: derivative of order s multiplies the L^p norm by (2 pi k / L)^s
  const SampledField c = cosine(g, 0, 8);
  const double m = std::pow(2.0 * kPi * 8.0 / 16.0, 0.5);
  CHECK(sobolev_norm(c, 3.0, 0.5) == doctest::Approx((1.0 + m) * lp_norm(c, 3.0)).epsilon(1e-10));
  CHECK_THROWS_AS(sobolev_norm(f, 1.0, 0.5), ParameterError);
  CHECK_THROWS_AS(sobolev_norm(f, 2.0, -0.5), ParameterError);
  CHECK_THROWS_AS(weighted_fourier_norm(f, 2.5), ParameterError);
}
