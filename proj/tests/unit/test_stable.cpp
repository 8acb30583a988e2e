#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <omp.h>

#include "fsw/error.hpp"
#include "fsw/rng.hpp"
#include "fsw/stable.hpp"

using namespace fsw;

namespace {

// Zolotarev's integral form of the unit-scale symmetric stable CDF, x > 0,
// alpha != 1.
double zolotarev_cdf(double alpha, double x) {
  if (x == 0.0) return 0.5;
  if (x < 0.0) return 1.0 - zolotarev_cdf(alpha, -x);
  const double pi = std::numbers::pi;
  const double e = alpha / (alpha - 1.0);
  auto V = [&](double th) {
    return std::pow(std::cos(th) / std::sin(alpha * th), e) * std::cos((alpha - 1.0) * th) /
           std::cos(th);
  };
  auto integrand = [&](double th) {
    const double v = std::pow(x, e) * V(th);
    return std::isfinite(v) ? std::exp(-v) : 0.0;
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double I = ts.integrate(integrand, 0.0, pi / 2.0);
  return alpha < 1.0 ? 0.5 + I / pi : 1.0 - I / pi;
}

double moment_closed_form(double p, double r) {
  // E|X|^r for exp(-|xi|^p).
  return std::pow(2.0, r) * std::tgamma((1.0 + r) / 2.0) * std::tgamma(1.0 - r / p) /
         (std::sqrt(std::numbers::pi) * std::tgamma(1.0 - r / 2.0));
}

}  // namespace

TEST_CASE("stream reproducibility and substreams") {
  Stream a(42, 3), b(42, 3), c(42, 4);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
  }
  Stream u(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform_open();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
  }
  Stream s1 = Stream::substream(9, 2, 5), s2 = Stream::substream(9, 2, 5), s3 = Stream::substream(9, 2, 6);
  CHECK(s1() == s2());
  CHECK(s1() != s3());
}

TEST_CASE("law validation") {
  CHECK_THROWS_AS(StableLaw(0.0), ParameterError);
  CHECK_THROWS_AS(StableLaw(2.1), ParameterError);
  CHECK_THROWS_AS(StableLaw(1.5, 0.0), ParameterError);
  CHECK_THROWS_AS(StableLaw(1.5, -1.0), ParameterError);
  CHECK_NOTHROW(StableLaw(2.0, 3.0));
  CHECK(char_fn(StableLaw(1.3, 2.0), 0.7) == doctest::Approx(std::exp(-std::pow(1.4, 1.3))).epsilon(1e-14));
}

TEST_CASE("cdf against Zolotarev integral") {
  for (double p : {0.7, 1.3, 1.5, 1.8}) {
    for (double x : {-2.5, 0.1, 0.5, 1.0, 3.0, 12.0}) {
      CAPTURE(p);
      CAPTURE(x);
      CHECK(std::abs(sps_cdf(StableLaw(p), x) - zolotarev_cdf(p, x)) < 1e-6);
    }
  }
  // scale enters through x / sigma
  CHECK(std::abs(sps_cdf(StableLaw(1.5, 2.0), 3.0) - zolotarev_cdf(1.5, 1.5)) < 1e-6);
}

TEST_CASE("closed form cdf for p = 1 and p = 2") {
  for (double x : {-3.0, -0.2, 0.0, 0.4, 2.0}) {
    CHECK(sps_cdf(StableLaw(1.0), x) == doctest::Approx(0.5 + std::atan(x) / std::numbers::pi));
    // N(0, 2): P(X <= x) = Phi(x / sqrt 2)
    CHECK(sps_cdf(StableLaw(2.0), x) == doctest::Approx(0.5 * std::erfc(-x / 2.0)));
  }
  CHECK(sps_cdf(StableLaw(1.2), 0.0) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("pdf integrates against the cdf") {
  boost::math::quadrature::gauss_kronrod<double, 61> gk;
  for (double p : {0.8, 1.5}) {
    const StableLaw law(p);
    const double mass = gk.integrate([&](double t) { return sps_pdf(law, t); }, 0.0, 2.0);
    CHECK(mass == doctest::Approx(sps_cdf(law, 2.0) - 0.5).epsilon(1e-6));
  }
  CHECK(sps_pdf(StableLaw(1.0), 0.5) == doctest::Approx(1.0 / (std::numbers::pi * 1.25)));
  CHECK(sps_pdf(StableLaw(1.6), 40.0) > 0.0);
}

TEST_CASE("fractional moments") {
  CHECK(fractional_moment(StableLaw(2.0), 1.0) == doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-6));
  CHECK(std::sqrt(fractional_moment(StableLaw(1.0), 0.5)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  for (double p : {0.6, 1.2, 1.5, 1.9}) {
    for (double frac : {0.2, 0.5, 0.8}) {
      const double r = frac * p;
      CAPTURE(p);
      CAPTURE(r);
      const double expected = std::pow(moment_closed_form(p, r), 1.0 / r);
      CHECK(fractional_moment(StableLaw(p), r) == doctest::Approx(expected).epsilon(1e-6));
      CHECK(fractional_moment(StableLaw(p, 3.0), r) == doctest::Approx(3.0 * expected).epsilon(1e-6));
    }
  }
  CHECK_THROWS_WITH_AS(fractional_moment(StableLaw(1.5), 1.5), doctest::Contains("infinite moment"), ParameterError);
  CHECK_THROWS_AS(fractional_moment(StableLaw(1.5), 2.0), ParameterError);
  CHECK_NOTHROW(fractional_moment(StableLaw(2.0), 3.0));
}

TEST_CASE("scale of independent sums") {
  const std::vector<StableLaw> laws{StableLaw(1.5, 1.0), StableLaw(1.5, 2.0)};
  CHECK(scale_of_sum(laws) == doctest::Approx(std::pow(1.0 + std::pow(2.0, 1.5), 1.0 / 1.5)));
  const std::vector<StableLaw> mixed{StableLaw(1.5), StableLaw(1.2)};
  CHECK_THROWS_AS(scale_of_sum(mixed), ParameterError);
  CHECK_THROWS_AS(scale_of_sum(std::vector<StableLaw>{}), ParameterError);
}

TEST_CASE("sampler: characteristic function and determinism") {
  CHECK_THROWS_AS(sample_sps(StableLaw(1.0), 0, 1), ParameterError);
  for (double p : {0.8, 1.5, 2.0}) {
    const auto x = sample_sps(StableLaw(p), 50000, 5);
    for (double xi : {0.5, 1.0}) {
      CHECK(std::abs(empirical_char_fn(x, xi) - std::exp(-std::pow(xi, p))) < 0.015);
    }
  }
  const auto a = sample_sps(StableLaw(1.3), 10000, 77);
  const auto b = sample_sps(StableLaw(1.3), 10000, 77);
  CHECK(a == b);
  CHECK(a != sample_sps(StableLaw(1.3), 10000, 78));
  CHECK(a != sample_sps(StableLaw(1.3), 10000, 77, 1));
}

TEST_CASE("sampler is independent of the thread count") {
  const int before = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = sample_sps(StableLaw(1.7), 20000, 3);
  omp_set_num_threads(4);
  const auto four = sample_sps(StableLaw(1.7), 20000, 3);
  omp_set_num_threads(before);
  CHECK(one == four);
}

TEST_CASE("property: draws scale linearly in sigma") {
  Stream meta(2024, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const double p = 0.3 + 1.7 * meta.uniform_open();
    const double sigma = 0.1 + 5.0 * meta.uniform_open();
    const std::uint64_t seed = meta();
    const auto unit = sample_sps(StableLaw(p), 64, seed);
    const auto scaled = sample_sps(StableLaw(p, sigma), 64, seed);
    for (std::size_t i = 0; i < unit.size(); ++i) {
      REQUIRE(scaled[i] == doctest::Approx(sigma * unit[i]).epsilon(1e-13));
    }
  }
}

TEST_CASE("property: Gaussian convention, variance 2 sigma^2") {
  const auto x = sample_sps(StableLaw(2.0, 1.5), 200000, 8);
  double m2 = 0.0;
  for (double v : x) m2 += v * v;
  m2 /= static_cast<double>(x.size());
  CHECK(m2 == doctest::Approx(2.0 * 1.5 * 1.5).epsilon(0.02));
}

TEST_CASE("property: cdf is monotone and symmetric") {
  Stream meta(11, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const double p = 0.5 + 1.5 * meta.uniform_open();
    const StableLaw law(p, 0.5 + meta.uniform_open());
    double prev = 0.0;
    for (double x = -5.0; x <= 5.0; x += 0.5) {
      const double F = sps_cdf(law, x);
      REQUIRE(F >= prev - 1e-9);
      REQUIRE(F + sps_cdf(law, -x) == doctest::Approx(1.0).epsilon(1e-8));
      prev = F;
    }
  }
}
