#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fsw/error.hpp"
#include "fsw/stable.hpp"
#include "fsw/wavelet.hpp"

using namespace fsw;

namespace {

SampledField noise(const Grid& g, std::uint64_t seed) {
  return SampledField(g, sample_sps(StableLaw(2.0), g.count(), seed));
}

}  // namespace

TEST_CASE("Daubechies 2 filter matches the closed form") {
  const auto h = daubechies_lowpass(2);
  REQUIRE(h.size() == 4);
  const double s3 = std::sqrt(3.0), n = 4.0 * std::sqrt(2.0);
  const double expected[] = {(1 + s3) / n, (3 + s3) / n, (3 - s3) / n, (1 - s3) / n};
  for (int i = 0; i < 4; ++i) CHECK(h[i] == doctest::Approx(expected[i]).epsilon(1e-14));
  const auto haar = daubechies_lowpass(1);
  CHECK(haar[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(haar[1] == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("filter identities for every order") {
  for (int N = 1; N <= 10; ++N) {
    CAPTURE(N);
    const auto h = daubechies_lowpass(N);
    REQUIRE(h.size() == static_cast<std::size_t>(2 * N));
    CHECK(std::accumulate(h.begin(), h.end(), 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    for (std::size_t shift = 0; shift < h.size(); shift += 2) {
      double dot = 0.0;
      for (std::size_t i = 0; i + shift < h.size(); ++i) dot += h[i] * h[i + shift];
      CHECK(std::abs(dot - (shift == 0 ? 1.0 : 0.0)) < 1e-12);
    }
    const auto basis = WaveletBasis::build(WaveletFamily::daubechies, N, 1);
    const auto& g = basis.highpass();
    for (int k = 0; k < N; ++k) {
      double m = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        m += std::pow(static_cast<double>(i), k) * g[i];
        scale += std::pow(static_cast<double>(i), k) * std::abs(g[i]);
      }
      CHECK(std::abs(m) < 1e-10 * scale);
    }
  }
}

TEST_CASE("regularity table and validation") {
  CHECK(WaveletBasis::build(WaveletFamily::daubechies, 2, 1).regularity() == doctest::Approx(0.55));
  CHECK(WaveletBasis::build(WaveletFamily::daubechies, 6, 2).regularity() == doctest::Approx(2.1891));
  double prev = 0.0;
  for (int N = 1; N <= 10; ++N) {
    const double r = WaveletBasis::build(WaveletFamily::daubechies, N, 1).regularity();
    CHECK(r > prev);
    prev = r;
  }
  CHECK_THROWS_AS(WaveletBasis::build(WaveletFamily::daubechies, 0, 1), ParameterError);
  CHECK_THROWS_AS(WaveletBasis::build(WaveletFamily::daubechies, 11, 1), ParameterError);
  CHECK_THROWS_AS(WaveletBasis::build(WaveletFamily::daubechies, 4, 4), ParameterError);
}

TEST_CASE("Parseval and perfect reconstruction") {
  for (std::size_t d = 1; d <= 3; ++d) {
    const std::size_t side = d == 1 ? 1024 : (d == 2 ? 64 : 16);
    const Grid g = Grid::cube(d, side, 0.37);
    const SampledField f = noise(g, 10 + d);
    for (int order : {1, 3, 6}) {
      const auto basis = WaveletBasis::build(WaveletFamily::daubechies, order, d);
      for (int jmin : {0, 2}) {
        CAPTURE(d);
        CAPTURE(order);
        CAPTURE(jmin);
        const CoeffField c = analyze(f, basis, jmin);
        const double energy = std::pow(lp_norm(f, 2.0), 2.0);
        CHECK(std::abs(c.lp_sum(2.0) - energy) < 1e-11 * energy);
        const SampledField back = synthesize(c, basis);
        double err = 0.0, ref = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
          err = std::max(err, std::abs(back[i] - f[i]));
          ref = std::max(ref, std::abs(f[i]));
        }
        CHECK(err < 1e-12 * ref);
      }
    }
  }
}

TEST_CASE("constants have no wavelet coefficients") {
  const Grid g = Grid::cube(2, 32, 1.0 / 32);
  SampledField f(g);
  for (double& v : f.values) v = 2.5;
  const auto basis = WaveletBasis::build(WaveletFamily::daubechies, 4, 2);
  const CoeffField c = analyze(f, basis, 1);
  for (std::size_t i = 0; i < c.data().size(); ++i) {
    bool scaling = false;
    c.level_at(i, scaling);
    if (!scaling) CHECK(std::abs(c.data()[i]) < 1e-12);
  }
}

TEST_CASE("index layout round trip") {
  const Grid g = Grid::cube(2, 16, 1.0);
  const CoeffField c(g, 1);
  CHECK(c.levels() == 4);
  CHECK(c.j_max() == 3);
  for (std::size_t pos = 0; pos < g.count(); ++pos) {
    const DyadicIndex idx = c.index_at(pos);
    REQUIRE(c.position(idx) == pos);
    bool scaling = false;
    CHECK(c.level_at(pos, scaling) == idx.j);
    CHECK(scaling == idx.is_scaling());
  }
  DyadicIndex bad{5, {0, 0}, {1, 0}};
  CHECK_THROWS_AS(c.position(bad), ParameterError);
  DyadicIndex scaling_wrong_level{2, {0, 0}, {0, 0}};
  CHECK_THROWS_AS(c.position(scaling_wrong_level), ParameterError);
}

TEST_CASE("single atom: unit norm, localized near its dyadic cube") {
  const std::size_t n = 512;
  const double L = 1.0;
  const Grid g = Grid::cube(1, n, L / n);
  const auto basis = WaveletBasis::build(WaveletFamily::daubechies, 3, 1);
  CoeffField c(g, 0);
  const DyadicIndex idx{5, {12}, {1}};
  c.at(idx) = 1.0;
  const SampledField psi = synthesize(c, basis);
  CHECK(lp_norm(psi, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  const Cube cube = dyadic_cube(idx, L);
  CHECK(cube.lower[0] == doctest::Approx(12.0 / 32.0));
  CHECK(cube.upper[0] == doctest::Approx(13.0 / 32.0));
  // support of psi_{jk} is 2^{-j}(k + [0, 2N - 1])
  const double width = (2.0 * 3 - 1.0) / 32.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.node(i)[0];
    if (x < cube.lower[0] - 1e-12 || x > cube.lower[0] + width + 1e-12) CHECK(psi[i] == 0.0);
  }
}

TEST_CASE("transform preconditions") {
  const auto basis = WaveletBasis::build(WaveletFamily::daubechies, 2, 1);
  CHECK_THROWS_AS(analyze(SampledField(Grid::cube(1, 100, 1.0)), basis), ParameterError);
  CHECK_THROWS_AS(analyze(SampledField(Grid::cube(2, 16, 1.0)), basis), ParameterError);
  CHECK_THROWS_AS(analyze(SampledField(Grid::cube(1, 16, 1.0)), basis, 4), ParameterError);
}

TEST_CASE("property: transform is linear") {
  Stream meta(99, 0);
  const Grid g = Grid::cube(1, 256, 0.01);
  const auto basis = WaveletBasis::build(WaveletFamily::daubechies, 5, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = meta.uniform_open() * 4.0 - 2.0;
    const SampledField f = noise(g, meta()), h = noise(g, meta());
    SampledField mix(g);
    for (std::size_t i = 0; i < g.count(); ++i) mix[i] = a * f[i] + h[i];
    const CoeffField cf = analyze(f, basis), ch = analyze(h, basis), cm = analyze(mix, basis);
    for (std::size_t i = 0; i < g.count(); ++i) {
      REQUIRE(cm.data()[i] == doctest::Approx(a * cf.data()[i] + ch.data()[i]).epsilon(1e-10).scale(1.0));
    }
  }
}
