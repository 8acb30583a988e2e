#include "fsw/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace fsw {

namespace {

struct FftwDeleter {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter>;

template <typename T>
FftwBuffer<T> allocate(std::size_t n) {
  return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1))));
}

std::size_t half_count(const Grid& g) {
  std::size_t c = 1;
  for (std::size_t a = 0; a + 1 < g.dim(); ++a) c *= g.side(a);
  return c * (g.shape().back() / 2 + 1);
}

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// FFTW planning is not thread-safe; plan execution on fresh aligned buffers is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [shape, plans] : plans_) {
      fftw_destroy_plan(plans.r2c);
      fftw_destroy_plan(plans.c2r);
    }
  }

  PlanPair get(const Grid& g) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(g.shape());
    if (it != plans_.end()) return it->second;
    std::vector<int> n(g.shape().begin(), g.shape().end());
    auto real = allocate<double>(g.count());
    auto cplx = allocate<fftw_complex>(half_count(g));
    PlanPair plans;
    plans.r2c = fftw_plan_dft_r2c(static_cast<int>(n.size()), n.data(), real.get(), cplx.get(),
                                  FFTW_ESTIMATE);
    plans.c2r = fftw_plan_dft_c2r(static_cast<int>(n.size()), n.data(), cplx.get(), real.get(),
                                  FFTW_ESTIMATE);
    plans_.emplace(g.shape(), plans);
    return plans;
  }

 private:
  std::mutex mutex_;
  std::map<std::vector<std::size_t>, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void Spectrum::for_each(
    const std::function<void(std::complex<double>&, const Point&, double, int)>& f) {
  const std::size_t d = grid.dim();
  const std::size_t last = grid.shape().back();
  const std::size_t half = last / 2 + 1;
  MultiIndex idx{};
  for (std::size_t flat = 0; flat < bins.size(); ++flat) {
    std::size_t rest = flat;
    idx[d - 1] = rest % half;
    rest /= half;
    for (std::size_t a = d - 1; a-- > 0;) {
      idx[a] = rest % grid.side(a);
      rest /= grid.side(a);
    }
    Point lambda{};
    double r2 = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      const auto n = static_cast<long long>(grid.side(a));
      auto k = static_cast<long long>(idx[a]);
      if (k > n / 2) k -= n;
      lambda[a] = static_cast<double>(k) / grid.length(a);
      r2 += lambda[a] * lambda[a];
    }
    const std::size_t kl = idx[d - 1];
    const int multiplicity = (kl == 0 || (last % 2 == 0 && kl == last / 2)) ? 1 : 2;
    f(bins[flat], lambda, std::sqrt(r2), multiplicity);
  }
}

Spectrum forward(const SampledField& f) {
  const auto plans = cache().get(f.grid);
  auto real = allocate<double>(f.size());
  auto cplx = allocate<fftw_complex>(half_count(f.grid));
  std::memcpy(real.get(), f.values.data(), sizeof(double) * f.size());
  fftw_execute_dft_r2c(plans.r2c, real.get(), cplx.get());
  Spectrum s{f.grid, std::vector<std::complex<double>>(half_count(f.grid))};
  std::memcpy(static_cast<void*>(s.bins.data()), cplx.get(), sizeof(fftw_complex) * s.bins.size());
  return s;
}

SampledField inverse(const Spectrum& s) {
  const auto plans = cache().get(s.grid);
  auto real = allocate<double>(s.grid.count());
  auto cplx = allocate<fftw_complex>(s.bins.size());
  std::memcpy(cplx.get(), s.bins.data(), sizeof(fftw_complex) * s.bins.size());
  fftw_execute_dft_c2r(plans.c2r, cplx.get(), real.get());
  SampledField out(s.grid);
  const double scale = 1.0 / static_cast<double>(s.grid.count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = real[i] * scale;
  return out;
}

SampledField apply_radial_multiplier(const SampledField& f,
                                     const std::function<double(double)>& m) {
  Spectrum s = forward(f);
  s.for_each([&](std::complex<double>& bin, const Point&, double r, int) { bin *= m(r); });
  return inverse(s);
}

}  // namespace fsw
