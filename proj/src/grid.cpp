#include "fsw/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fsw/error.hpp"

namespace fsw {

Grid::Grid(std::vector<std::size_t> shape, double spacing)
    : shape_(std::move(shape)), spacing_(spacing) {
  if (shape_.empty() || shape_.size() > kMaxDim) {
    throw ParameterError("grid dimension must be between 1 and 3, got " +
                         std::to_string(shape_.size()));
  }
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_)) {
    throw ParameterError("grid spacing must be positive");
  }
  count_ = 1;
  for (auto n : shape_) {
    if (n == 0) throw ParameterError("grid sides must be non-empty");
    count_ *= n;
  }
}

Grid Grid::cube(std::size_t d, std::size_t side, double spacing) {
  return Grid(std::vector<std::size_t>(d, side), spacing);
}

double Grid::cell_volume() const noexcept {
  return std::pow(spacing_, static_cast<double>(dim()));
}

bool Grid::is_cube() const noexcept {
  for (auto n : shape_) {
    if (n != shape_.front()) return false;
  }
  return !shape_.empty();
}

int Grid::dyadic_levels() const noexcept {
  if (!is_cube()) return -1;
  const std::size_t n = shape_.front();
  if (n == 0 || (n & (n - 1)) != 0) return -1;
  int levels = 0;
  while ((std::size_t{1} << levels) < n) ++levels;
  return levels;
}

MultiIndex Grid::unravel(std::size_t flat) const noexcept {
  MultiIndex idx{};
  for (std::size_t a = dim(); a-- > 0;) {
    idx[a] = flat % shape_[a];
    flat /= shape_[a];
  }
  return idx;
}

std::size_t Grid::ravel(const MultiIndex& idx) const noexcept {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < dim(); ++a) flat = flat * shape_[a] + idx[a];
  return flat;
}

Point Grid::node(std::size_t flat) const noexcept {
  const auto idx = unravel(flat);
  Point x{};
  for (std::size_t a = 0; a < dim(); ++a) x[a] = static_cast<double>(idx[a]) * spacing_;
  return x;
}

Point Grid::centred_node(std::size_t flat) const noexcept {
  const auto idx = unravel(flat);
  Point x{};
  for (std::size_t a = 0; a < dim(); ++a) {
    const auto n = static_cast<long long>(shape_[a]);
    auto i = static_cast<long long>(idx[a]);
    if (i >= (n + 1) / 2) i -= n;
    x[a] = static_cast<double>(i) * spacing_;
  }
  return x;
}

std::size_t Grid::nearest(const Point& x) const noexcept {
  MultiIndex idx{};
  for (std::size_t a = 0; a < dim(); ++a) {
    const auto n = static_cast<long long>(shape_[a]);
    auto i = static_cast<long long>(std::llround(x[a] / spacing_)) % n;
    if (i < 0) i += n;
    idx[a] = static_cast<std::size_t>(i);
  }
  return ravel(idx);
}

SampledField::SampledField(Grid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.count()) {
    throw ParameterError("field has " + std::to_string(values.size()) +
                         " samples but grid needs " + std::to_string(grid.count()));
  }
}

double lp_norm(const SampledField& f, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  for (double v : f.values) acc += std::pow(std::abs(v), p);
  return std::pow(acc * f.grid.cell_volume(), 1.0 / p);
}

double inner(const SampledField& f, const SampledField& g) {
  if (!(f.grid == g.grid)) throw ParameterError("inner: grids differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * g[i];
  return acc * f.grid.cell_volume();
}

double norm(const Point& x, std::size_t d) noexcept {
  double acc = 0.0;
  for (std::size_t a = 0; a < d; ++a) acc += x[a] * x[a];
  return std::sqrt(acc);
}

}  // namespace fsw
