#pragma once

// Regular periodic grids on the torus [0, L)^d and fields sampled on them.
// Samples are stored row-major with the last axis fastest.

#include <array>
#include <cstddef>
#include <vector>

namespace fsw {

inline constexpr std::size_t kMaxDim = 3;

using Point = std::array<double, kMaxDim>;
using MultiIndex = std::array<std::size_t, kMaxDim>;

class Grid {
 public:
  Grid() = default;
  /// Throws ParameterError unless 1 <= shape.size() <= 3, all sides >= 1 and spacing > 0.
  Grid(std::vector<std::size_t> shape, double spacing);

  /// d-dimensional cube with `side` points per axis.
  static Grid cube(std::size_t d, std::size_t side, double spacing);

  std::size_t dim() const noexcept { return shape_.size(); }
  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  std::size_t side(std::size_t axis) const { return shape_.at(axis); }
  double spacing() const noexcept { return spacing_; }
  double length(std::size_t axis) const { return static_cast<double>(shape_.at(axis)) * spacing_; }
  std::size_t count() const noexcept { return count_; }
  /// h^d, the quadrature weight of one sample.
  double cell_volume() const noexcept;

  bool is_cube() const noexcept;
  /// log2 of the common side if the grid is a cube with power-of-two side, else -1.
  int dyadic_levels() const noexcept;

  MultiIndex unravel(std::size_t flat) const noexcept;
  std::size_t ravel(const MultiIndex& idx) const noexcept;

  /// Coordinate of a node, in [0, L).
  Point node(std::size_t flat) const noexcept;
  /// Coordinate of a node mapped to the centred cell [-L/2, L/2).
  Point centred_node(std::size_t flat) const noexcept;
  /// Flat index of the node nearest to `x` (periodically wrapped).
  std::size_t nearest(const Point& x) const noexcept;

  bool operator==(const Grid& other) const noexcept {
    return shape_ == other.shape_ && spacing_ == other.spacing_;
  }

 private:
  std::vector<std::size_t> shape_;
  double spacing_ = 1.0;
  std::size_t count_ = 0;
};

struct SampledField {
  Grid grid;
  std::vector<double> values;

  SampledField() = default;
  explicit SampledField(Grid g) : grid(std::move(g)), values(grid.count(), 0.0) {}
  SampledField(Grid g, std::vector<double> v);

  std::size_t size() const noexcept { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Discrete L^p norm (sum |f|^p h^d)^{1/p}; p = inf gives the max norm.
double lp_norm(const SampledField& f, double p);
/// Discrete inner product sum f g h^d.
double inner(const SampledField& f, const SampledField& g);

/// Euclidean norm of the first `d` components.
double norm(const Point& x, std::size_t d) noexcept;

}  // namespace fsw
