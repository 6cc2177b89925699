#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace sigmalab {

constexpr int kMaxDim = 3;

/// Multi-index of a grid node; entries beyond the grid dimension are zero.
using NodeIndex = std::array<int, kMaxDim>;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Uniform box grid in 2 or 3 dimensions. Axis 0 is the distinguished "t" axis.
class Grid {
 public:
  Grid() = default;
  Grid(int dim, std::array<Interval, kMaxDim> bounds, std::array<int, kMaxDim> resolution);

  /// Same interval and node count on every axis.
  static Grid cube(int dim, Interval bounds, int nodes_per_axis);

  int dim() const { return dim_; }
  const Interval& bounds(int axis) const { return bounds_[axis]; }
  int nodes(int axis) const { return resolution_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  std::size_t size() const { return size_; }

  std::size_t flat(const NodeIndex& node) const {
    std::size_t idx = 0;
    for (int k = 0; k < dim_; ++k) idx = idx * resolution_[k] + node[k];
    return idx;
  }
  NodeIndex unflat(std::size_t idx) const;

  double coordinate(int axis, int i) const { return bounds_[axis].lo + i * spacing_[axis]; }
  Eigen::VectorXd point(const NodeIndex& node) const;

  bool is_interior(const NodeIndex& node) const;
  std::size_t interior_size() const;

  /// Offset in flat index space for a unit step along `axis`.
  std::ptrdiff_t stride(int axis) const { return strides_[axis]; }

  bool operator==(const Grid& other) const;

 private:
  int dim_ = 0;
  std::array<Interval, kMaxDim> bounds_{};
  std::array<int, kMaxDim> resolution_{1, 1, 1};
  std::array<double, kMaxDim> spacing_{};
  std::array<std::ptrdiff_t, kMaxDim> strides_{};
  std::size_t size_ = 0;
};

/// Grid function: one value per node, row-major with axis 0 slowest.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(Grid grid, double fill = 0.0);
  ScalarField(Grid grid, std::vector<double> values);

  template <class F>
  static ScalarField sample(const Grid& grid, F&& f) {
    ScalarField field(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) field.values_[i] = f(grid.point(grid.unflat(i)));
    return field;
  }

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double at(const NodeIndex& node) const { return values_[grid_.flat(node)]; }

  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

}  // namespace sigmalab
