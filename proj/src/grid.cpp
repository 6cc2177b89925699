#include "sigmalab/grid.hpp"

#include <cmath>
#include <string>

#include "sigmalab/error.hpp"

namespace sigmalab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::BoundaryNode: return "BoundaryNode";
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorKind::NotHarmonic: return "NotHarmonic";
    case ErrorKind::NotASolution: return "NotASolution";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorKind::EllipticityLost: return "EllipticityLost";
    case ErrorKind::LineSearchStalled: return "LineSearchStalled";
    case ErrorKind::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorKind::NotConvex: return "NotConvex";
    case ErrorKind::NoInteriorPoint: return "NoInteriorPoint";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::ZOutOfRange: return "ZOutOfRange";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Grid::Grid(int dim, std::array<Interval, kMaxDim> bounds, std::array<int, kMaxDim> resolution)
    : dim_(dim), bounds_(bounds), resolution_(resolution) {
  if (dim < 2 || dim > kMaxDim) {
    throw Error(ErrorKind::InvalidArgument, "grid dimension must be 2 or 3, got " + std::to_string(dim));
  }
  size_ = 1;
  for (int k = 0; k < kMaxDim; ++k) {
    if (k >= dim) {
      resolution_[k] = 1;
      bounds_[k] = {};
      spacing_[k] = 0.0;
      continue;
    }
    if (resolution_[k] < 5) {
      throw Error(ErrorKind::InvalidArgument, "each axis needs at least 5 nodes");
    }
    const double width = bounds_[k].hi - bounds_[k].lo;
    if (!(width > 0.0) || !std::isfinite(width)) {
      throw Error(ErrorKind::InvalidArgument, "axis bounds must satisfy lo < hi");
    }
    spacing_[k] = width / (resolution_[k] - 1);
    size_ *= static_cast<std::size_t>(resolution_[k]);
  }
  std::ptrdiff_t s = 1;
  for (int k = dim - 1; k >= 0; --k) {
    strides_[k] = s;
    s *= resolution_[k];
  }
  for (int k = dim; k < kMaxDim; ++k) strides_[k] = 0;
}

Grid Grid::cube(int dim, Interval bounds, int nodes_per_axis) {
  return Grid(dim, {bounds, bounds, bounds}, {nodes_per_axis, nodes_per_axis, nodes_per_axis});
}

NodeIndex Grid::unflat(std::size_t idx) const {
  NodeIndex node{0, 0, 0};
  for (int k = dim_ - 1; k >= 0; --k) {
    node[k] = static_cast<int>(idx % resolution_[k]);
    idx /= resolution_[k];
  }
  return node;
}

Eigen::VectorXd Grid::point(const NodeIndex& node) const {
  Eigen::VectorXd p(dim_);
  for (int k = 0; k < dim_; ++k) p[k] = coordinate(k, node[k]);
  return p;
}

bool Grid::is_interior(const NodeIndex& node) const {
  for (int k = 0; k < dim_; ++k) {
    if (node[k] <= 0 || node[k] >= resolution_[k] - 1) return false;
  }
  return true;
}

std::size_t Grid::interior_size() const {
  std::size_t n = 1;
  for (int k = 0; k < dim_; ++k) n *= static_cast<std::size_t>(resolution_[k] - 2);
  return n;
}

bool Grid::operator==(const Grid& other) const {
  if (dim_ != other.dim_) return false;
  for (int k = 0; k < dim_; ++k) {
    if (resolution_[k] != other.resolution_[k] || bounds_[k].lo != other.bounds_[k].lo ||
        bounds_[k].hi != other.bounds_[k].hi) {
      return false;
    }
  }
  return true;
}

ScalarField::ScalarField(Grid grid, double fill) : grid_(std::move(grid)), values_(grid_.size(), fill) {}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorKind::InvalidArgument, "field value count does not match the grid");
  }
}

bool ScalarField::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace sigmalab
