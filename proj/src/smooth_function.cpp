#include "sigmalab/smooth_function.hpp"

#include <algorithm>
#include <cmath>

#include "sigmalab/error.hpp"
#include "sigmalab/finite_difference.hpp"

namespace sigmalab {

FieldInterpolant::FieldInterpolant(ScalarField field) : field_(std::move(field)) {
  const Grid& grid = field_.grid();
  grad_.resize(grid.size());
  hess_.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const NodeIndex node = grid.unflat(i);
    if (!grid.is_interior(node)) continue;
    grad_[i] = fd_gradient(field_, node);
    hess_[i] = fd_hessian(field_, node);
  }
}

template <class Getter>
double FieldInterpolant::interpolate(const Eigen::Ref<const Eigen::VectorXd>& x, int inset, Getter&& get) const {
  const Grid& grid = field_.grid();
  const int n = grid.dim();
  if (x.size() != n) throw Error(ErrorKind::InvalidArgument, "point dimension does not match the field");
  NodeIndex base{0, 0, 0};
  std::array<double, kMaxDim> frac{0, 0, 0};
  for (int k = 0; k < n; ++k) {
    const double pos = (x[k] - grid.bounds(k).lo) / grid.spacing(k);
    const double lo = inset;
    const double hi = grid.nodes(k) - 1 - inset;
    const double c = std::clamp(pos, lo, hi);
    int cell = std::min(static_cast<int>(std::floor(c)), static_cast<int>(hi) - 1);
    cell = std::max(cell, inset);
    base[k] = cell;
    frac[k] = c - cell;
  }
  double s = 0.0;
  for (int corner = 0; corner < (1 << n); ++corner) {
    NodeIndex node = base;
    double w = 1.0;
    for (int k = 0; k < n; ++k) {
      const bool up = (corner >> k) & 1;
      node[k] += up;
      w *= up ? frac[k] : 1.0 - frac[k];
    }
    if (w != 0.0) s += w * get(grid.flat(node));
  }
  return s;
}

double FieldInterpolant::value(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return interpolate(x, 0, [&](std::size_t i) { return field_[i]; });
}

Eigen::VectorXd FieldInterpolant::gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd g(dim());
  for (int k = 0; k < dim(); ++k) g[k] = interpolate(x, 1, [&](std::size_t i) { return grad_[i][k]; });
  return g;
}

SymMatrix FieldInterpolant::hessian(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  SymMatrix h(dim());
  for (int i = 0; i < dim(); ++i) {
    for (int j = i; j < dim(); ++j) h(i, j) = interpolate(x, 1, [&](std::size_t n) { return hess_[n](i, j); });
  }
  return h;
}

double FieldInterpolant::u1(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return interpolate(x, 1, [&](std::size_t i) { return grad_[i][0]; });
}

double FieldInterpolant::u11(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return interpolate(x, 1, [&](std::size_t i) { return hess_[i](0, 0); });
}

}  // namespace sigmalab
