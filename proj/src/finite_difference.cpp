#include "sigmalab/finite_difference.hpp"

#include "sigmalab/error.hpp"

namespace sigmalab {

namespace {

void require_interior(const Grid& grid, const NodeIndex& node) {
  for (int k = 0; k < grid.dim(); ++k) {
    if (node[k] < 0 || node[k] >= grid.nodes(k)) {
      throw Error(ErrorKind::InvalidArgument, "node lies outside the grid");
    }
  }
  if (!grid.is_interior(node)) throw Error(ErrorKind::BoundaryNode, "stencil needs an interior node");
}

}  // namespace

Eigen::VectorXd fd_gradient(const ScalarField& f, const NodeIndex& node) {
  const Grid& grid = f.grid();
  require_interior(grid, node);
  const std::size_t c = grid.flat(node);
  const double* v = f.values().data();
  Eigen::VectorXd g(grid.dim());
  for (int k = 0; k < grid.dim(); ++k) {
    const auto s = grid.stride(k);
    g[k] = (v[c + s] - v[c - s]) / (2.0 * grid.spacing(k));
  }
  return g;
}

SymMatrix fd_hessian(const ScalarField& f, const NodeIndex& node) {
  require_interior(f.grid(), node);
  return fd_hessian_unchecked(f.grid(), f.values().data(), f.grid().flat(node));
}

SymMatrix fd_hessian_unchecked(const Grid& grid, const double* v, std::size_t c) {
  const int n = grid.dim();
  SymMatrix h(n);
  for (int i = 0; i < n; ++i) {
    const auto si = grid.stride(i);
    const double hi = grid.spacing(i);
    h(i, i) = (v[c + si] - 2.0 * v[c] + v[c - si]) / (hi * hi);
    for (int j = i + 1; j < n; ++j) {
      const auto sj = grid.stride(j);
      const double hj = grid.spacing(j);
      h(i, j) = (v[c + si + sj] - v[c + si - sj] - v[c - si + sj] + v[c - si - sj]) / (4.0 * hi * hj);
    }
  }
  return h;
}

}  // namespace sigmalab
