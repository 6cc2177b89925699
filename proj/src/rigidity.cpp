#include <algorithm>
#include <cmath>
#include <limits>

#include "sigmalab/finite_difference.hpp"
#include "sigmalab/solver.hpp"

namespace sigmalab {

double rigidity_bump(const Eigen::Ref<const Eigen::VectorXd>& y) {
  // Gaussian centred off-axis near the +t face.
  static constexpr double center[kMaxDim] = {0.6, 0.3, -0.2};
  double r2 = 0.0;
  for (Eigen::Index k = 0; k < y.size(); ++k) r2 += (y[k] - center[k]) * (y[k] - center[k]);
  return std::exp(-r2 / 0.18);
}

std::vector<RigidityRow> rigidity_sweep(const CandidateSolution& base, const RigidityOptions& options) {
  const auto* quad = std::get_if<QuadraticSolution>(&base.variant());
  if (!quad) throw Error(ErrorKind::InvalidArgument, "rigidity sweep needs a quadratic base solution");
  if (SymMatrix::from_dense(quad->A).min_eigenvalue() <= 0.0) {
    throw Error(ErrorKind::NotConvex, "rigidity sweep needs A positive definite");
  }
  if (options.nodes_per_axis % 2 == 0) throw Error(ErrorKind::InvalidArgument, "nodes_per_axis must be odd");
  const int n = base.dim();

  std::vector<RigidityRow> rows;
  for (double L : options.box_sizes) {
    RigidityRow row;
    row.box_size = L;
    const Grid grid = Grid::cube(n, {-L, L}, options.nodes_per_axis);
    row.spacing = grid.spacing(0);
    const ScalarField data = ScalarField::sample(grid, [&](const Eigen::VectorXd& x) {
      return base.value(x) + options.epsilon * rigidity_bump(x / L);
    });
    try {
      const SolveReport rep = newton_solve(DirichletProblem::from_field(data), std::nullopt, options.solve);
      row.converged = rep.converged;
      row.iterations = rep.iterations;
      const ScalarField& u = rep.solution;
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      const int mid = (options.nodes_per_axis - 1) / 2;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const NodeIndex node = grid.unflat(i);
        if (!grid.is_interior(node)) continue;
        bool inner = true;
        for (int k = 0; k < n; ++k) inner = inner && std::abs(grid.coordinate(k, node[k])) <= 0.5 * L + 1e-12;
        if (inner) {
          const double u11 = fd_hessian(u, node)(0, 0);
          lo = std::min(lo, u11);
          hi = std::max(hi, u11);
        }
        bool on_axis = true;
        for (int k = 1; k < n; ++k) on_axis = on_axis && node[k] == mid;
        if (on_axis) row.max_abs_u1_axis = std::max(row.max_abs_u1_axis, std::abs(fd_gradient(u, node)[0]));
      }
      row.u11_oscillation = hi - lo;
    } catch (const SolverError& e) {
      row.failure = e.what();
      row.iterations = e.report().iterations;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sigmalab
