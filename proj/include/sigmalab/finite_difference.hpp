#pragma once

#include <Eigen/Core>

#include "sigmalab/grid.hpp"
#include "sigmalab/sym_matrix.hpp"

namespace sigmalab {

/// Central-difference gradient; throws BoundaryNode off the interior.
Eigen::VectorXd fd_gradient(const ScalarField& f, const NodeIndex& node);

/// Second-order discrete Hessian: 3-point pure seconds, 4-point cross stencil
/// for mixed entries. Throws BoundaryNode off the interior.
SymMatrix fd_hessian(const ScalarField& f, const NodeIndex& node);

/// Hessian at flat interior index without bounds checking; hot path for the solver.
SymMatrix fd_hessian_unchecked(const Grid& grid, const double* values, std::size_t flat);

}  // namespace sigmalab
