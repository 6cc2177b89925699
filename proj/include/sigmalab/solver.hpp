#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sigmalab/candidates.hpp"
#include "sigmalab/error.hpp"
#include "sigmalab/grid.hpp"

namespace sigmalab {

/// sigma2_tilde(D^2 u) = 1 in the box with u = boundary on boundary nodes.
/// Only the boundary nodes of `boundary` are read.
struct DirichletProblem {
  ScalarField boundary;

  const Grid& grid() const { return boundary.grid(); }

  static DirichletProblem from_candidate(const Grid& grid, const CandidateSolution& u);
  static DirichletProblem from_field(ScalarField field);
};

struct SolveOptions {
  /// Convergence threshold on ||F||_2; default 1e-10 * sqrt(#interior nodes).
  std::optional<double> tol;
  int max_iter = 50;
  int max_halvings = 30;
  /// Required relative residual of every inner linear solve.
  double linear_tol = 1e-10;
};

struct SolveReport {
  int iterations = 0;
  double residual_norm = 0.0;  // ||F||_2
  double residual_max = 0.0;   // ||F||_inf
  double min_u11 = 0.0;
  bool converged = false;
  double tol = 0.0;
  double init_constant = 0.0;  // c of the Laplace start Delta u = c, when init was automatic
  /// How the final Newton run was started: "user", "laplace", "coarse" or "continuation".
  std::string start;
  int levels = 1;              // grids visited by the automatic start, finest included
  int continuation_steps = 0;  // boundary-homotopy steps, when used
  std::vector<double> residual_history;
  std::vector<double> step_lengths;
  ScalarField solution;
};

class SolverError : public Error {
 public:
  SolverError(ErrorKind kind, const std::string& what, SolveReport report)
      : Error(kind, what), report_(std::move(report)) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

/// F_p = sigma2_tilde(fd_hessian(u, p)) - 1 at every interior node, in flat order.
Eigen::VectorXd assemble_residual(const ScalarField& u);

/// Minimum discrete u11 over interior nodes.
double min_interior_u11(const ScalarField& u);

/// Solves Delta u = c with the problem's boundary data, c chosen by bisection so the mean
/// discrete sigma2_tilde is 1 (then raised if needed until min u11 > 0).
ScalarField laplace_initial_guess(const DirichletProblem& problem, double* constant = nullptr);

/// Damped Newton. With `init` empty the start is automatic: on grids with odd node counts the
/// problem is first solved on the grid of every other node and prolongated (cubic); the coarsest
/// level starts from laplace_initial_guess and, if that run fails, from a homotopy of the boundary
/// data beginning at a fitted quadratic solution. Iteration counts and histories describe the run on
/// the requested grid. Throws SolverError (MaxIterExceeded, EllipticityLost, LineSearchStalled,
/// LinearSolveFailure).
SolveReport newton_solve(const DirichletProblem& problem, const std::optional<ScalarField>& init = std::nullopt,
                         const SolveOptions& options = {});

struct RigidityOptions {
  double epsilon = 0.1;
  std::vector<double> box_sizes{1.0, 2.0, 4.0};
  /// Odd so that the t-axis x = 0 is a grid line; h/L stays fixed across rows.
  int nodes_per_axis = 21;
  SolveOptions solve;
};

struct RigidityRow {
  double box_size = 0.0;
  double spacing = 0.0;
  bool converged = false;
  int iterations = 0;
  double u11_oscillation = 0.0;  // over the inner half box
  double max_abs_u1_axis = 0.0;  // max |u_1(t, 0, .., 0)|
  std::string failure;
};

/// Bump added to the boundary data of the box [-L, L]^n, in box-relative coordinates y = x / L.
double rigidity_bump(const Eigen::Ref<const Eigen::VectorXd>& y);

/// Solves on growing boxes with perturbed convex quadratic data; rows for failed solves carry `failure`.
std::vector<RigidityRow> rigidity_sweep(const CandidateSolution& base, const RigidityOptions& options);

}  // namespace sigmalab
