#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sigmalab/candidates.hpp"
#include "sigmalab/ellipsoid.hpp"
#include "sigmalab/grid.hpp"
#include "sigmalab/kahler.hpp"
#include "sigmalab/legendre.hpp"
#include "sigmalab/smooth_function.hpp"
#include "sigmalab/solver.hpp"

namespace sigmalab {

/// Seeded source of uniform samples. The mapping from engine output is fixed here so
/// that a seed gives the same points with any standard library.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi);
  Eigen::VectorXd point(const std::vector<Interval>& box);
  ComplexPoint complex_point(const std::array<Interval, 4>& box);
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// [-3,3] x [-2,2]^(n-1).
std::vector<Interval> default_residual_box(int dim);

struct ResidualSweep {
  int samples = 0;
  double max_abs_residual = 0.0;  // max |sigma2_tilde(D^2 u) - 1|
  Eigen::VectorXd worst_point;
  /// For u = r^2 e^t + h(t): max |sigma2_tilde(D^2 u) - 4 e^t h''(t)|.
  std::optional<double> max_ode_identity_error;
};

ResidualSweep residual_sweep(const CandidateSolution& u, const std::vector<Interval>& box, int samples,
                             std::uint64_t seed);

/// t, s, x, y each in [-2, 2].
std::array<Interval, 4> default_complex_box();

struct MongeAmpereSweep {
  int samples = 0;
  double target = 0.0;  // 1/16 raw, 1 rescaled
  double det_min = 0.0;
  double det_max = 0.0;
  double max_abs_deviation = 0.0;  // max |det - target|
};

MongeAmpereSweep monge_ampere_sweep(const CandidateSolution& u, int samples, std::uint64_t seed, bool rescaled,
                                    const std::array<Interval, 4>& box = default_complex_box());

struct RicciSweep {
  int samples = 0;
  double max_abs_entry = 0.0;
  ComplexPoint worst_point;
};

RicciSweep ricci_sweep(const CandidateSolution& u, int samples, std::uint64_t seed, double potential_scale = 1.0,
                       const std::array<Interval, 4>& box = default_complex_box());

struct BarrierTrial {
  std::string source;  // short description of the convex solution
  double level = 0.0;
  double value = 0.0;  // sigma2_tilde(M^2)
  double bound = 0.0;  // 1 / (4 h^2)
  double shrink = 1.0;
  double containment_excess = 0.0;  // max of (normalized u) - h over ellipsoid boundary samples
  bool pass = false;
};

/// Sublevel set of u at `level`, inscribed ellipsoid and barrier check.
BarrierTrial barrier_trial(const CandidateSolution& u, double level, int samples = 1000);
/// Same for any convex source; `start` seeds the minimizer search.
BarrierTrial barrier_trial(std::shared_ptr<const SmoothFunction> source, double level, const Eigen::VectorXd& start,
                           int samples = 1000);

/// Randomized (convex solution, level, inscribed ellipsoid) triples. Draws that turn out
/// non-convex on their sublevel set are redrawn, so exactly `count` trials come back.
std::vector<BarrierTrial> random_barrier_suite(int count, std::uint64_t seed);

struct FdOrderStudy {
  double spacing = 0.0;
  double error_coarse = 0.0;  // max entry error of fd_hessian at spacing
  double error_fine = 0.0;    // same at spacing / 2
  double ratio = 0.0;
};

/// fd_hessian error at x against the exact Hessian, at h and h/2.
FdOrderStudy fd_order_study(const CandidateSolution& u, const Eigen::VectorXd& x, double spacing);

struct SolverConvergenceRow {
  int nodes = 0;
  double spacing = 0.0;
  bool converged = false;
  int iterations = 0;
  std::string start;
  double max_error = 0.0;  // max |u - closed form| over interior nodes
  double min_u11 = 0.0;
  std::string failure;
};

/// Solves the Dirichlet problem with closed-form data on [lo, hi]^n for each node count.
std::vector<SolverConvergenceRow> solver_convergence(const CandidateSolution& u, Interval box,
                                                     const std::vector<int>& nodes, const SolveOptions& options = {});

struct ThetaRefinementRow {
  int z_nodes = 0;
  double spacing = 0.0;
  double max_abs_laplacian = 0.0;
};

/// Harmonicity residual of theta on `options` and on successive refinements that halve
/// every spacing; the z-range is frozen at the coarsest level.
std::vector<ThetaRefinementRow> theta_refinement(const CandidateSolution& u, const LegendreOptions& options,
                                                 int levels = 2);

/// Ratios err[k] / err[k+1].
std::vector<double> refinement_ratios(const std::vector<double>& errors);

}  // namespace sigmalab
