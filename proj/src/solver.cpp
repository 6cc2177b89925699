#include "sigmalab/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/QR>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "sigmalab/finite_difference.hpp"
#include "sigmalab/parallel.hpp"
#include "sigmalab/sym_matrix.hpp"

namespace sigmalab {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

struct InteriorMap {
  std::vector<std::size_t> flat;  // unknown -> flat node
  std::vector<long> unknown;      // flat node -> unknown, -1 on the boundary

  explicit InteriorMap(const Grid& grid) : unknown(grid.size(), -1) {
    flat.reserve(grid.interior_size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid.is_interior(grid.unflat(i))) {
        unknown[i] = static_cast<long>(flat.size());
        flat.push_back(i);
      }
    }
  }
};

// Stencil offsets shared by residual, Jacobian and Laplacian assembly.
struct StencilEntry {
  std::ptrdiff_t offset;
  double weight;
};

int stencil_size(int n) { return 1 + 2 * n + 2 * n * (n - 1); }

// Linearized operator row at one node: sum_ij C_ij dH_ij/du over the stencil.
void jacobian_row(const Grid& grid, const SymMatrix& c, StencilEntry* out) {
  const int n = grid.dim();
  int e = 0;
  double center = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto si = grid.stride(i);
    const double w = c(i, i) / (grid.spacing(i) * grid.spacing(i));
    out[e++] = {si, w};
    out[e++] = {-si, w};
    center -= 2.0 * w;
    for (int j = i + 1; j < n; ++j) {
      const auto sj = grid.stride(j);
      const double wm = c(i, j) / (2.0 * grid.spacing(i) * grid.spacing(j));
      out[e++] = {si + sj, wm};
      out[e++] = {si - sj, -wm};
      out[e++] = {-si + sj, -wm};
      out[e++] = {-si - sj, wm};
    }
  }
  out[e++] = {0, center};
}

SpMat assemble_matrix(const Grid& grid, const InteriorMap& map,
                      const std::function<void(std::size_t, StencilEntry*)>& row) {
  const int width = stencil_size(grid.dim());
  const std::size_t n = map.flat.size();
  std::vector<Eigen::Triplet<double>> slots(n * width);
  std::vector<char> used(n * width, 0);
  parallel_for(n, [&](std::size_t r) {
    StencilEntry entries[19];
    row(r, entries);
    for (int e = 0; e < width; ++e) {
      const long col = map.unknown[map.flat[r] + entries[e].offset];
      if (col < 0) continue;
      slots[r * width + e] = {static_cast<int>(r), static_cast<int>(col), entries[e].weight};
      used[r * width + e] = 1;
    }
  });
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (used[i]) triplets.push_back(slots[i]);
  }
  SpMat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

double relative_residual(const SpMat& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double nb = b.norm();
  return nb == 0.0 ? (a * x).norm() : (a * x - b).norm() / nb;
}

// Non-symmetric solve meeting the relative-residual contract. Cheapest first: BiCGSTAB with a
// diagonal preconditioner, then with ILUT, then SparseLU.
Eigen::VectorXd solve_general(const SpMat& a, const Eigen::VectorXd& b, double rel_tol) {
  auto accept = [&](const Eigen::VectorXd& x) { return x.allFinite() && relative_residual(a, x, b) <= rel_tol; };
  if (a.rows() > 2000) {
    Eigen::BiCGSTAB<SpMat, Eigen::DiagonalPreconditioner<double>> jacobi;
    jacobi.setTolerance(0.1 * rel_tol);
    jacobi.setMaxIterations(4000);
    jacobi.compute(a);
    if (jacobi.info() == Eigen::Success) {
      Eigen::VectorXd x = jacobi.solve(b);
      if (accept(x)) return x;
    }
    Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> ilut;
    ilut.preconditioner().setDroptol(1e-3);
    ilut.preconditioner().setFillfactor(10);
    ilut.setTolerance(0.1 * rel_tol);
    ilut.setMaxIterations(2000);
    ilut.compute(a);
    if (ilut.info() == Eigen::Success) {
      Eigen::VectorXd x = ilut.solve(b);
      if (accept(x)) return x;
    }
  }
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw Error(ErrorKind::LinearSolveFailure, "sparse LU factorization failed");
  Eigen::VectorXd x = lu.solve(b);
  if (!accept(x)) throw Error(ErrorKind::LinearSolveFailure, "linear solve missed its residual target");
  return x;
}

Eigen::VectorXd solve_spd(const SpMat& a, const Eigen::VectorXd& b, double rel_tol) {
  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double>> cg;
  cg.setTolerance(0.1 * rel_tol);
  cg.setMaxIterations(5000);
  cg.compute(a);
  if (cg.info() == Eigen::Success) {
    Eigen::VectorXd x = cg.solve(b);
    if (x.allFinite() && relative_residual(a, x, b) <= rel_tol) return x;
  }
  return solve_general(a, b, rel_tol);
}

// Discrete Hessians of every interior node (flat order).
std::vector<SymMatrix> interior_hessians(const ScalarField& u, const InteriorMap& map) {
  std::vector<SymMatrix> h(map.flat.size());
  const double* v = u.values().data();
  parallel_for(map.flat.size(), [&](std::size_t r) { h[r] = fd_hessian_unchecked(u.grid(), v, map.flat[r]); });
  return h;
}

void scatter(ScalarField& field, const InteriorMap& map, const Eigen::VectorXd& x) {
  for (std::size_t r = 0; r < map.flat.size(); ++r) field[map.flat[r]] = x[static_cast<Eigen::Index>(r)];
}

Eigen::VectorXd gather(const ScalarField& field, const InteriorMap& map) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(map.flat.size()));
  for (std::size_t r = 0; r < map.flat.size(); ++r) x[static_cast<Eigen::Index>(r)] = field[map.flat[r]];
  return x;
}

ScalarField with_boundary(const DirichletProblem& problem, double interior_fill) {
  ScalarField u = problem.boundary;
  const Grid& grid = problem.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.is_interior(grid.unflat(i))) u[i] = interior_fill;
  }
  return u;
}

SpMat negative_laplacian(const Grid& grid, const InteriorMap& map) {
  SymMatrix identity = SymMatrix::identity(grid.dim());
  // Same stencil as the Jacobian with C = -I and no cross terms.
  return assemble_matrix(grid, map, [&](std::size_t, StencilEntry* out) {
    jacobian_row(grid, identity * -1.0, out);
  });
}

}  // namespace

DirichletProblem DirichletProblem::from_candidate(const Grid& grid, const CandidateSolution& u) {
  if (u.dim() != grid.dim()) throw Error(ErrorKind::InvalidArgument, "candidate and grid dimensions differ");
  return from_field(ScalarField::sample(grid, [&](const Eigen::VectorXd& x) { return u.value(x); }));
}

DirichletProblem DirichletProblem::from_field(ScalarField field) {
  const Grid& grid = field.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.is_interior(grid.unflat(i)) && !std::isfinite(field[i])) {
      throw Error(ErrorKind::InvalidArgument, "boundary values must be finite");
    }
  }
  return DirichletProblem{std::move(field)};
}

Eigen::VectorXd assemble_residual(const ScalarField& u) {
  const InteriorMap map(u.grid());
  Eigen::VectorXd f(static_cast<Eigen::Index>(map.flat.size()));
  const double* v = u.values().data();
  parallel_for(map.flat.size(), [&](std::size_t r) {
    f[static_cast<Eigen::Index>(r)] = sigma2_tilde(fd_hessian_unchecked(u.grid(), v, map.flat[r])) - 1.0;
  });
  return f;
}

double min_interior_u11(const ScalarField& u) {
  const Grid& grid = u.grid();
  const auto s = grid.stride(0);
  const double h2 = grid.spacing(0) * grid.spacing(0);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.is_interior(grid.unflat(i))) continue;
    m = std::min(m, (u[i + s] - 2.0 * u[i] + u[i - s]) / h2);
  }
  return m;
}

ScalarField laplace_initial_guess(const DirichletProblem& problem, double* constant) {
  const Grid& grid = problem.grid();
  const InteriorMap map(grid);
  const SpMat a = negative_laplacian(grid, map);

  // -Delta w0 = 0 with w0 = boundary data: move boundary couplings to the right-hand side.
  const ScalarField boundary_only = with_boundary(problem, 0.0);
  Eigen::VectorXd rhs0(static_cast<Eigen::Index>(map.flat.size()));
  const double* bv = boundary_only.values().data();
  for (std::size_t r = 0; r < map.flat.size(); ++r) {
    double s = 0.0;
    for (int k = 0; k < grid.dim(); ++k) {
      const auto sk = grid.stride(k);
      const double w = 1.0 / (grid.spacing(k) * grid.spacing(k));
      const std::size_t c = map.flat[r];
      if (map.unknown[c + sk] < 0) s += w * bv[c + sk];
      if (map.unknown[c - sk] < 0) s += w * bv[c - sk];
    }
    rhs0[static_cast<Eigen::Index>(r)] = s;
  }
  const Eigen::VectorXd w0 = solve_spd(a, rhs0, 1e-12);
  // -Delta w1 = -1, w1 = 0 on the boundary.
  const Eigen::VectorXd w1 = solve_spd(a, Eigen::VectorXd::Constant(rhs0.size(), -1.0), 1e-12);

  ScalarField f0 = boundary_only;
  scatter(f0, map, w0);
  ScalarField f1(grid, 0.0);
  scatter(f1, map, w1);
  const auto h0 = interior_hessians(f0, map);
  const auto h1 = interior_hessians(f1, map);

  auto mean_sigma = [&](double c) {
    double s = 0.0;
    for (std::size_t r = 0; r < h0.size(); ++r) s += sigma2_tilde(h0[r] + h1[r] * c);
    return s / static_cast<double>(h0.size());
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && mean_sigma(hi) < 1.0; ++i) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mean_sigma(mid) < 1.0 ? lo : hi) = mid;
  }
  double c = 0.5 * (lo + hi);
  auto min_u11 = [&](double cc) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < h0.size(); ++r) m = std::min(m, h0[r](0, 0) + cc * h1[r](0, 0));
    return m;
  };
  for (int i = 0; i < 60 && !(min_u11(c) > 0.0); ++i) c *= 2.0;

  ScalarField u = boundary_only;
  scatter(u, map, w0 + c * w1);
  if (constant) *constant = c;
  return u;
}

namespace {

double default_tol(const InteriorMap& map) { return 1e-10 * std::sqrt(static_cast<double>(map.flat.size())); }

// Damped Newton from u (boundary already in place). Fills `report`; throws SolverError.
void run_newton(const Grid& grid, const InteriorMap& map, ScalarField u, const SolveOptions& options,
                SolveReport& report) {
  auto finish = [&](const Eigen::VectorXd& f) {
    report.residual_norm = f.norm();
    report.residual_max = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
    report.min_u11 = min_interior_u11(u);
    report.solution = u;
  };

  Eigen::VectorXd f = assemble_residual(u);
  report.iterations = 0;
  report.residual_history.assign(1, f.norm());
  report.step_lengths.clear();
  if (!(min_interior_u11(u) > 0.0)) {
    finish(f);
    throw SolverError(ErrorKind::EllipticityLost, "initial iterate has u11 <= 0", report);
  }

  for (int iter = 0;; ++iter) {
    if (f.norm() <= report.tol) {
      report.converged = true;
      finish(f);
      return;
    }
    if (iter >= options.max_iter) {
      finish(f);
      throw SolverError(ErrorKind::MaxIterExceeded, "no convergence within the iteration limit", report);
    }

    const double* raw = u.values().data();
    const SpMat jac = assemble_matrix(grid, map, [&](std::size_t r, StencilEntry* out) {
      jacobian_row(grid, sigma2_linearization(fd_hessian_unchecked(grid, raw, map.flat[r])), out);
    });
    Eigen::VectorXd delta;
    try {
      delta = solve_general(jac, -f, options.linear_tol);
    } catch (const Error& e) {
      finish(f);
      throw SolverError(ErrorKind::LinearSolveFailure, e.what(), report);
    }

    const Eigen::VectorXd base = gather(u, map);
    const double norm0 = f.norm();
    double step = 1.0;
    bool accepted = false;
    bool last_lost_ellipticity = false;
    ScalarField trial = u;
    for (int halving = 0; halving <= options.max_halvings; ++halving, step *= 0.5) {
      scatter(trial, map, base + step * delta);
      if (!(min_interior_u11(trial) > 0.0)) {
        last_lost_ellipticity = true;
        continue;
      }
      last_lost_ellipticity = false;
      Eigen::VectorXd ft = assemble_residual(trial);
      if (ft.norm() < norm0) {
        u = std::move(trial);
        f = std::move(ft);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      finish(f);
      if (last_lost_ellipticity) {
        throw SolverError(ErrorKind::EllipticityLost, "every damped step leaves the u11 > 0 cone", report);
      }
      throw SolverError(ErrorKind::LineSearchStalled, "no damped step decreases ||F||", report);
    }
    report.iterations = iter + 1;
    report.step_lengths.push_back(step);
    report.residual_history.push_back(f.norm());
  }
}

// Grid with every other node, when all axes have an odd node count and stay large enough.
std::optional<Grid> coarser(const Grid& grid) {
  std::array<int, kMaxDim> res{1, 1, 1};
  std::array<Interval, kMaxDim> bounds{};
  for (int k = 0; k < grid.dim(); ++k) {
    const int m = grid.nodes(k);
    if (m % 2 == 0 || (m - 1) / 2 + 1 < 9) return std::nullopt;
    res[static_cast<std::size_t>(k)] = (m - 1) / 2 + 1;
    bounds[static_cast<std::size_t>(k)] = grid.bounds(k);
  }
  return Grid(grid.dim(), bounds, res);
}

ScalarField restrict_injection(const ScalarField& fine, const Grid& coarse) {
  ScalarField out(coarse, 0.0);
  const Grid& g = fine.grid();
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    NodeIndex n = coarse.unflat(i);
    for (int k = 0; k < coarse.dim(); ++k) n[static_cast<std::size_t>(k)] *= 2;
    out[i] = fine[g.flat(n)];
  }
  return out;
}

// Cubic Lagrange prolongation, one axis at a time; exact on cubic polynomials.
ScalarField prolong_cubic(const ScalarField& coarse, const Grid& fine) {
  const int n = fine.dim();
  std::vector<double> cur(coarse.values().begin(), coarse.values().end());
  std::array<int, 3> dims{1, 1, 1};
  for (int k = 0; k < n; ++k) dims[static_cast<std::size_t>(k)] = coarse.grid().nodes(k);
  for (int axis = 0; axis < n; ++axis) {
    std::array<int, 3> nd = dims;
    const int mc = dims[static_cast<std::size_t>(axis)];
    nd[static_cast<std::size_t>(axis)] = 2 * mc - 1;
    std::vector<double> next(static_cast<std::size_t>(nd[0]) * nd[1] * nd[2]);
    auto idx = [n](const std::array<int, 3>& d, int a, int b, int c) {
      return n == 2 ? static_cast<std::size_t>(a) * d[1] + b : (static_cast<std::size_t>(a) * d[1] + b) * d[2] + c;
    };
    for (int a = 0; a < nd[0]; ++a) {
      for (int b = 0; b < nd[1]; ++b) {
        for (int c = 0; c < (n == 3 ? nd[2] : 1); ++c) {
          std::array<int, 3> pos{a, b, c};
          const int i = pos[static_cast<std::size_t>(axis)];
          auto src = [&](int j) {
            std::array<int, 3> q = pos;
            q[static_cast<std::size_t>(axis)] = j;
            return cur[idx(dims, q[0], q[1], q[2])];
          };
          double v;
          if (i % 2 == 0) {
            v = src(i / 2);
          } else {
            const int k = (i - 1) / 2;
            if (k == 0) {
              v = (5 * src(0) + 15 * src(1) - 5 * src(2) + src(3)) / 16.0;
            } else if (k + 1 == mc - 1) {
              v = (src(k - 2) - 5 * src(k - 1) + 15 * src(k) + 5 * src(k + 1)) / 16.0;
            } else {
              v = (-src(k - 1) + 9 * src(k) + 9 * src(k + 1) - src(k + 2)) / 16.0;
            }
          }
          next[idx(nd, a, b, c)] = v;
        }
      }
    }
    cur = std::move(next);
    dims = nd;
  }
  return ScalarField(fine, std::move(cur));
}

// Least-squares quadratic through the boundary data, rescaled onto sigma2_tilde = 1.
ScalarField fitted_quadratic(const DirichletProblem& problem) {
  const Grid& grid = problem.grid();
  const int n = grid.dim();
  const int nb = 1 + n + n * (n + 1) / 2;
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.is_interior(grid.unflat(i))) nodes.push_back(i);
  }
  auto basis = [&](const Eigen::VectorXd& x, double* out) {
    int e = 0;
    out[e++] = 1.0;
    for (int i = 0; i < n; ++i) out[e++] = x[i];
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) out[e++] = x[i] * x[j];
    }
  };
  Eigen::MatrixXd m(static_cast<Eigen::Index>(nodes.size()), nb);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    std::array<double, 10> row{};
    basis(grid.point(grid.unflat(nodes[r])), row.data());
    for (int e = 0; e < nb; ++e) m(static_cast<Eigen::Index>(r), e) = row[static_cast<std::size_t>(e)];
    rhs[static_cast<Eigen::Index>(r)] = problem.boundary[nodes[r]];
  }
  const Eigen::VectorXd coef = m.colPivHouseholderQr().solve(rhs);
  SymMatrix a(n);
  int e = 1 + n;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j, ++e) a(i, j) = (i == j ? 2.0 : 1.0) * coef[e];
  }
  const double s2 = sigma2_tilde(a);
  if (a(0, 0) > 0.0 && s2 > 0.0) {
    a = a * (1.0 / std::sqrt(s2));
  } else {
    a = SymMatrix::identity(n) * (1.0 / (n - 1));
    a(0, 0) = 1.0;
  }
  return ScalarField::sample(grid, [&](const Eigen::VectorXd& x) {
    double v = coef[0];
    for (int i = 0; i < n; ++i) v += coef[1 + i] * x[i];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) v += 0.5 * a(i, j) * x[i] * x[j];
    }
    return v;
  });
}

// Homotopy in the boundary data from a fitted quadratic (an exact discrete solution) to the target.
void solve_by_continuation(const DirichletProblem& problem, const InteriorMap& map, const SolveOptions& options,
                           SolveReport& report) {
  const Grid& grid = problem.grid();
  const ScalarField q = fitted_quadratic(problem);
  auto blended = [&](const ScalarField& interior, double lambda) {
    ScalarField u = interior;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!grid.is_interior(grid.unflat(i))) u[i] = q[i] + lambda * (problem.boundary[i] - q[i]);
    }
    return u;
  };

  SolveOptions inner = options;
  inner.max_iter = std::min(options.max_iter, 12);
  ScalarField prev = q;
  ScalarField cur = q;
  double lambda = 0.0;
  double last_step = 0.0;
  double step = 0.25;
  int steps = 0;
  while (lambda < 1.0) {
    const double target = std::min(1.0, lambda + step);
    ScalarField guess = cur;
    if (last_step > 0.0) {
      const double w = (target - lambda) / last_step;
      for (std::size_t r : map.flat) guess[r] = cur[r] + w * (cur[r] - prev[r]);
    }
    SolveReport trial;
    trial.tol = target < 1.0 ? std::max(report.tol, 1e-6 * std::sqrt(static_cast<double>(map.flat.size())))
                             : report.tol;
    bool ok = false;
    try {
      run_newton(grid, map, blended(guess, target), target < 1.0 ? inner : options, trial);
      ok = true;
    } catch (const SolverError& e) {
      if (e.kind() == ErrorKind::LinearSolveFailure) throw;
      if (last_step > 0.0) {
        // Retry once without the secant predictor before shrinking the step.
        try {
          run_newton(grid, map, blended(cur, target), target < 1.0 ? inner : options, trial);
          ok = true;
        } catch (const SolverError& e2) {
          if (e2.kind() == ErrorKind::LinearSolveFailure) throw;
        }
      }
    }
    if (ok) {
      ++steps;
      prev = std::move(cur);
      cur = trial.solution;
      last_step = target - lambda;
      lambda = target;
      step = std::min(1.0, 1.5 * step);
      if (lambda >= 1.0) {
        trial.continuation_steps = steps;
        trial.init_constant = report.init_constant;
        report = std::move(trial);
        return;
      }
    } else {
      step *= 0.5;
      if (step < 1e-4) {
        trial.continuation_steps = steps;
        throw SolverError(ErrorKind::EllipticityLost, "boundary continuation stalled before reaching the target data",
                          trial);
      }
    }
  }
}

// Automatic start: nested coarse solve when the grid allows it, then the Laplace start, then continuation.
void solve_auto(const DirichletProblem& problem, const SolveOptions& options, SolveReport& report, int depth) {
  const Grid& grid = problem.grid();
  const InteriorMap map(grid);
  if (depth == 0) report.tol = options.tol.value_or(default_tol(map));
  else report.tol = default_tol(map);
  report.levels = depth + 1;

  if (const auto cg = coarser(grid)) {
    SolveReport coarse;
    try {
      solve_auto(DirichletProblem{restrict_injection(problem.boundary, *cg)}, options, coarse, depth + 1);
      ScalarField init = prolong_cubic(coarse.solution, grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!grid.is_interior(grid.unflat(i))) init[i] = problem.boundary[i];
      }
      report.init_constant = coarse.init_constant;
      report.start = "coarse";
      run_newton(grid, map, std::move(init), options, report);
      report.levels = coarse.levels + 1;
      return;
    } catch (const SolverError& e) {
      if (e.kind() == ErrorKind::LinearSolveFailure) throw;
    }
  }

  try {
    report.start = "laplace";
    run_newton(grid, map, laplace_initial_guess(problem, &report.init_constant), options, report);
    return;
  } catch (const SolverError& e) {
    if (e.kind() == ErrorKind::LinearSolveFailure) throw;
  }
  report.start = "continuation";
  solve_by_continuation(problem, map, options, report);
  report.start = "continuation";
  report.levels = depth + 1;
}

}  // namespace

SolveReport newton_solve(const DirichletProblem& problem, const std::optional<ScalarField>& init,
                         const SolveOptions& options) {
  const Grid& grid = problem.grid();
  SolveReport report;
  if (!init) {
    solve_auto(problem, options, report, 0);
    return report;
  }
  if (!(init->grid() == grid)) throw Error(ErrorKind::InvalidArgument, "initial field lives on a different grid");
  const InteriorMap map(grid);
  report.tol = options.tol.value_or(default_tol(map));
  report.start = "user";
  ScalarField u = with_boundary(problem, 0.0);
  for (std::size_t r : map.flat) u[r] = (*init)[r];
  run_newton(grid, map, std::move(u), options, report);
  return report;
}

}  // namespace sigmalab
