#include "sigmalab/studies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <variant>

#include <Eigen/QR>

#include "sigmalab/error.hpp"
#include "sigmalab/finite_difference.hpp"
#include "sigmalab/polynomial.hpp"
#include "sigmalab/smooth_function.hpp"

namespace sigmalab {

double Sampler::uniform(double lo, double hi) {
  const double u01 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u01;
}

Eigen::VectorXd Sampler::point(const std::vector<Interval>& box) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(box.size()));
  for (std::size_t k = 0; k < box.size(); ++k) x[static_cast<Eigen::Index>(k)] = uniform(box[k].lo, box[k].hi);
  return x;
}

ComplexPoint Sampler::complex_point(const std::array<Interval, 4>& box) {
  ComplexPoint p;
  p.t = uniform(box[0].lo, box[0].hi);
  p.s = uniform(box[1].lo, box[1].hi);
  p.x = uniform(box[2].lo, box[2].hi);
  p.y = uniform(box[3].lo, box[3].hi);
  return p;
}

std::vector<Interval> default_residual_box(int dim) {
  std::vector<Interval> box(static_cast<std::size_t>(dim), Interval{-2.0, 2.0});
  box[0] = {-3.0, 3.0};
  return box;
}

std::array<Interval, 4> default_complex_box() {
  return {Interval{-2.0, 2.0}, Interval{-2.0, 2.0}, Interval{-2.0, 2.0}, Interval{-2.0, 2.0}};
}

namespace {

long double sigma2_extended(const CandidateSolution& u, const long double* x) {
  const int n = u.dim();
  auto d = [&](int i, int j) {
    DerivIndex a{0, 0, 0};
    ++a[static_cast<std::size_t>(i)];
    ++a[static_cast<std::size_t>(j)];
    return u.eval_extended(x, a);
  };
  long double trace_x = 0.0L;
  long double cross = 0.0L;
  for (int i = 1; i < n; ++i) {
    trace_x += d(i, i);
    const long double c = d(0, i);
    cross += c * c;
  }
  return d(0, 0) * trace_x - cross;
}

}  // namespace

ResidualSweep residual_sweep(const CandidateSolution& u, const std::vector<Interval>& box, int samples,
                             std::uint64_t seed) {
  if (static_cast<int>(box.size()) != u.dim()) throw Error(ErrorKind::InvalidArgument, "box and candidate dimensions differ");
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
  Sampler sampler(seed);
  ResidualSweep out;
  out.samples = samples;
  out.worst_point = Eigen::VectorXd::Zero(u.dim());
  const bool radial = std::holds_alternative<RadialExpSolution>(u.variant());
  if (radial) out.max_ode_identity_error = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Eigen::VectorXd x = sampler.point(box);
    const double r = std::abs(u.residual(x));
    if (r > out.max_abs_residual || i == 0) {
      out.max_abs_residual = r;
      out.worst_point = x;
    }
    if (radial) {
      long double xl[kMaxDim] = {0.0L, 0.0L, 0.0L};
      for (int k = 0; k < u.dim(); ++k) xl[k] = x[k];
      // h''(t) is u_tt on the t-axis.
      const long double axis[kMaxDim] = {xl[0], 0.0L, 0.0L};
      const long double hpp = u.eval_extended(axis, {2, 0, 0});
      const long double e = sigma2_extended(u, xl) - 4.0L * std::exp(xl[0]) * hpp;
      out.max_ode_identity_error = std::max(*out.max_ode_identity_error, static_cast<double>(std::fabs(e)));
    }
  }
  return out;
}

MongeAmpereSweep monge_ampere_sweep(const CandidateSolution& u, int samples, std::uint64_t seed, bool rescaled,
                                    const std::array<Interval, 4>& box) {
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
  Sampler sampler(seed);
  MongeAmpereSweep out;
  out.samples = samples;
  out.target = rescaled ? 1.0 : 1.0 / 16.0;
  out.det_min = std::numeric_limits<double>::infinity();
  out.det_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const ComplexPoint p = sampler.complex_point(box);
    const double dev = ma_residual(u, p, rescaled);
    const double det = out.target + dev;
    out.det_min = std::min(out.det_min, det);
    out.det_max = std::max(out.det_max, det);
    out.max_abs_deviation = std::max(out.max_abs_deviation, std::abs(dev));
  }
  return out;
}

RicciSweep ricci_sweep(const CandidateSolution& u, int samples, std::uint64_t seed, double potential_scale,
                       const std::array<Interval, 4>& box) {
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
  Sampler sampler(seed);
  RicciSweep out;
  out.samples = samples;
  for (int i = 0; i < samples; ++i) {
    const ComplexPoint p = sampler.complex_point(box);
    const double m = ricci(u, p, potential_scale).cwiseAbs().maxCoeff();
    if (m > out.max_abs_entry || i == 0) {
      out.max_abs_entry = m;
      out.worst_point = p;
    }
  }
  return out;
}

BarrierTrial barrier_trial(const CandidateSolution& u, double level, int samples) {
  BarrierTrial t =
      barrier_trial(std::make_shared<const CandidateFunction>(u), level, Eigen::VectorXd::Zero(u.dim()), samples);
  t.source = u.tag();
  return t;
}

BarrierTrial barrier_trial(std::shared_ptr<const SmoothFunction> source, double level, const Eigen::VectorXd& start,
                           int samples) {
  const SublevelSet k = SublevelSet::build(std::move(source), level, start);
  const InscribedEllipsoid e = inscribe_ellipsoid(k, samples);
  const BarrierReport r = barrier_check(e.ellipsoid, level);
  BarrierTrial t;
  t.source = "field";
  t.level = level;
  t.value = r.value;
  t.bound = r.bound;
  t.shrink = e.shrink;
  t.containment_excess = containment_excess(k, e.ellipsoid, samples);
  t.pass = r.pass;
  return t;
}

namespace {

Eigen::MatrixXd random_rotation(Sampler& s, int n) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = s.uniform(-1.0, 1.0);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ();
}

CandidateSolution random_convex_quadratic(Sampler& s, int n) {
  const Eigen::MatrixXd q = random_rotation(s, n);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = s.uniform(0.2, 3.0);
  Eigen::MatrixXd a = q * d.asDiagonal() * q.transpose();
  a = 0.5 * (a + a.transpose());
  const double s2 = sigma2_tilde(SymMatrix::from_dense(a));
  a /= std::sqrt(s2);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b[i] = s.uniform(-1.0, 1.0);
  return CandidateSolution::quadratic(a, b, s.uniform(-1.0, 1.0));
}

// a t^2 + t b(x) + g(x) with harmonic quadratic b scaled small enough to stay convex near the minimum.
CandidateSolution random_he_form(Sampler& s, int n) {
  const int m = n - 1;
  std::map<Exponent, double> terms;
  const double beta = s.uniform(-0.3, 0.3);
  if (m == 1) {
    terms[{1, 0}] = s.uniform(-0.5, 0.5);
  } else {
    terms[{2, 0}] = beta;
    terms[{0, 2}] = -beta;
    terms[{1, 1}] = s.uniform(-0.3, 0.3);
    terms[{1, 0}] = s.uniform(-0.5, 0.5);
  }
  return make_he_form(n, s.uniform(0.3, 2.0), HarmonicPolynomial(Polynomial(m, terms)));
}

}  // namespace

std::vector<BarrierTrial> random_barrier_suite(int count, std::uint64_t seed) {
  Sampler s(seed);
  std::vector<BarrierTrial> out;
  int draws = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++draws > 20 * count + 100) throw Error(ErrorKind::NotConvex, "too many non-convex draws");
    const int n = s.uniform(0.0, 1.0) < 0.5 ? 2 : 3;
    const bool quadratic = out.size() % 2 == 0;
    const CandidateSolution u = quadratic ? random_convex_quadratic(s, n) : random_he_form(s, n);
    const double level = std::exp(s.uniform(std::log(0.1), std::log(quadratic ? 100.0 : 2.0)));
    try {
      BarrierTrial t = barrier_trial(u, level, 400);
      t.source = u.tag() + "/" + std::to_string(n) + "d";
      out.push_back(t);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotConvex && e.kind() != ErrorKind::NotPositiveDefinite) throw;
    }
  }
  return out;
}

FdOrderStudy fd_order_study(const CandidateSolution& u, const Eigen::VectorXd& x, double spacing) {
  const int n = u.dim();
  auto error_at = [&](double h) {
    std::array<Interval, kMaxDim> bounds{};
    std::array<int, kMaxDim> res{1, 1, 1};
    for (int k = 0; k < n; ++k) {
      bounds[static_cast<std::size_t>(k)] = {x[k] - 2.0 * h, x[k] + 2.0 * h};
      res[static_cast<std::size_t>(k)] = 5;
    }
    const Grid g(n, bounds, res);
    const ScalarField f = ScalarField::sample(g, [&](const Eigen::VectorXd& p) { return u.value(p); });
    const SymMatrix fd = fd_hessian(f, NodeIndex{2, n > 1 ? 2 : 0, n > 2 ? 2 : 0});
    return (fd - u.hessian(x)).dense().cwiseAbs().maxCoeff();
  };
  FdOrderStudy out;
  out.spacing = spacing;
  out.error_coarse = error_at(spacing);
  out.error_fine = error_at(0.5 * spacing);
  out.ratio = out.error_coarse / out.error_fine;
  return out;
}

std::vector<SolverConvergenceRow> solver_convergence(const CandidateSolution& u, Interval box,
                                                     const std::vector<int>& nodes, const SolveOptions& options) {
  std::vector<SolverConvergenceRow> rows;
  for (int m : nodes) {
    const Grid grid = Grid::cube(u.dim(), box, m);
    SolverConvergenceRow row;
    row.nodes = m;
    row.spacing = grid.spacing(0);
    try {
      const SolveReport rep = newton_solve(DirichletProblem::from_candidate(grid, u), std::nullopt, options);
      row.converged = rep.converged;
      row.iterations = rep.iterations;
      row.start = rep.start;
      row.min_u11 = rep.min_u11;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const NodeIndex node = grid.unflat(i);
        if (!grid.is_interior(node)) continue;
        row.max_error = std::max(row.max_error, std::abs(rep.solution[i] - u.value(grid.point(node))));
      }
    } catch (const SolverError& e) {
      row.failure = e.what();
      row.iterations = e.report().iterations;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<ThetaRefinementRow> theta_refinement(const CandidateSolution& u, const LegendreOptions& options,
                                                 int levels) {
  const CandidateFunction f(u);
  LegendreOptions o = options;
  if (!o.z_range) o.z_range = default_z_range(f, o);
  std::vector<ThetaRefinementRow> rows;
  for (int level = 0; level < levels; ++level) {
    const LegendreResult r = partial_legendre(f, o);
    ThetaRefinementRow row;
    row.z_nodes = o.z_nodes;
    row.spacing = r.theta.grid().spacing(0);
    row.max_abs_laplacian = harmonicity_test(r.theta).max_abs_laplacian;
    rows.push_back(row);
    o.z_nodes = 2 * o.z_nodes - 1;
    for (auto& m : o.x_nodes) m = 2 * m - 1;
  }
  return rows;
}

std::vector<double> refinement_ratios(const std::vector<double>& errors) {
  std::vector<double> r;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) r.push_back(errors[i] / errors[i + 1]);
  return r;
}

}  // namespace sigmalab
