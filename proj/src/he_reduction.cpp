#include "sigmalab/he_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "sigmalab/error.hpp"
#include "sigmalab/finite_difference.hpp"
#include "sigmalab/smooth_function.hpp"

namespace sigmalab {

namespace {

std::vector<Exponent> monomials(int vars, int degree) {
  std::vector<Exponent> out;
  for (int d = 0; d <= degree; ++d) {
    for (int i = d; i >= 0; --i) {
      const int j = d - i;
      if (vars == 1 && j != 0) continue;
      out.push_back({i, j});
    }
  }
  return out;
}

void fill_theta(HeReductionReport& r, const SmoothFunction& f, const LegendreOptions& o) {
  try {
    r.theta_laplacian = harmonicity_test(partial_legendre(f, o).theta).max_abs_laplacian;
  } catch (const Error& e) {
    r.theta_error = e.what();
  }
}

}  // namespace

std::pair<Polynomial, double> fit_transverse_polynomial(int vars, double w,
                                                        const std::function<double(const Eigen::VectorXd&)>& f) {
  const auto basis = monomials(vars, 4);
  const int per_axis = 9;
  const int rows = vars == 1 ? per_axis : per_axis * per_axis;
  Eigen::MatrixXd design(rows, static_cast<Eigen::Index>(basis.size()));
  Eigen::VectorXd rhs(rows);
  int r = 0;
  for (int i = 0; i < per_axis; ++i) {
    for (int j = 0; j < (vars == 1 ? 1 : per_axis); ++j, ++r) {
      // Fit in scaled coordinates y = x / w for conditioning.
      Eigen::VectorXd y(vars);
      y[0] = -1.0 + 2.0 * i / (per_axis - 1);
      if (vars == 2) y[1] = -1.0 + 2.0 * j / (per_axis - 1);
      for (std::size_t c = 0; c < basis.size(); ++c) {
        double m = std::pow(y[0], basis[c][0]);
        if (vars == 2) m *= std::pow(y[1], basis[c][1]);
        design(r, static_cast<Eigen::Index>(c)) = m;
      }
      rhs[r] = f(y * w);
    }
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
  const double misfit = (design * coef - rhs).cwiseAbs().maxCoeff();
  Polynomial p(vars);
  for (std::size_t c = 0; c < basis.size(); ++c) {
    double v = coef[static_cast<Eigen::Index>(c)] / std::pow(w, basis[c][0] + basis[c][1]);
    // Drop fit noise so that exact polynomials come back with their own support.
    if (std::abs(coef[static_cast<Eigen::Index>(c)]) <= 1e-12 * std::max(1.0, rhs.cwiseAbs().maxCoeff())) v = 0.0;
    p.add_term(basis[c], v);
  }
  return {p, misfit};
}

HeReductionReport he_reduction_report(const CandidateSolution& u, const HeReductionOptions& options) {
  HeReductionReport r;
  const HeClassification cls = is_he_form(u, options.probe_half_width, options.probe_samples);
  r.u11_min = cls.u11_min;
  r.u11_max = cls.u11_max;
  r.u11_oscillation = cls.u11_oscillation;
  r.he_form = r.u11_oscillation <= options.tolerance;
  const CandidateFunction f(u);
  fill_theta(r, f, options.legendre);
  if (!r.he_form) return r;

  const int n = u.dim();
  auto at_t0 = [n](const Eigen::VectorXd& x) {
    Eigen::VectorXd p(n);
    p[0] = 0.0;
    p.tail(n - 1) = x;
    return p;
  };
  r.a = 0.5 * 0.5 * (cls.u11_min + cls.u11_max);
  auto [b, b_misfit] = fit_transverse_polynomial(n - 1, options.fit_half_width,
                                                 [&](const Eigen::VectorXd& x) { return u.eval(at_t0(x), {1, 0, 0}); });
  auto [g, g_misfit] = fit_transverse_polynomial(n - 1, options.fit_half_width,
                                                 [&](const Eigen::VectorXd& x) { return u.value(at_t0(x)); });
  r.fit_residual = std::max(b_misfit, g_misfit);
  const Polynomial lap_b = b.laplacian();
  const Polynomial defect =
      g.laplacian() - (Polynomial::constant(n - 1, 1.0) + b.gradient_norm_squared()) * (0.5 / r.a);
  const Grid probe = Grid::cube(n, {-options.fit_half_width, options.fit_half_width}, 9);
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const NodeIndex node = probe.unflat(i);
    if (node[0] != 0) continue;
    const Eigen::VectorXd x = probe.point(node).tail(n - 1);
    r.laplacian_b_residual = std::max(r.laplacian_b_residual, std::abs(lap_b(x)));
    r.poisson_residual = std::max(r.poisson_residual, std::abs(defect(x)));
  }
  r.b = std::move(b);
  r.g = std::move(g);
  return r;
}

HeReductionReport he_reduction_report(const ScalarField& u, const HeReductionOptions& options) {
  HeReductionReport r;
  const Grid& grid = u.grid();
  const int n = grid.dim();
  r.u11_min = std::numeric_limits<double>::infinity();
  r.u11_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const NodeIndex node = grid.unflat(i);
    if (!grid.is_interior(node)) continue;
    bool inside = true;
    for (int k = 0; k < n; ++k) inside = inside && std::abs(grid.coordinate(k, node[k])) <= options.probe_half_width;
    if (!inside) continue;
    const double v = fd_hessian(u, node)(0, 0);
    r.u11_min = std::min(r.u11_min, v);
    r.u11_max = std::max(r.u11_max, v);
  }
  if (!std::isfinite(r.u11_min)) throw Error(ErrorKind::InvalidArgument, "probe box contains no interior nodes");
  r.u11_oscillation = r.u11_max - r.u11_min;
  r.he_form = r.u11_oscillation <= options.tolerance;

  // theta over the interior of the field, one cell in from every face.
  LegendreOptions lo = options.legendre;
  lo.t_range = {grid.bounds(0).lo + grid.spacing(0), grid.bounds(0).hi - grid.spacing(0)};
  for (int k = 1; k < n; ++k) {
    lo.x_box[k - 1] = {grid.bounds(k).lo + grid.spacing(k), grid.bounds(k).hi - grid.spacing(k)};
    lo.x_nodes[k - 1] = grid.nodes(k) - 2;
  }
  fill_theta(r, FieldInterpolant(u), lo);
  if (!r.he_form) return r;

  r.a = 0.25 * (r.u11_min + r.u11_max);
  // t-plane nearest t = 0.
  int plane = 0;
  for (int i = 1; i < grid.nodes(0) - 1; ++i) {
    if (std::abs(grid.coordinate(0, i)) < std::abs(grid.coordinate(0, plane))) plane = i;
  }
  plane = std::clamp(plane, 1, grid.nodes(0) - 2);
  const auto st = grid.stride(0);
  auto b_at = [&](std::size_t c) { return (u[c + st] - u[c - st]) / (2.0 * grid.spacing(0)); };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const NodeIndex node = grid.unflat(i);
    if (node[0] != plane) continue;
    bool deep = true;
    for (int k = 1; k < n; ++k) deep = deep && node[k] >= 2 && node[k] <= grid.nodes(k) - 3;
    if (!deep) continue;
    double lap_b = 0.0;
    double lap_g = 0.0;
    double grad_b2 = 0.0;
    for (int k = 1; k < n; ++k) {
      const auto s = grid.stride(k);
      const double h2 = grid.spacing(k) * grid.spacing(k);
      lap_b += (b_at(i + s) - 2.0 * b_at(i) + b_at(i - s)) / h2;
      lap_g += (u[i + s] - 2.0 * u[i] + u[i - s]) / h2;
      const double db = (b_at(i + s) - b_at(i - s)) / (2.0 * grid.spacing(k));
      grad_b2 += db * db;
    }
    r.laplacian_b_residual = std::max(r.laplacian_b_residual, std::abs(lap_b));
    r.poisson_residual = std::max(r.poisson_residual, std::abs(lap_g - (1.0 + grad_b2) / (2.0 * r.a)));
  }
  return r;
}

}  // namespace sigmalab
