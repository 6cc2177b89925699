#include "sigmalab/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sigmalab/error.hpp"
#include "sigmalab/parallel.hpp"

namespace sigmalab {

namespace {

Grid theta_grid(int n, const Interval& z, const LegendreOptions& o) {
  std::array<Interval, kMaxDim> bounds{z, o.x_box[0], o.x_box[1]};
  std::array<int, kMaxDim> res{o.z_nodes, o.x_nodes[0], o.x_nodes[1]};
  return Grid(n, bounds, res);
}

Eigen::VectorXd line_point(const Eigen::VectorXd& x_only, double t) {
  Eigen::VectorXd p(x_only.size() + 1);
  p[0] = t;
  p.tail(x_only.size()) = x_only;
  return p;
}

}  // namespace

Interval default_z_range(const SmoothFunction& u, const LegendreOptions& o) {
  const int n = u.dim();
  const Grid xs = theta_grid(n, {0.0, 1.0}, o);
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const NodeIndex node = xs.unflat(i);
    if (node[0] != 0) continue;
    const Eigen::VectorXd x = xs.point(node).tail(n - 1);
    lo = std::max(lo, u.u1(line_point(x, o.t_range.lo)));
    hi = std::min(hi, u.u1(line_point(x, o.t_range.hi)));
  }
  if (!(hi > lo)) throw Error(ErrorKind::ZOutOfRange, "x-lines share no common range of u_1");
  const double pad = 0.05 * (hi - lo);
  return {lo + pad, hi - pad};
}

LegendreResult partial_legendre(const SmoothFunction& u, const LegendreOptions& o) {
  const int n = u.dim();
  if (!(o.t_range.hi > o.t_range.lo)) throw Error(ErrorKind::InvalidArgument, "empty t range");
  const Interval z = o.z_range ? *o.z_range : default_z_range(u, o);
  const Grid grid = theta_grid(n, z, o);
  ScalarField theta(grid);

  // One task per x-line: nodes with z index 0.
  std::vector<std::size_t> lines;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.unflat(i)[0] == 0) lines.push_back(i);
  }
  parallel_for(lines.size(), [&](std::size_t li) {
    const NodeIndex start = grid.unflat(lines[li]);
    const Eigen::VectorXd x = grid.point(start).tail(n - 1);
    for (int s = 0; s < o.monotonicity_samples; ++s) {
      const double t = o.t_range.lo + (o.t_range.hi - o.t_range.lo) * s / (o.monotonicity_samples - 1);
      if (!(u.u11(line_point(x, t)) > 0.0)) throw Error(ErrorKind::NotMonotone, "u_11 <= 0 on an x-line");
    }
    const double z_lo = u.u1(line_point(x, o.t_range.lo));
    const double z_hi = u.u1(line_point(x, o.t_range.hi));
    for (int iz = 0; iz < grid.nodes(0); ++iz) {
      const double target = grid.coordinate(0, iz);
      if (target < z_lo || target > z_hi) throw Error(ErrorKind::ZOutOfRange, "z outside the attained u_1 range");
      double a = o.t_range.lo;
      double b = o.t_range.hi;
      while (b - a > 1e-12) {
        const double mid = 0.5 * (a + b);
        (u.u1(line_point(x, mid)) < target ? a : b) = mid;
      }
      double t = 0.5 * (a + b);
      const Eigen::VectorXd p = line_point(x, t);
      const double r0 = u.u1(p) - target;
      const double polished = t - r0 / u.u11(p);
      if (std::abs(u.u1(line_point(x, polished)) - target) < std::abs(r0)) t = polished;
      NodeIndex node = start;
      node[0] = iz;
      theta[grid.flat(node)] = t;
    }
  });
  return LegendreResult{std::move(theta), z};
}

HarmonicityReport harmonicity_test(const ScalarField& theta) {
  const Grid& grid = theta.grid();
  HarmonicityReport r;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const NodeIndex node = grid.unflat(i);
    if (!grid.is_interior(node)) continue;
    double lap = 0.0;
    for (int k = 0; k < grid.dim(); ++k) {
      const auto s = grid.stride(k);
      lap += (theta[i + s] - 2.0 * theta[i] + theta[i - s]) / (grid.spacing(k) * grid.spacing(k));
    }
    if (std::abs(lap) > r.max_abs_laplacian) {
      r.max_abs_laplacian = std::abs(lap);
      r.worst_node = node;
    }
  }
  return r;
}

}  // namespace sigmalab
