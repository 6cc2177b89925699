#include "sigmalab/ellipsoid.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "sigmalab/error.hpp"

namespace sigmalab {

EllipsoidMap::EllipsoidMap(SymMatrix m, Eigen::VectorXd center) : m_(m), c_(std::move(center)) {
  if (c_.size() != m_.dim()) throw Error(ErrorKind::InvalidArgument, "ellipsoid center has the wrong dimension");
  if (!m_.positive_definite()) throw Error(ErrorKind::NotPositiveDefinite, "ellipsoid matrix must be SPD");
  m_inv_ = m_.dense().inverse();
}

Eigen::VectorXd EllipsoidMap::apply(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return m_.dense() * (x - c_);
}

Eigen::VectorXd EllipsoidMap::from_unit_ball(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  return c_ + m_inv_ * y;
}

SymMatrix EllipsoidMap::shape() const {
  const Eigen::MatrixXd d = m_.dense();
  return SymMatrix::from_dense(d * d);
}

std::vector<Eigen::VectorXd> sphere_directions(int dim, int count) {
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(count);
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      const double a = 2.0 * std::numbers::pi * i / count;
      dirs.push_back(Eigen::Vector2d(std::cos(a), std::sin(a)));
    }
    return dirs;
  }
  // Fibonacci lattice; includes both poles.
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = count == 1 ? 1.0 : 1.0 - 2.0 * i / (count - 1);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    dirs.push_back(Eigen::Vector3d(z, r * std::cos(phi), r * std::sin(phi)));
  }
  return dirs;
}

SublevelSet SublevelSet::build(std::shared_ptr<const SmoothFunction> source, double level,
                               const Eigen::VectorXd& start, const Options& options) {
  if (!(level > 0.0)) throw Error(ErrorKind::NoInteriorPoint, "sublevel sets of u_tilde need h > 0");
  SublevelSet k;
  k.source_ = std::move(source);
  k.level_ = level;
  const int n = k.source_->dim();
  if (start.size() != n) throw Error(ErrorKind::InvalidArgument, "start point has the wrong dimension");

  // Damped Newton on grad u = 0.
  Eigen::VectorXd x = start;
  for (int iter = 0; iter < 100; ++iter) {
    const Eigen::VectorXd g = k.source_->gradient(x);
    if (g.norm() <= options.minimizer_tol) break;
    const SymMatrix h = k.source_->hessian(x);
    if (!(h.min_eigenvalue() > 0.0)) throw Error(ErrorKind::NotConvex, "Hessian is not positive definite");
    const Eigen::VectorXd step = h.dense().ldlt().solve(g);
    double alpha = 1.0;
    const double f0 = k.source_->value(x);
    while (alpha > 1e-12 && k.source_->value(x - alpha * step) > f0) alpha *= 0.5;
    x -= alpha * step;
  }
  k.minimizer_ = x;
  k.min_value_ = k.source_->value(x);
  k.min_gradient_ = k.source_->gradient(x);

  const auto dirs = sphere_directions(n, options.boundary_samples);
  k.boundary_.reserve(dirs.size());
  auto check_convex = [&](const Eigen::VectorXd& p) {
    if (k.source_->hessian(p).min_eigenvalue() < -options.convexity_tol) {
      throw Error(ErrorKind::NotConvex, "source is not convex on the sublevel set");
    }
  };
  check_convex(x);
  for (const auto& d : dirs) {
    const Eigen::VectorXd p = x + k.radius(x, d) * d;
    check_convex(p);
    k.boundary_.push_back(p);
  }
  return k;
}

double SublevelSet::normalized(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return source_->value(x) - min_value_ - min_gradient_.dot(x - minimizer_);
}

double SublevelSet::radius(const Eigen::Ref<const Eigen::VectorXd>& from,
                           const Eigen::Ref<const Eigen::VectorXd>& d) const {
  auto phi = [&](double r) { return normalized(from + r * d) - level_; };
  if (!(phi(0.0) < 0.0)) throw Error(ErrorKind::NoInteriorPoint, "start point is not inside K");
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; phi(hi) < 0.0; ++i) {
    if (i > 200) throw Error(ErrorKind::InvalidArgument, "sublevel set is unbounded");
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) < 0.0 ? lo : hi) = mid;
  }
  return lo;
}

std::vector<std::pair<double, double>> SublevelSet::intercepts() const {
  const int n = source_->dim();
  std::vector<std::pair<double, double>> out;
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[k] = 1.0;
    out.emplace_back(radius(minimizer_, e), radius(minimizer_, -e));
  }
  return out;
}

double containment_excess(const SublevelSet& k, const EllipsoidMap& e, int samples) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& y : sphere_directions(e.dim(), samples)) {
    worst = std::max(worst, k.normalized(e.from_unit_ball(y)) - k.level());
  }
  return worst;
}

InscribedEllipsoid inscribe_ellipsoid(const SublevelSet& k, int samples) {
  const auto icpt = k.intercepts();
  const int n = static_cast<int>(icpt.size());
  Eigen::VectorXd diag(n);
  std::vector<double> semi;
  for (int i = 0; i < n; ++i) {
    const double a = std::min(icpt[i].first, icpt[i].second);
    semi.push_back(a);
    diag[i] = 1.0 / a;
  }
  const EllipsoidMap base(SymMatrix::diagonal(diag), k.minimizer());
  // Boundary points with u_tilde = h up to rounding count as inside.
  const double slack = 1e-12 * std::max(1.0, k.level());
  auto inside = [&](double s) { return containment_excess(k, base.scaled(s), samples) <= slack; };
  double s = 1.0;
  if (!inside(1.0)) {
    double lo = 1.0;
    double hi = 2.0;
    while (!inside(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12) throw Error(ErrorKind::NoInteriorPoint, "no inscribed ellipsoid found");
    }
    while (hi - lo > 1e-6) {
      const double mid = 0.5 * (lo + hi);
      (inside(mid) ? hi : lo) = mid;
    }
    s = hi;
  }
  return InscribedEllipsoid{base.scaled(s), s, semi};
}

BarrierReport barrier_check(const EllipsoidMap& e, double level) {
  BarrierReport r;
  r.value = sigma2_tilde(e.shape());
  r.bound = 1.0 / (4.0 * level * level);
  r.pass = r.value >= r.bound - 1e-12;
  return r;
}

}  // namespace sigmalab
