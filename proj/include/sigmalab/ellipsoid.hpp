#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "sigmalab/smooth_function.hpp"
#include "sigmalab/sym_matrix.hpp"

namespace sigmalab {

/// E = {x : |M (x - c)| <= 1} for symmetric positive definite M.
class EllipsoidMap {
 public:
  EllipsoidMap(SymMatrix m, Eigen::VectorXd center);

  const SymMatrix& matrix() const { return m_; }
  const Eigen::VectorXd& center() const { return c_; }
  int dim() const { return m_.dim(); }

  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Point c + M^{-1} y for y on the unit sphere.
  Eigen::VectorXd from_unit_ball(const Eigen::Ref<const Eigen::VectorXd>& y) const;
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const { return apply(x).norm() <= 1.0; }
  /// M^2 for the symmetric representative.
  SymMatrix shape() const;
  EllipsoidMap scaled(double s) const { return EllipsoidMap(m_ * s, c_); }

 private:
  SymMatrix m_;
  Eigen::VectorXd c_;
  Eigen::MatrixXd m_inv_;
};

/// Deterministic, nearly uniform points on the unit sphere S^{n-1} (n = 2, 3).
std::vector<Eigen::VectorXd> sphere_directions(int dim, int count);

/// K_h = {u_tilde <= h}, u_tilde = u - u(x*) - grad u(x*).(x - x*) with x* the minimizer.
class SublevelSet {
 public:
  struct Options {
    double minimizer_tol = 1e-10;
    int boundary_samples = 200;
    double convexity_tol = 1e-8;
  };

  /// Throws NoInteriorPoint for h <= 0 and NotConvex if a Hessian sample is indefinite.
  static SublevelSet build(std::shared_ptr<const SmoothFunction> source, double level,
                           const Eigen::VectorXd& start, const Options& options);
  static SublevelSet build(std::shared_ptr<const SmoothFunction> source, double level,
                           const Eigen::VectorXd& start) {
    return build(std::move(source), level, start, Options{});
  }

  double level() const { return level_; }
  const Eigen::VectorXd& minimizer() const { return minimizer_; }
  double normalized(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Distance from `from` to the level set along unit direction d.
  double radius(const Eigen::Ref<const Eigen::VectorXd>& from, const Eigen::Ref<const Eigen::VectorXd>& d) const;
  /// Axis intercept distances a_k^+ , a_k^- from the minimizer.
  std::vector<std::pair<double, double>> intercepts() const;
  const std::vector<Eigen::VectorXd>& boundary_sample() const { return boundary_; }
  const SmoothFunction& source() const { return *source_; }

 private:
  std::shared_ptr<const SmoothFunction> source_;
  double level_ = 0.0;
  Eigen::VectorXd minimizer_;
  double min_value_ = 0.0;
  Eigen::VectorXd min_gradient_;
  std::vector<Eigen::VectorXd> boundary_;
};

struct InscribedEllipsoid {
  EllipsoidMap ellipsoid;
  double shrink = 1.0;
  std::vector<double> semi_axes;  // before shrinking
};

/// Axis-aligned ellipsoid through the nearer intercepts, shrunk by the smallest s >= 1
/// (bisection, 1e-6) keeping `samples` boundary points inside K.
InscribedEllipsoid inscribe_ellipsoid(const SublevelSet& k, int samples = 1000);

struct BarrierReport {
  double value = 0.0;  // sigma2_tilde(M^2)
  double bound = 0.0;  // 1 / (4 h^2)
  bool pass = false;
};

BarrierReport barrier_check(const EllipsoidMap& e, double level);

/// Max of u_tilde - h over `samples` boundary points of E (<= 0 means contained).
double containment_excess(const SublevelSet& k, const EllipsoidMap& e, int samples);

}  // namespace sigmalab
