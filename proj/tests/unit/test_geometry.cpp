#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "sigmalab/ellipsoid.hpp"
#include "sigmalab/legendre.hpp"
#include "sigmalab/smooth_function.hpp"
#include "sigmalab/studies.hpp"
#include "test_util.hpp"

using namespace sigmalab;

namespace {

std::shared_ptr<const SmoothFunction> fn(CandidateSolution u) { return std::make_shared<CandidateFunction>(std::move(u)); }

// u = t^4 + |x|^2: convex, u_11 > 0 away from t = 0, not a solution.
class QuarticInT final : public SmoothFunction {
 public:
  int dim() const override { return 3; }
  double value(const Eigen::Ref<const Eigen::VectorXd>& x) const override {
    return std::pow(x[0], 4) + x[1] * x[1] + x[2] * x[2];
  }
  Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const override {
    return Eigen::Vector3d(4 * std::pow(x[0], 3), 2 * x[1], 2 * x[2]);
  }
  SymMatrix hessian(const Eigen::Ref<const Eigen::VectorXd>& x) const override {
    return SymMatrix::diagonal(Eigen::Vector3d(12 * x[0] * x[0], 2, 2));
  }
};

double z_of(const ScalarField& theta, std::size_t i) { return theta.grid().point(theta.grid().unflat(i))[0]; }

}  // namespace

TEST(Ellipsoid, MapBasics) {
  const EllipsoidMap e(SymMatrix::diagonal(Eigen::Vector3d(1, 2, 4)), Eigen::Vector3d(1, 0, 0));
  EXPECT_TRUE(e.contains(Eigen::Vector3d(1.5, 0, 0)));
  EXPECT_FALSE(e.contains(Eigen::Vector3d(1, 0.6, 0)));
  EXPECT_NEAR(e.apply(e.from_unit_ball(Eigen::Vector3d(0, 0.6, 0.8))).norm(), 1.0, 1e-15);
  EXPECT_NEAR(e.shape()(2, 2), 16.0, 1e-15);
  expect_kind(ErrorKind::NotPositiveDefinite,
              [] { EllipsoidMap(SymMatrix::diagonal(Eigen::Vector2d(1, -1)), Eigen::Vector2d::Zero()); });
  for (int n : {2, 3}) {
    const auto dirs = sphere_directions(n, 50);
    ASSERT_EQ(dirs.size(), 50u);
    for (const auto& d : dirs) EXPECT_NEAR(d.norm(), 1.0, 1e-14);
  }
}

TEST(Ellipsoid, QuadraticInterceptsAndEqualityCase) {
  const SublevelSet k = SublevelSet::build(fn(CandidateSolution::default_quadratic()), 1.0, Eigen::Vector3d(0.3, 0.2, -0.1));
  EXPECT_LT(k.minimizer().norm(), 1e-10);
  const auto ic = k.intercepts();
  EXPECT_NEAR(ic[0].first, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(ic[0].second, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(ic[1].first, 2.0, 1e-12);
  EXPECT_NEAR(ic[2].second, 2.0, 1e-12);
  for (double h : {0.1, 0.5, 1.0, 2.0, 10.0, 100.0}) {
    const SublevelSet kh = SublevelSet::build(fn(CandidateSolution::default_quadratic()), h, Eigen::Vector3d::Zero());
    const InscribedEllipsoid ins = inscribe_ellipsoid(kh);
    EXPECT_NEAR(ins.shrink, 1.0, 1e-6);
    // M = diag(1/sqrt(2h), 1/(2 sqrt h), 1/(2 sqrt h))
    EXPECT_NEAR(ins.ellipsoid.matrix()(0, 0), 1 / std::sqrt(2 * h), 1e-10);
    EXPECT_NEAR(ins.ellipsoid.matrix()(1, 1), 1 / (2 * std::sqrt(h)), 1e-10);
    const BarrierReport r = barrier_check(ins.ellipsoid, h);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.value * 4 * h * h, 1.0, 1e-8);
  }
}

TEST(Ellipsoid, InflatedEllipsoidIsCaughtAndFailsTheBarrier) {
  const double h = 2.0;
  const SublevelSet k = SublevelSet::build(fn(CandidateSolution::default_quadratic()), h, Eigen::Vector3d::Zero());
  const InscribedEllipsoid ins = inscribe_ellipsoid(k);
  const EllipsoidMap big = ins.ellipsoid.scaled(0.9);
  EXPECT_GT(containment_excess(k, big, 500), 1e-3);
  EXPECT_FALSE(barrier_check(big, h).pass);
  EXPECT_LE(containment_excess(k, ins.ellipsoid, 500), 1e-10);
}

TEST(Ellipsoid, TiltedSolutionsShrinkToFit) {
  Eigen::Matrix3d a;
  a << 2, 0.6, -0.3, 0.6, 1, 0.2, -0.3, 0.2, 0.5;
  a /= std::sqrt(sigma2_tilde(SymMatrix::from_dense(a)));
  const BarrierTrial t = barrier_trial(CandidateSolution::quadratic(a, Eigen::Vector3d(0.1, -0.2, 0.3), 1.0), 0.7);
  EXPECT_GT(t.shrink, 1.0);
  EXPECT_LE(t.containment_excess, 1e-10);
  EXPECT_TRUE(t.pass);
  EXPECT_GE(t.value, t.bound);
}

TEST(Ellipsoid, RandomSuiteIsDeterministicAndPasses) {
  const auto a = random_barrier_suite(25, 77);
  const auto b = random_barrier_suite(25, 77);
  ASSERT_EQ(a.size(), 25u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].value, b[i].value);
    EXPECT_EQ(a[i].source, b[i].source);
    EXPECT_TRUE(a[i].pass) << a[i].source;
    EXPECT_LE(a[i].containment_excess, 1e-9);
  }
}

TEST(Ellipsoid, PreconditionErrors) {
  expect_kind(ErrorKind::NoInteriorPoint,
              [] { SublevelSet::build(fn(CandidateSolution::default_quadratic()), 0.0, Eigen::Vector3d::Zero()); });
  auto saddle = CandidateSolution::quadratic(Eigen::Vector3d(1, -1, 1).asDiagonal().toDenseMatrix(),
                                             Eigen::Vector3d::Zero(), 0, true);
  expect_kind(ErrorKind::NotConvex, [&] { SublevelSet::build(fn(saddle), 1.0, Eigen::Vector3d::Zero()); });
}

TEST(Legendre, QuadraticGivesThetaEqualZ) {
  LegendreOptions o;
  const LegendreResult r = partial_legendre(CandidateFunction(CandidateSolution::default_quadratic()), o);
  for (std::size_t i = 0; i < r.theta.grid().size(); ++i) EXPECT_NEAR(r.theta[i], z_of(r.theta, i), 1e-10);
  EXPECT_LT(harmonicity_test(r.theta).max_abs_laplacian, 1e-8);
  // Default range: common attained u_1 range [-1, 1] shrunk 5% at each end.
  EXPECT_NEAR(r.z_range.lo, -0.9, 1e-12);
  EXPECT_NEAR(r.z_range.hi, 0.9, 1e-12);
}

TEST(Legendre, RoundTripOnCounterexample) {
  const CandidateFunction u(CandidateSolution::counterexample());
  const LegendreOptions o = [] {
    LegendreOptions x;
    x.t_range = {-0.5, 0.5};
    x.x_box = {Interval{0.8, 1.2}, Interval{-0.2, 0.2}};
    return x;
  }();
  const LegendreResult r = partial_legendre(u, o);
  const Grid& g = r.theta.grid();
  double worst = 0, curvature = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Eigen::VectorXd p = g.point(g.unflat(i));
    const Eigen::Vector3d x(r.theta[i], p[1], p[2]);
    worst = std::max(worst, std::abs(u.u1(x) - p[0]));
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    const NodeIndex n = g.unflat(i);
    if (n[0] == 0 || n[0] == g.nodes(0) - 1) continue;
    const double s = g.stride(0);
    curvature = std::max(curvature, std::abs(r.theta[i + s] - 2 * r.theta[i] + r.theta[i - s]));
  }
  EXPECT_LT(worst, 1e-10);
  EXPECT_GT(curvature, 1e-4);  // theta is not affine in z
}

TEST(Legendre, HeFormThetaIsAffineWithSlopeOneOverU11) {
  const double a = 0.8;
  const auto he = make_he_form(3, a, HarmonicPolynomial(Polynomial(2, {{{2, 0}, 0.4}, {{0, 2}, -0.4}, {{1, 0}, 0.3}})));
  const auto& b = std::get<HeFormSolution>(he.variant()).b.poly();
  const LegendreResult r = partial_legendre(CandidateFunction(he), LegendreOptions{});
  const Grid& g = r.theta.grid();
  double worst = 0, slope = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Eigen::VectorXd p = g.point(g.unflat(i));
    worst = std::max(worst, std::abs(r.theta[i] - (p[0] - b(p.tail(2))) / (2 * a)));
    const NodeIndex n = g.unflat(i);
    if (n[0] + 1 < g.nodes(0)) {
      const double d = (r.theta[i + g.stride(0)] - r.theta[i]) / g.spacing(0);
      slope = std::max(slope, std::abs(d - 1 / (2 * a)));
    }
  }
  EXPECT_LT(worst, 1e-10);
  EXPECT_LT(slope, 1e-6);
  EXPECT_LT(harmonicity_test(r.theta).max_abs_laplacian, 1e-6);
}

TEST(Legendre, NonSolutionIsNotHarmonic) {
  LegendreOptions o;
  o.t_range = {0.5, 1.5};
  double prev = 0;
  for (int m : {11, 21}) {
    o.z_nodes = m;
    o.x_nodes = {m, m};
    const double res = harmonicity_test(partial_legendre(QuarticInT(), o).theta).max_abs_laplacian;
    EXPECT_GT(res, 1e-2);
    if (prev > 0) EXPECT_GT(res / prev, 0.9);  // no decay under refinement
    prev = res;
  }
}

TEST(Legendre, PreconditionErrors) {
  auto flat_in_t = CandidateSolution::quadratic(Eigen::Vector3d(-1, 1, 1).asDiagonal().toDenseMatrix(),
                                                Eigen::Vector3d::Zero(), 0, true);
  LegendreOptions o;
  o.z_range = Interval{-0.5, 0.5};
  expect_kind(ErrorKind::NotMonotone, [&] { partial_legendre(CandidateFunction(flat_in_t), o); });
  o.z_range = Interval{5.0, 6.0};
  expect_kind(ErrorKind::ZOutOfRange,
              [&] { partial_legendre(CandidateFunction(CandidateSolution::default_quadratic()), o); });
}
