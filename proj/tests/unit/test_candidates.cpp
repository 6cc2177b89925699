#include <gtest/gtest.h>

#include <cmath>

#include "sigmalab/candidate_json.hpp"
#include "sigmalab/candidates.hpp"
#include "sigmalab/polynomial.hpp"
#include "sigmalab/studies.hpp"
#include "test_util.hpp"

using namespace sigmalab;

namespace {

Polynomial p2(std::map<Exponent, double> c) { return Polynomial(2, std::move(c)); }

std::vector<CandidateSolution> zoo() {
  Eigen::Matrix3d a;
  a << 2, 0.3, -0.2, 0.3, 1, 0.1, -0.2, 0.1, 0.5;
  a /= std::sqrt(sigma2_tilde(SymMatrix::from_dense(a)));
  Eigen::Matrix2d a2;
  a2 << 2, 0.5, 0.5, 0.625;
  return {
      CandidateSolution::default_quadratic(),
      CandidateSolution::quadratic(a, Eigen::Vector3d(0.1, -0.2, 0.3), 1.0),
      CandidateSolution::quadratic(a2, Eigen::Vector2d(1, 0), 0.0),
      CandidateSolution::counterexample(),
      CandidateSolution::radial_exp({{0.25, 0, -1.0}, {0.3, 2, 0.5}, {-0.1, 3, 0.0}}),
      make_he_form(3, 0.8, HarmonicPolynomial(p2({{{2, 0}, 0.4}, {{0, 2}, -0.4}, {{1, 1}, 0.25}}))),
      make_he_form(2, 1.5, HarmonicPolynomial(Polynomial(1, {{{1, 0}, 0.7}, {{0, 0}, -0.2}}))),
  };
}

}  // namespace

TEST(Polynomial, ArithmeticAndDerivatives) {
  const Polynomial p = p2({{{2, 1}, 3.0}, {{0, 0}, 1.0}, {{1, 0}, -2.0}});
  const Eigen::Vector2d x(0.5, -2.0);
  EXPECT_DOUBLE_EQ(p(x), 3 * 0.25 * -2 + 1 - 1);
  EXPECT_EQ(p.degree(), 3);
  EXPECT_DOUBLE_EQ(p.derivative(x, {1, 1}), 6 * 0.5);
  EXPECT_DOUBLE_EQ(p.laplacian()(x), 6 * -2.0);
  EXPECT_DOUBLE_EQ(p.gradient_norm_squared()(x), std::pow(6 * 0.5 * -2 - 2, 2) + std::pow(3 * 0.25, 2));
  EXPECT_NEAR((p * p)(x), p(x) * p(x), 1e-14);
  EXPECT_EQ((p - p).degree(), -1);
  EXPECT_DOUBLE_EQ(p.homogeneous_part(1)(x), -1.0);
}

TEST(Polynomial, HarmonicChecks) {
  EXPECT_NO_THROW(HarmonicPolynomial(p2({{{2, 0}, 1}, {{0, 2}, -1}, {{3, 0}, 1}, {{1, 2}, -3}})));
  expect_kind(ErrorKind::NotHarmonic, [] { HarmonicPolynomial(p2({{{2, 0}, 1}})); });
  expect_kind(ErrorKind::DegreeTooHigh, [] { HarmonicPolynomial(p2({{{5, 0}, 1}, {{3, 2}, -10}, {{1, 4}, 5}})); });
  expect_kind(ErrorKind::InvalidArgument, [] { Polynomial(3, {{{1, 0}, 1.0}}); });
}

TEST(Polynomial, PoissonSolve) {
  for (const Polynomial& f : {p2({{{0, 0}, 2.0}}), p2({{{1, 0}, 1.0}, {{0, 1}, -3.0}}),
                              p2({{{2, 0}, 1.0}, {{1, 1}, 0.5}, {{0, 2}, 2.0}, {{0, 0}, -1.0}}),
                              Polynomial(1, {{{2, 0}, 3.0}, {{0, 0}, 1.0}})}) {
    EXPECT_LT(solve_polynomial_poisson(f).laplacian().max_coeff_difference(f), 1e-14);
  }
  expect_kind(ErrorKind::DegreeTooHigh, [] { solve_polynomial_poisson(p2({{{3, 0}, 1.0}})); });
}

TEST(Candidates, DerivativesAgreeWithFiniteDifferences) {
  Sampler s(31);
  const double h = 1e-4;
  for (const CandidateSolution& u : zoo()) {
    const int n = u.dim();
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXd x(n);
      for (int k = 0; k < n; ++k) x[k] = s.uniform(-1.5, 1.5);
      // Each order-k partial against a central difference of an order-(k-1) partial.
      for (int a = 0; a <= 3; ++a)
        for (int b = 0; a + b <= 3; ++b)
          for (int c = 0; a + b + c <= 3; ++c) {
            if (n == 2 && c > 0) continue;
            const DerivIndex base{a, b, c};
            for (int axis = 0; axis < n; ++axis) {
              DerivIndex up = base;
              ++up[axis];
              Eigen::VectorXd xp = x, xm = x;
              xp[axis] += h;
              xm[axis] -= h;
              const double fd = (u.eval(xp, base) - u.eval(xm, base)) / (2 * h);
              const double exact = u.eval(x, up);
              EXPECT_NEAR(exact, fd, 1e-6 * (1 + std::abs(exact))) << u.tag() << " alpha " << a << b << c;
            }
          }
      EXPECT_DOUBLE_EQ(u.value(x), u.eval(x, {0, 0, 0}));
      const Eigen::VectorXd g = u.gradient(x);
      const SymMatrix H = u.hessian(x);
      for (int i = 0; i < n; ++i) {
        DerivIndex e{0, 0, 0};
        ++e[i];
        EXPECT_DOUBLE_EQ(g[i], u.eval(x, e));
        for (int j = 0; j < n; ++j) {
          DerivIndex ee = e;
          ++ee[j];
          EXPECT_DOUBLE_EQ(H(i, j), u.eval(x, ee));
        }
      }
      long double xl[3] = {x[0], x[1], n == 3 ? x[2] : 0.0L};
      EXPECT_NEAR(static_cast<double>(u.eval_extended(xl, {1, 2, 0})), u.eval(x, {1, 2, 0}), 1e-12);
    }
  }
}

TEST(Candidates, ExactSolutionsHaveZeroResidual) {
  Sampler s(32);
  for (const CandidateSolution& u : zoo()) {
    if (u.tag() == "counterexample" && std::get<RadialExpSolution>(u.variant()).profile.size() > 1) continue;
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd x(u.dim());
      for (int k = 0; k < u.dim(); ++k) x[k] = s.uniform(-2, 2);
      EXPECT_NEAR(u.residual(x), 0.0, 1e-12) << u.tag();
    }
  }
}

TEST(Candidates, ProfileIdentityAndOffSolutionResidual) {
  const auto u = CandidateSolution::radial_exp({{0.25, 0, -1.0}, {0.3, 2, 0.5}, {-0.1, 3, 0.0}});
  const ResidualSweep r = residual_sweep(u, default_residual_box(3), 2000, 6);
  ASSERT_TRUE(r.max_ode_identity_error.has_value());
  EXPECT_LT(*r.max_ode_identity_error, 1e-12);
  // kappa != 1/4 misses by 4 kappa - 1.
  const Eigen::Vector3d x(0.3, 0.4, -1.2);
  EXPECT_NEAR(CandidateSolution::counterexample(1.0).residual(x), 3.0, 1e-12);
  EXPECT_FALSE(residual_sweep(CandidateSolution::default_quadratic(), default_residual_box(3), 10, 1)
                   .max_ode_identity_error.has_value());
}

TEST(Candidates, ConstructorsValidate) {
  expect_kind(ErrorKind::NotASolution, [] {
    CandidateSolution::quadratic(Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero(), 0.0);
  });
  EXPECT_NO_THROW(CandidateSolution::quadratic(Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero(), 0.0, true));
  Eigen::Matrix3d asym = Eigen::Matrix3d::Identity();
  asym(0, 1) = 0.5;
  expect_kind(ErrorKind::InvalidArgument,
              [&] { CandidateSolution::quadratic(asym, Eigen::Vector3d::Zero(), 0.0, true); });
  expect_kind(ErrorKind::InvalidArgument, [] { CandidateSolution::counterexample(0.0); });
  expect_kind(ErrorKind::DegreeTooHigh, [] {
    make_he_form(3, 0.5, HarmonicPolynomial(p2({{{3, 0}, 1}, {{1, 2}, -3}})));
  });
  expect_kind(ErrorKind::NotASolution, [] {
    CandidateSolution::he_form(3, 0.5, HarmonicPolynomial(p2({})), Polynomial::radius_squared(2));
  });
  EXPECT_NO_THROW(
      CandidateSolution::he_form(3, 0.5, HarmonicPolynomial(p2({})), Polynomial::radius_squared(2) * 0.25));
  expect_kind(ErrorKind::UnsupportedOrder,
              [] { CandidateSolution::counterexample().eval(Eigen::Vector3d::Zero(), {3, 2, 0}); });
  expect_kind(ErrorKind::InvalidArgument, [] { CandidateSolution::counterexample().value(Eigen::Vector2d::Zero()); });
}

TEST(Candidates, JsonRoundTrip) {
  for (const CandidateSolution& u : zoo()) {
    const nlohmann::json j = to_json(u);
    const CandidateSolution back = candidate_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(to_json(back), j);
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(u.dim(), 0.37);
    EXPECT_EQ(back.value(x), u.value(x));
  }
  const auto k = candidate_from_json(nlohmann::json::parse(R"({"type":"counterexample","kappa":0.25})"));
  EXPECT_DOUBLE_EQ(k.value(Eigen::Vector3d(0, 1, 0)), 1.25);
  expect_kind(ErrorKind::InvalidArgument, [] { candidate_from_json(nlohmann::json::parse(R"({"type":"cubic"})")); });
  expect_kind(ErrorKind::InvalidArgument, [] { candidate_from_json(nlohmann::json::parse(R"({"type":"quadratic"})")); });
  expect_kind(ErrorKind::NotASolution, [] {
    candidate_from_json(nlohmann::json::parse(R"({"type":"quadratic","A":[[1,0],[0,2]],"b":[0,0]})"));
  });
}

TEST(Candidates, HeFormClassificationAndConvexity) {
  for (const CandidateSolution& u : zoo()) {
    const HeClassification c = is_he_form(u);
    if (u.tag() == "counterexample") {
      EXPECT_FALSE(c.he_form);
      EXPECT_GT(c.u11_oscillation, 0.1);
    } else {
      EXPECT_TRUE(c.he_form) << u.tag();
      EXPECT_LE(c.u11_oscillation, 1e-8);
    }
  }
  EXPECT_TRUE(is_convex_on_box(CandidateSolution::default_quadratic()));
  // The (t, x) minor of the counterexample is 1/2 - 2 x^2 e^{2t}.
  EXPECT_FALSE(is_convex_on_box(CandidateSolution::counterexample()));
  EXPECT_TRUE(is_convex_on_box(CandidateSolution::counterexample(), 0.2));
  // b = x^2 - y^2 with large coefficient makes t b(x) indefinite somewhere.
  EXPECT_FALSE(is_convex_on_box(make_he_form(3, 0.5, HarmonicPolynomial(p2({{{2, 0}, 2.0}, {{0, 2}, -2.0}})))));
}
