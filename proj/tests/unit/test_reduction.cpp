#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "sigmalab/he_reduction.hpp"
#include "sigmalab/parallel.hpp"
#include "sigmalab/solver.hpp"
#include "sigmalab/studies.hpp"
#include "test_util.hpp"

using namespace sigmalab;

namespace {

Polynomial p2(std::map<Exponent, double> c) { return Polynomial(2, std::move(c)); }

}  // namespace

TEST(HeReduction, ExtractsTheStructureOfHeForms) {
  for (const auto& b : {p2({}), p2({{{1, 0}, 0.3}, {{0, 1}, -0.7}}), p2({{{2, 0}, 0.4}, {{0, 2}, -0.4}, {{1, 1}, 0.25}})}) {
    for (double a : {0.5, 1.7}) {
      const CandidateSolution u = make_he_form(3, a, HarmonicPolynomial(b));
      const HeReductionReport r = he_reduction_report(u);
      ASSERT_TRUE(r.he_form);
      EXPECT_NEAR(r.a, a, 1e-12);
      ASSERT_TRUE(r.b && r.g);
      const auto& s = std::get<HeFormSolution>(u.variant());
      EXPECT_LT(r.b->max_coeff_difference(s.b.poly()), 1e-8);
      EXPECT_LT(r.g->max_coeff_difference(s.g), 1e-8);
      EXPECT_LT(r.laplacian_b_residual, 1e-8);
      EXPECT_LT(r.poisson_residual, 1e-8);
      ASSERT_TRUE(r.theta_laplacian.has_value()) << r.theta_error;
      EXPECT_LT(*r.theta_laplacian, 1e-6);
    }
  }
}

TEST(HeReduction, TwoDimensionalHeForm) {
  const CandidateSolution u = make_he_form(2, 1.5, HarmonicPolynomial(Polynomial(1, {{{1, 0}, 0.7}})));
  const HeReductionReport r = he_reduction_report(u);
  EXPECT_TRUE(r.he_form);
  EXPECT_NEAR(r.a, 1.5, 1e-12);
  EXPECT_LT(r.fit_residual, 1e-10);
}

TEST(HeReduction, CounterexampleIsNotHeForm) {
  const HeReductionReport r = he_reduction_report(CandidateSolution::counterexample());
  EXPECT_FALSE(r.he_form);
  EXPECT_GT(r.u11_oscillation, 0.1);
  EXPECT_FALSE(r.b.has_value());
  // Exactly harmonic theta: only the discretization residual remains.
  ASSERT_TRUE(r.theta_laplacian.has_value()) << r.theta_error;
  EXPECT_LT(*r.theta_laplacian, 1e-2);
}

TEST(HeReduction, GridFieldVerdicts) {
  const Grid g = Grid::cube(3, {-1, 1}, 13);
  const auto he = make_he_form(3, 0.5, HarmonicPolynomial(p2({{{1, 0}, 0.3}})));
  const ScalarField fhe = ScalarField::sample(g, [&](const Eigen::VectorXd& x) { return he.value(x); });
  HeReductionOptions o;
  o.tolerance = 1e-6;
  EXPECT_TRUE(he_reduction_report(fhe, o).he_form);

  const auto cx = CandidateSolution::counterexample();
  const ScalarField fcx = ScalarField::sample(g, [&](const Eigen::VectorXd& x) { return cx.value(x); });
  const HeReductionReport r = he_reduction_report(fcx, o);
  EXPECT_FALSE(r.he_form);
  EXPECT_GT(r.u11_oscillation, 0.1);
}

TEST(HeReduction, PolynomialFitRecoversQuartics) {
  const Polynomial p = p2({{{4, 0}, 1.0}, {{2, 2}, -0.5}, {{1, 0}, 2.0}, {{0, 0}, 3.0}});
  const auto [fit, misfit] = fit_transverse_polynomial(2, 1.5, [&](const Eigen::VectorXd& x) { return p(x); });
  EXPECT_LT(fit.max_coeff_difference(p), 1e-10);
  EXPECT_LT(misfit, 1e-10);
}

TEST(Studies, SamplerIsReproducible) {
  Sampler a(5), b(5), c(6);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform(-1, 1);
    EXPECT_EQ(x, b.uniform(-1, 1));
    EXPECT_GE(x, -1.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_NE(Sampler(5).uniform(0, 1), c.uniform(0, 1));
}

TEST(Studies, FdOrderIsTwo) {
  const FdOrderStudy s = fd_order_study(CandidateSolution::counterexample(), Eigen::Vector3d(0.2, 0.5, -0.3), 0.05);
  EXPECT_GT(s.ratio, 3.5);
  EXPECT_LT(s.ratio, 4.5);
}

TEST(Studies, ThetaRefinementHasSecondOrderDecay) {
  const auto rows = theta_refinement(CandidateSolution::counterexample(), HeReductionOptions::default_legendre(), 3);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1].z_nodes, 2 * rows[0].z_nodes - 1);
  std::vector<double> e;
  for (const auto& r : rows) e.push_back(r.max_abs_laplacian);
  const auto ratios = refinement_ratios(e);
  ASSERT_EQ(ratios.size(), 2u);
  EXPECT_GT(ratios[1], 3.5);
  EXPECT_LT(ratios[1], 4.5);
}

TEST(Studies, SweepsAgreeWithClosedForms) {
  EXPECT_LT(residual_sweep(CandidateSolution::counterexample(), default_residual_box(3), 1000, 2).max_abs_residual, 1e-12);
  const RicciSweep r = ricci_sweep(CandidateSolution::counterexample(), 50, 2, 4.0);
  EXPECT_LT(r.max_abs_entry, 1e-8);
  EXPECT_EQ(r.samples, 50);
}

TEST(Parallel, EachIndexOnceAndErrorsPropagate) {
  std::vector<std::atomic<int>> seen(5000);
  parallel_for(seen.size(), [&](std::size_t i) { seen[i]++; });
  for (const auto& s : seen) EXPECT_EQ(s.load(), 1);
  EXPECT_THROW(parallel_for(3000, [](std::size_t i) {
                 if (i == 2999) throw std::runtime_error("boom");
               }),
               std::runtime_error);
  ::setenv("SIGMALAB_THREADS", "3", 1);
  EXPECT_EQ(thread_count(), 3u);
  ::setenv("SIGMALAB_THREADS", "zero", 1);
  EXPECT_GE(thread_count(), 1u);
  ::unsetenv("SIGMALAB_THREADS");
}

TEST(Parallel, ResultsDoNotDependOnThreadCount) {
  const Grid g = Grid::cube(3, {-1, 1}, 11);
  const DirichletProblem p = DirichletProblem::from_candidate(g, CandidateSolution::counterexample());
  ::setenv("SIGMALAB_THREADS", "1", 1);
  const SolveReport one = newton_solve(p);
  ::setenv("SIGMALAB_THREADS", "4", 1);
  const SolveReport four = newton_solve(p);
  ::unsetenv("SIGMALAB_THREADS");
  ASSERT_TRUE(one.converged && four.converged);
  EXPECT_EQ(one.solution.values(), four.solution.values());
}
