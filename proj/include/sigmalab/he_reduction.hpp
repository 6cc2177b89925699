#pragma once

#include <functional>
#include <optional>
#include <string>

#include "sigmalab/candidates.hpp"
#include "sigmalab/legendre.hpp"
#include "sigmalab/polynomial.hpp"

namespace sigmalab {

struct HeReductionOptions {
  /// Probe box [-w, w]^n for the u11 oscillation.
  double probe_half_width = 2.0;
  int probe_samples = 33;
  /// He-form verdict threshold on osc(u11).
  double tolerance = 1e-8;
  /// Region for theta; the default keeps x-lines off the t-axis so u_1 ranges overlap.
  LegendreOptions legendre = default_legendre();
  /// Half-width of the x-box used to fit b and g.
  double fit_half_width = 2.0;

  static LegendreOptions default_legendre() {
    LegendreOptions o;
    o.t_range = {-0.5, 0.5};
    o.x_box = {Interval{0.8, 1.2}, Interval{-0.2, 0.2}};
    o.x_nodes = {11, 11};
    o.z_nodes = 11;
    return o;
  }
};

struct HeReductionReport {
  double u11_min = 0.0;
  double u11_max = 0.0;
  double u11_oscillation = 0.0;
  std::optional<double> theta_laplacian;  // max |Delta theta|
  std::string theta_error;                // set when theta could not be built
  bool he_form = false;

  // Filled for He-form inputs.
  double a = 0.0;
  std::optional<Polynomial> b;  // fitted b(x) = u_1(0, x)
  std::optional<Polynomial> g;  // fitted g(x) = u(0, x)
  double fit_residual = 0.0;    // max |fit - samples|
  double laplacian_b_residual = 0.0;
  double poisson_residual = 0.0;  // max |Delta g - (1 + |grad b|^2)/(2a)|
};

HeReductionReport he_reduction_report(const CandidateSolution& u, const HeReductionOptions& options = {});

/// Grid version: osc(u11) over interior nodes inside the probe box, extraction on the
/// t-plane nearest 0 with discrete Laplacians.
HeReductionReport he_reduction_report(const ScalarField& u, const HeReductionOptions& options = {});

/// Least-squares fit of f over an (n-1)-variate polynomial basis of degree <= 4 on a grid of
/// [-w, w]^(n-1); returns the polynomial and the max sample misfit.
std::pair<Polynomial, double> fit_transverse_polynomial(int vars, double half_width,
                                                        const std::function<double(const Eigen::VectorXd&)>& f);

}  // namespace sigmalab
