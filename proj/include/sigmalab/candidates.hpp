#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "sigmalab/polynomial.hpp"
#include "sigmalab/sym_matrix.hpp"

namespace sigmalab {

/// Derivative orders along (t, x2, x3).
using DerivIndex = std::array<int, kMaxDim>;

constexpr int kMaxDerivOrder = 4;

/// u = 1/2 x^T A x + b.x + c with sigma2_tilde(A) = 1.
struct QuadraticSolution {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double c = 0.0;
};

/// One term coeff * t^power * exp(rate * t) of the profile h(t).
struct ProfileTerm {
  double coeff = 0.0;
  int power = 0;
  double rate = 0.0;
};

/// u = (x2^2 + x3^2) e^t + h(t), n = 3. sigma2_tilde(D^2 u) = 4 e^t h''(t).
struct RadialExpSolution {
  std::vector<ProfileTerm> profile;
};

/// u = a t^2 + t b(x) + g(x).
struct HeFormSolution {
  int dim = 3;
  double a = 0.5;
  HarmonicPolynomial b;
  Polynomial g;
};

/// Closed-form candidate with exact partial derivatives up to order 4.
class CandidateSolution {
 public:
  using Variant = std::variant<QuadraticSolution, RadialExpSolution, HeFormSolution>;

  /// Enforces sigma2_tilde(A) = 1 unless `allow_non_solution`.
  static CandidateSolution quadratic(Eigen::MatrixXd A, Eigen::VectorXd b, double c,
                                     bool allow_non_solution = false);
  /// 1/2 t^2 + 1/4 |x|^2 in `dim` dimensions.
  static CandidateSolution default_quadratic(int dim = 3);
  /// r^2 e^t + kappa e^{-t}; a solution iff kappa = 1/4.
  static CandidateSolution counterexample(double kappa = 0.25);
  static CandidateSolution radial_exp(std::vector<ProfileTerm> profile);
  /// Checks both structure equations on the stored coefficients.
  static CandidateSolution he_form(int dim, double a, HarmonicPolynomial b, Polynomial g);

  int dim() const;
  std::string tag() const;
  const Variant& variant() const { return v_; }

  /// Exact partial derivative; throws UnsupportedOrder above order 4.
  double eval(const Eigen::Ref<const Eigen::VectorXd>& x, const DerivIndex& alpha) const;
  /// Same as eval in long double; x holds dim() coordinates.
  long double eval_extended(const long double* x, const DerivIndex& alpha) const;
  double value(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  SymMatrix hessian(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// sigma2_tilde of the exact Hessian minus 1.
  double residual(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  explicit CandidateSolution(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Builds the He-form solution with polynomial g solving Delta g = (1 + |grad b|^2)/(2a).
/// Throws DegreeTooHigh if deg b > 2.
CandidateSolution make_he_form(int dim, double a, const HarmonicPolynomial& b);

/// Polynomial particular solution of Delta g = f for deg f <= 2.
Polynomial solve_polynomial_poisson(const Polynomial& f);

/// Derivative of h at t.
double profile_derivative(const std::vector<ProfileTerm>& profile, double t, int order);

struct HeClassification {
  bool he_form = false;
  double u11_oscillation = 0.0;
  double u11_min = 0.0;
  double u11_max = 0.0;
};

/// Is u11 constant in closed form? Oscillation sampled over [-half_width, half_width]^n.
HeClassification is_he_form(const CandidateSolution& u, double half_width = 2.0, int samples_per_axis = 33);

/// Is the exact Hessian PSD at every probe point of [-half_width, half_width]^n?
bool is_convex_on_box(const CandidateSolution& u, double half_width = 2.0, int samples_per_axis = 9,
                      double eig_tol = 1e-12);

}  // namespace sigmalab
