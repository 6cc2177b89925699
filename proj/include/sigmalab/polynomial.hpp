#pragma once

#include <array>
#include <map>

#include <Eigen/Core>

namespace sigmalab {

/// Exponents of (x2, x3); the second entry stays 0 when only one transverse variable exists.
using Exponent = std::array<int, 2>;

/// Real polynomial in the transverse variables (x2, ..., xn), one or two of them.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int vars) : vars_(vars) {}
  Polynomial(int vars, std::map<Exponent, double> coeffs);

  static Polynomial constant(int vars, double c);
  /// rho^2 = x2^2 + ... + xn^2
  static Polynomial radius_squared(int vars);

  int vars() const { return vars_; }
  const std::map<Exponent, double>& coeffs() const { return coeffs_; }
  double coeff(const Exponent& e) const;
  void add_term(const Exponent& e, double c);

  /// Highest total degree carrying a nonzero coefficient; -1 for the zero polynomial.
  int degree() const;
  double max_abs_coeff() const;
  Polynomial homogeneous_part(int degree) const;

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Partial derivative d^alpha at x (alpha over the transverse variables).
  double derivative(const Eigen::Ref<const Eigen::VectorXd>& x, const Exponent& alpha) const;

  Polynomial differentiate(const Exponent& alpha) const;
  Polynomial laplacian() const;
  Polynomial gradient_norm_squared() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;

  /// Coefficientwise comparison.
  double max_coeff_difference(const Polynomial& o) const;

 private:
  int vars_ = 1;
  std::map<Exponent, double> coeffs_;
};

/// Polynomial with identically vanishing Laplacian; checked on construction.
class HarmonicPolynomial {
 public:
  HarmonicPolynomial() = default;
  explicit HarmonicPolynomial(Polynomial p);

  const Polynomial& poly() const { return p_; }
  int vars() const { return p_.vars(); }
  int degree() const { return p_.degree(); }

 private:
  Polynomial p_;
};

}  // namespace sigmalab
