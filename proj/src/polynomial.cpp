#include "sigmalab/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "sigmalab/error.hpp"

namespace sigmalab {

namespace {

double falling_factorial(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= (n - i);
  return r;
}

double int_pow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

}  // namespace

Polynomial::Polynomial(int vars, std::map<Exponent, double> coeffs) : vars_(vars) {
  if (vars < 1 || vars > 2) throw Error(ErrorKind::InvalidArgument, "polynomials have 1 or 2 variables");
  for (const auto& [e, c] : coeffs) add_term(e, c);
}

Polynomial Polynomial::constant(int vars, double c) { return Polynomial(vars, {{{0, 0}, c}}); }

Polynomial Polynomial::radius_squared(int vars) {
  Polynomial p(vars);
  p.add_term({2, 0}, 1.0);
  if (vars == 2) p.add_term({0, 2}, 1.0);
  return p;
}

double Polynomial::coeff(const Exponent& e) const {
  auto it = coeffs_.find(e);
  return it == coeffs_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const Exponent& e, double c) {
  if (e[0] < 0 || e[1] < 0 || (vars_ == 1 && e[1] != 0)) {
    throw Error(ErrorKind::InvalidArgument, "exponent does not match the variable count");
  }
  if (c == 0.0) return;
  double& slot = coeffs_[e];
  slot += c;
  if (slot == 0.0) coeffs_.erase(e);
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : coeffs_) d = std::max(d, e[0] + e[1]);
  return d;
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [e, c] : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Polynomial Polynomial::homogeneous_part(int degree) const {
  Polynomial p(vars_);
  for (const auto& [e, c] : coeffs_) {
    if (e[0] + e[1] == degree) p.add_term(e, c);
  }
  return p;
}

double Polynomial::operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return derivative(x, {0, 0});
}

double Polynomial::derivative(const Eigen::Ref<const Eigen::VectorXd>& x, const Exponent& alpha) const {
  double s = 0.0;
  for (const auto& [e, c] : coeffs_) {
    if (e[0] < alpha[0] || e[1] < alpha[1]) continue;
    double term = c * falling_factorial(e[0], alpha[0]) * int_pow(x[0], e[0] - alpha[0]);
    if (vars_ == 2) term *= falling_factorial(e[1], alpha[1]) * int_pow(x[1], e[1] - alpha[1]);
    s += term;
  }
  return s;
}

Polynomial Polynomial::differentiate(const Exponent& alpha) const {
  Polynomial p(vars_);
  for (const auto& [e, c] : coeffs_) {
    if (e[0] < alpha[0] || e[1] < alpha[1]) continue;
    p.add_term({e[0] - alpha[0], e[1] - alpha[1]},
               c * falling_factorial(e[0], alpha[0]) * falling_factorial(e[1], alpha[1]));
  }
  return p;
}

Polynomial Polynomial::laplacian() const {
  Polynomial p = differentiate({2, 0});
  if (vars_ == 2) p = p + differentiate({0, 2});
  return p;
}

Polynomial Polynomial::gradient_norm_squared() const {
  Polynomial d0 = differentiate({1, 0});
  Polynomial p = d0 * d0;
  if (vars_ == 2) {
    Polynomial d1 = differentiate({0, 1});
    p = p + d1 * d1;
  }
  return p;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial p(*this);
  for (const auto& [e, c] : o.coeffs_) p.add_term(e, c);
  return p;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial p(std::max(vars_, o.vars_));
  for (const auto& [e1, c1] : coeffs_) {
    for (const auto& [e2, c2] : o.coeffs_) p.add_term({e1[0] + e2[0], e1[1] + e2[1]}, c1 * c2);
  }
  return p;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial p(vars_);
  for (const auto& [e, c] : coeffs_) p.add_term(e, c * s);
  return p;
}

double Polynomial::max_coeff_difference(const Polynomial& o) const { return (*this - o).max_abs_coeff(); }

HarmonicPolynomial::HarmonicPolynomial(Polynomial p) : p_(std::move(p)) {
  if (p_.degree() > 4) throw Error(ErrorKind::DegreeTooHigh, "harmonic polynomials are limited to degree 4");
  const double scale = std::max(1.0, p_.max_abs_coeff());
  if (p_.laplacian().max_abs_coeff() > 1e-12 * scale) {
    throw Error(ErrorKind::NotHarmonic, "polynomial Laplacian does not vanish");
  }
}

}  // namespace sigmalab
