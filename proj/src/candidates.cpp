#include "sigmalab/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sigmalab/error.hpp"

namespace sigmalab {

namespace {

template <class T>
T int_pow(T x, int p) {
  T r = 1;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= (n - i);
  return r;
}

template <class T>
T poly_derivative(const Polynomial& p, const T* x, const Exponent& alpha) {
  T s = 0;
  for (const auto& [e, c] : p.coeffs()) {
    if (e[0] < alpha[0] || e[1] < alpha[1]) continue;
    T term = T(c) * T(falling(e[0], alpha[0])) * int_pow(x[0], e[0] - alpha[0]);
    if (p.vars() == 2) term *= T(falling(e[1], alpha[1])) * int_pow(x[1], e[1] - alpha[1]);
    s += term;
  }
  return s;
}

template <class T>
T profile_derivative_t(const std::vector<ProfileTerm>& profile, T t, int order) {
  using std::exp;
  T s = 0;
  for (const auto& term : profile) {
    // d^k (t^p e^{rt}) = sum_j C(k,j) (d^j t^p) r^{k-j} e^{rt}
    T acc = 0;
    double binom = 1.0;
    for (int j = 0; j <= order; ++j) {
      if (j > 0) binom = binom * (order - j + 1) / j;
      if (j > term.power) break;
      acc += T(binom) * T(falling(term.power, j)) * int_pow(t, term.power - j) *
             int_pow(T(term.rate), order - j);
    }
    s += T(term.coeff) * acc * exp(T(term.rate) * t);
  }
  return s;
}

template <class T>
T eval_quadratic(const QuadraticSolution& q, const T* x, const DerivIndex& alpha, int order) {
  const int n = static_cast<int>(q.A.rows());
  if (order == 0) {
    T s = T(q.c);
    for (int i = 0; i < n; ++i) {
      s += T(q.b[i]) * x[i];
      for (int j = 0; j < n; ++j) s += T(0.5) * x[i] * T(q.A(i, j)) * x[j];
    }
    return s;
  }
  if (order == 1) {
    int i = 0;
    while (alpha[i] == 0) ++i;
    T s = T(q.b[i]);
    for (int j = 0; j < n; ++j) s += T(q.A(i, j)) * x[j];
    return s;
  }
  if (order == 2) {
    int i = 0;
    while (alpha[i] == 0) ++i;
    int j = alpha[i] == 2 ? i : i + 1;
    while (alpha[j] == 0) ++j;
    return T(q.A(i, j));
  }
  return 0;
}

template <class T>
T eval_radial_exp(const RadialExpSolution& s, const T* x, const DerivIndex& alpha) {
  using std::exp;
  const int kt = alpha[0];
  const int k2 = alpha[1];
  const int k3 = alpha[2];
  // d^(k2,k3) of x2^2 + x3^2
  T r2_part = 0;
  if (k2 == 0 && k3 == 0) {
    r2_part = x[1] * x[1] + x[2] * x[2];
  } else if (k3 == 0) {
    r2_part = k2 == 1 ? T(2) * x[1] : (k2 == 2 ? T(2) : T(0));
  } else if (k2 == 0) {
    r2_part = k3 == 1 ? T(2) * x[2] : (k3 == 2 ? T(2) : T(0));
  }
  T v = r2_part * exp(x[0]);
  if (k2 == 0 && k3 == 0) v += profile_derivative_t(s.profile, x[0], kt);
  return v;
}

template <class T>
T eval_he_form(const HeFormSolution& h, const T* x, const DerivIndex& alpha) {
  const int kt = alpha[0];
  const Exponent ax{alpha[1], alpha[2]};
  const bool pure_t = ax[0] == 0 && ax[1] == 0;
  const T* xs = x + 1;
  switch (kt) {
    case 0:
      return (pure_t ? T(h.a) * x[0] * x[0] : T(0)) + poly_derivative(h.g, xs, ax) +
             x[0] * poly_derivative(h.b.poly(), xs, ax);
    case 1:
      return (pure_t ? T(2 * h.a) * x[0] : T(0)) + poly_derivative(h.b.poly(), xs, ax);
    case 2:
      return pure_t ? T(2 * h.a) : T(0);
    default:
      return 0;
  }
}

template <class T>
T eval_variant(const CandidateSolution::Variant& v, const T* x, const DerivIndex& alpha, int dim) {
  int order = 0;
  for (int k = 0; k < kMaxDim; ++k) {
    if (alpha[k] < 0 || (k >= dim && alpha[k] != 0)) {
      throw Error(ErrorKind::InvalidArgument, "derivative index does not match the dimension");
    }
    order += alpha[k];
  }
  if (order > kMaxDerivOrder) {
    throw Error(ErrorKind::UnsupportedOrder, "derivatives above order 4 are not available");
  }
  return std::visit(
      [&](const auto& s) -> T {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, QuadraticSolution>) {
          return eval_quadratic(s, x, alpha, order);
        } else if constexpr (std::is_same_v<S, RadialExpSolution>) {
          return eval_radial_exp(s, x, alpha);
        } else {
          return eval_he_form(s, x, alpha);
        }
      },
      v);
}

void check_point(const CandidateSolution& u, Eigen::Index size) {
  if (size != u.dim()) throw Error(ErrorKind::InvalidArgument, "point dimension does not match the candidate");
}

}  // namespace

double profile_derivative(const std::vector<ProfileTerm>& profile, double t, int order) {
  return profile_derivative_t(profile, t, order);
}

CandidateSolution CandidateSolution::quadratic(Eigen::MatrixXd A, Eigen::VectorXd b, double c,
                                               bool allow_non_solution) {
  const auto n = A.rows();
  if (n < 2 || n > kMaxDim || A.cols() != n) throw Error(ErrorKind::InvalidArgument, "A must be 2x2 or 3x3");
  if (b.size() == 0) b = Eigen::VectorXd::Zero(n);
  if (b.size() != n) throw Error(ErrorKind::InvalidArgument, "b has the wrong length");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, A.cwiseAbs().maxCoeff())) {
    throw Error(ErrorKind::InvalidArgument, "A must be symmetric");
  }
  if (!A.allFinite() || !b.allFinite() || !std::isfinite(c)) {
    throw Error(ErrorKind::InvalidArgument, "quadratic coefficients must be finite");
  }
  const SymMatrix sa = SymMatrix::from_dense(A);
  const double s2 = sigma2_tilde(sa);
  if (!allow_non_solution && std::abs(s2 - 1.0) > 1e-12 * (1.0 + sa.frobenius_norm() * sa.frobenius_norm())) {
    throw Error(ErrorKind::NotASolution, "sigma2_tilde(A) = " + std::to_string(s2) + ", expected 1");
  }
  return CandidateSolution(QuadraticSolution{std::move(A), std::move(b), c});
}

CandidateSolution CandidateSolution::default_quadratic(int dim) {
  Eigen::VectorXd d = Eigen::VectorXd::Constant(dim, 1.0 / (dim - 1));
  d[0] = 1.0;
  // 1/2 t^2 + 1/4 |x|^2 for n = 3; the x-block is scaled so sigma2_tilde = 1 for n = 2 as well.
  return quadratic(d.asDiagonal(), Eigen::VectorXd::Zero(dim), 0.0);
}

CandidateSolution CandidateSolution::counterexample(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw Error(ErrorKind::InvalidArgument, "kappa must be positive");
  return CandidateSolution(RadialExpSolution{{ProfileTerm{kappa, 0, -1.0}}});
}

CandidateSolution CandidateSolution::radial_exp(std::vector<ProfileTerm> profile) {
  for (const auto& term : profile) {
    if (term.power < 0 || !std::isfinite(term.coeff) || !std::isfinite(term.rate)) {
      throw Error(ErrorKind::InvalidArgument, "profile terms need finite coefficients and power >= 0");
    }
  }
  return CandidateSolution(RadialExpSolution{std::move(profile)});
}

CandidateSolution CandidateSolution::he_form(int dim, double a, HarmonicPolynomial b, Polynomial g) {
  if (dim < 2 || dim > kMaxDim) throw Error(ErrorKind::InvalidArgument, "He form needs n = 2 or 3");
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidArgument, "He form needs a > 0");
  if (b.vars() != dim - 1 || g.vars() != dim - 1) {
    throw Error(ErrorKind::InvalidArgument, "b and g must have n - 1 variables");
  }
  if (g.degree() > 4) throw Error(ErrorKind::DegreeTooHigh, "g is limited to degree 4");
  const Polynomial rhs = (Polynomial::constant(dim - 1, 1.0) + b.poly().gradient_norm_squared()) * (0.5 / a);
  const Polynomial defect = g.laplacian() - rhs;
  if (defect.max_abs_coeff() > 1e-12 * std::max(1.0, rhs.max_abs_coeff())) {
    throw Error(ErrorKind::NotASolution, "g does not satisfy Delta g = (1 + |grad b|^2)/(2a)");
  }
  return CandidateSolution(HeFormSolution{dim, a, std::move(b), std::move(g)});
}

int CandidateSolution::dim() const {
  return std::visit(
      [](const auto& s) -> int {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, QuadraticSolution>) {
          return static_cast<int>(s.A.rows());
        } else if constexpr (std::is_same_v<S, RadialExpSolution>) {
          return 3;
        } else {
          return s.dim;
        }
      },
      v_);
}

std::string CandidateSolution::tag() const {
  switch (v_.index()) {
    case 0: return "quadratic";
    case 1: return "counterexample";
    default: return "he_form";
  }
}

double CandidateSolution::eval(const Eigen::Ref<const Eigen::VectorXd>& x, const DerivIndex& alpha) const {
  check_point(*this, x.size());
  return eval_variant<double>(v_, x.data(), alpha, dim());
}

long double CandidateSolution::eval_extended(const long double* x, const DerivIndex& alpha) const {
  return eval_variant<long double>(v_, x, alpha, dim());
}

double CandidateSolution::value(const Eigen::Ref<const Eigen::VectorXd>& x) const { return eval(x, {0, 0, 0}); }

Eigen::VectorXd CandidateSolution::gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd g(dim());
  for (int k = 0; k < dim(); ++k) {
    DerivIndex a{0, 0, 0};
    a[k] = 1;
    g[k] = eval(x, a);
  }
  return g;
}

SymMatrix CandidateSolution::hessian(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  SymMatrix h(dim());
  for (int i = 0; i < dim(); ++i) {
    for (int j = i; j < dim(); ++j) {
      DerivIndex a{0, 0, 0};
      a[i] += 1;
      a[j] += 1;
      h(i, j) = eval(x, a);
    }
  }
  return h;
}

double CandidateSolution::residual(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  check_point(*this, x.size());
  // Extended precision: sigma2_tilde cancels products much larger than its value.
  const int n = dim();
  long double xl[kMaxDim] = {0, 0, 0};
  for (int k = 0; k < n; ++k) xl[k] = x[k];
  auto entry = [&](int i, int j) {
    DerivIndex a{0, 0, 0};
    a[i] += 1;
    a[j] += 1;
    return eval_variant<long double>(v_, xl, a, n);
  };
  long double trace_x = 0;
  long double mixed = 0;
  for (int i = 1; i < n; ++i) {
    trace_x += entry(i, i);
    const long double m = entry(0, i);
    mixed += m * m;
  }
  return static_cast<double>(entry(0, 0) * trace_x - mixed - 1.0L);
}

Polynomial solve_polynomial_poisson(const Polynomial& f) {
  const int m = f.vars();
  if (f.degree() > 2) throw Error(ErrorKind::DegreeTooHigh, "right-hand side degree exceeds 2");
  const Polynomial rho2 = Polynomial::radius_squared(m);
  Polynomial g(m);
  // Delta(c rho^2) = 2m c
  g = g + rho2 * (f.coeff({0, 0}) / (2.0 * m));
  // l harmonic of degree 1: Delta(rho^2 l) = (2m + 4) l
  g = g + rho2 * f.homogeneous_part(1) * (1.0 / (2.0 * m + 4.0));
  // q = q0 + mu rho^2 with q0 harmonic; Delta(rho^4) = 4(m+2) rho^2, Delta(rho^2 q0) = (2m+8) q0
  const Polynomial q = f.homogeneous_part(2);
  const double mu = q.laplacian().coeff({0, 0}) / (2.0 * m);
  const Polynomial q0 = q - rho2 * mu;
  g = g + rho2 * rho2 * (mu / (4.0 * (m + 2)));
  g = g + rho2 * q0 * (1.0 / (2.0 * m + 8.0));
  return g;
}

CandidateSolution make_he_form(int dim, double a, const HarmonicPolynomial& b) {
  if (b.degree() > 2) throw Error(ErrorKind::DegreeTooHigh, "make_he_form needs deg b <= 2");
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidArgument, "He form needs a > 0");
  if (b.vars() != dim - 1) throw Error(ErrorKind::InvalidArgument, "b must have n - 1 variables");
  const Polynomial rhs = (Polynomial::constant(dim - 1, 1.0) + b.poly().gradient_norm_squared()) * (0.5 / a);
  return CandidateSolution::he_form(dim, a, b, solve_polynomial_poisson(rhs));
}

HeClassification is_he_form(const CandidateSolution& u, double half_width, int samples_per_axis) {
  HeClassification out;
  out.he_form = !std::holds_alternative<RadialExpSolution>(u.variant());
  const int n = u.dim();
  const Grid probe = Grid::cube(n, {-half_width, half_width}, std::max(5, samples_per_axis));
  out.u11_min = std::numeric_limits<double>::infinity();
  out.u11_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double v = u.eval(probe.point(probe.unflat(i)), {2, 0, 0});
    out.u11_min = std::min(out.u11_min, v);
    out.u11_max = std::max(out.u11_max, v);
  }
  out.u11_oscillation = out.u11_max - out.u11_min;
  return out;
}

bool is_convex_on_box(const CandidateSolution& u, double half_width, int samples_per_axis, double eig_tol) {
  const Grid probe = Grid::cube(u.dim(), {-half_width, half_width}, std::max(5, samples_per_axis));
  for (std::size_t i = 0; i < probe.size(); ++i) {
    if (u.hessian(probe.point(probe.unflat(i))).min_eigenvalue() < -eig_tol) return false;
  }
  return true;
}

}  // namespace sigmalab
