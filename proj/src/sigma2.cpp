#include <cmath>

#include <Eigen/Eigenvalues>

#include "sigmalab/sym_matrix.hpp"

namespace sigmalab {

SymMatrix SymMatrix::identity(int dim) {
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& diag) {
  SymMatrix m(static_cast<int>(diag.size()));
  for (int i = 0; i < m.dim(); ++i) m(i, i) = diag[i];
  return m;
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& d) {
  SymMatrix m(static_cast<int>(d.rows()));
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = i; j < m.dim(); ++j) m(i, j) = 0.5 * (d(i, j) + d(j, i));
  }
  return m;
}

Eigen::MatrixXd SymMatrix::dense() const {
  Eigen::MatrixXd d(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) d(i, j) = (*this)(i, j);
  }
  return d;
}

Eigen::VectorXd SymMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double SymMatrix::min_eigenvalue() const { return eigenvalues().minCoeff(); }

double SymMatrix::frobenius_norm() const { return std::sqrt(frobenius_inner(*this, *this)); }

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  SymMatrix r(*this);
  for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] += o.entries_[i];
  return r;
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
  SymMatrix r(*this);
  for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] -= o.entries_[i];
  return r;
}

SymMatrix SymMatrix::operator*(double s) const {
  SymMatrix r(*this);
  for (double& e : r.entries_) e *= s;
  return r;
}

double sigma2_tilde(const SymMatrix& h) {
  double trace_x = 0.0;
  double mixed = 0.0;
  for (int i = 1; i < h.dim(); ++i) {
    trace_x += h(i, i);
    mixed += h(0, i) * h(0, i);
  }
  return h(0, 0) * trace_x - mixed;
}

SymMatrix sigma2_linearization(const SymMatrix& h) {
  SymMatrix c(h.dim());
  double trace_x = 0.0;
  for (int i = 1; i < h.dim(); ++i) trace_x += h(i, i);
  c(0, 0) = trace_x;
  for (int i = 1; i < h.dim(); ++i) {
    c(i, i) = h(0, 0);
    c(0, i) = -h(0, i);
  }
  return c;
}

double frobenius_inner(const SymMatrix& c, const SymMatrix& w) {
  double s = 0.0;
  for (int i = 0; i < c.dim(); ++i) {
    s += c(i, i) * w(i, i);
    for (int j = i + 1; j < c.dim(); ++j) s += 2.0 * c(i, j) * w(i, j);
  }
  return s;
}

}  // namespace sigmalab
