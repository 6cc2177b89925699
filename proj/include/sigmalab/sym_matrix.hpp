#pragma once

#include <array>
#include <cassert>

#include <Eigen/Core>

#include "sigmalab/grid.hpp"

namespace sigmalab {

/// Symmetric n x n matrix (n <= 3) stored as its upper triangle.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int dim) : dim_(dim) { assert(dim >= 1 && dim <= kMaxDim); }

  static SymMatrix identity(int dim);
  static SymMatrix diagonal(const Eigen::VectorXd& diag);
  /// Symmetrizes `m` as (m + m^T)/2.
  static SymMatrix from_dense(const Eigen::MatrixXd& m);

  int dim() const { return dim_; }

  double operator()(int i, int j) const { return entries_[slot(i, j)]; }
  double& operator()(int i, int j) { return entries_[slot(i, j)]; }

  Eigen::MatrixXd dense() const;
  Eigen::VectorXd eigenvalues() const;
  double min_eigenvalue() const;
  bool positive_definite() const { return min_eigenvalue() > 0.0; }
  double frobenius_norm() const;

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator*(double s) const;

 private:
  static int slot(int i, int j) {
    if (i > j) std::swap(i, j);
    // row-major upper triangle of a 3x3: (0,0)(0,1)(0,2)(1,1)(1,2)(2,2)
    static constexpr int base[kMaxDim] = {0, 3, 5};
    return base[i] + (j - i);
  }

  int dim_ = 0;
  std::array<double, 6> entries_{};
};

/// u11*(u22+...+unn) - u12^2 - ... - u1n^2, axis 0 distinguished.
double sigma2_tilde(const SymMatrix& h);

/// Coefficient matrix C of the derivative of sigma2_tilde at `h`:
/// d sigma2_tilde(h)[W] = <C, W> with off-diagonal entries counted twice.
SymMatrix sigma2_linearization(const SymMatrix& h);

/// <C, W> = sum_ij C_ij W_ij over the full matrix.
double frobenius_inner(const SymMatrix& c, const SymMatrix& w);

}  // namespace sigmalab
