#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

#include "sigmalab/candidates.hpp"

namespace sigmalab {

/// z1 = t + i s, z2 = x + i y.
struct ComplexPoint {
  double t = 0.0;
  double s = 0.0;
  double x = 0.0;
  double y = 0.0;
};

using CMatrix2 = Eigen::Matrix2cd;

/// g_{i jbar} = d_{z_i} d_{zbar_j} u with Wirtinger d_z = (d_re - i d_im)/2, plus
/// the derivatives of g needed for curvature. Matrix entry (i, j) holds the (i, jbar) component.
struct HermitianMetric {
  CMatrix2 g;
  std::array<CMatrix2, 2> dg;                   // d_{z_k} g
  std::array<CMatrix2, 2> dbar_g;               // d_{zbar_k} g
  std::array<std::array<CMatrix2, 2>, 2> ddbar_g;  // d_{z_k} d_{zbar_l} g, indexed [k][l]

  double det() const;
};

/// R_{i jbar k lbar} stored at index ((i*2 + j)*2 + k)*2 + l.
struct CurvatureTensor {
  std::array<std::complex<double>, 16> r{};

  std::complex<double>& operator()(int i, int j, int k, int l) { return r[((i * 2 + j) * 2 + k) * 2 + l]; }
  std::complex<double> operator()(int i, int j, int k, int l) const { return r[((i * 2 + j) * 2 + k) * 2 + l]; }
};

/// Potential is `potential_scale * u(t, x, y)` read as s-independent on C^2.
/// Throws NotPositiveDefinite when g11 <= 0 or det g <= 0.
HermitianMetric complex_hessian(const CandidateSolution& u, const ComplexPoint& p, double potential_scale = 1.0);

/// det(g) - 1/16 for the raw potential (convention above), det(g[4u]) - 1 when rescaled.
double ma_residual(const CandidateSolution& u, const ComplexPoint& p, bool rescaled = false);

/// R_{i jbar} = -d_i d_jbar log det g.
CMatrix2 ricci(const CandidateSolution& u, const ComplexPoint& p, double potential_scale = 1.0);

/// R_{i jbar k lbar} = -d_k d_lbar g_{i jbar} + g^{p qbar} (d_k g_{i qbar}) (d_lbar g_{p jbar}).
CurvatureTensor riemann(const CandidateSolution& u, const ComplexPoint& p, double potential_scale = 1.0);

/// |Rm|^2 measured with g, evaluated in a g-unitary frame.
double riemann_norm(const CandidateSolution& u, const ComplexPoint& p, double potential_scale = 1.0);

/// Contraction g^{k lbar} R_{i jbar k lbar}.
CMatrix2 ricci_trace(const CMatrix2& g, const CurvatureTensor& rm);

}  // namespace sigmalab
