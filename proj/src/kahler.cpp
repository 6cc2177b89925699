#include "sigmalab/kahler.hpp"

#include <map>

#include <Eigen/LU>

#include "sigmalab/error.hpp"

namespace sigmalab {

namespace {

using real = long double;
using cplx = std::complex<real>;
using CMat = Eigen::Matrix<cplx, 2, 2>;

// Constant-coefficient differential operator in (d_t, d_x, d_y); all d_s vanish on
// s-independent potentials, so d_{z1} = d_{zbar1} = d_t / 2.
class DiffOp {
 public:
  static DiffOp dz(int k, bool conj) {
    DiffOp op;
    if (k == 0) {
      op.terms_[{1, 0, 0}] = cplx(0.5L, 0.0L);
    } else {
      op.terms_[{0, 1, 0}] = cplx(0.5L, 0.0L);
      op.terms_[{0, 0, 1}] = cplx(0.0L, conj ? 0.5L : -0.5L);
    }
    return op;
  }

  DiffOp operator*(const DiffOp& o) const {
    DiffOp r;
    for (const auto& [a, c] : terms_) {
      for (const auto& [b, d] : o.terms_) r.terms_[{a[0] + b[0], a[1] + b[1], a[2] + b[2]}] += c * d;
    }
    return r;
  }

  template <class Jet>
  cplx apply(const Jet& jet) const {
    cplx s = 0;
    for (const auto& [a, c] : terms_) s += c * jet(a);
    return s;
  }

 private:
  std::map<DerivIndex, cplx> terms_;
};

class RealJet {
 public:
  RealJet(const CandidateSolution& u, const ComplexPoint& p, real scale) {
    const real x[3] = {p.t, p.x, p.y};
    for (int a = 0; a <= kMaxDerivOrder; ++a) {
      for (int b = 0; a + b <= kMaxDerivOrder; ++b) {
        for (int c = 0; a + b + c <= kMaxDerivOrder; ++c) values_[a][b][c] = scale * u.eval_extended(x, {a, b, c});
      }
    }
  }
  real operator()(const DerivIndex& a) const { return values_[a[0]][a[1]][a[2]]; }

 private:
  real values_[kMaxDerivOrder + 1][kMaxDerivOrder + 1][kMaxDerivOrder + 1]{};
};

struct MetricExt {
  CMat g;
  std::array<CMat, 2> dg;
  std::array<CMat, 2> dbar_g;
  std::array<std::array<CMat, 2>, 2> ddbar_g;
  CMat ginv;
  real det = 0;
};

CMat inverse2(const CMat& m, cplx det) {
  CMat r;
  r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return r / det;
}

MetricExt metric_ext(const CandidateSolution& u, const ComplexPoint& p, double potential_scale) {
  if (u.dim() != 3) throw Error(ErrorKind::InvalidArgument, "Kahler potentials need an n = 3 candidate");
  const RealJet jet(u, p, static_cast<real>(potential_scale));
  std::array<DiffOp, 2> d{DiffOp::dz(0, false), DiffOp::dz(1, false)};
  std::array<DiffOp, 2> db{DiffOp::dz(0, true), DiffOp::dz(1, true)};
  MetricExt m;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const DiffOp gij = d[i] * db[j];
      m.g(i, j) = gij.apply(jet);
      for (int k = 0; k < 2; ++k) {
        m.dg[k](i, j) = (d[k] * gij).apply(jet);
        m.dbar_g[k](i, j) = (db[k] * gij).apply(jet);
        for (int l = 0; l < 2; ++l) m.ddbar_g[k][l](i, j) = (d[k] * db[l] * gij).apply(jet);
      }
    }
  }
  const cplx det = m.g(0, 0) * m.g(1, 1) - m.g(0, 1) * m.g(1, 0);
  m.det = det.real();
  if (!(m.g(0, 0).real() > 0) || !(m.det > 0)) {
    throw Error(ErrorKind::NotPositiveDefinite, "complex Hessian is not positive definite at the probe point");
  }
  m.ginv = inverse2(m.g, det);
  return m;
}

CMatrix2 to_double(const CMat& m) { return m.unaryExpr([](cplx c) { return std::complex<double>(c); }); }

// trace(A B) for 2x2.
cplx trace_product(const CMat& a, const CMat& b) { return (a * b).trace(); }

std::array<std::complex<real>, 16> riemann_ext(const MetricExt& m) {
  std::array<cplx, 16> r{};
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      const CMat block = -m.ddbar_g[k][l] + m.dg[k] * m.ginv * m.dbar_g[l];
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) r[((i * 2 + j) * 2 + k) * 2 + l] = block(i, j);
      }
    }
  }
  return r;
}

}  // namespace

double HermitianMetric::det() const { return (g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0)).real(); }

HermitianMetric complex_hessian(const CandidateSolution& u, const ComplexPoint& p, double potential_scale) {
  const MetricExt m = metric_ext(u, p, potential_scale);
  HermitianMetric out;
  out.g = to_double(m.g);
  for (int k = 0; k < 2; ++k) {
    out.dg[k] = to_double(m.dg[k]);
    out.dbar_g[k] = to_double(m.dbar_g[k]);
    for (int l = 0; l < 2; ++l) out.ddbar_g[k][l] = to_double(m.ddbar_g[k][l]);
  }
  return out;
}

double ma_residual(const CandidateSolution& u, const ComplexPoint& p, bool rescaled) {
  const MetricExt m = metric_ext(u, p, rescaled ? 4.0 : 1.0);
  return static_cast<double>(m.det - (rescaled ? 1.0L : 1.0L / 16.0L));
}

CMatrix2 ricci(const CandidateSolution& u, const ComplexPoint& p, double potential_scale) {
  const MetricExt m = metric_ext(u, p, potential_scale);
  CMat ric;
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      ric(k, l) = -trace_product(m.ginv, m.ddbar_g[k][l]) +
                  trace_product(m.ginv * m.dg[k], m.ginv * m.dbar_g[l]);
    }
  }
  return to_double(ric);
}

CurvatureTensor riemann(const CandidateSolution& u, const ComplexPoint& p, double potential_scale) {
  const auto r = riemann_ext(metric_ext(u, p, potential_scale));
  CurvatureTensor out;
  for (std::size_t i = 0; i < r.size(); ++i) out.r[i] = std::complex<double>(r[i]);
  return out;
}

double riemann_norm(const CandidateSolution& u, const ComplexPoint& p, double potential_scale) {
  const MetricExt m = metric_ext(u, p, potential_scale);
  const auto r = riemann_ext(m);
  // g = L L^H; the frame rows of P = L^{-1} are g-unitary.
  const real l00 = std::sqrt(m.g(0, 0).real());
  const cplx l10 = m.g(1, 0) / l00;
  const real l11 = std::sqrt(m.g(1, 1).real() - std::norm(l10));
  CMat P;
  P << cplx(1.0L / l00), cplx(0), -l10 / (l00 * l11), cplx(1.0L / l11);
  real total = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          cplx s = 0;
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
              for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                  s += P(a, i) * std::conj(P(b, j)) * P(c, k) * std::conj(P(d, l)) * r[((i * 2 + j) * 2 + k) * 2 + l];
          total += std::norm(s);
        }
  return static_cast<double>(total);
}

CMatrix2 ricci_trace(const CMatrix2& g, const CurvatureTensor& rm) {
  const CMatrix2 ginv = g.inverse();
  CMatrix2 out = CMatrix2::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(i, j) += ginv(l, k) * rm(i, j, k, l);
  return out;
}

}  // namespace sigmalab
