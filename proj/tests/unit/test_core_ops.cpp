#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>

#include <Eigen/Dense>

#include "sigmalab/error.hpp"
#include "sigmalab/field_io.hpp"
#include "sigmalab/finite_difference.hpp"
#include "sigmalab/grid.hpp"
#include "sigmalab/sym_matrix.hpp"
#include "test_util.hpp"

using namespace sigmalab;

namespace {

SymMatrix random_sym(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  SymMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = d(rng);
  return m;
}

// H with H11 > 0 and sigma2 > 0: diagonal-dominant random draw.
SymMatrix random_elliptic(std::mt19937_64& rng, int n) {
  for (;;) {
    SymMatrix h = random_sym(rng, n, 2.0);
    if (h(0, 0) > 0.05 && sigma2_tilde(h) > 0.05) return h;
  }
}

}  // namespace

TEST(Grid, RejectsBadConstruction) {
  expect_kind(ErrorKind::InvalidArgument, [] { Grid::cube(1, {-1, 1}, 11); });
  expect_kind(ErrorKind::InvalidArgument, [] { Grid::cube(4, {-1, 1}, 11); });
  expect_kind(ErrorKind::InvalidArgument, [] { Grid::cube(3, {-1, 1}, 4); });
  expect_kind(ErrorKind::InvalidArgument, [] { Grid::cube(2, {1, 1}, 11); });
}

TEST(Grid, FlatIndexRoundTripAndGeometry) {
  const Grid g(3, {Interval{-1, 1}, Interval{0, 2}, Interval{-3, 3}}, {5, 7, 9});
  EXPECT_EQ(g.size(), 5u * 7u * 9u);
  EXPECT_EQ(g.interior_size(), 3u * 5u * 7u);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.flat(g.unflat(i)), i);
  EXPECT_DOUBLE_EQ(g.spacing(1), 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(g.coordinate(2, 8), 3.0);
  EXPECT_EQ(g.stride(0), 63);
  EXPECT_EQ(g.stride(2), 1);
  EXPECT_FALSE(g.is_interior({0, 3, 4}));
  EXPECT_TRUE(g.is_interior({1, 1, 1}));
}

TEST(FieldIo, RoundTripIsBitExact) {
  const Grid g(2, {Interval{-1, 2}, Interval{0, 1}, Interval{}}, {6, 5, 1});
  const ScalarField f = ScalarField::sample(g, [](const Eigen::VectorXd& x) { return std::sin(x[0]) * std::exp(x[1]) + 1e-300; });
  const auto dir = std::filesystem::temp_directory_path() / "sigmalab_fieldio";
  std::filesystem::create_directories(dir);
  write_field(f, dir / "f.fld.json");
  const ScalarField back = read_field(dir / "f");
  ASSERT_TRUE(back.grid() == g);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(std::bit_cast<std::uint64_t>(f[i]), std::bit_cast<std::uint64_t>(back[i]));

  // Payload is little-endian float64 in row-major order.
  std::ifstream bin(dir / "f.fld.bin", std::ios::binary);
  unsigned char bytes[8];
  bin.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t bits = 0;
  for (int k = 7; k >= 0; --k) bits = (bits << 8) | bytes[k];
  EXPECT_EQ(std::bit_cast<double>(bits), f[0]);
}

TEST(FieldIo, MissingOrTruncatedFilesAreIoErrors) {
  const auto dir = std::filesystem::temp_directory_path() / "sigmalab_fieldio_bad";
  std::filesystem::create_directories(dir);
  expect_kind(ErrorKind::Io, [&] { read_field(dir / "nothing"); });
  const ScalarField f(Grid::cube(2, {0, 1}, 5), 1.0);
  write_field(f, dir / "t");
  std::filesystem::resize_file(dir / "t.fld.bin", 16);
  expect_kind(ErrorKind::Io, [&] { read_field(dir / "t"); });
}

TEST(Sigma2, KnownValues) {
  EXPECT_DOUBLE_EQ(sigma2_tilde(SymMatrix::diagonal(Eigen::Vector3d(1.0, 0.5, 0.5))), 1.0);
  SymMatrix h(3);
  h(0, 0) = 2;
  h(1, 1) = 3;
  h(2, 2) = 4;
  h(0, 1) = 1;
  h(0, 2) = -2;
  h(1, 2) = 7;  // transverse block entries off the diagonal do not enter
  EXPECT_DOUBLE_EQ(sigma2_tilde(h), 2.0 * 7.0 - 1.0 - 4.0);
  SymMatrix h2(2);
  h2(0, 0) = 3;
  h2(1, 1) = 5;
  h2(0, 1) = 2;
  EXPECT_DOUBLE_EQ(sigma2_tilde(h2), 11.0);
}

TEST(Sigma2, LinearizationMatchesDirectionalDerivative) {
  std::mt19937_64 rng(11);
  for (int n : {2, 3}) {
    for (int trial = 0; trial < 200; ++trial) {
      const SymMatrix h = random_sym(rng, n, 3.0);
      const SymMatrix w = random_sym(rng, n);
      const double eps = 1e-6;
      const double fd = (sigma2_tilde(h + w * eps) - sigma2_tilde(h - w * eps)) / (2 * eps);
      EXPECT_NEAR(frobenius_inner(sigma2_linearization(h), w), fd, 1e-8);
    }
  }
}

TEST(Sigma2, LinearizationIsPositiveDefiniteOnTheEllipticCone) {
  std::mt19937_64 rng(12);
  for (int n : {2, 3}) {
    for (int trial = 0; trial < 500; ++trial) {
      const SymMatrix h = random_elliptic(rng, n);
      const SymMatrix c = sigma2_linearization(h);
      EXPECT_GT(c.min_eigenvalue(), 0.0);
      // Schur complement of C on the t entry equals sigma2 / H11.
      if (n == 3) {
        const Eigen::MatrixXd d = c.dense();
        const double schur = d(0, 0) - (d.block(0, 1, 1, 2) * d.block(1, 1, 2, 2).inverse() * d.block(1, 0, 2, 1))(0, 0);
        EXPECT_NEAR(schur, sigma2_tilde(h) / h(0, 0), 1e-10 * (1 + std::abs(schur)));
      }
    }
  }
}

TEST(Sigma2, InvariantUnderTransverseRotations) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ang(0, 6.283185307179586);
  for (int trial = 0; trial < 100; ++trial) {
    const SymMatrix h = random_sym(rng, 3, 2.0);
    const double a = ang(rng);
    Eigen::Matrix3d q = Eigen::Matrix3d::Identity();
    q.block<2, 2>(1, 1) << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    const SymMatrix r = SymMatrix::from_dense(q.transpose() * h.dense() * q);
    EXPECT_NEAR(sigma2_tilde(r), sigma2_tilde(h), 1e-12);
  }
}

TEST(Sigma2, MonotoneInLoewnerOrderOnTheCone) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const SymMatrix h = random_elliptic(rng, 3);
    const Eigen::MatrixXd p = random_sym(rng, 3).dense();
    const SymMatrix bigger = SymMatrix::from_dense(h.dense() + p * p.transpose());
    EXPECT_GE(sigma2_tilde(bigger), sigma2_tilde(h) - 1e-12);
  }
}

TEST(FiniteDifference, ExactOnQuadratics) {
  const Grid g = Grid::cube(3, {-1, 1}, 7);
  const Eigen::Matrix3d a = (Eigen::Matrix3d() << 2, 0.3, -0.4, 0.3, 1, 0.2, -0.4, 0.2, 0.5).finished();
  const ScalarField f = ScalarField::sample(g, [&](const Eigen::VectorXd& x) {
    return 0.5 * x.dot(a * x) + 0.7 * x[0] - x[2] + 3.0;
  });
  const SymMatrix h = fd_hessian(f, {3, 2, 4});
  EXPECT_LT((h.dense() - a).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::VectorXd grad = fd_gradient(f, {3, 2, 4});
  const Eigen::Vector3d x = g.point({3, 2, 4});
  EXPECT_LT((grad - (a * x + Eigen::Vector3d(0.7, 0, -1))).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FiniteDifference, SecondOrderConvergence) {
  auto f = [](const Eigen::VectorXd& x) { return std::exp(x[0]) * std::sin(x[1]) + std::cos(x[0] * x[2]); };
  auto exact = [](const Eigen::Vector3d& x) {
    Eigen::Matrix3d h;
    const double e = std::exp(x[0]), s = std::sin(x[1]), c1 = std::cos(x[1]);
    const double p = x[0] * x[2], cp = std::cos(p), sp = std::sin(p);
    h(0, 0) = e * s - x[2] * x[2] * cp;
    h(1, 1) = -e * s;
    h(2, 2) = -x[0] * x[0] * cp;
    h(0, 1) = h(1, 0) = e * c1;
    h(0, 2) = h(2, 0) = -sp - p * cp;
    h(1, 2) = h(2, 1) = 0.0;
    return h;
  };
  const Eigen::Vector3d x0(0.3, -0.2, 0.5);
  auto err = [&](double h) {
    const Grid g(3, {Interval{x0[0] - 2 * h, x0[0] + 2 * h}, Interval{x0[1] - 2 * h, x0[1] + 2 * h},
                     Interval{x0[2] - 2 * h, x0[2] + 2 * h}},
                 {5, 5, 5});
    return (fd_hessian(ScalarField::sample(g, f), {2, 2, 2}).dense() - exact(x0)).cwiseAbs().maxCoeff();
  };
  const double ratio = err(0.05) / err(0.025);
  EXPECT_GE(ratio, 3.5);
  EXPECT_LE(ratio, 4.5);
}

TEST(FiniteDifference, BoundaryAndOutsideNodesAreRejected) {
  const ScalarField f(Grid::cube(2, {0, 1}, 6), 0.0);
  expect_kind(ErrorKind::BoundaryNode, [&] { fd_hessian(f, {0, 3, 0}); });
  expect_kind(ErrorKind::BoundaryNode, [&] { fd_gradient(f, {2, 5, 0}); });
  expect_kind(ErrorKind::InvalidArgument, [&] { fd_hessian(f, {2, 9, 0}); });
}

TEST(ScalarField, SampledValuesAreFinite) {
  const ScalarField f = ScalarField::sample(Grid::cube(3, {-1, 1}, 5), [](const Eigen::VectorXd& x) { return x.squaredNorm(); });
  EXPECT_TRUE(f.all_finite());
}
