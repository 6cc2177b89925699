#pragma once

#include <optional>
#include <vector>

#include "sigmalab/grid.hpp"
#include "sigmalab/smooth_function.hpp"

namespace sigmalab {

struct LegendreOptions {
  Interval t_range{-1.0, 1.0};
  /// x2..xn box and node counts (entries beyond n - 1 ignored).
  std::array<Interval, kMaxDim - 1> x_box{Interval{-1.0, 1.0}, Interval{-1.0, 1.0}};
  std::array<int, kMaxDim - 1> x_nodes{11, 11};
  int z_nodes = 11;
  /// Default: common attained range of u_1 over all x-lines, shrunk 5% at each end.
  std::optional<Interval> z_range;
  /// u_11 samples per x-line in the monotonicity check.
  int monotonicity_samples = 65;
};

struct LegendreResult {
  ScalarField theta;  // axis 0 is z, axes 1.. are x2..xn
  Interval z_range;
};

/// theta(z, x) = the t with u_1(t, x) = z, per x-line: bisection to 1e-12 then one Newton polish.
/// Throws NotMonotone (u_11 <= 0 on a line) and ZOutOfRange.
LegendreResult partial_legendre(const SmoothFunction& u, const LegendreOptions& options);

Interval default_z_range(const SmoothFunction& u, const LegendreOptions& options);

struct HarmonicityReport {
  double max_abs_laplacian = 0.0;
  NodeIndex worst_node{0, 0, 0};
};

/// Max |discrete Laplacian| over all axes (z and x) at interior nodes.
HarmonicityReport harmonicity_test(const ScalarField& theta);

}  // namespace sigmalab
