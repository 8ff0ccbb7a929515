#pragma once

// The quasi-metric on the discrete cosphere bundle S*R^n = R^n x S^{n-1},
// metric balls, direction sets with quadrature weights, and the maximal
// operators built on quasi-metric balls.
//
// The distance is the concrete expression
//   rho(p,q)^2 = max(|w.(x-y)|, |v.(x-y)|) + |x-y|^2 + |w-v|^2,
// with the spatial difference reduced to its shortest periodic
// representative. Taking the larger of the two directional terms makes rho
// exactly symmetric; the two variants differ by at most a factor sqrt(3/2).

#include <cstdint>
#include <utility>
#include <vector>

#include "fioh/common.hpp"
#include "fioh/grid.hpp"

namespace fioh {

struct Direction {
  Vec u{1.0, 0.0, 0.0};  // unit vector
};

struct DirectionSet {
  int n = 2;
  std::vector<Direction> dirs;
  std::vector<double> weights;  // positive, summing to 1

  static DirectionSet equispaced_circle(int count);
  static DirectionSet quasi_uniform_sphere(int count);

  int size() const { return static_cast<int>(dirs.size()); }

  // Largest nearest-neighbor chord distance between directions.
  double max_spacing() const;

  // The angular resolution must resolve the finest packet aperture.
  void require_resolves(double sigma_min) const;
};

struct PhasePoint {
  Vec x{0.0, 0.0, 0.0};
  Vec omega{1.0, 0.0, 0.0};
};

struct MetricBall {
  PhasePoint center;
  double radius = 1.0;
};

double quasi_distance_sq(const SpatialGrid& grid, const PhasePoint& p,
                         const PhasePoint& q);
double quasi_distance(const SpatialGrid& grid, const PhasePoint& p,
                      const PhasePoint& q);

// Real-valued samples on the discrete cosphere bundle: one spatial array per
// direction, values[dir][flat].
using SpSlice = std::vector<std::vector<double>>;

SpSlice make_sp_slice(const SpatialGrid& grid, const DirectionSet& dirs,
                      double fill = 0.0);

// ---------------------------------------------------------------------------
// Discrete metric balls

struct BallMembers {
  // (direction index, spatial flat index) pairs.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> samples;
  double measure = 0.0;  // sum of h^n * weight(dir)
  bool fallback = false; // empty ball replaced by the nearest sample
};

BallMembers ball_members(const SpatialGrid& grid, const DirectionSet& dirs,
                         const MetricBall& ball);

struct BallVolumeEstimate {
  double value = 0.0;
  std::size_t samples = 0;
  bool precision_warning = false;  // fewer than 10^3 samples
};

// Monte Carlo estimate of |B_tau| under dx dw (w unit-normalized), at the
// canonical center; the volume does not depend on the center.
BallVolumeEstimate ball_volume_estimate(int n, double tau, std::size_t samples,
                                        std::uint64_t seed);

// ---------------------------------------------------------------------------
// Maximal operators

// Dyadic radius menu {diam * 2^-k} down to half a grid cell.
std::vector<double> maximal_radius_menu(const SpatialGrid& grid);

// Centered Hardy-Littlewood maximal function over the dyadic menu, with the
// power lambda as in M_lambda g = (M(|g|^lambda))^{1/lambda}. Pointwise >= |g|.
SpSlice m_lambda(const SpatialGrid& grid, const DirectionSet& dirs,
                 const SpSlice& g, double lambda);

// M*_{N,sigma}: discrete sup of (1 + sigma^{-1} rho^2)^{-N} |g| over all
// phase-space samples.
SpSlice peak_maximal(const SpatialGrid& grid, const DirectionSet& dirs,
                     const SpSlice& g, double decay_order, double sigma);

struct KernelDominationReport {
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  bool finite = true;
};

// Compares sigma^{-n} * integral of (1 + sigma^{-1} rho^2)^{-M} |g| against
// the maximal function M g = m_lambda(g, 1), pointwise.
KernelDominationReport kernel_domination_check(const SpatialGrid& grid,
                                               const DirectionSet& dirs,
                                               const SpSlice& g, double sigma,
                                               double decay_order);

}  // namespace fioh
