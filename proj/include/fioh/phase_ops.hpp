#pragma once

// Bulk operators over the discrete cosphere bundle: ball-indicator sums,
// smooth-kernel sums, and weighted peak filters. These back the Lusin
// functional, the Hardy-Littlewood maximal function and the maximal
// inequalities at full grid sizes.
//
// For n = 2 the ball sums switch per direction pair between a direct gather
// over precomputed lattice offsets (small balls) and FFT convolution with the
// indicator kernel (large balls). Results are deterministic and independent
// of the worker count: outputs are written in fixed chunks and every
// accumulation runs in a fixed order.

#include <cstdint>
#include <memory>
#include <vector>

#include "fioh/geometry.hpp"
#include "fioh/grid.hpp"

namespace fioh {

// S[i](x) = sum_j sum_{y in B_tau(x, w_i) with direction v_j} H[j](y).
// Membership uses the quasi-metric; the caller folds any weights into H.
class BallSum {
 public:
  BallSum(const SpatialGrid& grid, const DirectionSet& dirs, double tau);
  ~BallSum();

  BallSum(const BallSum&) = delete;
  BallSum& operator=(const BallSum&) = delete;

  void apply(const std::vector<std::vector<double>>& H,
             std::vector<std::vector<double>>& S) const;

  // Discrete measure h^n sum_j w_j count(i, j) of the ball centered at a
  // sample with direction index i (independent of the spatial point).
  double measure(int dir_index) const;

  std::int64_t member_count(int center_dir, int sample_dir) const;
  double tau() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// S[i](x) = sum_j sum_y shape(rho2((x,w_i),(y,v_j))) H[j](y), with `shape`
// an arbitrary decreasing profile of the squared quasi-distance.
class PhaseKernelSum {
 public:
  PhaseKernelSum(const SpatialGrid& grid, const DirectionSet& dirs,
                 std::function<double(double)> shape);
  ~PhaseKernelSum();

  PhaseKernelSum(const PhaseKernelSum&) = delete;
  PhaseKernelSum& operator=(const PhaseKernelSum&) = delete;

  void apply(const std::vector<std::vector<double>>& H,
             std::vector<std::vector<double>>& S) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// out[i](x) = max over (y, j) of H[j](y) * (1 + inv_sigma * rho2)^(-order),
// H nonnegative. Exact branch-and-bound over block maxima; `stride`>1
// evaluates every stride-th spatial output point (others left at 0).
class PhasePeakMax {
 public:
  PhasePeakMax(const SpatialGrid& grid, const DirectionSet& dirs,
               double inv_sigma, double order);

  void apply(const std::vector<std::vector<double>>& H,
             std::vector<std::vector<double>>& out, int stride = 1) const;

 private:
  SpatialGrid grid_;
  DirectionSet dirs_;
  double inv_sigma_;
  double order_;
};

}  // namespace fioh
