#pragma once

// Tent-space machinery over the cosphere bundle: the Lusin functional A_s,
// the Carleson functional C_{s,alpha}, T^p_s quasi-norms, tent atoms, and the
// vertical square-function comparison.
//
// The discrete Lusin average normalizes each source sample by the measure of
// the ball centered at that sample (the two agree in the continuum, where
// ball volume is center-independent). With this choice the discrete T^2
// quasi-norm equals the L^2 phase-space norm exactly, sample for sample.
//
// Tent membership is the literal definition: (y, v, s) lies in T(B) when the
// discrete distance from (y, v) to the sampled complement of B is at least
// sqrt(s).

#include <cstdint>
#include <map>
#include <vector>

#include "fioh/geometry.hpp"
#include "fioh/grid.hpp"
#include "fioh/transform.hpp"

namespace fioh {

// Finite menu of balls for the T^infty suprema: dyadic radii, centers on a
// per-radius subgrid. The menu is part of any reported result.
struct BallMenu {
  std::vector<double> radii;
  std::vector<int> spatial_strides;
  std::vector<int> direction_strides;

  static BallMenu standard(const SpatialGrid& grid, const DirectionSet& dirs,
                           double max_radius = 4.0);
};

struct TentParams {
  double p = 2.0;
  double s = 0.0;
  double alpha = 0.0;  // only used when p = infinity
  BallMenu menu;       // only used when p = infinity
};

// Incremental A_s^2 accumulation, one scale node at a time, for a set of s
// exponents. Shared by the materialized Lusin functional and the streaming
// space evaluators.
class LusinAccumulator {
 public:
  LusinAccumulator(const SpatialGrid& grid, const DirectionSet& dirs,
                   std::vector<double> s_values);

  void add_node(double sigma, double weight,
                const std::vector<std::vector<cplx>>& slices);
  void accumulate(double sigma, double weight,
                  const std::vector<std::vector<double>>& abs2);
  // Low band: one direction-independent slice.
  void add_low(double sigma, double weight, const std::vector<cplx>& slice);

  // A_s slices (square roots of the accumulated sums).
  SpSlice result(double s) const;
  const std::vector<double>& s_values() const { return s_values_; }

 private:
  SpatialGrid grid_;
  DirectionSet dirs_;
  std::vector<double> s_values_;
  std::vector<SpSlice> sums_;  // per s value, A_s^2
};

// A_s F on the discrete cosphere bundle. `part` selects whether the low band
// contributes.
SpSlice lusin(const PhaseSpaceField& F, double s,
              TransformPart part = TransformPart::Full);

// C_{s,alpha} F via the finite ball menu.
SpSlice carleson(const PhaseSpaceField& F, double s, double alpha,
                 const BallMenu& menu);

struct TentNormResult {
  double value = 0.0;
  double p = 0.0, s = 0.0, alpha = 0.0;
  int fallback_count = 0;
};

TentNormResult tent_norm(const PhaseSpaceField& F, const TentParams& params);

// L^p norm over Sp of a nonnegative slice, with the dx dw measure.
double sp_lp_norm(const SpatialGrid& grid, const DirectionSet& dirs,
                  const SpSlice& slice, double p);

// ---------------------------------------------------------------------------
// Tent atoms

struct TentAtom {
  MetricBall ball;
  PhaseSpaceField samples;
  double ball_volume = 0.0;       // Monte Carlo volume used in the bound
  std::uint64_t volume_seed = 0;
};

struct AtomReport {
  bool support_ok = false;
  bool bound_ok = false;
  double square_integral = 0.0;
  double bound = 0.0;            // |B|^{-(2/p - 1)}
  double margin = 0.0;           // bound / square_integral
  double ball_volume = 0.0;
  bool valid() const { return support_ok && bound_ok; }
};

AtomReport atom_validate(const TentAtom& atom, double p, double s);

TentAtom atom_generate(const SpatialGrid& grid, const DirectionSet& dirs,
                       const ScaleLadder& ladder, const MetricBall& ball,
                       double p, double s, std::uint64_t seed);

struct VerticalCompareResult {
  double vertical = 0.0;
  double tent = 0.0;
  double ratio = 0.0;
};

// Vertical square function (integral over sigma only) against the tent norm
// at the same p, s = 0.
VerticalCompareResult vertical_compare(const PhaseSpaceField& F, double p);

// Weighted square integral of a phase-space field with the sigma^{-(1+2s)}
// measure (the quantity bounded in the atom definition).
double weighted_square_integral(const PhaseSpaceField& F, double s);

// Shared fixed seed for Monte Carlo ball volumes quoted in reports.
inline constexpr std::uint64_t kVolumeSeed = 0x5eed0001u;
inline constexpr std::size_t kVolumeSamples = 200000;

}  // namespace fioh
