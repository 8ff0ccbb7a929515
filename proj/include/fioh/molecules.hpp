#pragma once

// Coherent molecules: L^2 fields with parabolic Fourier support
//   supp f^ in { |xi| >= 1/tau, |xi^ - v| <= sqrt(tau) }
// and quantified spatial decay around a phase-space center, normalized by
// the ball volume power |B_sqrt(tau)|^{-(2/p - 1)}. Construction from wave
// packets, validation, and the l^p synthesis experiment.

#include <cstdint>
#include <vector>

#include "fioh/geometry.hpp"
#include "fioh/grid.hpp"
#include "fioh/spaces.hpp"

namespace fioh {

struct MoleculeSpec {
  PhasePoint center;        // (y, v)
  double tau = 1.0;         // scale
  double decay_order = 9.0; // N
  double p = 1.0;           // in (0, 1]
  double tau_max = 8.0;     // configurable ceiling

  void validate(int dim) const;
};

struct MoleculeReport {
  bool support_ok = false;
  bool bound_ok = false;
  double support_leak = 0.0;      // worst relative coefficient off the cone
  double weighted_integral = 0.0;
  double bound = 0.0;             // |B|^{-(2/p - 1)}
  double margin = 0.0;            // bound / weighted_integral
  double ball_volume = 0.0;
  bool valid() const { return support_ok && bound_ok; }
};

// Relative floor under which spectral leakage outside the cone is ignored.
inline constexpr double kMoleculeSupportFloor = 1e-10;

MoleculeReport molecule_validate(const GridField& f, const MoleculeSpec& spec);

// F^{-1} psi_{v, tau/4} translated to the (grid-snapped) center and scaled to
// sit at 3/4 of the molecule bound. Always passes molecule_validate.
GridField molecule_from_packet(const SpatialGrid& grid, const MoleculeSpec& spec);

struct SynthesisReport {
  double p = 0.0;
  double decay_order = 0.0;
  int count = 0;
  std::vector<double> ratios;  // per seed
  double max_ratio = 0.0;
};

// K random molecules with random coefficients; reports the worst quotient
// ||sum a_k f_k||_{H^p_FIO} / (sum |a_k|^p)^{1/p} over the seeds.
SynthesisReport synthesis_experiment(SpaceContext& ctx, int count, double p,
                                     double decay_order, int seed_count,
                                     std::uint64_t seed0, double tau_max = 8.0);

}  // namespace fioh
