#pragma once

// The wave packet transform W, its synthesis V, and the discrete scale
// ladder realizing int dsigma/sigma.
//
//   W f(x, w, s) = psi_{w,s}(D) f(x)          for s < 1,
//   W f(x, w, s) = 1_{[1,e]}(s) rho(D) f(x)   for s >= 1.
//
// High scales are sampled at log-midpoint nodes, Q per octave, with weights
// ln2 / Q; octave j covers (2^{-j-1}, 2^{-j}]. The low band [1, e] collapses
// to a single direction-independent slice with weight 1 = int_1^e dt/t,
// carried at the log-midpoint sqrt(e).

#include <memory>
#include <string>
#include <vector>

#include "fioh/grid.hpp"
#include "fioh/packets.hpp"

namespace fioh {

struct LadderNode {
  double sigma = 0.0;
  double weight = 0.0;
  int octave = 0;
};

struct ScaleLadder {
  int octaves = 5;
  int per_octave = 4;
  std::vector<LadderNode> high;  // (j asc, q asc); sigma < 1 throughout

  static ScaleLadder make(int octaves, int per_octave);

  double low_sigma() const { return std::exp(0.5); }
  double low_weight() const { return 1.0; }
  int node_count() const { return static_cast<int>(high.size()); }
  double sigma_min() const;

  // Frequencies with |xi| below this bound are fully resolved by the ladder
  // (the Psi partition over the high nodes plus rho^2 sums to 1 there).
  double coverage_bound() const { return std::ldexp(1.0, octaves - 1); }
};

struct PhaseSpaceField {
  SpatialGrid grid;
  DirectionSet dirs;
  ScaleLadder ladder;
  std::vector<cplx> low;                    // one direction-independent slice
  std::vector<std::vector<cplx>> high;      // [node * M + dir]

  PhaseSpaceField() = default;
  PhaseSpaceField(const SpatialGrid& g, const DirectionSet& d,
                  const ScaleLadder& l);

  std::vector<cplx>& slice(int node, int dir);
  const std::vector<cplx>& slice(int node, int dir) const;
};

enum class TransformPart { Full, LowOnly, HighOnly };

class WaveTransform {
 public:
  WaveTransform(std::shared_ptr<PacketFamily> family, const ScaleLadder& ladder);

  const PacketFamily& family() const { return *family_; }
  const ScaleLadder& ladder() const { return ladder_; }
  const SpatialGrid& grid() const { return family_->grid(); }
  const DirectionSet& directions() const { return family_->directions(); }

  PhaseSpaceField analyze(const GridField& f,
                          TransformPart part = TransformPart::Full) const;
  GridField synthesize(const PhaseSpaceField& F) const;

  // V W f without materializing the phase-space field.
  GridField reconstruct(const GridField& f) const;

  // | ||Wf||^2_{L^2(phase space)} - ||f||^2 | / ||f||^2.
  double isometry_defect(const GridField& f) const;

  // Multiplier of V o W on the lattice: sum_nodes w sum_dirs w psi^2 + rho^2.
  const std::vector<double>& partition() const;

  // Fraction of spectral energy at frequencies the ladder does not resolve.
  double uncovered_energy_fraction(const GridField& f) const;

  // Streaming access: all direction slices of one high node. `spectrum_raw`
  // is the unnormalized FFT of the field (see spectrum_of).
  std::vector<std::vector<cplx>> high_node(const std::vector<cplx>& spectrum_raw,
                                           int node) const;
  std::vector<cplx> low_slice(const std::vector<cplx>& spectrum_raw) const;
  std::vector<cplx> spectrum_of(const GridField& f) const;

 private:
  std::shared_ptr<PacketFamily> family_;
  ScaleLadder ladder_;
  mutable std::vector<double> partition_;
  mutable std::mutex mutex_;
};

// Phase-space file format "FIOPS1": magic, then n, N as u64, L as f64, then
// J, Q, M as u64 (all little-endian), the low slice, and the high slices in
// (octave, node-in-octave, direction) order with the field sample encoding.
void write_phase_field(const std::string& path, const PhaseSpaceField& F);
PhaseSpaceField read_phase_field(const std::string& path);

}  // namespace fioh
