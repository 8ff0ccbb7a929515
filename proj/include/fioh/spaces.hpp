#pragma once

// Function-space quasi-norms: the local Hardy norm h^{s,p}, the wave packet
// space norm (by definition, by weighted tents, and through its equivalent
// characterizations), the exponent s(p), and the Sobolev embedding
// experiment.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fioh/tent.hpp"
#include "fioh/transform.hpp"

namespace fioh {

// s(p) = (n-1)/2 |1/p - 1/2|; p = infinity reads 1/p = 0.
double sp_exponent(int dim, double p);

struct NormResult {
  double value = 0.0;
  double low_part = 0.0;     // ||q(D) f||_p contribution
  double square_part = 0.0;  // square-function contribution
  double secondary = 0.0;    // hpfio: weighted-tent evaluation
  double mode_ratio = 1.0;   // hpfio: definition / weighted
};

class SpaceContext {
 public:
  SpaceContext(const SpatialGrid& grid, int direction_count, int octaves,
               int per_octave);

  const SpatialGrid& grid() const { return grid_; }
  const DirectionSet& directions() const { return dirs_; }
  const ScaleLadder& ladder() const { return ladder_; }
  const PacketFamily& family() const { return *family_; }
  const WaveTransform& transform() const { return *transform_; }

  // || <D>^s f ||_{h^p} = ||q(D) g||_p + || Fefferman-Stein square fn of
  // (1-q(D)) g ||_p with g = <D>^s f.
  NormResult local_hardy_norm(const GridField& f, double p, double s) const;

  // Definition mode ||W <D>^s f||_{T^p} (value) and weighted-tent mode
  // ||W f||_{T^p_s} (secondary); mode_ratio is their quotient.
  NormResult hpfio_norm(const GridField& f, double p, double s) const;

  // ||q(D) f||_p + ||A_s(W_h f)||_p; p = infinity uses the Carleson
  // functional over the standard menu.
  NormResult equivalent_norm_A(const GridField& f, double p, double s) const;

  // ||q(D) f||_p + ||S_h f||_p with theta packets.
  NormResult theta_square_norm(const GridField& f, double p) const;

  // ||q(D) f||_p + (int ||phi_w(D) f||_{h^{s,p}}^p dw)^{1/p}; p < infinity.
  NormResult directional_norm(const GridField& f, double p, double s) const;

  // --- shared machinery -----------------------------------------------

  struct Stacks {
    std::map<double, SpSlice> full;  // A_s(W f)
    std::map<double, SpSlice> high;  // A_s(W_h f)  (or S_h for theta packets)
  };
  Stacks lusin_stacks(const GridField& f, const std::vector<double>& s_values,
                      bool theta_packets, bool include_low) const;

  GridField bessel(const GridField& f, double s) const;  // <D>^s f
  GridField apply_q(const GridField& f) const;
  GridField apply_high_cut(const GridField& f) const;  // (1 - q(D)) f
  const std::vector<double>& q_symbol() const;

  // Square-function part of the local Hardy norm applied to g (already
  // high-pass filtered by the caller).
  double hardy_square_part(const GridField& g, double p) const;

  void require_resolved(const GridField& f) const;

  // The versioned 20-field test corpus.
  static std::vector<GridField> standard_family(const SpatialGrid& grid);
  static std::vector<std::string> standard_family_names();

 private:
  std::vector<std::vector<cplx>> theta_node(const std::vector<cplx>& spectrum,
                                            int node) const;

  SpatialGrid grid_;
  DirectionSet dirs_;
  ScaleLadder ladder_;
  std::shared_ptr<PacketFamily> family_;
  std::unique_ptr<WaveTransform> transform_;
  mutable std::vector<double> q_cache_;
  mutable std::mutex mutex_;
};

struct EmbeddingReport {
  double p = 0.0, s = 0.0;
  std::vector<double> sigmas;
  std::vector<double> upper_norms;  // h^{s + s(p), p}
  std::vector<double> fio_norms;
  std::vector<double> lower_norms;  // h^{s - s(p), p}
  double upper_constant = 0.0;      // max fio / upper
  double lower_constant = 0.0;      // max lower / fio
  double slope_gap = 0.0;           // fitted log-log gap, expect 2 s(p)
};

// Coherent-packet family across the given scales.
EmbeddingReport embedding_experiment(const SpatialGrid& grid,
                                     int direction_count, double p, double s,
                                     const std::vector<double>& sigmas,
                                     double packet_angle = 0.0);

}  // namespace fioh
