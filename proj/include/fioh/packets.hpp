#pragma once

// Frequency-side symbols for the wave packet machinery.
//
//   Psi:        radial annular profile on [1/2, 2], normalized so that
//               int_0^inf Psi(sigma xi)^2 dsigma/sigma = 1.
//   phi:        radial bump, == 1 for |.| <= 1/4, vanishing for |.| >= 1.
//   psi_{w,s}:  Psi(s xi) c_s phi((xi^ - w)/sqrt(s)), the packet multiplier.
//   rho:        low-pass, (1 - int_0^1 Psi(s xi)^2 ds/s)^{1/2}.
//   phi_w:      int_0^4 psi_{w,tau} dtau/tau, the parabolic cutoff.
//   theta:      Psi(s xi) phi_w(xi).
//   theta~:     s^{(n-1)/4} m(xi) phi_w(xi) PsiWide(s xi).
//   m:          radial symbol with m(xi) int phi_v(xi) dv = 1 for |xi| >= 1/2.
//
// Symbols evaluate pointwise off the lattice; PacketFamily caches lattice
// multiplier arrays per direction/scale.

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "fioh/common.hpp"
#include "fioh/geometry.hpp"
#include "fioh/grid.hpp"

namespace fioh {

// Smooth 0 -> 1 transition on [0, 1] built from exp(-1/t).
double smooth_step(double t);

struct RadialProfile {
  double inv_sqrt_admissibility = 0.0;  // 1/sqrt(I), I = int b(u)^2 du/u
  double eval(double r) const;          // Psi as a function of r = |xi|

  static const RadialProfile& instance();
};

struct AngularBump {
  static constexpr double plateau = 0.25;
  double eval(double r) const;  // phi as a function of r = |zeta|
};

// Shared pointwise evaluators with memoized 1D quadratures. Thread-safe.
class PacketSymbols {
 public:
  explicit PacketSymbols(int dim);

  int dim() const { return n_; }

  double psi_value(const Vec& xi, const Vec& omega, double sigma) const;
  double rho_value(const Vec& xi) const;
  double phi_omega_value(const Vec& xi, const Vec& omega) const;
  double theta_value(const Vec& xi, const Vec& omega, double sigma) const;
  double theta_tilde_value(const Vec& xi, const Vec& omega, double sigma) const;
  double m_value(const Vec& xi) const;
  double psi_wide_value(double r) const;  // annular cutoff, 1 on supp Psi

  // c_sigma = (int_{S^{n-1}} phi((e1 - v)/sqrt(sigma))^2 dv)^{-1/2}, with the
  // unit-normalized sphere measure.
  double c_sigma(double sigma) const;

  // int_{S^{n-1}} phi_v(xi) dv as a function of r = |xi| (continuum sphere
  // quadrature; exact radial symmetry by construction).
  double angular_mass(double r) const;

 private:
  double rho_sq(double r) const;
  double c_sigma_raw(double sigma) const;
  double phi_omega_radial(double r, double chord) const;
  void ensure_c_table() const;
  double c_table_lookup(double tau) const;

  int n_;
  mutable std::mutex mutex_;
  mutable std::map<double, double> rho_cache_;      // keyed by |xi|
  mutable std::map<double, double> c_cache_;        // keyed by sigma
  mutable std::map<double, double> mass_cache_;     // keyed by |xi|
  // c_sigma on a dense log grid for the inner phi_w quadrature.
  mutable std::vector<double> c_table_;
  mutable double c_table_lo_ = 0.0, c_table_step_ = 0.0;

  friend class PacketFamily;
};

// Lattice multiplier in sparse form; packet supports occupy a small
// annulus-cone fraction of the frequency lattice.
struct SparseSymbol {
  std::vector<std::uint32_t> index;
  std::vector<double> value;
  std::size_t nnz() const { return index.size(); }
};

std::vector<double> densify(const SparseSymbol& s, std::size_t size);
GridField apply_sparse(const SparseSymbol& s, const GridField& f);

// Lattice multiplier cache over a fixed grid / direction set.
class PacketFamily {
 public:
  PacketFamily(const SpatialGrid& grid, const DirectionSet& dirs);

  const SpatialGrid& grid() const { return grid_; }
  const DirectionSet& directions() const { return dirs_; }
  const PacketSymbols& symbols() const { return *symbols_; }

  // sigma in (0, 1); throws ResolutionError when the packet support lies
  // entirely beyond the lattice. A support reaching past the Nyquist ring is
  // truncated; such packets arise only in deep analysis ladders, where the
  // truncated slices vanish on band-limited data.
  const SparseSymbol& psi(int dir_index, double sigma) const;
  const std::vector<double>& rho() const;
  const SparseSymbol& phi_omega(int dir_index) const;
  const SparseSymbol& theta(int dir_index, double sigma) const;
  const SparseSymbol& theta_tilde(int dir_index, double sigma) const;
  const std::vector<double>& repro_m() const;

  struct DecayReport {
    double peak = 0.0;              // max_x |F^{-1} eta|
    double constant = 0.0;          // sup of |.| * s^{(3n+1)/4} * weight^N
    double halfwidth_along = 0.0;   // half-max width along omega
    double halfwidth_across = 0.0;  // and across
  };
  enum class PacketKind { Psi, Theta };
  DecayReport decay_check(PacketKind kind, int dir_index, double sigma,
                          double decay_order) const;

 private:
  SparseSymbol build_psi(int dir_index, double sigma) const;
  SparseSymbol build_phi_omega(int dir_index) const;

  SpatialGrid grid_;
  DirectionSet dirs_;
  std::shared_ptr<PacketSymbols> symbols_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<int, double>, SparseSymbol> psi_cache_;
  mutable std::map<std::pair<int, double>, SparseSymbol> theta_cache_;
  mutable std::map<std::pair<int, double>, SparseSymbol> ttilde_cache_;
  mutable std::map<int, SparseSymbol> phiw_cache_;
  mutable std::vector<double> rho_cache_;
  mutable std::vector<double> m_cache_;
};

}  // namespace fioh
