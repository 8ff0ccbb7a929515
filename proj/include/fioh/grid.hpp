#pragma once

// Periodic-box discretization of R^n (n = 2 or 3), the DFT convention used
// throughout, and Fourier multiplier application.
//
// Conventions, fixed once:
//   to_spectrum:    f^(xi) = (2pi)^{-n} h^n sum_x e^{-i x.xi} f(x)
//   from_spectrum:  f(x)   = (2pi/L)^n sum_xi e^{+i x.xi} f^(xi)
//   Parseval:       h^n sum_x |f|^2 = (2pi)^n (2pi/L)^n sum_xi |f^|^2
// With these, the oscillatory integral with linear phase x.eta and unit
// symbol, discretized with frequency cell (2pi/L)^n, is exactly the identity.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fioh/common.hpp"

namespace fioh {

struct SpatialGrid {
  int n = 2;              // dimension, 2 or 3
  int points = 256;       // N, samples per axis (power of two, >= 8)
  double length = kTwoPi; // box side L

  double spacing() const { return length / points; }
  double freq_step() const { return kTwoPi / length; }
  double max_freq() const { return freq_step() * (points / 2); }

  std::size_t size() const {
    std::size_t s = 1;
    for (int i = 0; i < n; ++i) s *= static_cast<std::size_t>(points);
    return s;
  }

  void validate() const;

  // Row-major flattening; axis index in [0, N).
  void axis_indices(std::size_t flat, int* m) const {
    for (int a = n - 1; a >= 0; --a) {
      m[a] = static_cast<int>(flat % points);
      flat /= points;
    }
  }

  std::size_t flat_index(const int* m) const {
    std::size_t f = 0;
    for (int a = 0; a < n; ++a)
      f = f * points + static_cast<std::size_t>(m[a]);
    return f;
  }

  int signed_freq(int k) const { return k >= points / 2 ? k - points : k; }

  Vec position(std::size_t flat) const {
    int m[3] = {0, 0, 0};
    axis_indices(flat, m);
    Vec x{0.0, 0.0, 0.0};
    for (int a = 0; a < n; ++a) x[a] = spacing() * m[a];
    return x;
  }

  // Lattice frequency for the FFT-ordered flat index, components in
  // (2pi/L) * [-N/2, N/2).
  Vec frequency(std::size_t flat) const {
    int m[3] = {0, 0, 0};
    axis_indices(flat, m);
    Vec xi{0.0, 0.0, 0.0};
    for (int a = 0; a < n; ++a) xi[a] = freq_step() * signed_freq(m[a]);
    return xi;
  }

  // Shortest periodic representative of a coordinate difference.
  double min_image(double d) const {
    double L = length;
    d = std::fmod(d, L);
    if (d < -0.5 * L) d += L;
    if (d >= 0.5 * L) d -= L;
    return d;
  }

  Vec min_image_vec(const Vec& d) const {
    Vec r{0.0, 0.0, 0.0};
    for (int a = 0; a < n; ++a) r[a] = min_image(d[a]);
    return r;
  }

  bool operator==(const SpatialGrid& o) const {
    return n == o.n && points == o.points && length == o.length;
  }
};

struct GridField {
  SpatialGrid grid;
  std::vector<cplx> values;  // size N^n, row-major

  GridField() = default;
  explicit GridField(const SpatialGrid& g) : grid(g), values(g.size()) {}
};

struct SpectralField {
  SpatialGrid grid;
  std::vector<cplx> coefficients;  // FFT layout over the frequency lattice

  SpectralField() = default;
  explicit SpectralField(const SpatialGrid& g) : grid(g), coefficients(g.size()) {}
};

bool all_finite(const std::vector<cplx>& v);

SpectralField to_spectrum(const GridField& f);
GridField from_spectrum(const SpectralField& F);

// Pointwise symbol application: from_spectrum(m . to_spectrum(f)).
GridField apply_multiplier(const std::function<cplx(const Vec&)>& m,
                           const GridField& f);
GridField apply_multiplier(const std::vector<double>& symbol, const GridField& f);
GridField apply_multiplier(const std::vector<cplx>& symbol, const GridField& f);

// Discrete L^p norms with the h^n cell measure; p = infinity gives the max.
double l2_norm(const GridField& f);
double lp_norm(const GridField& f, double p);
double spectral_l2_norm(const SpectralField& F);
cplx inner_product(const GridField& f, const GridField& g);

// Deterministic test fields.
struct TestFieldSpec {
  enum class Kind { GaussianBump, BandLimitedRandom, CoherentPacket, RadialAnnulus };
  Kind kind = Kind::GaussianBump;
  std::uint64_t seed = 0;
  double width = 0.5;       // gaussian bump std deviation
  double band_limit = 12.0; // |xi| cut for the random field
  Vec omega = {1.0, 0.0, 0.0};
  double sigma = 0.25;      // packet / annulus scale
};

GridField make_test_field(const SpatialGrid& grid, const TestFieldSpec& spec);

// Field file format "FIOH1": magic, then n, N as little-endian u64, L as
// little-endian f64, then N^n samples as (re, im) little-endian f64 pairs.
void write_field(const std::string& path, const GridField& f);
GridField read_field(const std::string& path);

}  // namespace fioh
