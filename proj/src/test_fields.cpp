#include <cmath>
#include <random>

#include "fioh/grid.hpp"
#include "fioh/packets.hpp"

namespace fioh {

namespace {

GridField normalized(GridField f) {
  double n2 = l2_norm(f);
  if (n2 == 0.0) throw ConstructionError("test field: zero field");
  for (cplx& v : f.values) v /= n2;
  return f;
}

}  // namespace

GridField make_test_field(const SpatialGrid& grid, const TestFieldSpec& spec) {
  grid.validate();
  switch (spec.kind) {
    case TestFieldSpec::Kind::GaussianBump: {
      if (!(spec.width >= 2.0 * grid.spacing()))
        throw ResolutionError("gaussian bump narrower than two grid cells");
      GridField f(grid);
      Vec center{0.0, 0.0, 0.0};
      for (int a = 0; a < grid.n; ++a) center[a] = 0.5 * grid.length;
      double inv2w2 = 1.0 / (2.0 * spec.width * spec.width);
      for (std::size_t i = 0; i < f.values.size(); ++i) {
        Vec d = grid.min_image_vec(sub(grid.n, grid.position(i), center));
        f.values[i] = std::exp(-norm_sq(grid.n, d) * inv2w2);
      }
      return normalized(f);
    }
    case TestFieldSpec::Kind::BandLimitedRandom: {
      if (!(spec.band_limit > 0.0) || spec.band_limit > grid.max_freq())
        throw ResolutionError("band limit outside the frequency lattice");
      std::mt19937_64 eng(spec.seed);
      SpectralField F(grid);
      double band = spec.band_limit;
      for (std::size_t i = 0; i < F.coefficients.size(); ++i) {
        double r = norm(grid.n, grid.frequency(i));
        if (r > band) continue;
        double envelope = std::exp(-(r * r) / (0.5 * band * band));
        F.coefficients[i] = envelope * complex_normal(eng);
      }
      return normalized(from_spectrum(F));
    }
    case TestFieldSpec::Kind::CoherentPacket: {
      if (!(spec.sigma > 0.0 && spec.sigma < 1.0))
        throw ResolutionError("packet scale must lie in (0, 1)");
      if (2.0 / spec.sigma > grid.max_freq())
        throw ResolutionError("packet support does not fit the lattice");
      Vec omega = spec.omega;
      double on = norm(grid.n, omega);
      if (!(on > 0.0)) throw InvalidInput("packet direction must be nonzero");
      for (int a = 0; a < grid.n; ++a) omega[a] /= on;
      PacketSymbols sym(grid.n);
      SpectralField F(grid);
      for (std::size_t i = 0; i < F.coefficients.size(); ++i)
        F.coefficients[i] = sym.psi_value(grid.frequency(i), omega, spec.sigma);
      return normalized(from_spectrum(F));
    }
    case TestFieldSpec::Kind::RadialAnnulus: {
      if (!(spec.sigma > 0.0) || 2.0 / spec.sigma > grid.max_freq())
        throw ResolutionError("annulus does not fit the lattice");
      const RadialProfile& psi = RadialProfile::instance();
      SpectralField F(grid);
      for (std::size_t i = 0; i < F.coefficients.size(); ++i)
        F.coefficients[i] = psi.eval(spec.sigma * norm(grid.n, grid.frequency(i)));
      return normalized(from_spectrum(F));
    }
  }
  throw InvalidInput("make_test_field: unknown kind");
}

}  // namespace fioh
