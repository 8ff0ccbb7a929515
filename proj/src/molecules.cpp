#include "fioh/molecules.hpp"

#include <cmath>
#include <random>

#include "fioh/packets.hpp"
#include "fioh/tent.hpp"

namespace fioh {

void MoleculeSpec::validate(int dim) const {
  if (!(p > 0.0 && p <= 1.0))
    throw InvalidInput("molecule: p must lie in (0, 1]");
  if (!(tau > 0.0 && tau <= tau_max))
    throw InvalidInput("molecule: tau outside (0, tau_max]");
  double needed = 2.0 * dim * (2.0 / p - 1.0);
  if (!(decay_order > needed))
    throw InvalidInput("molecule: decay order must exceed 2n(2/p - 1)");
}

namespace {

double same_direction_distance_sq(const SpatialGrid& grid, const Vec& nu,
                                  const Vec& x, const Vec& y) {
  Vec d = grid.min_image_vec(sub(grid.n, x, y));
  return std::abs(dot(grid.n, nu, d)) + norm_sq(grid.n, d);
}

}  // namespace

MoleculeReport molecule_validate(const GridField& f, const MoleculeSpec& spec) {
  const SpatialGrid& grid = f.grid;
  spec.validate(grid.n);
  MoleculeReport rep;

  SpectralField F = to_spectrum(f);
  double peak = 0.0;
  for (const cplx& c : F.coefficients) peak = std::max(peak, std::abs(c));

  double rt = std::sqrt(spec.tau);
  rep.support_ok = true;
  if (peak > 0.0) {
    for (std::size_t i = 0; i < F.coefficients.size(); ++i) {
      double a = std::abs(F.coefficients[i]);
      if (a <= kMoleculeSupportFloor * peak) continue;
      Vec xi = grid.frequency(i);
      double r = norm(grid.n, xi);
      bool inside = r >= 1.0 / spec.tau - 1e-12;
      if (inside && r > 0.0) {
        Vec hat = xi;
        for (int a2 = 0; a2 < grid.n; ++a2) hat[a2] /= r;
        inside = norm(grid.n, sub(grid.n, hat, spec.center.omega)) <=
                 rt + 1e-12;
      }
      if (!inside) {
        rep.support_ok = false;
        rep.support_leak = std::max(rep.support_leak, a / peak);
      }
    }
  }

  double cell = 1.0;
  for (int a = 0; a < grid.n; ++a) cell *= grid.spacing();
  double inv_tau = 1.0 / spec.tau;
  double total = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    double m2 = std::norm(f.values[i]);
    if (m2 == 0.0) continue;
    double d2 = same_direction_distance_sq(grid, spec.center.omega,
                                           grid.position(i), spec.center.x);
    total += std::pow(1.0 + inv_tau * d2, spec.decay_order) * m2;
  }
  rep.weighted_integral = cell * total;
  rep.ball_volume =
      ball_volume_estimate(grid.n, rt, kVolumeSamples, kVolumeSeed).value;
  rep.bound = std::pow(rep.ball_volume, -(2.0 / spec.p - 1.0));
  rep.bound_ok = rep.weighted_integral <= rep.bound * (1.0 + 1e-12);
  rep.margin = rep.weighted_integral > 0.0
                   ? rep.bound / rep.weighted_integral
                   : std::numeric_limits<double>::infinity();
  return rep;
}

GridField molecule_from_packet(const SpatialGrid& grid,
                               const MoleculeSpec& spec) {
  spec.validate(grid.n);
  double sigma = std::min(0.25 * spec.tau, 0.5);
  if (2.0 / sigma > grid.max_freq())
    throw ResolutionError("molecule packet does not fit the lattice");

  // Snap the center to the lattice so translation covariance is exact.
  Vec y{0.0, 0.0, 0.0};
  double h = grid.spacing();
  for (int a = 0; a < grid.n; ++a) {
    long k = std::lround(spec.center.x[a] / h);
    y[a] = h * static_cast<double>(((k % grid.points) + grid.points) %
                                   grid.points);
  }

  PacketSymbols sym(grid.n);
  SpectralField F(grid);
  for (std::size_t i = 0; i < F.coefficients.size(); ++i) {
    Vec xi = grid.frequency(i);
    double v = sym.psi_value(xi, spec.center.omega, sigma);
    if (v != 0.0)
      F.coefficients[i] = v * std::polar(1.0, -dot(grid.n, y, xi));
  }
  GridField f = from_spectrum(F);

  MoleculeSpec snapped = spec;
  snapped.center.x = y;
  MoleculeReport rep = molecule_validate(f, snapped);
  if (!(rep.weighted_integral > 0.0))
    throw ConstructionError("molecule_from_packet: empty packet");
  double scale = std::sqrt(0.75 * rep.bound / rep.weighted_integral);
  for (cplx& v : f.values) v *= scale;
  return f;
}

SynthesisReport synthesis_experiment(SpaceContext& ctx, int count, double p,
                                     double decay_order, int seed_count,
                                     std::uint64_t seed0, double tau_max) {
  const SpatialGrid& grid = ctx.grid();
  SynthesisReport rep;
  rep.p = p;
  rep.decay_order = decay_order;
  rep.count = count;
  for (int sidx = 0; sidx < seed_count; ++sidx) {
    std::mt19937_64 eng(seed0 + static_cast<std::uint64_t>(sidx));
    GridField sum(grid);
    double coeff_mass = 0.0;
    for (int k = 0; k < count; ++k) {
      MoleculeSpec spec;
      spec.p = p;
      spec.decay_order = decay_order;
      spec.tau_max = tau_max;
      spec.tau = 0.5 * std::pow(2.0 * tau_max, uniform01(eng));
      int dir = static_cast<int>(eng() % ctx.directions().size());
      spec.center.omega = ctx.directions().dirs[dir].u;
      for (int a = 0; a < grid.n; ++a)
        spec.center.x[a] = uniform(eng, 0.0, grid.length);
      GridField mol = molecule_from_packet(grid, spec);
      cplx alpha = complex_normal(eng);
      coeff_mass += std::pow(std::abs(alpha), p);
      for (std::size_t i = 0; i < sum.values.size(); ++i)
        sum.values[i] += alpha * mol.values[i];
    }
    double num = ctx.hpfio_norm(sum, p, 0.0).value;
    double ratio = num / std::pow(coeff_mass, 1.0 / p);
    rep.ratios.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

}  // namespace fioh
