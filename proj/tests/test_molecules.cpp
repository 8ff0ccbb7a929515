#include <doctest.h>

#include "fioh/molecules.hpp"
#include "fioh/tent.hpp"

using namespace fioh;

TEST_SUITE_BEGIN("molecules");

namespace {

SpatialGrid small_grid(int points = 64) {
  SpatialGrid g;
  g.n = 2;
  g.points = points;
  g.length = kTwoPi;
  return g;
}

MoleculeSpec spec_at(double x, double y, double ang, double tau, double p,
                     double decay) {
  MoleculeSpec spec;
  spec.center.x = vec2(x, y);
  spec.center.omega = vec2(std::cos(ang), std::sin(ang));
  spec.tau = tau;
  spec.p = p;
  spec.decay_order = decay;
  return spec;
}

}  // namespace

TEST_CASE("spec invariants are enforced") {
  SpatialGrid g = small_grid();
  MoleculeSpec bad = spec_at(0, 0, 0, 1.0, 2.0 / 3.0, 7.0);  // needs > 8
  GridField f(g);
  CHECK_THROWS_AS(molecule_validate(f, bad), InvalidInput);
  MoleculeSpec toobig = spec_at(0, 0, 0, 9.0, 2.0 / 3.0, 9.0);
  CHECK_THROWS_AS(molecule_validate(f, toobig), InvalidInput);
}

TEST_CASE("zero field is a molecule with infinite margin") {
  SpatialGrid g = small_grid();
  GridField f(g);
  MoleculeReport rep = molecule_validate(f, spec_at(1, 2, 0.4, 1.0, 1.0, 5.0));
  CHECK(rep.valid());
  CHECK(std::isinf(rep.margin));
}

TEST_CASE("packet molecules validate; oversized ones fail quadratically") {
  SpatialGrid g = small_grid();
  MoleculeSpec spec = spec_at(kPi, kPi, 0.0, 1.0, 2.0 / 3.0, 9.0);
  GridField mol = molecule_from_packet(g, spec);

  MoleculeReport rep = molecule_validate(mol, spec);
  CHECK(rep.valid());
  CHECK(rep.margin >= 1.0);

  GridField big = mol;
  for (cplx& v : big.values) v *= 10.0;
  MoleculeReport brep = molecule_validate(big, spec);
  CHECK_FALSE(brep.bound_ok);
  CHECK(brep.weighted_integral ==
        doctest::Approx(100.0 * rep.weighted_integral).epsilon(1e-12));
  CHECK(rep.margin / brep.margin == doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("packet supports sit inside the molecule cone") {
  SpatialGrid g = small_grid();
  for (double tau : {0.5, 1.0, 3.0, 6.0}) {
    MoleculeSpec spec = spec_at(kPi, kPi, kTwoPi / 8, tau, 2.0 / 3.0, 9.0);
    GridField mol = molecule_from_packet(g, spec);
    SpectralField F = to_spectrum(mol);
    double peak = 0.0;
    for (const cplx& c : F.coefficients) peak = std::max(peak, std::abs(c));
    for (std::size_t i = 0; i < F.coefficients.size(); ++i) {
      if (std::abs(F.coefficients[i]) <= 1e-10 * peak) continue;
      Vec xi = g.frequency(i);
      double r = norm(2, xi);
      CHECK(r >= 1.0 / tau - 1e-9);
      Vec hat = xi;
      hat[0] /= r;
      hat[1] /= r;
      CHECK(norm(2, sub(2, hat, spec.center.omega)) <=
            std::sqrt(tau) + 1e-9);
    }
  }
}

TEST_CASE("validation is monotone in the decay order") {
  SpatialGrid g = small_grid();
  MoleculeSpec spec = spec_at(kPi, kPi, 0.0, 1.0, 2.0 / 3.0, 10.0);
  GridField mol = molecule_from_packet(g, spec);
  MoleculeReport at10 = molecule_validate(mol, spec);
  CHECK(at10.valid());
  MoleculeSpec weaker = spec;
  weaker.decay_order = 9.0;  // still above the threshold 8
  MoleculeReport at9 = molecule_validate(mol, weaker);
  CHECK(at9.valid());
  CHECK(at9.weighted_integral <= at10.weighted_integral);
}

TEST_CASE("translated centers give translated molecules") {
  SpatialGrid g = small_grid();
  MoleculeSpec a = spec_at(kPi, kPi, 0.3, 1.0, 2.0 / 3.0, 9.0);
  MoleculeSpec b = a;
  int shift = 8;
  b.center.x[0] += shift * g.spacing();
  GridField ma = molecule_from_packet(g, a);
  GridField mb = molecule_from_packet(g, b);
  double worst = 0.0;
  for (int i = 0; i < g.points; ++i)
    for (int j = 0; j < g.points; ++j) {
      std::size_t src = static_cast<std::size_t>(i) * g.points + j;
      std::size_t dst =
          static_cast<std::size_t>((i + shift) % g.points) * g.points + j;
      worst = std::max(worst, std::abs(mb.values[dst] - ma.values[src]));
    }
  CHECK(worst <= 1e-12);
}

TEST_CASE("synthesis ratios: single molecules and batches") {
  SpaceContext ctx(small_grid(), 32, 4, 4);
  SynthesisReport one = synthesis_experiment(ctx, 1, 2.0 / 3.0, 9.0, 5, 4000);
  CHECK(one.max_ratio < 100.0);
  SynthesisReport eight = synthesis_experiment(ctx, 8, 2.0 / 3.0, 9.0, 3, 4100);
  CHECK(eight.max_ratio / one.max_ratio <= 8.0);

  // Joint homogeneity: scaling every coefficient cancels in the ratio. The
  // experiment draws its own coefficients, so probe the underlying quotient
  // directly on a two-molecule sum.
  SpatialGrid g = ctx.grid();
  MoleculeSpec spec = spec_at(kPi, kPi, 0.0, 1.0, 2.0 / 3.0, 9.0);
  GridField m1 = molecule_from_packet(g, spec);
  spec.center.x = vec2(1.0, 2.0);
  GridField m2 = molecule_from_packet(g, spec);
  for (double scale : {1.0, 3.0}) {
    GridField sum(g);
    for (std::size_t i = 0; i < sum.values.size(); ++i)
      sum.values[i] = scale * (m1.values[i] + 0.5 * m2.values[i]);
    double denom = std::pow(std::pow(scale, 2.0 / 3.0) +
                                std::pow(0.5 * scale, 2.0 / 3.0),
                            1.5);
    double ratio = ctx.hpfio_norm(sum, 2.0 / 3.0, 0.0).value / denom;
    static double first_ratio = 0.0;
    if (scale == 1.0)
      first_ratio = ratio;
    else
      CHECK(ratio == doctest::Approx(first_ratio).epsilon(1e-10));
  }
}

TEST_CASE("reconstruction residue is the squared low pass") {
  // f - V W_h f = rho(D)^2 f up to the quadrature defect.
  SpaceContext ctx(small_grid(), 32, 4, 4);
  std::vector<GridField> family = SpaceContext::standard_family(ctx.grid());
  for (std::size_t i = 0; i < family.size(); i += 5) {
    const GridField& f = family[i];
    // V W_h f through the partition minus the low-band part.
    const std::vector<double>& part = ctx.transform().partition();
    const std::vector<double>& rho = ctx.family().rho();
    std::vector<double> high_part(part.size());
    for (std::size_t k = 0; k < part.size(); ++k)
      high_part[k] = part[k] - rho[k] * rho[k];
    GridField vwh = apply_multiplier(high_part, f);
    GridField residue(ctx.grid());
    for (std::size_t k = 0; k < residue.values.size(); ++k)
      residue.values[k] = f.values[k] - vwh.values[k];
    GridField rho2f = apply_multiplier(
        [&](const Vec& xi) {
          double r = ctx.family().symbols().rho_value(xi);
          return cplx(r * r, 0.0);
        },
        f);
    GridField diff(ctx.grid());
    for (std::size_t k = 0; k < diff.values.size(); ++k)
      diff.values[k] = residue.values[k] - rho2f.values[k];
    CHECK(l2_norm(diff) <= 1e-2 * l2_norm(f));
  }
}

TEST_SUITE_END();
