#include <doctest.h>

#include <random>

#include "fioh/packets.hpp"
#include "fioh/quadrature.hpp"

using namespace fioh;

TEST_SUITE_BEGIN("packets");

namespace {

SpatialGrid small_grid(int points = 64) {
  SpatialGrid g;
  g.n = 2;
  g.points = points;
  g.length = kTwoPi;
  return g;
}

}  // namespace

TEST_CASE("radial profile: support and admissibility") {
  const RadialProfile& psi = RadialProfile::instance();
  CHECK(psi.eval(0.4) == 0.0);
  CHECK(psi.eval(2.1) == 0.0);
  CHECK(psi.eval(1.0) > 0.0);

  // int_0^inf Psi(s r)^2 ds/s = 1 for every r, by scale invariance; check a
  // few radii with an independent quadrature.
  for (double r : {1.0, 3.0, 10.0}) {
    double integral = adaptive_simpson(
        [&](double v) {
          double p = psi.eval(std::exp(v) * r);
          return p * p;
        },
        std::log(0.5 / r), std::log(2.0 / r), 1e-12, 1e-12);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("rho: plateau, support, complement identity") {
  PacketSymbols sym(2);
  CHECK(sym.rho_value(vec2(0.0, 0.0)) == 1.0);
  CHECK(sym.rho_value(vec2(0.3, 0.2)) == 1.0);  // |xi| <= 1/2
  CHECK(sym.rho_value(vec2(2.0, 0.0)) == 0.0);
  CHECK(sym.rho_value(vec2(3.0, 1.0)) == 0.0);

  // rho^2 + int_0^1 Psi(s xi)^2 ds/s = 1 at |xi| = 1.
  const RadialProfile& psi = RadialProfile::instance();
  double r = 1.0;
  double inner = adaptive_simpson(
      [&](double v) {
        double p = psi.eval(std::exp(v) * r);
        return p * p;
      },
      std::log(0.5), std::log(1.0), 1e-13, 1e-13);
  double rho = sym.rho_value(vec2(r, 0.0));
  CHECK(rho * rho + inner == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("psi packet support on the lattice") {
  SpatialGrid g = small_grid();
  DirectionSet dirs = DirectionSet::equispaced_circle(16);
  PacketFamily fam(g, dirs);
  double sigma = 0.125;
  for (int d : {0, 3, 9}) {
    const SparseSymbol& m = fam.psi(d, sigma);
    CHECK(m.nnz() > 0);
    for (std::size_t k = 0; k < m.index.size(); ++k) {
      Vec xi = g.frequency(m.index[k]);
      double r = norm(2, xi);
      CHECK(r >= 0.5 / sigma - 1e-12);
      CHECK(r <= 2.0 / sigma + 1e-12);
      Vec hat = xi;
      hat[0] /= r;
      hat[1] /= r;
      CHECK(norm(2, sub(2, hat, dirs.dirs[d].u)) <=
            2.0 * std::sqrt(sigma) + 1e-12);
    }
  }
  CHECK_THROWS_AS(fam.psi(0, 1.0), InvalidInput);
  CHECK_THROWS_AS(fam.psi(0, 1e-4), ResolutionError);
}

TEST_CASE("psi packet rotational covariance is bit-exact") {
  SpatialGrid g = small_grid();
  DirectionSet dirs = DirectionSet::equispaced_circle(16);
  PacketFamily fam(g, dirs);
  double sigma = 0.25;
  // Quarter rotation maps direction d to d + 4 and (k1, k2) to (-k2, k1).
  const SparseSymbol& base = fam.psi(0, sigma);
  const SparseSymbol& rot = fam.psi(4, sigma);
  std::vector<double> dense = densify(rot, g.size());
  int N = g.points;
  std::size_t matched = 0;
  for (std::size_t k = 0; k < base.index.size(); ++k) {
    int m[2];
    g.axis_indices(base.index[k], m);
    int k1 = g.signed_freq(m[0]), k2 = g.signed_freq(m[1]);
    int r1 = -k2, r2 = k1;  // rotated lattice point
    if (r1 < -N / 2 || r1 >= N / 2 || r2 < -N / 2 || r2 >= N / 2) continue;
    int w[2] = {(r1 + N) % N, (r2 + N) % N};
    std::size_t flat = g.flat_index(w);
    CHECK(dense[flat] == base.value[k]);
    ++matched;
  }
  CHECK(matched > 0);
}

TEST_CASE("c_sigma scales like sigma^{-(n-1)/4}") {
  PacketSymbols sym(2);
  std::vector<double> sigmas, cs;
  for (int j = 3; j <= 7; ++j) {
    double s = std::exp2(-j);
    sigmas.push_back(s);
    cs.push_back(sym.c_sigma(s));
  }
  LineFit fit = fit_loglog(sigmas, cs);
  CHECK(std::abs(fit.slope + 0.25) <= 0.05);
}

TEST_CASE("phi_w: support and growth") {
  PacketSymbols sym(2);
  Vec e1 = vec2(1.0, 0.0);
  CHECK(sym.phi_omega_value(vec2(1.0 / 16.0, 0.0), e1) == 0.0);

  // Vanishes off the parabolic cone |xi^ - w| > 2 |xi|^{-1/2}.
  SpatialGrid g = small_grid();
  for (std::size_t i = 0; i < g.size(); i += 7) {
    Vec xi = g.frequency(i);
    double r = norm(2, xi);
    if (r < 0.6) continue;
    Vec hat = xi;
    hat[0] /= r;
    hat[1] /= r;
    if (norm(2, sub(2, hat, e1)) > 2.0 / std::sqrt(r))
      CHECK(sym.phi_omega_value(xi, e1) == 0.0);
  }

  // Growth ~ |xi|^{(n-1)/4} along the center line.
  std::vector<double> rs, vals;
  for (int j = 2; j <= 6; ++j) {
    double r = std::exp2(j);
    rs.push_back(r);
    vals.push_back(sym.phi_omega_value(vec2(r, 0.0), e1));
  }
  LineFit fit = fit_loglog(rs, vals);
  CHECK(std::abs(fit.slope - 0.25) <= 0.1);
}

TEST_CASE("theta equals Psi(sigma .) phi_w pointwise") {
  SpatialGrid g = small_grid();
  DirectionSet dirs = DirectionSet::equispaced_circle(16);
  PacketFamily fam(g, dirs);
  double sigma = 0.25;
  const SparseSymbol& th = fam.theta(2, sigma);
  std::vector<double> pw = densify(fam.phi_omega(2), g.size());
  const RadialProfile& psi = RadialProfile::instance();
  CHECK(th.nnz() > 0);
  for (std::size_t k = 0; k < th.index.size(); ++k) {
    double r = norm(2, g.frequency(th.index[k]));
    CHECK(th.value[k] ==
          doctest::Approx(psi.eval(sigma * r) * pw[th.index[k]]).epsilon(1e-14));
  }
}

TEST_CASE("theta~ support bounds") {
  SpatialGrid g = small_grid();
  DirectionSet dirs = DirectionSet::equispaced_circle(16);
  PacketFamily fam(g, dirs);
  double sigma = 0.25;
  const SparseSymbol& tt = fam.theta_tilde(0, sigma);
  CHECK(tt.nnz() > 0);
  for (std::size_t k = 0; k < tt.index.size(); ++k) {
    Vec xi = g.frequency(tt.index[k]);
    double r = norm(2, xi);
    CHECK(r >= 0.25 / sigma - 1e-12);
    CHECK(r <= 4.0 / sigma + 1e-12);
    Vec hat = xi;
    hat[0] /= r;
    hat[1] /= r;
    CHECK(norm(2, sub(2, hat, dirs.dirs[0].u)) <=
          4.0 * std::sqrt(sigma) + 1e-12);
  }
}

TEST_CASE("reproducing symbol: radial, growing, and reproducing") {
  SpatialGrid g = small_grid();
  DirectionSet dirs = DirectionSet::equispaced_circle(16);
  PacketFamily fam(g, dirs);
  const std::vector<double>& m = fam.repro_m();

  // Exactly radial on the lattice: equal |xi| gives equal values.
  std::map<double, double> by_radius;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double r = norm(2, g.frequency(i));
    auto it = by_radius.find(r);
    if (it == by_radius.end())
      by_radius.emplace(r, m[i]);
    else
      CHECK(std::abs(it->second - m[i]) <= 1e-8 * std::max(1.0, std::abs(m[i])));
  }

  // Growth exponent (n-1)/4 over |xi| in [2, 2^5].
  PacketSymbols sym(2);
  std::vector<double> rs, vals;
  for (int j = 1; j <= 5; ++j) {
    rs.push_back(std::exp2(j));
    vals.push_back(sym.m_value(vec2(rs.back(), 0.0)));
  }
  LineFit fit = fit_loglog(rs, vals);
  CHECK(std::abs(fit.slope - 0.25) <= 0.05);

  // Reproducing identity on a band-limited field with |xi| >= 1.
  std::mt19937_64 eng(3);
  SpectralField F(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double r = norm(2, g.frequency(i));
    if (r >= 1.0 && r <= 12.0) F.coefficients[i] = complex_normal(eng);
  }
  GridField f = from_spectrum(F);
  std::vector<double> total(g.size(), 0.0);
  for (int d = 0; d < dirs.size(); ++d) {
    const SparseSymbol& pw = fam.phi_omega(d);
    for (std::size_t k = 0; k < pw.index.size(); ++k)
      total[pw.index[k]] += dirs.weights[d] * pw.value[k] * m[pw.index[k]];
  }
  GridField rec = apply_multiplier(total, f);
  GridField diff(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    diff.values[i] = rec.values[i] - f.values[i];
  CHECK(l2_norm(diff) <= 1e-3 * l2_norm(f));
}

TEST_CASE("theta reproduces through theta~ on the high band") {
  SpatialGrid g = small_grid();
  DirectionSet dirs = DirectionSet::equispaced_circle(32);
  PacketFamily fam(g, dirs);
  double sigma = 0.125;
  // sigma^{-(n-1)/4} theta~_{v,s}(xi) * sum_mu w_mu theta_{mu,s}(xi)
  // reduces to theta_{v,s}(xi) wherever Psi(sigma xi) is active.
  std::vector<double> thsum(g.size(), 0.0);
  for (int d = 0; d < dirs.size(); ++d) {
    const SparseSymbol& th = fam.theta(d, sigma);
    for (std::size_t k = 0; k < th.index.size(); ++k)
      thsum[th.index[k]] += dirs.weights[d] * th.value[k];
  }
  int v = 5;
  const SparseSymbol& tt = fam.theta_tilde(v, sigma);
  std::vector<double> lhs(g.size(), 0.0);
  double pref = std::pow(sigma, -0.25);
  for (std::size_t k = 0; k < tt.index.size(); ++k)
    lhs[tt.index[k]] = pref * tt.value[k] * thsum[tt.index[k]];
  std::vector<double> rhs = densify(fam.theta(v, sigma), g.size());
  const RadialProfile& psi = RadialProfile::instance();
  for (std::size_t i = 0; i < g.size(); ++i) {
    double r = norm(2, g.frequency(i));
    if (psi.eval(sigma * r) == 0.0) continue;  // theta~ is wider than theta
    CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(2e-3));
  }
}

TEST_CASE("packet spatial decay scalings") {
  SpatialGrid g = small_grid(256);
  DirectionSet dirs = DirectionSet::equispaced_circle(32);
  PacketFamily fam(g, dirs);

  std::vector<double> sigmas, peaks;
  std::vector<double> constants;
  for (int j = 3; j <= 6; ++j) {
    double sigma = std::exp2(-j);
    auto rep = fam.decay_check(PacketFamily::PacketKind::Psi, 0, sigma, 5.0);
    sigmas.push_back(sigma);
    peaks.push_back(rep.peak);
    constants.push_back(rep.constant);
    // Anisotropy: width along omega ~ sigma, across ~ sqrt(sigma).
    CHECK(rep.halfwidth_along / sigma <= 2.0);
    CHECK(rep.halfwidth_along / sigma >= 0.5);
    CHECK(rep.halfwidth_across / std::sqrt(sigma) <= 2.0);
    CHECK(rep.halfwidth_across / std::sqrt(sigma) >= 0.5);
  }
  LineFit fit = fit_loglog(sigmas, peaks);
  CHECK(std::abs(fit.slope + 1.75) <= 0.1);  // -(3n+1)/4 at n = 2

  // C_N stable across sigma within a factor 2.
  double cmin = *std::min_element(constants.begin(), constants.end());
  double cmax = *std::max_element(constants.begin(), constants.end());
  CHECK(cmax / cmin <= 2.0);

  // And across directions at fixed sigma.
  auto re1 = fam.decay_check(PacketFamily::PacketKind::Psi, 0, 0.0625, 5.0);
  auto re2 = fam.decay_check(PacketFamily::PacketKind::Psi, 8, 0.0625, 5.0);
  CHECK(re1.constant / re2.constant <= 2.0);
  CHECK(re2.constant / re1.constant <= 2.0);
}

TEST_SUITE_END();
