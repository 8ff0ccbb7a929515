#include <doctest.h>

#include <random>

#include "fioh/geometry.hpp"
#include "fioh/phase_ops.hpp"

using namespace fioh;

TEST_SUITE_BEGIN("geometry");

namespace {

SpatialGrid small_grid(int points = 32) {
  SpatialGrid g;
  g.n = 2;
  g.points = points;
  g.length = kTwoPi;
  return g;
}

PhasePoint pp(double x, double y, double ang) {
  return PhasePoint{vec2(x, y), vec2(std::cos(ang), std::sin(ang))};
}

// Independent quadrature estimate of |B_tau| for n = 2: midpoint rule over
// (dx1, dx2, angle).
double ball_volume_quadrature(double tau, int cells) {
  double t2 = tau * tau;
  double par = std::min(t2, tau);
  double theta_max = 2.0 * std::asin(std::min(1.0, 0.5 * tau));
  double sum = 0.0;
  for (int i = 0; i < cells; ++i) {
    double dx = -par + (i + 0.5) * (2.0 * par / cells);
    for (int j = 0; j < cells; ++j) {
      double dy = -tau + (j + 0.5) * (2.0 * tau / cells);
      for (int k = 0; k < cells; ++k) {
        double th = -theta_max + (k + 0.5) * (2.0 * theta_max / cells);
        double vx = std::cos(th), vy = std::sin(th);
        double along_w = std::abs(dx);
        double along_v = std::abs(vx * dx + vy * dy);
        double ang = (vx - 1.0) * (vx - 1.0) + vy * vy;
        double rho2 = std::max(along_w, along_v) + dx * dx + dy * dy + ang;
        if (rho2 < t2) sum += 1.0;
      }
    }
  }
  double cell = (2.0 * par / cells) * (2.0 * tau / cells) *
                (2.0 * theta_max / cells) / kTwoPi;
  return sum * cell;
}

}  // namespace

TEST_CASE("quasi-distance basics") {
  SpatialGrid g = small_grid();
  PhasePoint p = pp(1.0, 2.0, 0.3);
  CHECK(quasi_distance(g, p, p) == 0.0);

  // omega = nu = e1, x - y = (0, 1): sqrt(0 + 1 + 0) = 1.
  PhasePoint a = pp(0.0, 1.0, 0.0);
  PhasePoint b = pp(0.0, 0.0, 0.0);
  CHECK(quasi_distance(g, a, b) == doctest::Approx(1.0).epsilon(1e-14));

  // x = y, omega = e1, nu = e2: |w - v|^2 = 2.
  PhasePoint c = pp(0.5, 0.5, 0.0);
  PhasePoint d = pp(0.5, 0.5, 0.5 * kPi);
  CHECK(quasi_distance(g, c, d) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("quasi-distance is exactly symmetric") {
  SpatialGrid g = small_grid();
  std::mt19937_64 eng(5);
  for (int k = 0; k < 200; ++k) {
    PhasePoint p = pp(uniform(eng, 0.0, g.length), uniform(eng, 0.0, g.length),
                      uniform(eng, 0.0, kTwoPi));
    PhasePoint q = pp(uniform(eng, 0.0, g.length), uniform(eng, 0.0, g.length),
                      uniform(eng, 0.0, kTwoPi));
    CHECK(quasi_distance_sq(g, p, q) == quasi_distance_sq(g, q, p));
    if (k % 10 == 0) CHECK(quasi_distance(g, p, p) == 0.0);
  }
}

TEST_CASE("quasi-triangle constant is small and seed-stable") {
  SpatialGrid g = small_grid();
  double worst[2] = {0.0, 0.0};
  for (int trial = 0; trial < 2; ++trial) {
    std::mt19937_64 eng(100 + trial);
    for (int k = 0; k < 100000; ++k) {
      PhasePoint p = pp(uniform(eng, 0.0, g.length), uniform(eng, 0.0, g.length),
                        uniform(eng, 0.0, kTwoPi));
      PhasePoint q = pp(uniform(eng, 0.0, g.length), uniform(eng, 0.0, g.length),
                        uniform(eng, 0.0, kTwoPi));
      PhasePoint r = pp(uniform(eng, 0.0, g.length), uniform(eng, 0.0, g.length),
                        uniform(eng, 0.0, kTwoPi));
      double lhs = quasi_distance(g, p, r);
      double rhs = quasi_distance(g, p, q) + quasi_distance(g, q, r);
      if (rhs > 0.0) worst[trial] = std::max(worst[trial], lhs / rhs);
    }
    CHECK(worst[trial] <= 4.0);
  }
  CHECK(std::abs(worst[0] - worst[1]) <= 0.5);
}

TEST_CASE("ball members: huge radius captures everything") {
  SpatialGrid g = small_grid(16);
  DirectionSet dirs = DirectionSet::equispaced_circle(8);
  MetricBall ball;
  ball.center = pp(1.0, 2.0, 0.7);
  ball.radius = 10.0 * std::sqrt(g.length + g.length * g.length + 4.0);
  BallMembers bm = ball_members(g, dirs, ball);
  CHECK(bm.samples.size() == g.size() * dirs.size());
  CHECK(bm.measure ==
        doctest::Approx(g.length * g.length).epsilon(1e-12));
  CHECK_FALSE(bm.fallback);
}

TEST_CASE("ball members: degenerate radius falls back to nearest sample") {
  SpatialGrid g = small_grid(16);
  DirectionSet dirs = DirectionSet::equispaced_circle(8);
  MetricBall ball;
  // Center off the sample set in both position and direction.
  double h = g.spacing();
  ball.center = pp(0.5 * h, 0.5 * h, 0.5 * kTwoPi / 8.0);
  ball.radius = 0.5 * h;
  BallMembers bm = ball_members(g, dirs, ball);
  CHECK(bm.fallback);
  CHECK(bm.samples.size() == 1);
}

TEST_CASE("ball members measure matches the Monte Carlo volume scale") {
  SpatialGrid g = small_grid(64);
  DirectionSet dirs = DirectionSet::equispaced_circle(32);
  double tau = 0.25;
  MetricBall ball;
  ball.center = pp(g.length / 2, g.length / 2, 0.0);
  ball.radius = tau;
  BallMembers bm = ball_members(g, dirs, ball);
  double mc = ball_volume_estimate(2, tau, 200000, 1).value;
  // Discrete measure over MC volume within a factor two either way.
  CHECK(bm.measure / mc <= 2.0);
  CHECK(bm.measure / mc >= 0.5);
}

TEST_CASE("Monte Carlo volume against an independent quadrature oracle") {
  double tau = 0.25;
  double mc = ball_volume_estimate(2, tau, 400000, 3).value;
  double quad = ball_volume_quadrature(tau, 80);
  CHECK(mc == doctest::Approx(quad).epsilon(0.02));
}

TEST_CASE("volume scaling regimes") {
  // v(tau)/tau^4 stable within a factor two across fine scales.
  double base = 0.0;
  for (double tau : {0.25, 0.125, 0.0625}) {
    double v = ball_volume_estimate(2, tau, 1000000, 7).value;
    double ratio = v / std::pow(tau, 4.0);
    if (base == 0.0) base = ratio;
    CHECK(ratio / base <= 2.0);
    CHECK(ratio / base >= 0.5);
  }
  // Coarse regime v ~ tau^2.
  double v2 = ball_volume_estimate(2, 2.0, 1000000, 7).value;
  double v4 = ball_volume_estimate(2, 4.0, 1000000, 7).value;
  CHECK((v4 / 16.0) / (v2 / 4.0) <= 2.0);
  CHECK((v4 / 16.0) / (v2 / 4.0) >= 0.5);
  // Doubling.
  for (double tau : {0.125, 0.25, 0.5}) {
    double v = ball_volume_estimate(2, tau, 500000, 11).value;
    double vd = ball_volume_estimate(2, 2.0 * tau, 500000, 11).value;
    CHECK(vd <= 64.0 * 16.0 * v);  // C^2 lambda^{2n} with C <= 8
  }
  // Deterministic per seed.
  CHECK(ball_volume_estimate(2, 0.25, 5000, 5).value ==
        ball_volume_estimate(2, 0.25, 5000, 5).value);
  CHECK(ball_volume_estimate(2, 0.25, 500, 5).precision_warning);
}

TEST_CASE("BallSum agrees with brute force membership sums") {
  SpatialGrid g = small_grid(16);
  DirectionSet dirs = DirectionSet::equispaced_circle(8);
  std::mt19937_64 eng(13);
  std::vector<std::vector<double>> H(dirs.size(),
                                     std::vector<double>(g.size()));
  for (auto& row : H)
    for (double& v : row) v = uniform01(eng);

  for (double tau : {0.2, 0.7, 1.9}) {
    BallSum sum(g, dirs, tau);
    std::vector<std::vector<double>> S;
    sum.apply(H, S);
    // Brute force at a few sample points.
    for (int i : {0, 3, 5}) {
      for (std::size_t flat : {std::size_t(0), std::size_t(37), std::size_t(200)}) {
        PhasePoint center{g.position(flat), dirs.dirs[i].u};
        double expect = 0.0;
        for (int j = 0; j < dirs.size(); ++j)
          for (std::size_t y = 0; y < g.size(); ++y) {
            PhasePoint q{g.position(y), dirs.dirs[j].u};
            if (quasi_distance_sq(g, center, q) < tau * tau)
              expect += H[j][y];
          }
        CHECK(S[i][flat] == doctest::Approx(expect).epsilon(1e-11));
      }
    }
    // Measures match ball_members.
    MetricBall ball;
    ball.center = PhasePoint{g.position(0), dirs.dirs[2].u};
    ball.radius = tau;
    BallMembers bm = ball_members(g, dirs, ball);
    CHECK(sum.measure(2) == doctest::Approx(bm.measure).epsilon(1e-12));
  }
}

TEST_CASE("m_lambda: constants, indicators, and power monotonicity") {
  SpatialGrid g = small_grid(16);
  DirectionSet dirs = DirectionSet::equispaced_circle(8);

  SpSlice ones = make_sp_slice(g, dirs, 1.0);
  SpSlice m1 = m_lambda(g, dirs, ones, 1.0);
  for (const auto& row : m1)
    for (double v : row) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  // Indicator of a ball: maximal function is 1 on the ball and <= 1.
  MetricBall ball;
  ball.center = PhasePoint{g.position(0), dirs.dirs[0].u};
  ball.radius = 0.8;
  BallMembers bm = ball_members(g, dirs, ball);
  SpSlice ind = make_sp_slice(g, dirs, 0.0);
  for (auto& [j, flat] : bm.samples) ind[j][flat] = 1.0;
  SpSlice mi = m_lambda(g, dirs, ind, 1.0);
  for (const auto& row : mi)
    for (double v : row) CHECK(v <= 1.0 + 1e-12);
  for (auto& [j, flat] : bm.samples)
    CHECK(mi[j][flat] == doctest::Approx(1.0).epsilon(1e-12));

  // Monotone in lambda (power mean inequality).
  std::mt19937_64 eng(17);
  for (int trial = 0; trial < 5; ++trial) {
    SpSlice gsl = make_sp_slice(g, dirs, 0.0);
    for (auto& row : gsl)
      for (double& v : row) v = uniform01(eng);
    SpSlice lo = m_lambda(g, dirs, gsl, 0.5);
    SpSlice hi = m_lambda(g, dirs, gsl, 1.5);
    for (int j = 0; j < dirs.size(); ++j)
      for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(lo[j][k] <= hi[j][k] * (1.0 + 1e-10));
        CHECK(lo[j][k] + 1e-12 >= std::abs(gsl[j][k]));  // >= |g|
      }
  }
}

TEST_CASE("m_lambda is bounded on discrete L^q for q > lambda") {
  SpatialGrid g = small_grid(16);
  DirectionSet dirs = DirectionSet::equispaced_circle(8);
  std::mt19937_64 eng(23);
  double cell = g.spacing() * g.spacing();
  for (double q : {1.5, 2.0}) {
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      SpSlice gsl = make_sp_slice(g, dirs, 0.0);
      for (auto& row : gsl)
        for (double& v : row) v = uniform01(eng) < 0.05 ? uniform(eng, 0, 5) : 0.0;
      SpSlice mg = m_lambda(g, dirs, gsl, 1.0);
      double num = 0.0, den = 0.0;
      for (int j = 0; j < dirs.size(); ++j)
        for (std::size_t k = 0; k < g.size(); ++k) {
          num += cell * dirs.weights[j] * std::pow(mg[j][k], q);
          den += cell * dirs.weights[j] * std::pow(std::abs(gsl[j][k]), q);
        }
      if (den > 0.0) worst = std::max(worst, std::pow(num / den, 1.0 / q));
    }
    CHECK(worst < 50.0);
  }
}

TEST_CASE("peak maximal function: point mass and monotonicity") {
  SpatialGrid g = small_grid(16);
  DirectionSet dirs = DirectionSet::equispaced_circle(8);
  double sigma = 0.25;

  SpSlice mass = make_sp_slice(g, dirs, 0.0);
  std::size_t flat0 = 5 * g.points + 9;
  mass[3][flat0] = 2.0;
  SpSlice out = peak_maximal(g, dirs, mass, 3.0, sigma);
  PhasePoint src{g.position(flat0), dirs.dirs[3].u};
  for (int j = 0; j < dirs.size(); ++j)
    for (std::size_t k = 0; k < g.size(); ++k) {
      PhasePoint at{g.position(k), dirs.dirs[j].u};
      double rho2 = quasi_distance_sq(g, at, src);
      double expect = 2.0 * std::pow(1.0 + rho2 / sigma, -3.0);
      CHECK(out[j][k] == doctest::Approx(expect).epsilon(1e-10));
    }

  std::mt19937_64 eng(31);
  SpSlice gsl = make_sp_slice(g, dirs, 0.0);
  for (auto& row : gsl)
    for (double& v : row) v = uniform01(eng);
  SpSlice big = peak_maximal(g, dirs, gsl, 2.0, sigma);
  SpSlice small = peak_maximal(g, dirs, gsl, 4.0, sigma);
  for (int j = 0; j < dirs.size(); ++j)
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(big[j][k] + 1e-12 >= gsl[j][k]);
      CHECK(small[j][k] <= big[j][k] * (1.0 + 1e-12));
    }
}

TEST_CASE("kernel domination against the maximal function") {
  SpatialGrid g = small_grid(16);
  DirectionSet dirs = DirectionSet::equispaced_circle(8);
  SpSlice ones = make_sp_slice(g, dirs, 1.0);
  KernelDominationReport rep = kernel_domination_check(g, dirs, ones, 0.25, 3.0);
  CHECK(rep.finite);
  CHECK(rep.max_ratio <= 10.0);
  CHECK(rep.max_ratio >= 0.1);

  // Indicator of a small ball: ratio within a factor 4 of the constant case.
  MetricBall ball;
  ball.center = PhasePoint{g.position(7), dirs.dirs[1].u};
  ball.radius = 0.4;
  BallMembers bm = ball_members(g, dirs, ball);
  SpSlice ind = make_sp_slice(g, dirs, 0.0);
  for (auto& [j, flat] : bm.samples) ind[j][flat] = 1.0;
  KernelDominationReport rep2 = kernel_domination_check(g, dirs, ind, 0.25, 3.0);
  CHECK(rep2.finite);
  CHECK(rep2.max_ratio <= 4.0 * rep.max_ratio);

  // Refinement stability.
  SpatialGrid g2 = small_grid(32);
  DirectionSet dirs2 = DirectionSet::equispaced_circle(16);
  SpSlice ones2 = make_sp_slice(g2, dirs2, 1.0);
  KernelDominationReport rep3 =
      kernel_domination_check(g2, dirs2, ones2, 0.25, 3.0);
  CHECK(rep3.max_ratio / rep.max_ratio <= 2.0);
  CHECK(rep3.max_ratio / rep.max_ratio >= 0.5);
}

TEST_CASE("direction sets: weights, spacing, resolvability") {
  DirectionSet d64 = DirectionSet::equispaced_circle(64);
  double wsum = 0.0;
  for (double w : d64.weights) wsum += w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
  for (const Direction& dd : d64.dirs)
    CHECK(std::abs(norm(2, dd.u) - 1.0) <= 1e-14);
  CHECK(d64.max_spacing() == doctest::Approx(2.0 * std::sin(kPi / 64)).epsilon(1e-12));
  CHECK_NOTHROW(d64.require_resolves(1.0 / 32.0));
  CHECK_THROWS_AS(d64.require_resolves(1e-4), ResolutionError);

  // Antipodal pairs are exact negations.
  for (int j = 0; j < 32; ++j) {
    CHECK(d64.dirs[j + 32].u[0] == -d64.dirs[j].u[0]);
    CHECK(d64.dirs[j + 32].u[1] == -d64.dirs[j].u[1]);
  }

  DirectionSet d3 = DirectionSet::quasi_uniform_sphere(64);
  wsum = 0.0;
  for (double w : d3.weights) wsum += w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_SUITE_END();
