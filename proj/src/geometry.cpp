#include "fioh/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fioh/phase_ops.hpp"

namespace fioh {

// ---------------------------------------------------------------------------
// Direction sets

DirectionSet DirectionSet::equispaced_circle(int count) {
  if (count < 4) throw InvalidInput("DirectionSet: need at least 4 directions");
  DirectionSet ds;
  ds.n = 2;
  ds.dirs.resize(count);
  ds.weights.assign(count, 1.0 / count);
  if (count % 4 == 0) {
    // Build one quadrant, then rotate by 90 degrees three times so that
    // quarter-turn rotations and antipodes map the set to itself bit-exactly.
    int q = count / 4;
    for (int j = 0; j < q; ++j) {
      double th = kTwoPi * j / count;
      ds.dirs[j].u = vec2(std::cos(th), std::sin(th));
    }
    for (int j = q; j < count; ++j) {
      const Vec& prev = ds.dirs[j - q].u;
      ds.dirs[j].u = vec2(-prev[1], prev[0]);
    }
  } else {
    for (int j = 0; j < count; ++j) {
      double th = kTwoPi * j / count;
      ds.dirs[j].u = vec2(std::cos(th), std::sin(th));
    }
    if (count % 2 == 0)
      for (int j = count / 2; j < count; ++j) {
        const Vec& opp = ds.dirs[j - count / 2].u;
        ds.dirs[j].u = vec2(-opp[0], -opp[1]);
      }
  }
  return ds;
}

DirectionSet DirectionSet::quasi_uniform_sphere(int count) {
  if (count < 6) throw InvalidInput("DirectionSet: need at least 6 directions");
  DirectionSet ds;
  ds.n = 3;
  ds.dirs.resize(count);
  ds.weights.assign(count, 1.0 / count);
  // Fibonacci spiral.
  double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int j = 0; j < count; ++j) {
    double z = 1.0 - (2.0 * j + 1.0) / count;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double th = kTwoPi * j / golden;
    ds.dirs[j].u = vec3(r * std::cos(th), r * std::sin(th), z);
  }
  return ds;
}

double DirectionSet::max_spacing() const {
  double worst = 0.0;
  for (int i = 0; i < size(); ++i) {
    double nearest = 4.0;
    for (int j = 0; j < size(); ++j) {
      if (i == j) continue;
      nearest = std::min(nearest, norm(n, sub(n, dirs[i].u, dirs[j].u)));
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

void DirectionSet::require_resolves(double sigma_min) const {
  if (max_spacing() > std::sqrt(sigma_min))
    throw ResolutionError(
        "direction set too coarse for the finest packet scale");
}

// ---------------------------------------------------------------------------
// Quasi-metric

double quasi_distance_sq(const SpatialGrid& grid, const PhasePoint& p,
                         const PhasePoint& q) {
  Vec d = grid.min_image_vec(sub(grid.n, p.x, q.x));
  double along_p = std::abs(dot(grid.n, p.omega, d));
  double along_q = std::abs(dot(grid.n, q.omega, d));
  Vec dw = sub(grid.n, p.omega, q.omega);
  return std::max(along_p, along_q) + norm_sq(grid.n, d) + norm_sq(grid.n, dw);
}

double quasi_distance(const SpatialGrid& grid, const PhasePoint& p,
                      const PhasePoint& q) {
  return std::sqrt(quasi_distance_sq(grid, p, q));
}

// ---------------------------------------------------------------------------
// Ball members

SpSlice make_sp_slice(const SpatialGrid& grid, const DirectionSet& dirs,
                      double fill) {
  return SpSlice(dirs.size(), std::vector<double>(grid.size(), fill));
}

BallMembers ball_members(const SpatialGrid& grid, const DirectionSet& dirs,
                         const MetricBall& ball) {
  grid.validate();
  if (!(ball.radius > 0.0)) throw InvalidInput("ball_members: radius <= 0");
  BallMembers out;
  double h = grid.spacing();
  int N = grid.points;
  double t2 = ball.radius * ball.radius;
  double cell = 1.0;
  for (int a = 0; a < grid.n; ++a) cell *= h;

  auto for_each_lattice_near = [&](double c2, auto&& fn) {
    // Lattice points y with |x - y| < sqrt(c2), periodic, each torus point
    // visited at most once.
    double r = std::sqrt(c2);
    int range[3][2];
    for (int a = 0; a < grid.n; ++a) {
      int lo = static_cast<int>(std::ceil((ball.center.x[a] - r) / h));
      int hi = static_cast<int>(std::floor((ball.center.x[a] + r) / h));
      if (2.0 * r >= grid.length || hi - lo + 1 >= N) {
        lo = 0;
        hi = N - 1;
      }
      range[a][0] = lo;
      range[a][1] = hi;
    }
    int m[3] = {0, 0, 0};
    std::function<void(int)> rec = [&](int axis) {
      if (axis == grid.n) {
        int w[3] = {0, 0, 0};
        for (int a = 0; a < grid.n; ++a) w[a] = ((m[a] % N) + N) % N;
        fn(grid.flat_index(w));
        return;
      }
      for (m[axis] = range[axis][0]; m[axis] <= range[axis][1]; ++m[axis])
        rec(axis + 1);
    };
    rec(0);
  };

  for (int j = 0; j < dirs.size(); ++j) {
    Vec dw = sub(grid.n, ball.center.omega, dirs.dirs[j].u);
    double c2 = t2 - norm_sq(grid.n, dw);
    if (c2 <= 0.0) continue;
    for_each_lattice_near(c2, [&](std::size_t flat) {
      PhasePoint q{grid.position(flat), dirs.dirs[j].u};
      if (quasi_distance_sq(grid, ball.center, q) < t2) {
        out.samples.emplace_back(static_cast<std::uint32_t>(j),
                                 static_cast<std::uint32_t>(flat));
        out.measure += cell * dirs.weights[j];
      }
    });
  }

  if (out.samples.empty()) {
    // Degenerate ball: return the nearest phase-space sample and flag it.
    std::uint32_t bj = 0, bf = 0;
    int m0[3] = {0, 0, 0};
    int w0[3] = {0, 0, 0};
    for (int a = 0; a < grid.n; ++a) {
      m0[a] = static_cast<int>(std::llround(ball.center.x[a] / h));
      w0[a] = ((m0[a] % N) + N) % N;
    }
    std::size_t seed_flat = grid.flat_index(w0);
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < dirs.size(); ++j) {
      PhasePoint q{grid.position(seed_flat), dirs.dirs[j].u};
      double d2 = quasi_distance_sq(grid, ball.center, q);
      if (d2 < best) {
        best = d2;
        bj = static_cast<std::uint32_t>(j);
        bf = static_cast<std::uint32_t>(seed_flat);
      }
    }
    // Refine: any better sample satisfies |x - y|^2 < best.
    for (int j = 0; j < dirs.size(); ++j) {
      Vec dw = sub(grid.n, ball.center.omega, dirs.dirs[j].u);
      double ang = norm_sq(grid.n, dw);
      if (ang >= best) continue;
      int reach =
          std::min(N, static_cast<int>(std::floor(std::sqrt(best) / h)) + 1);
      for (int a = -reach; a <= reach; ++a)
        for (int b = -reach; b <= reach; ++b)
          for (int c = (grid.n == 3 ? -reach : 0);
               c <= (grid.n == 3 ? reach : 0); ++c) {
            int m[3] = {m0[0] + a, m0[1] + b, grid.n == 3 ? m0[2] + c : 0};
            int w[3] = {0, 0, 0};
            for (int ax = 0; ax < grid.n; ++ax) w[ax] = ((m[ax] % N) + N) % N;
            std::size_t flat = grid.flat_index(w);
            PhasePoint q{grid.position(flat), dirs.dirs[j].u};
            double d2 = quasi_distance_sq(grid, ball.center, q);
            if (d2 < best) {
              best = d2;
              bj = static_cast<std::uint32_t>(j);
              bf = static_cast<std::uint32_t>(flat);
            }
          }
    }
    out.samples.emplace_back(bj, bf);
    out.measure = cell * dirs.weights[bj];
    out.fallback = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo ball volume

BallVolumeEstimate ball_volume_estimate(int n, double tau, std::size_t samples,
                                        std::uint64_t seed) {
  if (n < 2 || n > 3) throw InvalidInput("ball_volume_estimate: n must be 2 or 3");
  if (!(tau > 0.0)) throw InvalidInput("ball_volume_estimate: tau <= 0");
  BallVolumeEstimate est;
  est.samples = samples;
  est.precision_warning = samples < 1000;

  std::mt19937_64 eng(seed);
  double t2 = tau * tau;
  double par = std::min(t2, tau);  // |w.dx| < tau^2 and |dx| < tau
  double box_measure = 2.0 * par;
  for (int a = 1; a < n; ++a) box_measure *= 2.0 * tau;

  // Angular factor: fraction of the unit-normalized sphere within chord tau.
  double ang_fraction;
  double chord = std::min(tau, 2.0);
  if (n == 2)
    ang_fraction = 2.0 * std::asin(0.5 * chord) / kPi;
  else
    ang_fraction = 0.25 * chord * chord;  // spherical cap, |w - v| < chord

  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    Vec dx{0.0, 0.0, 0.0};
    dx[0] = uniform(eng, -par, par);  // along w = e1
    for (int a = 1; a < n; ++a) dx[a] = uniform(eng, -tau, tau);

    Vec v{0.0, 0.0, 0.0};
    if (n == 2) {
      double half_angle = 2.0 * std::asin(0.5 * chord);
      double th = uniform(eng, -half_angle, half_angle);
      v = vec2(std::cos(th), std::sin(th));
    } else {
      double zmin = 1.0 - 0.5 * chord * chord;
      double z = uniform(eng, zmin, 1.0);
      double phi = uniform(eng, 0.0, kTwoPi);
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      v = vec3(z, r * std::cos(phi), r * std::sin(phi));  // w = e1
    }

    Vec w{1.0, 0.0, 0.0};
    double along_w = std::abs(dx[0]);
    double along_v = std::abs(dot(n, v, dx));
    Vec dw = sub(n, w, v);
    double rho2 = std::max(along_w, along_v) + norm_sq(n, dx) + norm_sq(n, dw);
    if (rho2 < t2) ++hits;
  }

  est.value = box_measure * ang_fraction * static_cast<double>(hits) /
              static_cast<double>(samples);
  return est;
}

// ---------------------------------------------------------------------------
// Maximal operators

std::vector<double> maximal_radius_menu(const SpatialGrid& grid) {
  double half = 0.5 * grid.length;
  double sp2 = 0.0;
  for (int a = 0; a < grid.n; ++a) sp2 += half * half;
  double sp = std::sqrt(sp2);
  double diam = std::sqrt(sp + sp2 + 4.0);
  std::vector<double> menu;
  for (double tau = diam; tau >= 0.5 * grid.spacing(); tau *= 0.5)
    menu.push_back(tau);
  return menu;
}

SpSlice m_lambda(const SpatialGrid& grid, const DirectionSet& dirs,
                 const SpSlice& g, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("m_lambda: lambda must be positive");
  if (static_cast<int>(g.size()) != dirs.size())
    throw InvalidInput("m_lambda: slice shape mismatch");
  int M = dirs.size();
  std::size_t sz = grid.size();
  double cell = 1.0;
  for (int a = 0; a < grid.n; ++a) cell *= grid.spacing();

  // |g|^lambda with the measure weights folded in.
  std::vector<std::vector<double>> H(M, std::vector<double>(sz));
  for (int j = 0; j < M; ++j) {
    double wj = cell * dirs.weights[j];
    for (std::size_t k = 0; k < sz; ++k)
      H[j][k] = wj * std::pow(std::abs(g[j][k]), lambda);
  }

  SpSlice best(M, std::vector<double>(sz, 0.0));
  for (int j = 0; j < M; ++j)
    for (std::size_t k = 0; k < sz; ++k)
      best[j][k] = std::pow(std::abs(g[j][k]), lambda);

  std::vector<std::vector<double>> S;
  for (double tau : maximal_radius_menu(grid)) {
    BallSum sum(grid, dirs, tau);
    sum.apply(H, S);
    for (int i = 0; i < M; ++i) {
      double mu = sum.measure(i);
      if (mu <= 0.0) continue;
      double inv = 1.0 / mu;
      for (std::size_t k = 0; k < sz; ++k)
        best[i][k] = std::max(best[i][k], S[i][k] * inv);
    }
  }

  double invl = 1.0 / lambda;
  for (int i = 0; i < M; ++i)
    for (std::size_t k = 0; k < sz; ++k)
      best[i][k] = std::pow(best[i][k], invl);
  return best;
}

SpSlice peak_maximal(const SpatialGrid& grid, const DirectionSet& dirs,
                     const SpSlice& g, double decay_order, double sigma) {
  if (!(decay_order > 0.0) || !(sigma > 0.0) || sigma > 1.0 + 1e-12)
    throw InvalidInput("peak_maximal: need N > 0 and sigma in (0, 1]");
  int M = dirs.size();
  std::size_t sz = grid.size();
  std::vector<std::vector<double>> H(M, std::vector<double>(sz));
  for (int j = 0; j < M; ++j)
    for (std::size_t k = 0; k < sz; ++k) H[j][k] = std::abs(g[j][k]);
  PhasePeakMax pm(grid, dirs, 1.0 / sigma, decay_order);
  SpSlice out;
  pm.apply(H, out);
  return out;
}

KernelDominationReport kernel_domination_check(const SpatialGrid& grid,
                                               const DirectionSet& dirs,
                                               const SpSlice& g, double sigma,
                                               double decay_order) {
  if (!(decay_order > grid.n))
    throw InvalidInput("kernel_domination_check: need M > n");
  int M = dirs.size();
  std::size_t sz = grid.size();
  double cell = 1.0;
  for (int a = 0; a < grid.n; ++a) cell *= grid.spacing();

  std::vector<std::vector<double>> H(M, std::vector<double>(sz));
  for (int j = 0; j < M; ++j) {
    double wj = cell * dirs.weights[j];
    for (std::size_t k = 0; k < sz; ++k) H[j][k] = wj * std::abs(g[j][k]);
  }

  double inv_sigma = 1.0 / sigma;
  PhaseKernelSum ks(grid, dirs, [inv_sigma, decay_order](double rho2) {
    return std::pow(1.0 + inv_sigma * rho2, -decay_order);
  });
  std::vector<std::vector<double>> lhs;
  ks.apply(H, lhs);
  double pref = std::pow(sigma, -grid.n);

  SpSlice rhs = m_lambda(grid, dirs, g, 1.0);

  KernelDominationReport rep;
  double sum = 0.0;
  std::size_t count = 0;
  for (int i = 0; i < M; ++i)
    for (std::size_t k = 0; k < sz; ++k) {
      double num = pref * lhs[i][k];
      double den = rhs[i][k];
      if (den == 0.0 && num == 0.0) continue;
      if (den == 0.0) {
        rep.finite = false;
        continue;
      }
      double r = num / den;
      rep.max_ratio = std::max(rep.max_ratio, r);
      sum += r;
      ++count;
    }
  rep.mean_ratio = count ? sum / count : 0.0;
  return rep;
}

}  // namespace fioh
