#include "fioh/tent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fioh/phase_ops.hpp"

namespace fioh {

BallMenu BallMenu::standard(const SpatialGrid& grid, const DirectionSet& dirs,
                            double max_radius) {
  BallMenu menu;
  double h = grid.spacing();
  double chord = dirs.max_spacing();
  for (double r = max_radius; r >= 2.0 * h; r *= 0.5) {
    menu.radii.push_back(r);
    int sx = std::clamp(static_cast<int>(std::floor(r / (4.0 * h))), 1,
                        grid.points);
    int sd = std::clamp(static_cast<int>(std::floor(r / (4.0 * chord))), 1,
                        dirs.size());
    menu.spatial_strides.push_back(sx);
    menu.direction_strides.push_back(sd);
  }
  if (menu.radii.empty())
    throw InvalidInput("ball menu: no usable radii at this resolution");
  return menu;
}

// ---------------------------------------------------------------------------
// LusinAccumulator

LusinAccumulator::LusinAccumulator(const SpatialGrid& grid,
                                   const DirectionSet& dirs,
                                   std::vector<double> s_values)
    : grid_(grid), dirs_(dirs), s_values_(std::move(s_values)) {
  sums_.assign(s_values_.size(), make_sp_slice(grid_, dirs_, 0.0));
}

void LusinAccumulator::accumulate(double sigma, double weight,
                                  const std::vector<std::vector<double>>& abs2) {
  BallSum sum(grid_, dirs_, std::sqrt(sigma));
  int M = dirs_.size();
  std::size_t sz = grid_.size();
  double cell = 1.0;
  for (int a = 0; a < grid_.n; ++a) cell *= grid_.spacing();

  std::vector<std::vector<double>> H(M, std::vector<double>(sz));
  for (int j = 0; j < M; ++j) {
    // Source-normalized average: each sample is divided by the measure of
    // the ball around it, which is the center measure by symmetry.
    double f = cell * dirs_.weights[j] / sum.measure(j);
    const std::vector<double>& src = abs2[j];
    for (std::size_t k = 0; k < sz; ++k) H[j][k] = f * src[k];
  }
  std::vector<std::vector<double>> S;
  sum.apply(H, S);
  for (std::size_t si = 0; si < s_values_.size(); ++si) {
    double w = weight * std::pow(sigma, -2.0 * s_values_[si]);
    for (int i = 0; i < M; ++i) {
      double* dst = sums_[si][i].data();
      const double* src = S[i].data();
      for (std::size_t k = 0; k < sz; ++k) dst[k] += w * src[k];
    }
  }
}

void LusinAccumulator::add_node(double sigma, double weight,
                                const std::vector<std::vector<cplx>>& slices) {
  int M = dirs_.size();
  if (static_cast<int>(slices.size()) != M)
    throw InvalidInput("LusinAccumulator: slice count mismatch");
  std::size_t sz = grid_.size();
  std::vector<std::vector<double>> abs2(M, std::vector<double>(sz));
  for (int j = 0; j < M; ++j)
    for (std::size_t k = 0; k < sz; ++k) abs2[j][k] = std::norm(slices[j][k]);
  accumulate(sigma, weight, abs2);
}

void LusinAccumulator::add_low(double sigma, double weight,
                               const std::vector<cplx>& slice) {
  int M = dirs_.size();
  std::size_t sz = grid_.size();
  std::vector<double> a(sz);
  for (std::size_t k = 0; k < sz; ++k) a[k] = std::norm(slice[k]);
  std::vector<std::vector<double>> abs2(M, a);
  accumulate(sigma, weight, abs2);
}

SpSlice LusinAccumulator::result(double s) const {
  for (std::size_t si = 0; si < s_values_.size(); ++si) {
    if (s_values_[si] == s) {
      SpSlice out = sums_[si];
      for (auto& row : out)
        for (double& v : row) v = std::sqrt(std::max(0.0, v));
      return out;
    }
  }
  throw InvalidInput("LusinAccumulator: s value was not accumulated");
}

// ---------------------------------------------------------------------------

SpSlice lusin(const PhaseSpaceField& F, double s, TransformPart part) {
  LusinAccumulator acc(F.grid, F.dirs, {s});
  int M = F.dirs.size();
  std::size_t sz = F.grid.size();
  if (part != TransformPart::LowOnly) {
    std::vector<std::vector<double>> abs2(M, std::vector<double>(sz));
    for (int node = 0; node < F.ladder.node_count(); ++node) {
      for (int j = 0; j < M; ++j) {
        const std::vector<cplx>& sl = F.slice(node, j);
        for (std::size_t k = 0; k < sz; ++k) abs2[j][k] = std::norm(sl[k]);
      }
      acc.accumulate(F.ladder.high[node].sigma, F.ladder.high[node].weight,
                     abs2);
    }
  }
  if (part != TransformPart::HighOnly)
    acc.add_low(F.ladder.low_sigma(), F.ladder.low_weight(), F.low);
  return acc.result(s);
}

double sp_lp_norm(const SpatialGrid& grid, const DirectionSet& dirs,
                  const SpSlice& slice, double p) {
  if (!(p > 0.0)) throw InvalidInput("sp_lp_norm: p must be positive");
  double cell = 1.0;
  for (int a = 0; a < grid.n; ++a) cell *= grid.spacing();
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& row : slice)
      for (double v : row) m = std::max(m, std::abs(v));
    return m;
  }
  double sum = 0.0;
  for (int j = 0; j < dirs.size(); ++j) {
    double rowsum = 0.0;
    for (double v : slice[j]) rowsum += std::pow(std::abs(v), p);
    sum += cell * dirs.weights[j] * rowsum;
  }
  return std::pow(sum, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Tents over menu balls

namespace {

struct TentGeometry {
  BallMembers members;
  std::vector<double> boundary_distance;  // per member, capped
  double cap = 0.0;
};

// Distance from each member of B to the sampled complement of B, capped at
// `cap` (distances at or above the cap all behave identically downstream).
TentGeometry tent_geometry(const SpatialGrid& grid, const DirectionSet& dirs,
                           const MetricBall& ball, double cap) {
  TentGeometry tg;
  tg.cap = cap;
  tg.members = ball_members(grid, dirs, ball);
  int M = dirs.size();
  int N = grid.points;
  double h = grid.spacing();
  std::size_t sz = grid.size();

  std::vector<std::vector<std::uint8_t>> mask(M,
                                              std::vector<std::uint8_t>(sz, 0));
  for (const auto& [j, flat] : tg.members.samples) mask[j][flat] = 1;

  double cap2 = cap * cap;
  tg.boundary_distance.resize(tg.members.samples.size());

  parallel_items(tg.members.samples.size(), [&](std::size_t mi) {
    auto [j, flat] = tg.members.samples[mi];
    int m[3] = {0, 0, 0};
    grid.axis_indices(flat, m);
    const Vec& vj = dirs.dirs[j].u;
    Vec y = grid.position(flat);
    double best2 = cap2;
    for (int j2 = 0; j2 < M; ++j2) {
      Vec dw = sub(grid.n, vj, dirs.dirs[j2].u);
      double ang = norm_sq(grid.n, dw);
      if (ang >= best2) continue;
      const std::vector<std::uint8_t>& mk = mask[j2];
      const Vec& v2 = dirs.dirs[j2].u;
      int max_ring = N / 2;
      for (int ring = 0; ring <= max_ring; ++ring) {
        double lb = ang + (ring > 0 ? (ring - 1) * h * (ring - 1) * h : 0.0);
        if (lb >= best2) break;
        // Square ring of lattice offsets at Chebyshev radius `ring`.
        auto visit = [&](int a, int b) {
          int w0 = ((m[0] + a) % N + N) % N;
          int w1 = ((m[1] + b) % N + N) % N;
          std::size_t f2 = static_cast<std::size_t>(w0) * N + w1;
          if (mk[f2]) return;
          Vec q = grid.position(f2);
          Vec d = grid.min_image_vec(sub(grid.n, y, q));
          double du = std::abs(dot(grid.n, vj, d));
          double dv = std::abs(dot(grid.n, v2, d));
          double rho2 = std::max(du, dv) + norm_sq(grid.n, d) + ang;
          if (rho2 < best2) best2 = rho2;
        };
        if (ring == 0) {
          visit(0, 0);
        } else {
          for (int a = -ring; a <= ring; ++a) {
            visit(a, -ring);
            visit(a, ring);
          }
          for (int b = -ring + 1; b <= ring - 1; ++b) {
            visit(-ring, b);
            visit(ring, b);
          }
        }
      }
    }
    tg.boundary_distance[mi] = std::sqrt(best2);
  });
  return tg;
}

double ball_volume_cached(int n, double radius) {
  return ball_volume_estimate(n, radius, kVolumeSamples, kVolumeSeed).value;
}

}  // namespace

SpSlice carleson(const PhaseSpaceField& F, double s, double alpha,
                 const BallMenu& menu) {
  const SpatialGrid& grid = F.grid;
  const DirectionSet& dirs = F.dirs;
  if (grid.n != 2)
    throw InvalidInput("carleson: only n = 2 menus are implemented");
  int M = dirs.size();
  int N = grid.points;
  double cell = grid.spacing() * grid.spacing();
  double cap = std::sqrt(F.ladder.low_sigma()) * 1.0000001;

  SpSlice out = make_sp_slice(grid, dirs, 0.0);

  for (std::size_t ri = 0; ri < menu.radii.size(); ++ri) {
    double r = menu.radii[ri];
    double volume = ball_volume_cached(grid.n, r);
    double norm_factor = std::pow(volume, 1.0 + 2.0 * alpha);
    int sx = menu.spatial_strides[ri];
    int sd = menu.direction_strides[ri];
    for (int ci = 0; ci < M; ci += sd) {
      for (int c0 = 0; c0 < N; c0 += sx)
        for (int c1 = 0; c1 < N; c1 += sx) {
          MetricBall ball;
          std::size_t cflat = static_cast<std::size_t>(c0) * N + c1;
          ball.center = PhasePoint{grid.position(cflat), dirs.dirs[ci].u};
          ball.radius = r;
          TentGeometry tg = tent_geometry(grid, dirs, ball, cap);
          double integral = 0.0;
          for (int node = -1; node < F.ladder.node_count(); ++node) {
            double sigma =
                node < 0 ? F.ladder.low_sigma() : F.ladder.high[node].sigma;
            double weight =
                node < 0 ? F.ladder.low_weight() : F.ladder.high[node].weight;
            double rt = std::sqrt(sigma);
            double wfac = weight * std::pow(sigma, -2.0 * s);
            for (std::size_t mi = 0; mi < tg.members.samples.size(); ++mi) {
              if (tg.boundary_distance[mi] < rt) continue;
              auto [j, flat] = tg.members.samples[mi];
              const cplx& v =
                  node < 0 ? F.low[flat] : F.slice(node, j)[flat];
              integral += wfac * cell * dirs.weights[j] * std::norm(v);
            }
          }
          double value = std::sqrt(integral / norm_factor);
          for (const auto& [j, flat] : tg.members.samples)
            out[j][flat] = std::max(out[j][flat], value);
        }
    }
  }
  return out;
}

TentNormResult tent_norm(const PhaseSpaceField& F, const TentParams& params) {
  TentNormResult res;
  res.p = params.p;
  res.s = params.s;
  res.alpha = params.alpha;
  if (std::isinf(params.p)) {
    SpSlice c = carleson(F, params.s, params.alpha, params.menu);
    double m = 0.0;
    for (const auto& row : c)
      for (double v : row) m = std::max(m, v);
    res.value = m;
    return res;
  }
  SpSlice a = lusin(F, params.s);
  res.value = sp_lp_norm(F.grid, F.dirs, a, params.p);
  return res;
}

// ---------------------------------------------------------------------------
// Atoms

double weighted_square_integral(const PhaseSpaceField& F, double s) {
  double cell = 1.0;
  for (int a = 0; a < F.grid.n; ++a) cell *= F.grid.spacing();
  int M = F.dirs.size();
  double total = 0.0;
  for (int node = 0; node < F.ladder.node_count(); ++node) {
    double sigma = F.ladder.high[node].sigma;
    double w = F.ladder.high[node].weight * std::pow(sigma, -2.0 * s);
    for (int j = 0; j < M; ++j) {
      const std::vector<cplx>& sl = F.slice(node, j);
      double sum = 0.0;
      for (const cplx& v : sl) sum += std::norm(v);
      total += w * cell * F.dirs.weights[j] * sum;
    }
  }
  {
    double sigma = F.ladder.low_sigma();
    double w = F.ladder.low_weight() * std::pow(sigma, -2.0 * s);
    double sum = 0.0;
    for (const cplx& v : F.low) sum += std::norm(v);
    total += w * cell * sum;  // direction weights sum to one
  }
  return total;
}

TentAtom atom_generate(const SpatialGrid& grid, const DirectionSet& dirs,
                       const ScaleLadder& ladder, const MetricBall& ball,
                       double p, double s, std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0))
    throw InvalidInput("atom_generate: p must lie in (0, 1]");
  double cap = std::sqrt(ladder.low_sigma()) * 1.0000001;
  TentGeometry tg = tent_geometry(grid, dirs, ball, cap);

  TentAtom atom;
  atom.ball = ball;
  atom.volume_seed = kVolumeSeed;
  atom.ball_volume = ball_volume_cached(grid.n, ball.radius);
  atom.samples = PhaseSpaceField(grid, dirs, ladder);

  std::mt19937_64 eng(seed);
  bool any = false;
  for (int node = -1; node < ladder.node_count(); ++node) {
    double sigma = node < 0 ? ladder.low_sigma() : ladder.high[node].sigma;
    double rt = std::sqrt(sigma);
    for (std::size_t mi = 0; mi < tg.members.samples.size(); ++mi) {
      if (tg.boundary_distance[mi] < rt) continue;
      auto [j, flat] = tg.members.samples[mi];
      cplx v = complex_normal(eng);
      if (node < 0) {
        // The low slice is direction independent; only fill from j = 0 to
        // keep the field well formed.
        if (j == 0) atom.samples.low[flat] = v;
      } else {
        atom.samples.slice(node, j)[flat] = v;
      }
      any = true;
    }
  }
  if (!any) throw ConstructionError("atom_generate: degenerate tent region");

  double q = weighted_square_integral(atom.samples, s);
  if (q <= 0.0) throw ConstructionError("atom_generate: degenerate tent region");
  double bound = std::pow(atom.ball_volume, -(2.0 / p - 1.0));
  double target = (0.5 + 0.5 * uniform01(eng)) * bound;
  double scale = std::sqrt(target / q);
  for (auto& sl : atom.samples.high)
    for (cplx& v : sl) v *= scale;
  for (cplx& v : atom.samples.low) v *= scale;
  return atom;
}

AtomReport atom_validate(const TentAtom& atom, double p, double s) {
  if (!(p > 0.0 && p <= 1.0))
    throw InvalidInput("atom_validate: p must lie in (0, 1]");
  const PhaseSpaceField& F = atom.samples;
  AtomReport rep;
  double cap = std::sqrt(F.ladder.low_sigma()) * 1.0000001;
  TentGeometry tg = tent_geometry(F.grid, F.dirs, atom.ball, cap);

  int M = F.dirs.size();
  std::size_t sz = F.grid.size();
  // In-tent lookup per node.
  rep.support_ok = true;
  std::vector<std::vector<std::uint8_t>> tentmask;
  for (int node = -1; node < F.ladder.node_count() && rep.support_ok; ++node) {
    double sigma = node < 0 ? F.ladder.low_sigma() : F.ladder.high[node].sigma;
    double rt = std::sqrt(sigma);
    tentmask.assign(M, std::vector<std::uint8_t>(sz, 0));
    for (std::size_t mi = 0; mi < tg.members.samples.size(); ++mi)
      if (tg.boundary_distance[mi] >= rt) {
        auto [j, flat] = tg.members.samples[mi];
        tentmask[j][flat] = 1;
      }
    if (node < 0) {
      for (std::size_t k = 0; k < sz; ++k)
        if (F.low[k] != cplx(0.0) && !tentmask[0][k]) rep.support_ok = false;
    } else {
      for (int j = 0; j < M && rep.support_ok; ++j) {
        const std::vector<cplx>& sl = F.slice(node, j);
        for (std::size_t k = 0; k < sz; ++k)
          if (sl[k] != cplx(0.0) && !tentmask[j][k]) {
            rep.support_ok = false;
            break;
          }
      }
    }
  }

  rep.ball_volume = atom.ball_volume > 0.0
                        ? atom.ball_volume
                        : ball_volume_cached(F.grid.n, atom.ball.radius);
  rep.square_integral = weighted_square_integral(F, s);
  rep.bound = std::pow(rep.ball_volume, -(2.0 / p - 1.0));
  rep.bound_ok = rep.square_integral <= rep.bound * (1.0 + 1e-12);
  rep.margin = rep.square_integral > 0.0
                   ? rep.bound / rep.square_integral
                   : std::numeric_limits<double>::infinity();
  return rep;
}

VerticalCompareResult vertical_compare(const PhaseSpaceField& F, double p) {
  if (!(p > 0.0) || p > 2.0 + 1e-12)
    throw InvalidInput("vertical_compare: p must lie in (0, 2]");
  const SpatialGrid& grid = F.grid;
  const DirectionSet& dirs = F.dirs;
  int M = dirs.size();
  std::size_t sz = grid.size();

  SpSlice vert = make_sp_slice(grid, dirs, 0.0);
  for (int node = 0; node < F.ladder.node_count(); ++node) {
    double w = F.ladder.high[node].weight;
    for (int j = 0; j < M; ++j) {
      const std::vector<cplx>& sl = F.slice(node, j);
      for (std::size_t k = 0; k < sz; ++k) vert[j][k] += w * std::norm(sl[k]);
    }
  }
  for (int j = 0; j < M; ++j)
    for (std::size_t k = 0; k < sz; ++k) {
      vert[j][k] += F.ladder.low_weight() * std::norm(F.low[k]);
      vert[j][k] = std::sqrt(vert[j][k]);
    }

  VerticalCompareResult res;
  res.vertical = sp_lp_norm(grid, dirs, vert, p);
  TentParams params;
  params.p = p;
  params.s = 0.0;
  res.tent = tent_norm(F, params).value;
  if (res.tent == 0.0)
    throw InvalidInput("vertical_compare: zero tent norm");
  res.ratio = res.vertical / res.tent;
  return res;
}

}  // namespace fioh
