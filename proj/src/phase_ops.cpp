#include "fioh/phase_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "fioh/fft.hpp"

namespace fioh {

namespace {

// Squared distance terms for an integer lattice offset, n = 2.
struct PairGeometry {
  double ux, uy;  // center direction
  double vx, vy;  // sample direction
  double angular; // |u - v|^2
};

inline double offset_rho2(const PairGeometry& g, double dx, double dy) {
  double du = std::abs(g.ux * dx + g.uy * dy);
  double dv = std::abs(g.vx * dx + g.vy * dy);
  return std::max(du, dv) + (dx * dx + dy * dy) + g.angular;
}

bool is_antipodal(const DirectionSet& dirs) {
  int M = dirs.size();
  if (M % 2 != 0) return false;
  for (int j = 0; j < M / 2; ++j) {
    for (int a = 0; a < dirs.n; ++a)
      if (dirs.dirs[j + M / 2].u[a] != -dirs.dirs[j].u[a]) return false;
    if (dirs.weights[j + M / 2] != dirs.weights[j]) return false;
  }
  return true;
}

constexpr int kGatherCutoff = 12;

}  // namespace

// ---------------------------------------------------------------------------
// BallSum

struct BallSum::Impl {
  SpatialGrid grid;
  DirectionSet dirs;
  double tau = 0.0;
  bool antipodal = false;
  int reps = 0;  // directions handled explicitly; partners derived

  struct Pair {
    int j = 0;
    std::int64_t count = 0;
    bool fft = false;
    std::vector<std::array<int, 2>> offsets;  // gather path, n = 2
    std::vector<std::array<int, 3>> offsets3; // n = 3
  };
  std::vector<std::vector<Pair>> pairs;  // [rep i]
  std::vector<double> measures;          // all direction indices

  void build();
  void apply2(const std::vector<std::vector<double>>& H,
              std::vector<std::vector<double>>& S) const;
  void apply3(const std::vector<std::vector<double>>& H,
              std::vector<std::vector<double>>& S) const;
};

void BallSum::Impl::build() {
  grid.validate();
  int M = dirs.size();
  antipodal = (grid.n == 2) && is_antipodal(dirs);
  reps = antipodal ? M / 2 : M;
  pairs.assign(reps, {});
  measures.assign(M, 0.0);

  double h = grid.spacing();
  int N = grid.points;
  double t2 = tau * tau;

  for (int i = 0; i < reps; ++i) {
    for (int j = 0; j < M; ++j) {
      Vec d = sub(grid.n, dirs.dirs[i].u, dirs.dirs[j].u);
      double ang = norm_sq(grid.n, d);
      double c2 = t2 - ang;
      if (c2 <= 0.0) continue;
      double r = std::sqrt(c2);
      int reach = static_cast<int>(std::floor(r / h));
      int lo = std::max(-N / 2, -reach);
      int hi = std::min(N / 2 - 1, reach);

      Pair pr;
      pr.j = j;
      if (grid.n == 2) {
        PairGeometry pg{dirs.dirs[i].u[0], dirs.dirs[i].u[1],
                        dirs.dirs[j].u[0], dirs.dirs[j].u[1], ang};
        for (int a = lo; a <= hi; ++a) {
          double dx = a * h;
          for (int b = lo; b <= hi; ++b) {
            double dy = b * h;
            if (offset_rho2(pg, dx, dy) < t2) {
              ++pr.count;
              if (pr.count <= kGatherCutoff) pr.offsets.push_back({a, b});
            }
          }
        }
        pr.fft = pr.count > kGatherCutoff;
        if (pr.fft) pr.offsets.clear();
      } else {
        const Vec& u = dirs.dirs[i].u;
        const Vec& v = dirs.dirs[j].u;
        for (int a = lo; a <= hi; ++a)
          for (int b = lo; b <= hi; ++b)
            for (int c = lo; c <= hi; ++c) {
              Vec dd{a * h, b * h, c * h};
              double du = std::abs(dot(3, u, dd));
              double dv = std::abs(dot(3, v, dd));
              double rho2 = std::max(du, dv) + norm_sq(3, dd) + ang;
              if (rho2 < t2) {
                ++pr.count;
                pr.offsets3.push_back({a, b, c});
              }
            }
      }
      if (pr.count > 0) pairs[i].push_back(std::move(pr));
    }
  }

  double cell = 1.0;
  for (int a = 0; a < grid.n; ++a) cell *= h;
  for (int i = 0; i < reps; ++i) {
    double m = 0.0;
    for (const Pair& pr : pairs[i]) m += dirs.weights[pr.j] * pr.count;
    measures[i] = cell * m;
    if (antipodal) measures[i + M / 2] = measures[i];
  }
}

namespace {

// dst[x] += src at wrapped offset, one spatial shift of a full slice.
void shifted_add(int N, const double* src, double* dst, int a, int b) {
  int sa = ((a % N) + N) % N;
  int sb = ((b % N) + N) % N;
  for (int m0 = 0; m0 < N; ++m0) {
    int s0 = m0 - sa;
    if (s0 < 0) s0 += N;
    const double* srow = src + static_cast<std::size_t>(s0) * N;
    double* drow = dst + static_cast<std::size_t>(m0) * N;
    for (int m1 = 0; m1 < sb; ++m1) drow[m1] += srow[m1 - sb + N];
    for (int m1 = sb; m1 < N; ++m1) drow[m1] += srow[m1 - sb];
  }
}

}  // namespace

void BallSum::Impl::apply2(const std::vector<std::vector<double>>& H,
                           std::vector<std::vector<double>>& S) const {
  int M = dirs.size();
  int N = grid.points;
  std::size_t sz = grid.size();
  std::size_t half = fft::r2c_size_2d(N);

  bool any_fft = false;
  for (const auto& lst : pairs)
    for (const Pair& pr : lst)
      if (pr.fft) any_fft = true;

  std::vector<std::vector<cplx>> Hhat;
  if (any_fft) {
    Hhat.assign(M, {});
    parallel_items(M, [&](std::size_t j) {
      Hhat[j].resize(half);
      fft::forward_r2c_2d(N, H[j].data(), Hhat[j].data());
    });
  }

  S.assign(M, std::vector<double>(sz, 0.0));
  double inv = 1.0 / static_cast<double>(sz);

  parallel_chunks(reps, 1, [&](std::size_t i0, std::size_t i1) {
    std::vector<double> ker;
    std::vector<cplx> khat, acc, acc2;
    std::vector<double> back(sz);
    for (std::size_t i = i0; i < i1; ++i) {
      int i2 = antipodal ? static_cast<int>(i) + M / 2 : -1;
      bool have_fft = false;
      for (const Pair& pr : pairs[i]) {
        if (!pr.fft) continue;
        if (!have_fft) {
          acc.assign(half, cplx(0.0));
          if (i2 >= 0) acc2.assign(half, cplx(0.0));
          ker.resize(sz);
          khat.resize(half);
          have_fft = true;
        }
        std::memset(ker.data(), 0, sz * sizeof(double));
        // Rebuild the indicator; offsets were not stored for FFT pairs.
        double h = grid.spacing();
        double t2 = tau * tau;
        PairGeometry pg{dirs.dirs[i].u[0], dirs.dirs[i].u[1],
                        dirs.dirs[pr.j].u[0], dirs.dirs[pr.j].u[1],
                        norm_sq(2, sub(2, dirs.dirs[i].u, dirs.dirs[pr.j].u))};
        double r = std::sqrt(t2 - pg.angular);
        int reach = static_cast<int>(std::floor(r / h));
        int lo = std::max(-N / 2, -reach);
        int hi = std::min(N / 2 - 1, reach);
        for (int a = lo; a <= hi; ++a) {
          int wa = ((a % N) + N) % N;
          for (int b = lo; b <= hi; ++b) {
            if (offset_rho2(pg, a * h, b * h) < t2) {
              int wb = ((b % N) + N) % N;
              ker[static_cast<std::size_t>(wa) * N + wb] = 1.0;
            }
          }
        }
        fft::forward_r2c_2d(N, ker.data(), khat.data());
        const std::vector<cplx>& hj = Hhat[pr.j];
        for (std::size_t k = 0; k < half; ++k) acc[k] += khat[k] * hj[k];
        if (i2 >= 0) {
          const std::vector<cplx>& hj2 = Hhat[(pr.j + M / 2) % M];
          for (std::size_t k = 0; k < half; ++k) acc2[k] += khat[k] * hj2[k];
        }
      }
      if (have_fft) {
        fft::backward_c2r_2d(N, acc.data(), back.data());
        double* out = S[i].data();
        for (std::size_t k = 0; k < sz; ++k) out[k] = back[k] * inv;
        if (i2 >= 0) {
          fft::backward_c2r_2d(N, acc2.data(), back.data());
          double* out2 = S[i2].data();
          for (std::size_t k = 0; k < sz; ++k) out2[k] = back[k] * inv;
        }
      }
      for (const Pair& pr : pairs[i]) {
        if (pr.fft) continue;
        for (const auto& off : pr.offsets) {
          shifted_add(N, H[pr.j].data(), S[i].data(), off[0], off[1]);
          if (i2 >= 0)
            shifted_add(N, H[(pr.j + M / 2) % M].data(), S[i2].data(), off[0],
                        off[1]);
        }
      }
    }
  });
}

void BallSum::Impl::apply3(const std::vector<std::vector<double>>& H,
                           std::vector<std::vector<double>>& S) const {
  int M = dirs.size();
  int N = grid.points;
  std::size_t sz = grid.size();
  S.assign(M, std::vector<double>(sz, 0.0));
  parallel_chunks(reps, 1, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      for (const Pair& pr : pairs[i]) {
        const std::vector<double>& src = H[pr.j];
        std::vector<double>& dst = S[i];
        for (const auto& off : pr.offsets3) {
          for (int m0 = 0; m0 < N; ++m0) {
            int s0 = ((m0 - off[0]) % N + N) % N;
            for (int m1 = 0; m1 < N; ++m1) {
              int s1 = ((m1 - off[1]) % N + N) % N;
              std::size_t drow = (static_cast<std::size_t>(m0) * N + m1) * N;
              std::size_t srow = (static_cast<std::size_t>(s0) * N + s1) * N;
              for (int m2 = 0; m2 < N; ++m2) {
                int s2 = ((m2 - off[2]) % N + N) % N;
                dst[drow + m2] += src[srow + s2];
              }
            }
          }
        }
      }
    }
  });
}

BallSum::BallSum(const SpatialGrid& grid, const DirectionSet& dirs, double tau)
    : impl_(std::make_unique<Impl>()) {
  if (!(tau > 0.0)) throw InvalidInput("BallSum: radius must be positive");
  impl_->grid = grid;
  impl_->dirs = dirs;
  impl_->tau = tau;
  impl_->build();
}

BallSum::~BallSum() = default;

void BallSum::apply(const std::vector<std::vector<double>>& H,
                    std::vector<std::vector<double>>& S) const {
  if (static_cast<int>(H.size()) != impl_->dirs.size())
    throw InvalidInput("BallSum: direction count mismatch");
  for (const auto& h : H)
    if (h.size() != impl_->grid.size())
      throw InvalidInput("BallSum: slice size mismatch");
  if (impl_->grid.n == 2)
    impl_->apply2(H, S);
  else
    impl_->apply3(H, S);
}

double BallSum::measure(int dir_index) const {
  return impl_->measures.at(dir_index);
}

std::int64_t BallSum::member_count(int center_dir, int sample_dir) const {
  int M = impl_->dirs.size();
  int i = center_dir, j = sample_dir;
  if (impl_->antipodal && i >= M / 2) {
    i -= M / 2;
    j = (j + M / 2) % M;
  }
  for (const auto& pr : impl_->pairs.at(i))
    if (pr.j == j) return pr.count;
  return 0;
}

double BallSum::tau() const { return impl_->tau; }

// ---------------------------------------------------------------------------
// PhaseKernelSum

struct PhaseKernelSum::Impl {
  SpatialGrid grid;
  DirectionSet dirs;
  std::function<double(double)> shape;
  bool antipodal = false;
};

PhaseKernelSum::PhaseKernelSum(const SpatialGrid& grid,
                               const DirectionSet& dirs,
                               std::function<double(double)> shape)
    : impl_(std::make_unique<Impl>()) {
  grid.validate();
  if (grid.n != 2)
    throw InvalidInput("PhaseKernelSum: only n = 2 is supported");
  impl_->grid = grid;
  impl_->dirs = dirs;
  impl_->shape = std::move(shape);
  impl_->antipodal = is_antipodal(dirs);
}

PhaseKernelSum::~PhaseKernelSum() = default;

void PhaseKernelSum::apply(const std::vector<std::vector<double>>& H,
                           std::vector<std::vector<double>>& S) const {
  const SpatialGrid& grid = impl_->grid;
  const DirectionSet& dirs = impl_->dirs;
  int M = dirs.size();
  int N = grid.points;
  std::size_t sz = grid.size();
  std::size_t half = fft::r2c_size_2d(N);
  if (static_cast<int>(H.size()) != M)
    throw InvalidInput("PhaseKernelSum: direction count mismatch");

  std::vector<std::vector<cplx>> Hhat(M);
  parallel_items(M, [&](std::size_t j) {
    Hhat[j].resize(half);
    fft::forward_r2c_2d(N, H[j].data(), Hhat[j].data());
  });

  S.assign(M, std::vector<double>(sz, 0.0));
  double inv = 1.0 / static_cast<double>(sz);
  double h = grid.spacing();
  int reps = impl_->antipodal ? M / 2 : M;

  parallel_chunks(reps, 1, [&](std::size_t i0, std::size_t i1) {
    std::vector<double> ker(sz);
    std::vector<cplx> khat(half), acc(half), acc2;
    std::vector<double> back(sz);
    for (std::size_t i = i0; i < i1; ++i) {
      int i2 = impl_->antipodal ? static_cast<int>(i) + M / 2 : -1;
      std::fill(acc.begin(), acc.end(), cplx(0.0));
      if (i2 >= 0) acc2.assign(half, cplx(0.0));
      for (int j = 0; j < M; ++j) {
        PairGeometry pg{dirs.dirs[i].u[0], dirs.dirs[i].u[1],
                        dirs.dirs[j].u[0], dirs.dirs[j].u[1],
                        norm_sq(2, sub(2, dirs.dirs[i].u, dirs.dirs[j].u))};
        for (int a = -N / 2; a < N / 2; ++a) {
          int wa = ((a % N) + N) % N;
          double dx = a * h;
          for (int b = -N / 2; b < N / 2; ++b) {
            int wb = ((b % N) + N) % N;
            ker[static_cast<std::size_t>(wa) * N + wb] =
                impl_->shape(offset_rho2(pg, dx, b * h));
          }
        }
        fft::forward_r2c_2d(N, ker.data(), khat.data());
        const std::vector<cplx>& hj = Hhat[j];
        for (std::size_t k = 0; k < half; ++k) acc[k] += khat[k] * hj[k];
        if (i2 >= 0) {
          const std::vector<cplx>& hj2 = Hhat[(j + M / 2) % M];
          for (std::size_t k = 0; k < half; ++k) acc2[k] += khat[k] * hj2[k];
        }
      }
      fft::backward_c2r_2d(N, acc.data(), back.data());
      for (std::size_t k = 0; k < sz; ++k) S[i][k] = back[k] * inv;
      if (i2 >= 0) {
        fft::backward_c2r_2d(N, acc2.data(), back.data());
        for (std::size_t k = 0; k < sz; ++k) S[i2][k] = back[k] * inv;
      }
    }
  });
}

// ---------------------------------------------------------------------------
// PhasePeakMax

PhasePeakMax::PhasePeakMax(const SpatialGrid& grid, const DirectionSet& dirs,
                           double inv_sigma, double order)
    : grid_(grid), dirs_(dirs), inv_sigma_(inv_sigma), order_(order) {
  grid.validate();
  if (grid.n != 2) throw InvalidInput("PhasePeakMax: only n = 2 is supported");
  if (!(inv_sigma > 0.0) || !(order > 0.0))
    throw InvalidInput("PhasePeakMax: parameters must be positive");
}

namespace {

constexpr int kBlock = 16;

struct BlockTable {
  int nb = 0;
  std::vector<double> maxima;  // [b0 * nb + b1]
};

// Smallest |d| over the periodic interval offset range [lo, hi] (physical).
inline double interval_abs_min(double lo, double hi) {
  if (lo <= 0.0 && hi >= 0.0) return 0.0;
  return std::min(std::abs(lo), std::abs(hi));
}

inline double interval_dot_abs_min(double ux, double uy, double x0, double x1,
                                   double y0, double y1) {
  // min over the box of |ux*dx + uy*dy|
  double cands[4] = {ux * x0 + uy * y0, ux * x0 + uy * y1, ux * x1 + uy * y0,
                     ux * x1 + uy * y1};
  double lo = cands[0], hi = cands[0];
  for (double c : cands) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  return interval_abs_min(lo, hi);
}

}  // namespace

void PhasePeakMax::apply(const std::vector<std::vector<double>>& H,
                         std::vector<std::vector<double>>& out,
                         int stride) const {
  const SpatialGrid& grid = grid_;
  const DirectionSet& dirs = dirs_;
  int M = dirs.size();
  int N = grid.points;
  double h = grid.spacing();
  double L = grid.length;
  std::size_t sz = grid.size();
  if (static_cast<int>(H.size()) != M)
    throw InvalidInput("PhasePeakMax: direction count mismatch");

  int nb = (N + kBlock - 1) / kBlock;
  std::vector<BlockTable> blocks(M);
  std::vector<double> dirmax(M, 0.0);
  for (int j = 0; j < M; ++j) {
    blocks[j].nb = nb;
    blocks[j].maxima.assign(static_cast<std::size_t>(nb) * nb, 0.0);
    for (int m0 = 0; m0 < N; ++m0)
      for (int m1 = 0; m1 < N; ++m1) {
        double v = H[j][static_cast<std::size_t>(m0) * N + m1];
        auto& cell = blocks[j].maxima[(m0 / kBlock) * nb + (m1 / kBlock)];
        if (v > cell) cell = v;
      }
    for (double v : blocks[j].maxima) dirmax[j] = std::max(dirmax[j], v);
  }

  // Directions ordered by angular proximity, shared by all centers of the
  // same relative offset (equispaced sets); recomputed per center otherwise.
  out.assign(M, std::vector<double>(sz, 0.0));

  auto weight = [&](double rho2) {
    return std::pow(1.0 + inv_sigma_ * rho2, -order_);
  };

  parallel_chunks(M, 1, [&](std::size_t ii0, std::size_t ii1) {
    for (std::size_t i = ii0; i < ii1; ++i) {
      const Vec& u = dirs.dirs[i].u;
      std::vector<std::pair<double, int>> order(M);
      for (int j = 0; j < M; ++j)
        order[j] = {norm_sq(2, sub(2, u, dirs.dirs[j].u)), j};
      std::sort(order.begin(), order.end());

      for (int m0 = 0; m0 < N; m0 += stride)
        for (int m1 = 0; m1 < N; m1 += stride) {
          std::size_t flat = static_cast<std::size_t>(m0) * N + m1;
          double best = H[i][flat];  // (y,v) = (x,w) term
          for (const auto& [ang, j] : order) {
            double wcap = weight(ang);
            if (wcap * dirmax[j] <= best) {
              if (ang > 0.0) break;  // farther directions only get worse
              continue;
            }
            const Vec& v = dirs.dirs[j].u;
            const BlockTable& bt = blocks[j];
            for (int b0 = 0; b0 < nb; ++b0) {
              // Periodic interval of dx spanned by this block row.
              int y0 = b0 * kBlock;
              int y1 = std::min(N - 1, y0 + kBlock - 1);
              for (int b1 = 0; b1 < nb; ++b1) {
                double bm = bt.maxima[static_cast<std::size_t>(b0) * nb + b1];
                if (bm <= 0.0) continue;
                int z0 = b1 * kBlock;
                int z1 = std::min(N - 1, z0 + kBlock - 1);
                // dx = x - y over the torus; interval per axis, widened to
                // the full torus when the block straddles the wrap seam.
                double dx_lo = grid.min_image((m0 - y1) * h);
                double dx_hi = dx_lo + (y1 - y0) * h;
                if (dx_hi >= 0.5 * L) { dx_lo = -0.5 * L; dx_hi = 0.5 * L; }
                double dy_lo = grid.min_image((m1 - z1) * h);
                double dy_hi = dy_lo + (z1 - z0) * h;
                if (dy_hi >= 0.5 * L) { dy_lo = -0.5 * L; dy_hi = 0.5 * L; }
                double sp_min =
                    interval_abs_min(dx_lo, dx_hi) * interval_abs_min(dx_lo, dx_hi) +
                    interval_abs_min(dy_lo, dy_hi) * interval_abs_min(dy_lo, dy_hi);
                double par_min = std::max(
                    interval_dot_abs_min(u[0], u[1], dx_lo, dx_hi, dy_lo, dy_hi),
                    interval_dot_abs_min(v[0], v[1], dx_lo, dx_hi, dy_lo, dy_hi));
                double rho2_lb = ang + sp_min + par_min;
                if (weight(rho2_lb) * bm <= best) continue;
                for (int y = y0; y <= y1; ++y) {
                  double dx = grid.min_image((m0 - y) * h);
                  for (int z = z0; z <= z1; ++z) {
                    double val = H[j][static_cast<std::size_t>(y) * N + z];
                    if (val <= best) continue;  // weight <= 1
                    double dy = grid.min_image((m1 - z) * h);
                    double du = std::abs(u[0] * dx + u[1] * dy);
                    double dv = std::abs(v[0] * dx + v[1] * dy);
                    double rho2 = std::max(du, dv) + dx * dx + dy * dy + ang;
                    double cand = val * weight(rho2);
                    if (cand > best) best = cand;
                  }
                }
              }
            }
          }
          out[i][flat] = best;
        }
    }
  });
}

}  // namespace fioh
