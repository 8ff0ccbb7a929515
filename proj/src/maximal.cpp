#include "fioh/maximal.hpp"

#include <algorithm>
#include <cmath>

#include "fioh/fft.hpp"
#include "fioh/phase_ops.hpp"

namespace fioh {

namespace {

// theta_{w,sigma}(D) f for every direction at one ladder node, as |values|.
SpSlice theta_slices_abs(SpaceContext& ctx, const std::vector<cplx>& spectrum,
                         double sigma) {
  const SpatialGrid& grid = ctx.grid();
  int M = ctx.directions().size();
  std::size_t sz = grid.size();
  SpSlice out(M, std::vector<double>(sz));
  parallel_chunks(M, 1, [&](std::size_t d0, std::size_t d1) {
    for (std::size_t d = d0; d < d1; ++d) {
      const SparseSymbol& mult = ctx.family().theta(static_cast<int>(d), sigma);
      std::vector<cplx> tmp(sz, cplx(0.0)), slice(sz);
      double inv = 1.0 / static_cast<double>(sz);
      for (std::size_t k = 0; k < mult.index.size(); ++k)
        tmp[mult.index[k]] = spectrum[mult.index[k]] * (mult.value[k] * inv);
      fft::transform(grid.n, grid.points, +1, tmp.data(), slice.data());
      for (std::size_t i = 0; i < sz; ++i) out[d][i] = std::abs(slice[i]);
    }
  });
  return out;
}

void finish_report(MaximalReport& rep) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double r : rep.max_ratio_per_sigma) {
    if (r <= 0.0) continue;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  rep.max_ratio = hi;
  rep.sigma_spread = (std::isfinite(lo) && lo > 0.0) ? hi / lo : 0.0;
}

}  // namespace

MaximalReport maximal_domination_check(SpaceContext& ctx, const GridField& f,
                                       double decay_order, double lambda,
                                       int output_stride) {
  const SpatialGrid& grid = ctx.grid();
  if (!(lambda > 0.0) || !(decay_order > grid.n / lambda))
    throw InvalidInput("maximal_domination_check: need lambda > 0, N > n/lambda");
  ctx.require_resolved(f);

  MaximalReport rep;
  rep.lambda = lambda;
  rep.decay_order = decay_order;
  rep.output_stride = output_stride;

  std::vector<cplx> spectrum = ctx.transform().spectrum_of(f);
  const DirectionSet& dirs = ctx.directions();
  int M = dirs.size();
  int N = grid.points;

  for (const LadderNode& node : ctx.ladder().high) {
    SpSlice g = theta_slices_abs(ctx, spectrum, node.sigma);
    bool all_zero = true;
    for (const auto& row : g)
      for (double v : row)
        if (v != 0.0) {
          all_zero = false;
          break;
        }
    rep.sigmas.push_back(node.sigma);
    if (all_zero) {
      rep.max_ratio_per_sigma.push_back(0.0);
      continue;
    }

    PhasePeakMax pm(grid, dirs, 1.0 / node.sigma, decay_order);
    SpSlice lhs;
    pm.apply(g, lhs, output_stride);
    SpSlice rhs = m_lambda(grid, dirs, g, lambda);

    double worst = 0.0;
    for (int j = 0; j < M; ++j)
      for (int m0 = 0; m0 < N; m0 += output_stride)
        for (int m1 = 0; m1 < N; m1 += output_stride) {
          std::size_t k = static_cast<std::size_t>(m0) * N + m1;
          double den = rhs[j][k];
          double num = lhs[j][k];
          if (den == 0.0) {
            if (num != 0.0) rep.finite = false;
            continue;
          }
          worst = std::max(worst, num / den);
        }
    rep.max_ratio_per_sigma.push_back(worst);
  }
  finish_report(rep);
  return rep;
}

MaximalReport kernel_average_check(SpaceContext& ctx, const GridField& f,
                                   double decay_order, double lambda,
                                   int output_stride) {
  const SpatialGrid& grid = ctx.grid();
  if (!(lambda > 0.0) || !(decay_order > grid.n / lambda))
    throw InvalidInput("kernel_average_check: need lambda > 0, N > n/lambda");
  ctx.require_resolved(f);

  MaximalReport rep;
  rep.lambda = lambda;
  rep.decay_order = decay_order;
  rep.output_stride = output_stride;

  std::vector<cplx> spectrum = ctx.transform().spectrum_of(f);
  const DirectionSet& dirs = ctx.directions();
  int M = dirs.size();
  int N = grid.points;
  std::size_t sz = grid.size();
  double cell = 1.0;
  for (int a = 0; a < grid.n; ++a) cell *= grid.spacing();

  for (const LadderNode& node : ctx.ladder().high) {
    SpSlice g = theta_slices_abs(ctx, spectrum, node.sigma);
    rep.sigmas.push_back(node.sigma);

    std::vector<std::vector<double>> H(M, std::vector<double>(sz));
    for (int j = 0; j < M; ++j) {
      double wj = cell * dirs.weights[j];
      for (std::size_t k = 0; k < sz; ++k) H[j][k] = wj * g[j][k];
    }
    double inv_sigma = 1.0 / node.sigma;
    PhaseKernelSum ks(grid, dirs, [inv_sigma, decay_order](double rho2) {
      return std::pow(1.0 + inv_sigma * rho2, -decay_order);
    });
    std::vector<std::vector<double>> lhs;
    ks.apply(H, lhs);
    double pref = std::pow(node.sigma, -grid.n);

    SpSlice rhs = m_lambda(grid, dirs, g, lambda);

    double worst = 0.0;
    bool saw_any = false;
    for (int j = 0; j < M; ++j)
      for (int m0 = 0; m0 < N; m0 += output_stride)
        for (int m1 = 0; m1 < N; m1 += output_stride) {
          std::size_t k = static_cast<std::size_t>(m0) * N + m1;
          double num = pref * lhs[j][k];
          double den = rhs[j][k];
          if (den == 0.0 && std::abs(num) < 1e-300) {
            // 0/0 counts as 1 by convention.
            worst = std::max(worst, 1.0);
            continue;
          }
          if (den == 0.0) {
            rep.finite = false;
            continue;
          }
          saw_any = true;
          worst = std::max(worst, num / den);
        }
    rep.max_ratio_per_sigma.push_back(saw_any || worst > 0.0 ? worst : 1.0);
  }
  finish_report(rep);
  return rep;
}

}  // namespace fioh
