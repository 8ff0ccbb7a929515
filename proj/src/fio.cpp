#include "fioh/fio.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fioh {

namespace {

Vec random_box_point(std::mt19937_64& eng, int dim, double half_width) {
  Vec x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) x[a] = uniform(eng, -half_width, half_width);
  return x;
}

Vec random_sphere_point(std::mt19937_64& eng, int dim) {
  for (;;) {
    Vec v{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) v[a] = normal01(eng);
    double r = norm(dim, v);
    if (r > 1e-6) {
      for (int a = 0; a < dim; ++a) v[a] /= r;
      return v;
    }
  }
}

double fd_step() { return 1e-4; }

Vec grad_x_of(const PhaseFunction& phase, int dim, const Vec& x,
              const Vec& eta) {
  if (phase.grad_x) return phase.grad_x(x, eta);
  Vec g{0.0, 0.0, 0.0};
  double h = fd_step();
  for (int a = 0; a < dim; ++a) {
    Vec xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    g[a] = (phase.value(xp, eta) - phase.value(xm, eta)) / (2.0 * h);
  }
  return g;
}

}  // namespace

PhaseValidationReport validate_phase(const PhaseFunction& phase, int dim,
                                     double box_half_width, int sample_budget,
                                     std::uint64_t seed) {
  if (!phase.value) throw InvalidInput("validate_phase: missing evaluator");
  PhaseValidationReport rep;
  rep.samples = sample_budget;
  rep.min_hessian_det = std::numeric_limits<double>::infinity();
  rep.injectivity_margin = std::numeric_limits<double>::infinity();
  std::mt19937_64 eng(seed);
  double h = fd_step();

  for (int s = 0; s < sample_budget; ++s) {
    Vec x = random_box_point(eng, dim, box_half_width);
    Vec eta = random_sphere_point(eng, dim);
    double base = phase.value(x, eta);
    if (!std::isfinite(base))
      throw InvalidInput("validate_phase: non-finite phase value");

    for (double lambda : {2.0, 0.5}) {
      Vec scaled = eta;
      for (int a = 0; a < dim; ++a) scaled[a] *= lambda;
      double v = phase.value(x, scaled);
      double err = std::abs(v - lambda * base) /
                   std::max(1.0, std::abs(lambda * base));
      rep.homogeneity_error = std::max(rep.homogeneity_error, err);
    }

    // Second derivatives at |eta| = 1 by central differences: xx, eta-eta
    // and the mixed block.
    double hess[3][3] = {};
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        Vec ep = eta, em = eta;
        ep[j] += h;
        em[j] -= h;
        double mixed = (phase.value(xp, ep) - phase.value(xp, em) -
                        phase.value(xm, ep) + phase.value(xm, em)) /
                       (4.0 * h * h);
        hess[i][j] = mixed;
        rep.max_mixed_derivative = std::max(rep.max_mixed_derivative,
                                            std::abs(mixed));
        // Pure second derivatives enter condition (2) as well.
        if (i == j) {
          Vec q = x;
          q[i] += h;
          Vec r = x;
          r[i] -= h;
          double dxx = (phase.value(q, eta) - 2.0 * base + phase.value(r, eta)) /
                       (h * h);
          double epp = 0.0;
          {
            Vec e2p = eta, e2m = eta;
            e2p[i] += h;
            e2m[i] -= h;
            epp = (phase.value(x, e2p) - 2.0 * base + phase.value(x, e2m)) /
                  (h * h);
          }
          rep.max_mixed_derivative =
              std::max({rep.max_mixed_derivative, std::abs(dxx), std::abs(epp)});
        }
      }
    }
    double det;
    if (dim == 2) {
      det = hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0];
    } else {
      det = hess[0][0] * (hess[1][1] * hess[2][2] - hess[1][2] * hess[2][1]) -
            hess[0][1] * (hess[1][0] * hess[2][2] - hess[1][2] * hess[2][0]) +
            hess[0][2] * (hess[1][0] * hess[2][1] - hess[1][1] * hess[2][0]);
    }
    rep.min_hessian_det = std::min(rep.min_hessian_det, std::abs(det));

    // Injectivity probe of eta -> dx Phi on the sphere.
    Vec eta2 = random_sphere_point(eng, dim);
    double sep = norm(dim, sub(dim, eta, eta2));
    if (sep > 1e-3) {
      Vec g1 = grad_x_of(phase, dim, x, eta);
      Vec g2 = grad_x_of(phase, dim, x, eta2);
      double margin = norm(dim, sub(dim, g1, g2)) / sep;
      rep.injectivity_margin = std::min(rep.injectivity_margin, margin);
    }
  }

  rep.homogeneous = rep.homogeneity_error <= 1e-8;
  rep.derivatives_bounded = std::isfinite(rep.max_mixed_derivative);
  rep.hessian_nondegenerate = rep.min_hessian_det > 1e-8;
  rep.injective = rep.injectivity_margin > 1e-6;
  return rep;
}

FIODescriptor make_descriptor(const PhaseFunction& phase,
                              const SymbolFunction& symbol, int dim,
                              double box_half_width, int sample_budget,
                              std::uint64_t seed) {
  FIODescriptor op;
  op.phase = phase;
  op.symbol = symbol;
  op.report = validate_phase(phase, dim, box_half_width, sample_budget, seed);
  return op;
}

GridField apply_fio(const FIODescriptor& op, const GridField& f,
                    std::uint64_t budget_points, bool force_direct) {
  const SpatialGrid& g = f.grid;
  g.validate();
  if (!force_direct && op.phase.has_shift_form() && op.symbol.x_independent) {
    const auto& shift = op.phase.shift;
    const auto& sym = op.symbol.value;
    Vec zero{0.0, 0.0, 0.0};
    return apply_multiplier(
        [&](const Vec& xi) {
          return std::polar(1.0, shift(xi)) * sym(zero, xi);
        },
        f);
  }

  std::uint64_t cost = 1;
  for (int a = 0; a < 2 * g.n; ++a) cost *= static_cast<std::uint64_t>(g.points);
  if (cost > budget_points)
    throw BudgetError("apply_fio: direct quadrature cost " +
                      std::to_string(cost) + " exceeds the budget");

  SpectralField spec = to_spectrum(f);
  std::size_t sz = g.size();

  // Only frequencies carrying spectral mass contribute.
  std::vector<std::pair<Vec, cplx>> modes;
  for (std::size_t i = 0; i < sz; ++i)
    if (spec.coefficients[i] != cplx(0.0))
      modes.emplace_back(g.frequency(i), spec.coefficients[i]);

  double cellw = 1.0;
  for (int a = 0; a < g.n; ++a) cellw *= g.freq_step();

  GridField out(g);
  parallel_chunks(sz, 1024, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      Vec x = g.position(i);
      cplx acc = 0.0;
      for (const auto& [eta, coeff] : modes) {
        double ph = op.phase.value(x, eta);
        acc += std::polar(1.0, ph) * op.symbol.value(x, eta) * coeff;
      }
      out.values[i] = acc * cellw;
    }
  });
  return out;
}

GridField propagator(PropagatorKind kind, double t, const GridField& f) {
  switch (kind) {
    case PropagatorKind::Cosine:
      return apply_multiplier(
          [&](const Vec& xi) {
            return cplx(std::cos(t * norm(f.grid.n, xi)), 0.0);
          },
          f);
    case PropagatorKind::Sinc:
      return apply_multiplier(
          [&](const Vec& xi) {
            double r = norm(f.grid.n, xi);
            return cplx(r == 0.0 ? t : std::sin(t * r) / r, 0.0);
          },
          f);
    case PropagatorKind::HalfWave:
      return apply_multiplier(
          [&](const Vec& xi) {
            return std::polar(1.0, t * norm(f.grid.n, xi));
          },
          f);
  }
  throw InvalidInput("propagator: unknown kind");
}

// ---------------------------------------------------------------------------
// Built-ins

PhaseFunction builtin_phase(const std::string& name, double t) {
  PhaseFunction p;
  p.name = name;
  if (name == "identity") {
    p.value = [](const Vec& x, const Vec& eta) { return dot(3, x, eta); };
    p.shift = [](const Vec&) { return 0.0; };
    p.grad_x = [](const Vec&, const Vec& eta) { return eta; };
    return p;
  }
  if (name == "halfwave") {
    p.value = [t](const Vec& x, const Vec& eta) {
      return dot(3, x, eta) + t * norm(3, eta);
    };
    p.shift = [t](const Vec& eta) { return t * norm(3, eta); };
    p.grad_x = [](const Vec&, const Vec& eta) { return eta; };
    return p;
  }
  if (name == "quadratic-x1") {
    // x.eta + t x1^2 |eta|; degree-one homogeneous, non-multiplier.
    p.value = [t](const Vec& x, const Vec& eta) {
      return dot(3, x, eta) + t * x[0] * x[0] * norm(3, eta);
    };
    return p;
  }
  throw InvalidInput("builtin_phase: unknown name " + name);
}

SymbolFunction builtin_symbol(const std::string& name) {
  SymbolFunction s;
  s.name = name;
  if (name == "one") {
    s.value = [](const Vec&, const Vec&) { return cplx(1.0, 0.0); };
    return s;
  }
  if (name == "high-pass") {
    // Order zero, vanishing for |eta| <= 1/2.
    s.low_cutoff = 0.5;
    s.value = [](const Vec&, const Vec& eta) {
      double r = norm(3, eta);
      return cplx(smooth_step(2.0 * (r - 0.5)), 0.0);
    };
    return s;
  }
  if (name == "oscillating-x") {
    s.x_independent = false;
    s.value = [](const Vec& x, const Vec&) {
      return cplx(1.0 + 0.25 * std::sin(x[0]), 0.0);
    };
    return s;
  }
  throw InvalidInput("builtin_symbol: unknown name " + name);
}

std::vector<std::string> builtin_phase_names() {
  return {"identity", "halfwave", "quadratic-x1"};
}

std::vector<std::string> builtin_symbol_names() {
  return {"one", "high-pass", "oscillating-x"};
}

// ---------------------------------------------------------------------------
// Experiments

BoundednessReport boundedness_experiment(
    const std::function<GridField(const GridField&)>& op, SpaceContext& ctx,
    double p, double s, SpacePairMode mode,
    const std::vector<GridField>& family) {
  BoundednessReport rep;
  double gap = sp_exponent(ctx.grid().n, p);
  for (const GridField& f : family) {
    GridField Tf = op(f);
    double num, den;
    if (mode == SpacePairMode::HpFioSame) {
      num = ctx.hpfio_norm(Tf, p, s).value;
      den = ctx.hpfio_norm(f, p, s).value;
    } else {
      num = ctx.local_hardy_norm(Tf, p, s - gap).value;
      den = ctx.local_hardy_norm(f, p, s + gap).value;
    }
    double r = den > 0.0 ? num / den : 0.0;
    rep.ratios.push_back(r);
    rep.max_ratio = std::max(rep.max_ratio, r);
  }
  return rep;
}

GrowthReport halfwave_growth_experiment(double p, double s, int refinements,
                                        int base_points, double base_length,
                                        int direction_count,
                                        double bump_width) {
  if (refinements < 4)
    throw InvalidInput(
        "halfwave_growth_experiment: need at least 4 refinements for a "
        "conclusive verdict");
  GrowthReport rep;
  for (int k = 0; k < refinements; ++k) {
    SpatialGrid grid;
    grid.n = 2;
    grid.points = base_points << k;
    grid.length = base_length * (1 << k);
    SpaceContext ctx(grid, direction_count, 3, 4);

    TestFieldSpec spec;
    spec.kind = TestFieldSpec::Kind::GaussianBump;
    spec.width = bump_width;
    GridField bump = make_test_field(grid, spec);
    GridField f = ctx.apply_q(bump);

    double den = ctx.hpfio_norm(f, p, s).value;
    GridField half = propagator(PropagatorKind::HalfWave, 1.0, f);
    GridField cosine = propagator(PropagatorKind::Cosine, 1.0, f);
    rep.box_lengths.push_back(grid.length);
    rep.halfwave_ratios.push_back(ctx.hpfio_norm(half, p, s).value / den);
    rep.cosine_ratios.push_back(ctx.hpfio_norm(cosine, p, s).value / den);
  }

  rep.growth_verdict = true;
  int n = static_cast<int>(rep.halfwave_ratios.size());
  for (int k = n - 3; k < n; ++k)
    if (!(rep.halfwave_ratios[k] >= 1.5 * rep.halfwave_ratios[k - 1]))
      rep.growth_verdict = false;
  double cmin = *std::min_element(rep.cosine_ratios.begin(),
                                  rep.cosine_ratios.end());
  double cmax = *std::max_element(rep.cosine_ratios.begin(),
                                  rep.cosine_ratios.end());
  rep.cosine_bounded = cmax <= 2.0 * cmin;
  return rep;
}

}  // namespace fioh
