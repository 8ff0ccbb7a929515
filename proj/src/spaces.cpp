#include "fioh/spaces.hpp"

#include <algorithm>
#include <cmath>

#include "fioh/fft.hpp"
#include "fioh/quadrature.hpp"

namespace fioh {

double sp_exponent(int dim, double p) {
  if (!(p > 0.0)) throw InvalidInput("sp_exponent: p must be positive");
  double invp = std::isinf(p) ? 0.0 : 1.0 / p;
  return 0.5 * (dim - 1) * std::abs(invp - 0.5);
}

SpaceContext::SpaceContext(const SpatialGrid& grid, int direction_count,
                           int octaves, int per_octave)
    : grid_(grid),
      dirs_(grid.n == 2 ? DirectionSet::equispaced_circle(direction_count)
                        : DirectionSet::quasi_uniform_sphere(direction_count)),
      ladder_(ScaleLadder::make(octaves, per_octave)) {
  dirs_.require_resolves(ladder_.sigma_min());
  family_ = std::make_shared<PacketFamily>(grid_, dirs_);
  transform_ = std::make_unique<WaveTransform>(family_, ladder_);
}

const std::vector<double>& SpaceContext::q_symbol() const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (q_cache_.empty()) {
    std::size_t sz = grid_.size();
    q_cache_.resize(sz);
    for (std::size_t i = 0; i < sz; ++i) {
      double r = norm(grid_.n, grid_.frequency(i));
      q_cache_[i] = r <= 2.0 ? 1.0 : smooth_step(3.0 - r);
    }
  }
  return q_cache_;
}

GridField SpaceContext::bessel(const GridField& f, double s) const {
  if (s == 0.0) return f;
  return apply_multiplier(
      [&](const Vec& xi) {
        return cplx(std::pow(1.0 + norm_sq(grid_.n, xi), 0.5 * s), 0.0);
      },
      f);
}

GridField SpaceContext::apply_q(const GridField& f) const {
  return apply_multiplier(q_symbol(), f);
}

GridField SpaceContext::apply_high_cut(const GridField& f) const {
  const std::vector<double>& q = q_symbol();
  std::vector<double> hi(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) hi[i] = 1.0 - q[i];
  return apply_multiplier(hi, f);
}

void SpaceContext::require_resolved(const GridField& f) const {
  if (transform_->uncovered_energy_fraction(f) > 1e-6)
    throw ResolutionError(
        "field has spectral mass beyond the ladder coverage band");
}

std::vector<std::vector<cplx>> SpaceContext::theta_node(
    const std::vector<cplx>& spectrum, int node) const {
  int M = dirs_.size();
  double sigma = ladder_.high.at(node).sigma;
  std::size_t sz = grid_.size();
  std::vector<std::vector<cplx>> slices(M);
  parallel_chunks(M, 1, [&](std::size_t d0, std::size_t d1) {
    for (std::size_t d = d0; d < d1; ++d) {
      const SparseSymbol& mult = family_->theta(static_cast<int>(d), sigma);
      std::vector<cplx> tmp(sz, cplx(0.0));
      double inv = 1.0 / static_cast<double>(sz);
      for (std::size_t k = 0; k < mult.index.size(); ++k)
        tmp[mult.index[k]] = spectrum[mult.index[k]] * (mult.value[k] * inv);
      slices[d].resize(sz);
      fft::transform(grid_.n, grid_.points, +1, tmp.data(), slices[d].data());
    }
  });
  return slices;
}

SpaceContext::Stacks SpaceContext::lusin_stacks(
    const GridField& f, const std::vector<double>& s_values, bool theta_packets,
    bool include_low) const {
  require_resolved(f);
  std::vector<cplx> spectrum = transform_->spectrum_of(f);

  LusinAccumulator high_acc(grid_, dirs_, s_values);
  for (int node = 0; node < ladder_.node_count(); ++node) {
    auto slices = theta_packets ? theta_node(spectrum, node)
                                : transform_->high_node(spectrum, node);
    high_acc.add_node(ladder_.high[node].sigma, ladder_.high[node].weight,
                      slices);
  }

  Stacks out;
  for (double s : s_values) out.high[s] = high_acc.result(s);

  if (include_low) {
    LusinAccumulator low_acc(grid_, dirs_, s_values);
    low_acc.add_low(ladder_.low_sigma(), ladder_.low_weight(),
                    transform_->low_slice(spectrum));
    for (double s : s_values) {
      SpSlice low = low_acc.result(s);
      SpSlice full = out.high[s];
      for (std::size_t j = 0; j < full.size(); ++j)
        for (std::size_t k = 0; k < full[j].size(); ++k)
          full[j][k] = std::sqrt(full[j][k] * full[j][k] +
                                 low[j][k] * low[j][k]);
      out.full[s] = std::move(full);
    }
  }
  return out;
}

double SpaceContext::hardy_square_part(const GridField& g, double p) const {
  std::vector<cplx> spectrum = transform_->spectrum_of(g);
  std::size_t sz = grid_.size();
  std::vector<double> sq(sz, 0.0);
  const RadialProfile& psi = RadialProfile::instance();
  std::vector<cplx> tmp(sz), slice(sz);
  for (const LadderNode& node : ladder_.high) {
    double inv = 1.0 / static_cast<double>(sz);
    for (std::size_t i = 0; i < sz; ++i) {
      double r = norm(grid_.n, grid_.frequency(i));
      tmp[i] = spectrum[i] * (psi.eval(node.sigma * r) * inv);
    }
    fft::transform(grid_.n, grid_.points, +1, tmp.data(), slice.data());
    for (std::size_t i = 0; i < sz; ++i)
      sq[i] += node.weight * std::norm(slice[i]);
  }
  GridField sf(grid_);
  for (std::size_t i = 0; i < sz; ++i) sf.values[i] = std::sqrt(sq[i]);
  return lp_norm(sf, p);
}

NormResult SpaceContext::local_hardy_norm(const GridField& f, double p,
                                          double s) const {
  require_resolved(f);
  GridField g = bessel(f, s);
  NormResult res;
  res.low_part = lp_norm(apply_q(g), p);
  res.square_part = hardy_square_part(apply_high_cut(g), p);
  res.value = res.low_part + res.square_part;
  return res;
}

NormResult SpaceContext::hpfio_norm(const GridField& f, double p,
                                    double s) const {
  NormResult res;
  Stacks weighted = lusin_stacks(f, {s}, false, true);
  res.secondary = sp_lp_norm(grid_, dirs_, weighted.full[s], p);
  if (s == 0.0) {
    res.value = res.secondary;
    res.mode_ratio = 1.0;
  } else {
    GridField g = bessel(f, s);
    Stacks definition = lusin_stacks(g, {0.0}, false, true);
    res.value = sp_lp_norm(grid_, dirs_, definition.full[0.0], p);
    res.mode_ratio = res.secondary > 0.0 ? res.value / res.secondary : 0.0;
  }
  return res;
}

NormResult SpaceContext::equivalent_norm_A(const GridField& f, double p,
                                           double s) const {
  NormResult res;
  if (std::isinf(p)) {
    // Carleson route over the standard menu; needs the materialized high
    // part of the transform.
    double bytes = static_cast<double>(grid_.size()) * dirs_.size() *
                   ladder_.node_count() * 16.0;
    if (bytes > 512.0 * 1024.0 * 1024.0)
      throw BudgetError("equivalent_norm_A: p = infinity needs a smaller grid");
    require_resolved(f);
    PhaseSpaceField Wh = transform_->analyze(f, TransformPart::HighOnly);
    BallMenu menu = BallMenu::standard(grid_, dirs_);
    SpSlice c = carleson(Wh, s, 0.0, menu);
    double m = 0.0;
    for (const auto& row : c)
      for (double v : row) m = std::max(m, v);
    res.low_part = lp_norm(apply_q(f), p);
    res.square_part = m;
    res.value = res.low_part + res.square_part;
    return res;
  }
  Stacks stacks = lusin_stacks(f, {s}, false, false);
  res.low_part = lp_norm(apply_q(f), p);
  res.square_part = sp_lp_norm(grid_, dirs_, stacks.high[s], p);
  res.value = res.low_part + res.square_part;
  return res;
}

NormResult SpaceContext::theta_square_norm(const GridField& f, double p) const {
  NormResult res;
  Stacks stacks = lusin_stacks(f, {0.0}, true, false);
  res.low_part = lp_norm(apply_q(f), p);
  res.square_part = sp_lp_norm(grid_, dirs_, stacks.high[0.0], p);
  res.value = res.low_part + res.square_part;
  return res;
}

NormResult SpaceContext::directional_norm(const GridField& f, double p,
                                          double s) const {
  if (std::isinf(p))
    throw InvalidInput("directional_norm: p = infinity is not supported");
  require_resolved(f);
  NormResult res;
  res.low_part = lp_norm(apply_q(f), p);
  int M = dirs_.size();
  double sum = 0.0;
  for (int d = 0; d < M; ++d) {
    GridField g = apply_sparse(family_->phi_omega(d), f);
    NormResult h = local_hardy_norm(g, p, s);
    sum += dirs_.weights[d] * std::pow(h.value, p);
  }
  res.square_part = std::pow(sum, 1.0 / p);
  res.value = res.low_part + res.square_part;
  return res;
}

// ---------------------------------------------------------------------------
// Standard test corpus

std::vector<GridField> SpaceContext::standard_family(const SpatialGrid& grid) {
  std::vector<GridField> out;
  out.reserve(20);
  const double widths[5] = {0.35, 0.5, 0.65, 0.8, 1.0};
  for (double w : widths) {
    TestFieldSpec spec;
    spec.kind = TestFieldSpec::Kind::GaussianBump;
    spec.width = w;
    out.push_back(make_test_field(grid, spec));
  }
  for (int k = 0; k < 5; ++k) {
    TestFieldSpec spec;
    spec.kind = TestFieldSpec::Kind::BandLimitedRandom;
    spec.seed = 101 + static_cast<std::uint64_t>(k);
    spec.band_limit = 12.0;
    out.push_back(make_test_field(grid, spec));
  }
  const int packet_slots[5] = {0, 9, 21, 32, 50};
  const double packet_sigmas[5] = {0.25, 0.125, 0.25, 0.125, 0.3};
  for (int k = 0; k < 5; ++k) {
    TestFieldSpec spec;
    spec.kind = TestFieldSpec::Kind::CoherentPacket;
    double angle = kTwoPi * packet_slots[k] / 64.0;
    spec.omega = vec2(std::cos(angle), std::sin(angle));
    spec.sigma = packet_sigmas[k];
    out.push_back(make_test_field(grid, spec));
  }
  const double annulus_sigmas[5] = {1.0, 0.7, 0.5, 0.25, 0.125};
  for (double s0 : annulus_sigmas) {
    TestFieldSpec spec;
    spec.kind = TestFieldSpec::Kind::RadialAnnulus;
    spec.sigma = s0;
    out.push_back(make_test_field(grid, spec));
  }
  return out;
}

std::vector<std::string> SpaceContext::standard_family_names() {
  std::vector<std::string> names;
  const double widths[5] = {0.35, 0.5, 0.65, 0.8, 1.0};
  for (double w : widths) names.push_back("gauss-w" + std::to_string(w));
  for (int k = 0; k < 5; ++k) names.push_back("random-" + std::to_string(101 + k));
  const int slots[5] = {0, 9, 21, 32, 50};
  const double ps[5] = {0.25, 0.125, 0.25, 0.125, 0.3};
  for (int k = 0; k < 5; ++k)
    names.push_back("packet-a" + std::to_string(slots[k]) + "-s" +
                    std::to_string(ps[k]));
  const double as[5] = {1.0, 0.7, 0.5, 0.25, 0.125};
  for (double s0 : as) names.push_back("annulus-s" + std::to_string(s0));
  return names;
}

// ---------------------------------------------------------------------------
// Sobolev embedding experiment

EmbeddingReport embedding_experiment(const SpatialGrid& grid,
                                     int direction_count, double p, double s,
                                     const std::vector<double>& sigmas,
                                     double packet_angle) {
  if (sigmas.empty()) throw InvalidInput("embedding_experiment: no scales");
  double sigma_min = *std::min_element(sigmas.begin(), sigmas.end());
  // Ladder deep enough that every packet band is fully covered.
  int octaves = std::max(
      5, static_cast<int>(std::ceil(std::log2(2.0 / sigma_min))) + 1);
  SpaceContext ctx(grid, direction_count, octaves, 4);

  double gap = sp_exponent(grid.n, p);
  EmbeddingReport rep;
  rep.p = p;
  rep.s = s;
  rep.sigmas = sigmas;
  for (double s0 : sigmas) {
    TestFieldSpec spec;
    spec.kind = TestFieldSpec::Kind::CoherentPacket;
    spec.omega = vec2(std::cos(packet_angle), std::sin(packet_angle));
    spec.sigma = s0;
    GridField f = make_test_field(grid, spec);
    rep.upper_norms.push_back(ctx.local_hardy_norm(f, p, s + gap).value);
    rep.fio_norms.push_back(ctx.hpfio_norm(f, p, s).value);
    rep.lower_norms.push_back(ctx.local_hardy_norm(f, p, s - gap).value);
  }
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    rep.upper_constant =
        std::max(rep.upper_constant, rep.fio_norms[k] / rep.upper_norms[k]);
    rep.lower_constant =
        std::max(rep.lower_constant, rep.lower_norms[k] / rep.fio_norms[k]);
  }
  std::vector<double> x(sigmas.size()), y(sigmas.size());
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    x[k] = std::log(1.0 / sigmas[k]);
    y[k] = std::log(rep.upper_norms[k] / rep.lower_norms[k]);
  }
  rep.slope_gap = fit_line(x, y).slope;
  return rep;
}

}  // namespace fioh
