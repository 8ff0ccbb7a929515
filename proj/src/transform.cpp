#include "fioh/transform.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "fioh/fft.hpp"

namespace fioh {

ScaleLadder ScaleLadder::make(int octaves, int per_octave) {
  if (octaves < 1 || per_octave < 1)
    throw InvalidInput("ScaleLadder: need octaves >= 1 and nodes >= 1");
  ScaleLadder ladder;
  ladder.octaves = octaves;
  ladder.per_octave = per_octave;
  double w = std::log(2.0) / per_octave;
  for (int j = 0; j < octaves; ++j)
    for (int q = 0; q < per_octave; ++q) {
      LadderNode node;
      node.octave = j;
      node.sigma = std::exp2(-j - 1.0 + (q + 0.5) / per_octave);
      node.weight = w;
      ladder.high.push_back(node);
    }
  return ladder;
}

double ScaleLadder::sigma_min() const {
  double m = 1.0;
  for (const LadderNode& n : high) m = std::min(m, n.sigma);
  return m;
}

PhaseSpaceField::PhaseSpaceField(const SpatialGrid& g, const DirectionSet& d,
                                 const ScaleLadder& l)
    : grid(g), dirs(d), ladder(l) {
  low.assign(g.size(), cplx(0.0));
  high.assign(static_cast<std::size_t>(l.node_count()) * d.size(),
              std::vector<cplx>(g.size(), cplx(0.0)));
}

std::vector<cplx>& PhaseSpaceField::slice(int node, int dir) {
  return high.at(static_cast<std::size_t>(node) * dirs.size() + dir);
}

const std::vector<cplx>& PhaseSpaceField::slice(int node, int dir) const {
  return high.at(static_cast<std::size_t>(node) * dirs.size() + dir);
}

// ---------------------------------------------------------------------------

WaveTransform::WaveTransform(std::shared_ptr<PacketFamily> family,
                             const ScaleLadder& ladder)
    : family_(std::move(family)), ladder_(ladder) {
  if (!family_) throw InvalidInput("WaveTransform: null packet family");
  // The finest packets must still intersect the lattice.
  const SpatialGrid& g = family_->grid();
  double corner = g.max_freq() * std::sqrt(static_cast<double>(g.n));
  if (0.5 / ladder_.sigma_min() > corner)
    throw ResolutionError("ladder finer than the frequency lattice");
}

std::vector<cplx> WaveTransform::spectrum_of(const GridField& f) const {
  if (!(f.grid == grid()))
    throw InvalidInput("transform: field grid does not match family grid");
  if (!all_finite(f.values)) throw InvalidInput("transform: non-finite input");
  std::vector<cplx> spec(f.values.size());
  fft::transform(f.grid.n, f.grid.points, -1, f.values.data(), spec.data());
  return spec;
}

namespace {

std::vector<cplx> multiply_inverse(const SpatialGrid& g,
                                   const std::vector<cplx>& spec,
                                   const std::vector<double>& symbol) {
  std::size_t sz = g.size();
  std::vector<cplx> tmp(sz);
  double inv = 1.0 / static_cast<double>(sz);
  for (std::size_t i = 0; i < sz; ++i) tmp[i] = spec[i] * (symbol[i] * inv);
  std::vector<cplx> out(sz);
  fft::transform(g.n, g.points, +1, tmp.data(), out.data());
  return out;
}

std::vector<cplx> multiply_inverse(const SpatialGrid& g,
                                   const std::vector<cplx>& spec,
                                   const SparseSymbol& symbol) {
  std::size_t sz = g.size();
  std::vector<cplx> tmp(sz, cplx(0.0));
  double inv = 1.0 / static_cast<double>(sz);
  for (std::size_t k = 0; k < symbol.index.size(); ++k)
    tmp[symbol.index[k]] = spec[symbol.index[k]] * (symbol.value[k] * inv);
  std::vector<cplx> out(sz);
  fft::transform(g.n, g.points, +1, tmp.data(), out.data());
  return out;
}

}  // namespace

std::vector<std::vector<cplx>> WaveTransform::high_node(
    const std::vector<cplx>& spectrum_raw, int node) const {
  const SpatialGrid& g = grid();
  int M = directions().size();
  double sigma = ladder_.high.at(node).sigma;
  std::vector<std::vector<cplx>> slices(M);
  parallel_chunks(M, 1, [&](std::size_t d0, std::size_t d1) {
    for (std::size_t d = d0; d < d1; ++d)
      slices[d] = multiply_inverse(g, spectrum_raw,
                                   family_->psi(static_cast<int>(d), sigma));
  });
  return slices;
}

std::vector<cplx> WaveTransform::low_slice(
    const std::vector<cplx>& spectrum_raw) const {
  return multiply_inverse(grid(), spectrum_raw, family_->rho());
}

PhaseSpaceField WaveTransform::analyze(const GridField& f,
                                       TransformPart part) const {
  PhaseSpaceField F(grid(), directions(), ladder_);
  std::vector<cplx> spec = spectrum_of(f);
  if (part != TransformPart::HighOnly) F.low = low_slice(spec);
  if (part != TransformPart::LowOnly) {
    int M = directions().size();
    for (int node = 0; node < ladder_.node_count(); ++node) {
      auto slices = high_node(spec, node);
      for (int d = 0; d < M; ++d)
        F.high[static_cast<std::size_t>(node) * M + d] = std::move(slices[d]);
    }
  }
  return F;
}

GridField WaveTransform::synthesize(const PhaseSpaceField& F) const {
  const SpatialGrid& g = grid();
  if (!(F.grid == g) || F.dirs.size() != directions().size())
    throw InvalidInput("synthesize: phase-space field shape mismatch");
  if (F.low.size() != g.size())
    throw InvalidInput("synthesize: low slice size mismatch");
  int M = directions().size();
  std::size_t sz = g.size();

  std::vector<cplx> acc(sz, cplx(0.0));
  std::vector<cplx> spec(sz);
  for (int node = 0; node < F.ladder.node_count(); ++node) {
    double wnode = F.ladder.high.at(node).weight;
    double sigma = F.ladder.high.at(node).sigma;
    for (int d = 0; d < M; ++d) {
      const std::vector<cplx>& slice = F.slice(node, d);
      if (slice.size() != sz)
        throw InvalidInput("synthesize: high slice size mismatch");
      fft::transform(g.n, g.points, -1, slice.data(), spec.data());
      const SparseSymbol& mult = family_->psi(d, sigma);
      double w = wnode * directions().weights[d];
      for (std::size_t k = 0; k < mult.index.size(); ++k)
        acc[mult.index[k]] += w * mult.value[k] * spec[mult.index[k]];
    }
  }
  {
    fft::transform(g.n, g.points, -1, F.low.data(), spec.data());
    const std::vector<double>& rho = family_->rho();
    double w = F.ladder.low_weight();
    for (std::size_t i = 0; i < sz; ++i) acc[i] += w * rho[i] * spec[i];
  }
  GridField out(g);
  double inv = 1.0 / static_cast<double>(sz);
  for (std::size_t i = 0; i < sz; ++i) acc[i] *= inv;
  fft::transform(g.n, g.points, +1, acc.data(), out.values.data());
  return out;
}

const std::vector<double>& WaveTransform::partition() const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!partition_.empty()) return partition_;
  const SpatialGrid& g = grid();
  int M = directions().size();
  std::size_t sz = g.size();
  partition_.assign(sz, 0.0);
  for (int node = 0; node < ladder_.node_count(); ++node) {
    double wnode = ladder_.high[node].weight;
    for (int d = 0; d < M; ++d) {
      const SparseSymbol& mult = family_->psi(d, ladder_.high[node].sigma);
      double w = wnode * directions().weights[d];
      for (std::size_t k = 0; k < mult.index.size(); ++k)
        partition_[mult.index[k]] += w * mult.value[k] * mult.value[k];
    }
  }
  const std::vector<double>& rho = family_->rho();
  for (std::size_t i = 0; i < sz; ++i) partition_[i] += rho[i] * rho[i];
  return partition_;
}

GridField WaveTransform::reconstruct(const GridField& f) const {
  return apply_multiplier(partition(), f);
}

double WaveTransform::isometry_defect(const GridField& f) const {
  SpectralField F = to_spectrum(f);
  const std::vector<double>& part = partition();
  double energy = 0.0, weighted = 0.0;
  for (std::size_t i = 0; i < F.coefficients.size(); ++i) {
    double e = std::norm(F.coefficients[i]);
    energy += e;
    weighted += e * part[i];
  }
  if (energy == 0.0)
    throw InvalidInput("isometry_defect: zero field has no defect ratio");
  return std::abs(weighted - energy) / energy;
}

double WaveTransform::uncovered_energy_fraction(const GridField& f) const {
  SpectralField F = to_spectrum(f);
  double bound = ladder_.coverage_bound();
  double energy = 0.0, outside = 0.0;
  for (std::size_t i = 0; i < F.coefficients.size(); ++i) {
    double e = std::norm(F.coefficients[i]);
    energy += e;
    if (norm(F.grid.n, F.grid.frequency(i)) >= bound) outside += e;
  }
  return energy == 0.0 ? 0.0 : outside / energy;
}

// ---------------------------------------------------------------------------
// Phase-space file I/O

namespace {

void put_u64(std::ofstream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ofstream& os, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  put_u64(os, u);
}

std::uint64_t get_u64(std::ifstream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::ifstream& is) {
  std::uint64_t u = get_u64(is);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

constexpr char kPhaseMagic[6] = {'F', 'I', 'O', 'P', 'S', '1'};

void put_slice(std::ofstream& os, const std::vector<cplx>& slice) {
  for (const cplx& v : slice) {
    put_f64(os, v.real());
    put_f64(os, v.imag());
  }
}

void get_slice(std::ifstream& is, std::vector<cplx>& slice) {
  for (cplx& v : slice) {
    double re = get_f64(is);
    double im = get_f64(is);
    v = {re, im};
  }
}

}  // namespace

void write_phase_field(const std::string& path, const PhaseSpaceField& F) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_phase_field: cannot open " + path);
  os.write(kPhaseMagic, 6);
  put_u64(os, static_cast<std::uint64_t>(F.grid.n));
  put_u64(os, static_cast<std::uint64_t>(F.grid.points));
  put_f64(os, F.grid.length);
  put_u64(os, static_cast<std::uint64_t>(F.ladder.octaves));
  put_u64(os, static_cast<std::uint64_t>(F.ladder.per_octave));
  put_u64(os, static_cast<std::uint64_t>(F.dirs.size()));
  put_slice(os, F.low);
  for (const auto& slice : F.high) put_slice(os, slice);
  if (!os) throw std::runtime_error("write_phase_field: write failed");
}

PhaseSpaceField read_phase_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_phase_field: cannot open " + path);
  char magic[6];
  is.read(magic, 6);
  if (!is || std::memcmp(magic, kPhaseMagic, 6) != 0)
    throw std::runtime_error("read_phase_field: bad magic in " + path);
  SpatialGrid g;
  g.n = static_cast<int>(get_u64(is));
  g.points = static_cast<int>(get_u64(is));
  g.length = get_f64(is);
  g.validate();
  int J = static_cast<int>(get_u64(is));
  int Q = static_cast<int>(get_u64(is));
  int M = static_cast<int>(get_u64(is));
  DirectionSet dirs = g.n == 2 ? DirectionSet::equispaced_circle(M)
                               : DirectionSet::quasi_uniform_sphere(M);
  PhaseSpaceField F(g, dirs, ScaleLadder::make(J, Q));
  get_slice(is, F.low);
  for (auto& slice : F.high) get_slice(is, slice);
  if (!is) throw std::runtime_error("read_phase_field: truncated " + path);
  return F;
}

}  // namespace fioh
