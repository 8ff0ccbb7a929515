#include "fioh/grid.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "fioh/fft.hpp"

namespace fioh {

void SpatialGrid::validate() const {
  if (n < 2 || n > 3) throw InvalidInput("grid: dimension must be 2 or 3");
  if (points < 8 || (points & (points - 1)) != 0)
    throw InvalidInput("grid: points per axis must be a power of two >= 8");
  if (!(length > 0.0)) throw InvalidInput("grid: box length must be positive");
}

bool all_finite(const std::vector<cplx>& v) {
  for (const cplx& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

SpectralField to_spectrum(const GridField& f) {
  f.grid.validate();
  if (f.values.size() != f.grid.size())
    throw InvalidInput("to_spectrum: value count does not match grid");
  if (!all_finite(f.values)) throw InvalidInput("to_spectrum: non-finite input");
  SpectralField F(f.grid);
  fft::transform(f.grid.n, f.grid.points, -1, f.values.data(),
                 F.coefficients.data());
  double scale = 1.0;
  for (int a = 0; a < f.grid.n; ++a) scale *= f.grid.spacing() / kTwoPi;
  for (cplx& c : F.coefficients) c *= scale;
  return F;
}

GridField from_spectrum(const SpectralField& F) {
  F.grid.validate();
  if (F.coefficients.size() != F.grid.size())
    throw InvalidInput("from_spectrum: coefficient count does not match grid");
  if (!all_finite(F.coefficients))
    throw InvalidInput("from_spectrum: non-finite input");
  GridField f(F.grid);
  fft::transform(F.grid.n, F.grid.points, +1, F.coefficients.data(),
                 f.values.data());
  double scale = 1.0;
  for (int a = 0; a < F.grid.n; ++a) scale *= kTwoPi / F.grid.length;
  for (cplx& v : f.values) v *= scale;
  return f;
}

namespace {

template <class Symbol>
GridField apply_symbol(const GridField& f, Symbol&& symbol) {
  f.grid.validate();
  if (f.values.size() != f.grid.size())
    throw InvalidInput("apply_multiplier: value count does not match grid");
  std::vector<cplx> spec(f.grid.size());
  fft::transform(f.grid.n, f.grid.points, -1, f.values.data(), spec.data());
  double inv = 1.0 / static_cast<double>(f.grid.size());
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= symbol(i) * inv;
  GridField out(f.grid);
  fft::transform(f.grid.n, f.grid.points, +1, spec.data(), out.values.data());
  return out;
}

}  // namespace

GridField apply_multiplier(const std::function<cplx(const Vec&)>& m,
                           const GridField& f) {
  return apply_symbol(f, [&](std::size_t i) {
    Vec xi = f.grid.frequency(i);
    cplx v = m(xi);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream os;
      os << "apply_multiplier: symbol not finite at xi = (" << xi[0] << ", "
         << xi[1];
      if (f.grid.n == 3) os << ", " << xi[2];
      os << ")";
      throw InvalidInput(os.str());
    }
    return v;
  });
}

GridField apply_multiplier(const std::vector<double>& symbol,
                           const GridField& f) {
  if (symbol.size() != f.grid.size())
    throw InvalidInput("apply_multiplier: symbol array size mismatch");
  return apply_symbol(f, [&](std::size_t i) { return cplx(symbol[i], 0.0); });
}

GridField apply_multiplier(const std::vector<cplx>& symbol, const GridField& f) {
  if (symbol.size() != f.grid.size())
    throw InvalidInput("apply_multiplier: symbol array size mismatch");
  return apply_symbol(f, [&](std::size_t i) { return symbol[i]; });
}

double l2_norm(const GridField& f) {
  double s = 0.0;
  for (const cplx& v : f.values) s += std::norm(v);
  double cell = 1.0;
  for (int a = 0; a < f.grid.n; ++a) cell *= f.grid.spacing();
  return std::sqrt(cell * s);
}

double lp_norm(const GridField& f, double p) {
  if (!(p > 0.0)) throw InvalidInput("lp_norm: p must be positive");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const cplx& v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (const cplx& v : f.values) s += std::pow(std::abs(v), p);
  double cell = 1.0;
  for (int a = 0; a < f.grid.n; ++a) cell *= f.grid.spacing();
  return std::pow(cell * s, 1.0 / p);
}

double spectral_l2_norm(const SpectralField& F) {
  double s = 0.0;
  for (const cplx& c : F.coefficients) s += std::norm(c);
  double w = 1.0;
  for (int a = 0; a < F.grid.n; ++a) w *= kTwoPi * F.grid.freq_step();
  return std::sqrt(w * s);
}

cplx inner_product(const GridField& f, const GridField& g) {
  if (!(f.grid == g.grid)) throw InvalidInput("inner_product: grid mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    s += f.values[i] * std::conj(g.values[i]);
  double cell = 1.0;
  for (int a = 0; a < f.grid.n; ++a) cell *= f.grid.spacing();
  return cell * s;
}

// ---------------------------------------------------------------------------
// Field file I/O

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

constexpr char kFieldMagic[5] = {'F', 'I', 'O', 'H', '1'};

}  // namespace

void write_field(const std::string& path, const GridField& f) {
  f.grid.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field: cannot open " + path);
  os.write(kFieldMagic, 5);
  put_u64(os, static_cast<std::uint64_t>(f.grid.n));
  put_u64(os, static_cast<std::uint64_t>(f.grid.points));
  put_f64(os, f.grid.length);
  for (const cplx& v : f.values) {
    put_f64(os, v.real());
    put_f64(os, v.imag());
  }
  if (!os) throw std::runtime_error("write_field: write failed for " + path);
}

GridField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path);
  char magic[5];
  is.read(magic, 5);
  if (!is || std::memcmp(magic, kFieldMagic, 5) != 0)
    throw std::runtime_error("read_field: bad magic in " + path);
  SpatialGrid g;
  g.n = static_cast<int>(get_u64(is));
  g.points = static_cast<int>(get_u64(is));
  g.length = get_f64(is);
  g.validate();
  GridField f(g);
  for (cplx& v : f.values) {
    double re = get_f64(is);
    double im = get_f64(is);
    v = {re, im};
  }
  if (!is) throw std::runtime_error("read_field: truncated file " + path);
  return f;
}

}  // namespace fioh
