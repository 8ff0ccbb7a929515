#include "fioh/packets.hpp"

#include <algorithm>
#include <cmath>

#include "fioh/quadrature.hpp"

namespace fioh {

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = std::exp(-1.0 / t);
  double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

namespace {

// The annular bump generating Psi.
double annular_seed(double r) {
  if (r <= 0.5 || r >= 2.0) return 0.0;
  return std::exp(-1.0 / ((r - 0.5) * (2.0 - r)));
}

}  // namespace

double RadialProfile::eval(double r) const {
  return annular_seed(r) * inv_sqrt_admissibility;
}

const RadialProfile& RadialProfile::instance() {
  static const RadialProfile profile = [] {
    RadialProfile p;
    // I = int b(u)^2 du/u, in log coordinates.
    double I = adaptive_simpson(
        [](double v) {
          double b = annular_seed(std::exp(v));
          return b * b;
        },
        std::log(0.5), std::log(2.0), 1e-15, 1e-14);
    if (!(I > 0.0)) throw ConstructionError("radial profile: admissibility");
    p.inv_sqrt_admissibility = 1.0 / std::sqrt(I);
    return p;
  }();
  return profile;
}

double AngularBump::eval(double r) const {
  r = std::abs(r);
  if (r <= plateau) return 1.0;
  if (r >= 1.0) return 0.0;
  return smooth_step((1.0 - r) / (1.0 - plateau));
}

// ---------------------------------------------------------------------------
// PacketSymbols

PacketSymbols::PacketSymbols(int dim) : n_(dim) {
  if (dim < 2 || dim > 3) throw InvalidInput("PacketSymbols: n must be 2 or 3");
  RadialProfile::instance();  // force normalization now
}

double PacketSymbols::rho_sq(double r) const {
  if (r <= 0.5) return 1.0;
  if (r >= 2.0) return 0.0;
  const RadialProfile& psi = RadialProfile::instance();
  // int_0^1 Psi(s r)^2 ds/s = int_{1/2}^{min(r,2)} Psi(u)^2 du/u.
  double hi = std::min(r, 2.0);
  double mass = adaptive_simpson(
      [&](double v) {
        double p = psi.eval(std::exp(v));
        return p * p;
      },
      std::log(0.5), std::log(hi), 1e-14, 1e-13);
  double rad = 1.0 - mass;
  if (rad < -1e-12)
    throw ConstructionError("rho: negative radicand, quadrature too coarse");
  return std::max(0.0, rad);
}

double PacketSymbols::rho_value(const Vec& xi) const {
  double r = norm(n_, xi);
  if (r <= 0.5) return 1.0;
  if (r >= 2.0) return 0.0;
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = rho_cache_.find(r);
  if (it != rho_cache_.end()) return it->second;
  double v = std::sqrt(rho_sq(r));
  rho_cache_.emplace(r, v);
  return v;
}

double PacketSymbols::c_sigma_raw(double sigma) const {
  AngularBump phi;
  double rt = std::sqrt(sigma);
  double theta_max = 2.0 * std::asin(std::min(1.0, 0.5 * rt));
  double mass;
  if (n_ == 2) {
    mass = (1.0 / kPi) *
           adaptive_simpson(
               [&](double th) {
                 double chord = 2.0 * std::sin(0.5 * th);
                 double v = phi.eval(chord / rt);
                 return v * v;
               },
               0.0, theta_max, 1e-14, 1e-12);
  } else {
    mass = 0.5 * adaptive_simpson(
                     [&](double th) {
                       double chord = 2.0 * std::sin(0.5 * th);
                       double v = phi.eval(chord / rt);
                       return v * v * std::sin(th);
                     },
                     0.0, theta_max, 1e-14, 1e-12);
  }
  if (!(mass > 0.0)) throw ConstructionError("c_sigma: vanishing angular mass");
  return 1.0 / std::sqrt(mass);
}

double PacketSymbols::c_sigma(double sigma) const {
  if (!(sigma > 0.0)) throw InvalidInput("c_sigma: sigma must be positive");
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = c_cache_.find(sigma);
    if (it != c_cache_.end()) return it->second;
  }
  double c = c_sigma_raw(sigma);
  std::lock_guard<std::mutex> lock(mutex_);
  c_cache_.emplace(sigma, c);
  return c;
}

void PacketSymbols::ensure_c_table() const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!c_table_.empty()) return;
  }
  // Dense log grid for the inner quadrature of phi_w.
  double lo = std::log(0x1p-26);
  double step = std::log(2.0) / 96.0;
  std::size_t count =
      static_cast<std::size_t>((std::log(4.0) - lo) / step) + 4;
  std::vector<double> table(count);
  for (std::size_t k = 0; k < count; ++k)
    table[k] = c_sigma_raw(std::exp(lo + static_cast<double>(k) * step));
  std::lock_guard<std::mutex> lock(mutex_);
  if (c_table_.empty()) {
    c_table_lo_ = lo;
    c_table_step_ = step;
    c_table_ = std::move(table);
  }
}

double PacketSymbols::c_table_lookup(double tau) const {
  ensure_c_table();
  double t = (std::log(tau) - c_table_lo_) / c_table_step_;
  std::size_t count = c_table_.size();
  double tmax = static_cast<double>(count - 3);
  t = std::min(std::max(t, 1.0), tmax);
  std::size_t k0 = static_cast<std::size_t>(t) - 1;
  if (k0 + 3 >= count) k0 = count - 4;
  double s = t - static_cast<double>(k0 + 1);
  // 4-point Lagrange on the uniform log grid.
  double w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
  double w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
  double w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
  double w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
  return w0 * c_table_[k0] + w1 * c_table_[k0 + 1] + w2 * c_table_[k0 + 2] +
         w3 * c_table_[k0 + 3];
}

double PacketSymbols::phi_omega_radial(double r, double chord) const {
  if (r <= 0.125) return 0.0;
  double lo = std::max(chord * chord, 0.5 / r);
  double hi = std::min(4.0, 2.0 / r);
  if (!(lo < hi)) return 0.0;
  const RadialProfile& psi = RadialProfile::instance();
  AngularBump phi;
  auto integrand = [&](double tau) {
    double p = psi.eval(tau * r);
    if (p == 0.0) return 0.0;
    double ang = phi.eval(chord / std::sqrt(tau));
    if (ang == 0.0) return 0.0;
    return p * c_table_lookup(tau) * ang;
  };
  return log_midpoint_refine(integrand, lo, hi, 16, 1e-9, 1e-8);
}

double PacketSymbols::phi_omega_value(const Vec& xi, const Vec& omega) const {
  double r = norm(n_, xi);
  if (r <= 0.125) return 0.0;
  Vec hat = xi;
  for (int a = 0; a < n_; ++a) hat[a] /= r;
  double chord = norm(n_, sub(n_, hat, omega));
  return phi_omega_radial(r, chord);
}

double PacketSymbols::psi_value(const Vec& xi, const Vec& omega,
                                double sigma) const {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw InvalidInput("psi: sigma must lie in (0, 1)");
  double r = norm(n_, xi);
  if (r == 0.0) return 0.0;
  const RadialProfile& psi = RadialProfile::instance();
  double rad = psi.eval(sigma * r);
  if (rad == 0.0) return 0.0;
  Vec hat = xi;
  for (int a = 0; a < n_; ++a) hat[a] /= r;
  double chord = norm(n_, sub(n_, hat, omega));
  AngularBump phi;
  double ang = phi.eval(chord / std::sqrt(sigma));
  if (ang == 0.0) return 0.0;
  return rad * c_sigma(sigma) * ang;
}

double PacketSymbols::theta_value(const Vec& xi, const Vec& omega,
                                  double sigma) const {
  double r = norm(n_, xi);
  double rad = RadialProfile::instance().eval(sigma * r);
  if (rad == 0.0) return 0.0;
  return rad * phi_omega_value(xi, omega);
}

double PacketSymbols::psi_wide_value(double v) const {
  if (v <= 0.25 || v >= 4.0) return 0.0;
  if (v < 0.5) return smooth_step((v - 0.25) / 0.25);
  if (v <= 2.0) return 1.0;
  return smooth_step((4.0 - v) / 2.0);
}

double PacketSymbols::theta_tilde_value(const Vec& xi, const Vec& omega,
                                        double sigma) const {
  double r = norm(n_, xi);
  double wide = psi_wide_value(sigma * r);
  if (wide == 0.0) return 0.0;
  double pw = phi_omega_value(xi, omega);
  if (pw == 0.0) return 0.0;
  return std::pow(sigma, 0.25 * (n_ - 1)) * m_value(xi) * pw * wide;
}

double PacketSymbols::angular_mass(double r) const {
  if (r <= 0.125) return 0.0;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = mass_cache_.find(r);
    if (it != mass_cache_.end()) return it->second;
  }
  double umax = std::sqrt(2.0 / r);  // phi_w vanishes for larger chords
  double theta_max = 2.0 * std::asin(std::min(1.0, 0.5 * umax));
  double mass;
  if (n_ == 2) {
    mass = (1.0 / kPi) *
           adaptive_simpson(
               [&](double th) {
                 return phi_omega_radial(r, 2.0 * std::sin(0.5 * th));
               },
               0.0, theta_max, 1e-11, 1e-10);
  } else {
    mass = 0.5 * adaptive_simpson(
                     [&](double th) {
                       return phi_omega_radial(r, 2.0 * std::sin(0.5 * th)) *
                              std::sin(th);
                     },
                     0.0, theta_max, 1e-11, 1e-10);
  }
  std::lock_guard<std::mutex> lock(mutex_);
  mass_cache_.emplace(r, mass);
  return mass;
}

double PacketSymbols::m_value(const Vec& xi) const {
  double r = norm(n_, xi);
  if (r <= 0.25) return 0.0;
  double taper = r >= 0.5 ? 1.0 : smooth_step((r - 0.25) / 0.25);
  double mass = angular_mass(r);
  if (!(mass > 0.0))
    throw ConstructionError("repro symbol: vanishing angular mass");
  return taper / mass;
}

// ---------------------------------------------------------------------------
// PacketFamily

std::vector<double> densify(const SparseSymbol& s, std::size_t size) {
  std::vector<double> out(size, 0.0);
  for (std::size_t k = 0; k < s.index.size(); ++k) out[s.index[k]] = s.value[k];
  return out;
}

GridField apply_sparse(const SparseSymbol& s, const GridField& f) {
  return apply_multiplier(densify(s, f.grid.size()), f);
}

namespace {

SparseSymbol compress(const std::vector<double>& dense) {
  SparseSymbol s;
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (dense[i] != 0.0) {
      s.index.push_back(static_cast<std::uint32_t>(i));
      s.value.push_back(dense[i]);
    }
  return s;
}

}  // namespace

PacketFamily::PacketFamily(const SpatialGrid& grid, const DirectionSet& dirs)
    : grid_(grid), dirs_(dirs), symbols_(std::make_shared<PacketSymbols>(grid.n)) {
  grid.validate();
  if (dirs.n != grid.n) throw InvalidInput("PacketFamily: dimension mismatch");
}

SparseSymbol PacketFamily::build_psi(int dir_index, double sigma) const {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw InvalidInput("psi packet: sigma must lie in (0, 1)");
  double corner = grid_.max_freq() * std::sqrt(static_cast<double>(grid_.n));
  if (0.5 / sigma > corner)
    throw ResolutionError("psi packet: support lies beyond the lattice");
  const Vec& omega = dirs_.dirs[dir_index].u;
  std::size_t sz = grid_.size();
  double c = symbols_->c_sigma(sigma);
  const RadialProfile& psi = RadialProfile::instance();
  AngularBump phi;
  double rt = std::sqrt(sigma);
  SparseSymbol out;
  for (std::size_t i = 0; i < sz; ++i) {
    Vec xi = grid_.frequency(i);
    double r = norm(grid_.n, xi);
    if (r == 0.0) continue;
    double rad = psi.eval(sigma * r);
    if (rad == 0.0) continue;
    Vec hat = xi;
    for (int a = 0; a < grid_.n; ++a) hat[a] /= r;
    double chord = norm(grid_.n, sub(grid_.n, hat, omega));
    double ang = phi.eval(chord / rt);
    if (ang != 0.0) {
      out.index.push_back(static_cast<std::uint32_t>(i));
      out.value.push_back(rad * c * ang);
    }
  }
  return out;
}

const SparseSymbol& PacketFamily::psi(int dir_index, double sigma) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto key = std::make_pair(dir_index, sigma);
  auto it = psi_cache_.find(key);
  if (it != psi_cache_.end()) return it->second;
  auto res = psi_cache_.emplace(key, build_psi(dir_index, sigma));
  return res.first->second;
}

const std::vector<double>& PacketFamily::rho() const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (rho_cache_.empty()) {
    std::size_t sz = grid_.size();
    rho_cache_.assign(sz, 0.0);
    for (std::size_t i = 0; i < sz; ++i)
      rho_cache_[i] = symbols_->rho_value(grid_.frequency(i));
  }
  return rho_cache_;
}

SparseSymbol PacketFamily::build_phi_omega(int dir_index) const {
  const Vec& omega = dirs_.dirs[dir_index].u;
  std::size_t sz = grid_.size();
  std::vector<double> out(sz, 0.0);
  symbols_->c_table_lookup(1.0);  // force the table before going parallel
  parallel_chunks(sz, 1024, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i)
      out[i] = symbols_->phi_omega_value(grid_.frequency(i), omega);
  });
  return compress(out);
}

const SparseSymbol& PacketFamily::phi_omega(int dir_index) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = phiw_cache_.find(dir_index);
    if (it != phiw_cache_.end()) return it->second;
  }
  SparseSymbol built = build_phi_omega(dir_index);
  std::lock_guard<std::mutex> lock(mutex_);
  auto res = phiw_cache_.emplace(dir_index, std::move(built));
  return res.first->second;
}

const SparseSymbol& PacketFamily::theta(int dir_index, double sigma) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = theta_cache_.find(std::make_pair(dir_index, sigma));
    if (it != theta_cache_.end()) return it->second;
  }
  const SparseSymbol& pw = phi_omega(dir_index);
  const RadialProfile& psi = RadialProfile::instance();
  SparseSymbol out;
  for (std::size_t k = 0; k < pw.index.size(); ++k) {
    double r = norm(grid_.n, grid_.frequency(pw.index[k]));
    double rad = psi.eval(sigma * r);
    if (rad != 0.0) {
      out.index.push_back(pw.index[k]);
      out.value.push_back(rad * pw.value[k]);
    }
  }
  std::lock_guard<std::mutex> lock(mutex_);
  auto res = theta_cache_.emplace(std::make_pair(dir_index, sigma), std::move(out));
  return res.first->second;
}

const SparseSymbol& PacketFamily::theta_tilde(int dir_index,
                                              double sigma) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = ttilde_cache_.find(std::make_pair(dir_index, sigma));
    if (it != ttilde_cache_.end()) return it->second;
  }
  const SparseSymbol& pw = phi_omega(dir_index);
  const std::vector<double>& m = repro_m();
  double pref = std::pow(sigma, 0.25 * (grid_.n - 1));
  SparseSymbol out;
  for (std::size_t k = 0; k < pw.index.size(); ++k) {
    double r = norm(grid_.n, grid_.frequency(pw.index[k]));
    double wide = symbols_->psi_wide_value(sigma * r);
    if (wide != 0.0) {
      out.index.push_back(pw.index[k]);
      out.value.push_back(pref * m[pw.index[k]] * pw.value[k] * wide);
    }
  }
  std::lock_guard<std::mutex> lock(mutex_);
  auto res = ttilde_cache_.emplace(std::make_pair(dir_index, sigma), std::move(out));
  return res.first->second;
}

const std::vector<double>& PacketFamily::repro_m() const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!m_cache_.empty()) return m_cache_;
  }
  std::size_t sz = grid_.size();
  std::vector<double> out(sz, 0.0);
  for (std::size_t i = 0; i < sz; ++i)
    out[i] = symbols_->m_value(grid_.frequency(i));
  std::lock_guard<std::mutex> lock(mutex_);
  if (m_cache_.empty()) m_cache_ = std::move(out);
  return m_cache_;
}

PacketFamily::DecayReport PacketFamily::decay_check(PacketKind kind,
                                                    int dir_index, double sigma,
                                                    double decay_order) const {
  const SparseSymbol& mult =
      kind == PacketKind::Psi ? psi(dir_index, sigma) : theta(dir_index, sigma);
  SpectralField spec(grid_);
  for (std::size_t k = 0; k < mult.index.size(); ++k)
    spec.coefficients[mult.index[k]] = mult.value[k];
  GridField profile = from_spectrum(spec);

  const Vec& omega = dirs_.dirs[dir_index].u;
  DecayReport rep;
  double pref = std::pow(sigma, 0.25 * (3.0 * grid_.n + 1.0));
  for (std::size_t i = 0; i < profile.values.size(); ++i) {
    double a = std::abs(profile.values[i]);
    if (a == 0.0) continue;
    Vec x = grid_.min_image_vec(profile.grid.position(i));
    double along = dot(grid_.n, omega, x);
    double weight =
        1.0 + norm_sq(grid_.n, x) / sigma + (along * along) / (sigma * sigma);
    rep.peak = std::max(rep.peak, a);
    rep.constant =
        std::max(rep.constant, a * pref * std::pow(weight, decay_order));
  }

  // Half-max widths along and across omega, from continuum samples of the
  // band-limited profile.
  std::vector<std::pair<Vec, cplx>> modes;
  for (std::size_t k = 0; k < mult.index.size(); ++k)
    modes.emplace_back(grid_.frequency(mult.index[k]), cplx(mult.value[k]));
  double cellw = 1.0;
  for (int a = 0; a < grid_.n; ++a) cellw *= grid_.freq_step();
  auto eval_at = [&](const Vec& x) {
    cplx s = 0.0;
    for (const auto& [xi, c] : modes)
      s += c * std::polar(1.0, dot(grid_.n, x, xi));
    return std::abs(s) * cellw;
  };
  double peak0 = eval_at(Vec{0.0, 0.0, 0.0});
  auto half_width = [&](const Vec& dir, double step) {
    double prev = peak0;
    for (int k = 1; k <= 4096; ++k) {
      Vec x{dir[0] * step * k, dir[1] * step * k, dir[2] * step * k};
      double v = eval_at(x);
      if (v <= 0.5 * peak0) {
        // Linear interpolation to the crossing.
        double t = (prev - 0.5 * peak0) / std::max(prev - v, 1e-300);
        return step * (k - 1 + t);
      }
      prev = v;
    }
    return step * 4096.0;
  };
  Vec perp = grid_.n == 2 ? vec2(-omega[1], omega[0])
                          : vec3(-omega[1], omega[0], 0.0);
  double pn = norm(grid_.n, perp);
  for (int a = 0; a < grid_.n; ++a) perp[a] /= pn;
  rep.halfwidth_along = 2.0 * half_width(omega, sigma / 16.0);
  rep.halfwidth_across = 2.0 * half_width(perp, std::sqrt(sigma) / 16.0);
  return rep;
}

}  // namespace fioh
