#pragma once

// Shared small pieces: vectors on R^n (n <= 3), error types, deterministic
// RNG helpers and a fixed-chunk parallel loop whose results do not depend on
// the worker count.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fioh {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// First n components are in use; trailing components stay zero.
using Vec = std::array<double, 3>;

inline Vec vec2(double a, double b) { return {a, b, 0.0}; }
inline Vec vec3(double a, double b, double c) { return {a, b, c}; }

inline double dot(int n, const Vec& a, const Vec& b) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(int n, const Vec& a) { return dot(n, a, a); }
inline double norm(int n, const Vec& a) { return std::sqrt(norm_sq(n, a)); }

inline Vec sub(int n, const Vec& a, const Vec& b) {
  Vec r{0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) r[i] = a[i] - b[i];
  return r;
}

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Deterministic random numbers. std::mt19937_64 has a pinned algorithm; the
// value mappings below avoid the implementation-defined std distributions.

inline double uniform01(std::uint64_t raw) {
  return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

template <class Engine>
double uniform01(Engine& eng) {
  return uniform01(static_cast<std::uint64_t>(eng()));
}

template <class Engine>
double uniform(Engine& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(eng);
}

// Marsaglia polar method; consumes a variable number of draws but is fully
// deterministic for a given engine state.
template <class Engine>
double normal01(Engine& eng) {
  for (;;) {
    double u = 2.0 * uniform01(eng) - 1.0;
    double v = 2.0 * uniform01(eng) - 1.0;
    double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

template <class Engine>
cplx complex_normal(Engine& eng) {
  double re = normal01(eng);
  double im = normal01(eng);
  return {re, im};
}

// ---------------------------------------------------------------------------
// Parallel loop over [0, count) in fixed chunks. Chunk boundaries depend only
// on `count` and `chunk`, and each chunk writes disjoint outputs, so results
// are identical for every worker count.

int thread_count();
void set_thread_count(int t);

void parallel_chunks(std::size_t count, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& body);

inline void parallel_items(std::size_t count,
                           const std::function<void(std::size_t)>& body) {
  std::size_t chunk = count / 64 + 1;
  parallel_chunks(count, chunk, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) body(i);
  });
}

}  // namespace fioh
