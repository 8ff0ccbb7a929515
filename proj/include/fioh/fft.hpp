#pragma once

// Thin wrapper around FFTW double-precision transforms. Plans are cached per
// shape with FFTW_ESTIMATE (deterministic plan choice) and executed through
// the new-array interface, so concurrent execution on distinct buffers is
// safe. All transforms are unnormalized; callers apply their own convention.

#include <complex>
#include <cstddef>
#include <vector>

namespace fioh::fft {

// Complex-to-complex over an n-dimensional array with `points` samples per
// axis (rank 1..3), row-major. sign = -1 forward (e^{-i x xi}), +1 backward.
void transform(int rank, int points, int sign, const std::complex<double>* in,
               std::complex<double>* out);

// Real-to-halfcomplex and back, 2D only (used by the convolution engine).
// Spectrum layout: points x (points/2+1) row-major.
void forward_r2c_2d(int points, const double* in, std::complex<double>* out);
// Destroys `in` (FFTW c2r behavior).
void backward_c2r_2d(int points, std::complex<double>* in, double* out);

inline std::size_t r2c_size_2d(int points) {
  return static_cast<std::size_t>(points) * (points / 2 + 1);
}

}  // namespace fioh::fft
