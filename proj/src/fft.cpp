#include "fioh/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace fioh::fft {

namespace {

std::mutex g_planner_mutex;

fftw_plan get_c2c_plan(int rank, int points, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(g_planner_mutex);
  auto key = std::make_tuple(rank, points, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  int dims[3] = {points, points, points};
  std::vector<fftw_complex> a(1), b(1);
  // Planned with FFTW_UNALIGNED so the plan applies to any caller buffer.
  fftw_plan p = fftw_plan_many_dft(rank, dims, 1, a.data(), nullptr, 1, 0,
                                   b.data(), nullptr, 1, 0,
                                   sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("fftw c2c planning failed");
  cache.emplace(key, p);
  return p;
}

fftw_plan get_r2c_plan_2d(int points) {
  static std::map<int, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(g_planner_mutex);
  auto it = cache.find(points);
  if (it != cache.end()) return it->second;
  std::vector<double> a(1);
  std::vector<fftw_complex> b(1);
  fftw_plan p = fftw_plan_dft_r2c_2d(points, points, a.data(), b.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("fftw r2c planning failed");
  cache.emplace(points, p);
  return p;
}

fftw_plan get_c2r_plan_2d(int points) {
  static std::map<int, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(g_planner_mutex);
  auto it = cache.find(points);
  if (it != cache.end()) return it->second;
  std::vector<fftw_complex> a(1);
  std::vector<double> b(1);
  fftw_plan p = fftw_plan_dft_c2r_2d(points, points, a.data(), b.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("fftw c2r planning failed");
  cache.emplace(points, p);
  return p;
}

}  // namespace

void transform(int rank, int points, int sign, const std::complex<double>* in,
               std::complex<double>* out) {
  fftw_plan p = get_c2c_plan(rank, points, sign);
  fftw_execute_dft(p,
                   reinterpret_cast<fftw_complex*>(
                       const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void forward_r2c_2d(int points, const double* in, std::complex<double>* out) {
  fftw_plan p = get_r2c_plan_2d(points);
  fftw_execute_dft_r2c(p, const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void backward_c2r_2d(int points, std::complex<double>* in, double* out) {
  fftw_plan p = get_c2r_plan_2d(points);
  fftw_execute_dft_c2r(p, reinterpret_cast<fftw_complex*>(in), out);
}

}  // namespace fioh::fft
