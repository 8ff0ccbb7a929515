#include "fioh/quadrature.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "fioh/common.hpp"

namespace fioh {

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b,
                    double fa, double fm, double fb, double whole, double atol,
                    double rtol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double err = left + right - whole;
  double tol = atol + rtol * std::abs(left + right);
  if (depth <= 0 || std::abs(err) <= 15.0 * tol)
    return left + right + err / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * atol, rtol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * atol, rtol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double atol, double rtol, int max_depth) {
  if (!(b > a)) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a);
  double fm = f(m);
  double fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, atol, rtol, max_depth);
}

double log_midpoint(const std::function<double(double)>& f, double a, double b,
                    int per_octave) {
  if (!(b > a) || a <= 0.0) return 0.0;
  double la = std::log(a);
  double lb = std::log(b);
  double octaves = (lb - la) / std::log(2.0);
  int nodes = std::max(1, static_cast<int>(std::ceil(octaves * per_octave)));
  double h = (lb - la) / nodes;
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    double t = std::exp(la + (i + 0.5) * h);
    sum += f(t);
  }
  return sum * h;
}

double log_midpoint_refine(const std::function<double(double)>& f, double a,
                           double b, int start_per_octave, double atol,
                           double rtol) {
  if (!(b > a) || a <= 0.0) return 0.0;
  double prev = log_midpoint(f, a, b, start_per_octave);
  for (int per = 2 * start_per_octave; per <= (1 << 20); per *= 2) {
    double cur = log_midpoint(f, a, b, per);
    if (std::abs(cur - prev) <= atol + rtol * std::abs(cur)) return cur;
    prev = cur;
  }
  throw ConstructionError("log_midpoint_refine: no convergence");
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidInput("fit_line: need at least two points");
  double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw InvalidInput("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = std::abs(y[i] - fit.slope * x[i] - fit.intercept);
    if (r > fit.max_residual) fit.max_residual = r;
  }
  return fit;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0)
      throw InvalidInput("fit_loglog: nonpositive sample");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

}  // namespace fioh
