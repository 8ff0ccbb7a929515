#pragma once

// 1D quadrature used to build the frequency symbols, plus the log-log fit
// used by the scaling experiments.

#include <functional>
#include <vector>

namespace fioh {

// Adaptive Simpson on [a, b]. Tolerance is absolute + relative mixed.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double atol = 1e-12, double rtol = 1e-12,
                        int max_depth = 40);

// Midpoint rule in log coordinates: integral of f(t) dt/t over [a, b] with
// `per_octave` nodes per factor of two.
double log_midpoint(const std::function<double(double)>& f, double a, double b,
                    int per_octave);

// Doubles the node density (starting from `start_per_octave`) until two
// successive estimates agree to the given tolerance.
double log_midpoint_refine(const std::function<double(double)>& f, double a,
                           double b, int start_per_octave, double atol,
                           double rtol = 1e-9);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

// Least-squares line through (x_i, y_i).
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Fit log(y) against log(x); returns the power-law exponent as `slope`.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fioh
