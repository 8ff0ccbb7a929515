#pragma once

// Verification of the maximal inequalities driving the equivalent
// characterization: the peak maximal function M*_{N,sigma} of the theta
// coefficients W_sigma f = theta_{w,sigma}(D) f against the power maximal
// function M_lambda, pointwise over the phase space.

#include <vector>

#include "fioh/grid.hpp"
#include "fioh/spaces.hpp"

namespace fioh {

struct MaximalReport {
  double lambda = 0.0;
  double decay_order = 0.0;
  int output_stride = 1;
  std::vector<double> sigmas;
  std::vector<double> max_ratio_per_sigma;
  double max_ratio = 0.0;
  double sigma_spread = 0.0;  // max / min of the per-sigma maxima
  bool finite = true;
};

// max over sampled (x, w) of M*_{N,sigma}(W_sigma f) / M_lambda(W_sigma f),
// per ladder scale. Requires lambda > 0 and N > n / lambda.
MaximalReport maximal_domination_check(SpaceContext& ctx, const GridField& f,
                                       double decay_order, double lambda,
                                       int output_stride = 1);

// Same reporting contract for the averaged form
//   sigma^{-n} int (1 + sigma^{-1} d^2)^{-N} |W_sigma f| dy dv
// against M_lambda(W_sigma f). 0/0 ratios count as 1 and are flagged.
MaximalReport kernel_average_check(SpaceContext& ctx, const GridField& f,
                                   double decay_order, double lambda,
                                   int output_stride = 1);

}  // namespace fioh
