#include <doctest.h>

#include "fioh/maximal.hpp"

using namespace fioh;

TEST_SUITE_BEGIN("maximal");

namespace {

SpatialGrid small_grid(int points = 32) {
  SpatialGrid g;
  g.n = 2;
  g.points = points;
  g.length = kTwoPi;
  return g;
}

GridField theta_packet(const SpaceContext& ctx, int dir, double sigma) {
  const SparseSymbol& th = ctx.family().theta(dir, sigma);
  SpectralField F(ctx.grid());
  for (std::size_t k = 0; k < th.index.size(); ++k)
    F.coefficients[th.index[k]] = th.value[k];
  GridField f = from_spectrum(F);
  double n = l2_norm(f);
  for (cplx& v : f.values) v /= n;
  return f;
}

}  // namespace

TEST_CASE("parameter preconditions") {
  SpaceContext ctx(small_grid(), 8, 2, 2);
  GridField f(ctx.grid());
  CHECK_THROWS_AS(maximal_domination_check(ctx, f, 2.0, 0.5, 1), InvalidInput);
  CHECK_THROWS_AS(kernel_average_check(ctx, f, 2.0, 0.5, 1), InvalidInput);
}

TEST_CASE("domination check on a single theta packet") {
  SpaceContext ctx(small_grid(64), 16, 3, 2);
  GridField f = theta_packet(ctx, 3, 0.25);
  double lambda = 0.5;
  double decay = 2.0 * 2 / lambda;
  MaximalReport rep = maximal_domination_check(ctx, f, decay, lambda, 2);
  CHECK(rep.finite);
  CHECK(rep.max_ratio > 0.0);
  CHECK(rep.sigma_spread <= 10.0);

  // Monotone in the decay order: larger N shrinks the left side.
  MaximalReport weaker = maximal_domination_check(ctx, f, decay + 2.0, lambda, 2);
  CHECK(weaker.max_ratio <= rep.max_ratio * (1.0 + 1e-9));

  // Refinement stability.
  SpaceContext fine(small_grid(128), 16, 3, 2);
  GridField f2 = theta_packet(fine, 3, 0.25);
  MaximalReport rep2 = maximal_domination_check(fine, f2, decay, lambda, 2);
  CHECK(rep2.max_ratio / rep.max_ratio <= 2.0);
  CHECK(rep.max_ratio / rep2.max_ratio <= 2.0);
}

TEST_CASE("trivial dominations hold pointwise") {
  // Both M* and M_lambda dominate the slice itself; their quotient stays
  // finite on a generic band-limited field.
  SpaceContext ctx(small_grid(64), 16, 3, 2);
  TestFieldSpec spec;
  spec.kind = TestFieldSpec::Kind::BandLimitedRandom;
  spec.seed = 42;
  spec.band_limit = 6.0;
  GridField f = make_test_field(ctx.grid(), spec);
  MaximalReport rep = maximal_domination_check(ctx, f, 8.0, 0.5, 2);
  CHECK(rep.finite);
  CHECK(rep.sigma_spread <= 10.0);
}

TEST_CASE("zero fields give the 0/0 convention in the averaged form") {
  SpaceContext ctx(small_grid(), 8, 2, 2);
  GridField f(ctx.grid());
  MaximalReport rep = kernel_average_check(ctx, f, 8.0, 0.5, 2);
  CHECK(rep.finite);
  for (double r : rep.max_ratio_per_sigma) CHECK(r == 1.0);
}

TEST_CASE("averaged form tracks the direct maximal control route") {
  SpaceContext ctx(small_grid(64), 16, 3, 2);
  GridField f = theta_packet(ctx, 5, 0.25);
  // lambda = 1 admits two control routes; their reported constants agree
  // within a factor 4.
  MaximalReport via_lambda = kernel_average_check(ctx, f, 8.0, 1.0, 2);
  MaximalReport via_peak = maximal_domination_check(ctx, f, 8.0, 1.0, 2);
  CHECK(via_lambda.finite);
  CHECK(via_peak.finite);
  CHECK(via_lambda.max_ratio / via_peak.max_ratio <= 4.0);
  CHECK(via_peak.max_ratio / via_lambda.max_ratio <= 4.0);
}

TEST_CASE("direction refinement keeps the constants stable") {
  SpaceContext coarse(small_grid(64), 16, 3, 2);
  SpaceContext fine(small_grid(64), 32, 3, 2);
  GridField f1 = theta_packet(coarse, 2, 0.25);
  GridField f2 = theta_packet(fine, 4, 0.25);
  MaximalReport r1 = maximal_domination_check(coarse, f1, 8.0, 0.5, 2);
  MaximalReport r2 = maximal_domination_check(fine, f2, 8.0, 0.5, 2);
  CHECK(r2.max_ratio / r1.max_ratio <= 2.5);
  CHECK(r1.max_ratio / r2.max_ratio <= 2.5);
}

TEST_SUITE_END();
