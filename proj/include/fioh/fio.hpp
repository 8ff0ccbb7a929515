#pragma once

// Oscillatory-integral operators in standard form,
//   T f(x) = int e^{i Phi(x, eta)} a(x, eta) f^(eta) d eta,
// with sampled validation of the phase conditions, a direct lattice
// quadrature (the reference path), a fast multiplier path for phases of the
// form x.eta + phi0(eta) with x-independent symbols, and the Euclidean wave
// propagators.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fioh/grid.hpp"
#include "fioh/spaces.hpp"

namespace fioh {

struct PhaseFunction {
  std::string name;
  std::function<double(const Vec&, const Vec&)> value;  // Phi(x, eta)
  // When the phase is x.eta + shift(eta), the operator reduces to a Fourier
  // multiplier for x-independent symbols.
  std::function<double(const Vec&)> shift;
  bool declared_homogeneous = true;

  // Optional analytic derivatives; finite differences otherwise.
  std::function<Vec(const Vec&, const Vec&)> grad_x;
  std::function<Vec(const Vec&, const Vec&)> grad_eta;

  bool has_shift_form() const { return static_cast<bool>(shift); }
};

struct SymbolFunction {
  std::string name;
  std::function<cplx(const Vec&, const Vec&)> value;  // a(x, eta)
  double order = 0.0;
  double low_cutoff = 0.0;  // a(x, eta) = 0 for |eta| <= low_cutoff, if > 0
  bool x_independent = true;
};

struct PhaseValidationReport {
  int samples = 0;
  double homogeneity_error = 0.0;     // relative, lambda in {2, 1/2}
  double max_mixed_derivative = 0.0;  // second derivatives at |eta| = 1
  double min_hessian_det = 0.0;       // inf |det d2_{x eta} Phi|
  double injectivity_margin = 0.0;    // min |dxPhi(e1) - dxPhi(e2)| / |e1 - e2|
  bool homogeneous = false;
  bool derivatives_bounded = false;
  bool hessian_nondegenerate = false;
  bool injective = false;
};

PhaseValidationReport validate_phase(const PhaseFunction& phase, int dim,
                                     double box_half_width, int sample_budget,
                                     std::uint64_t seed);

struct FIODescriptor {
  PhaseFunction phase;
  SymbolFunction symbol;
  PhaseValidationReport report;
};

FIODescriptor make_descriptor(const PhaseFunction& phase,
                              const SymbolFunction& symbol, int dim,
                              double box_half_width = kPi,
                              int sample_budget = 512,
                              std::uint64_t seed = 7);

// Direct quadrature unless the fast multiplier path applies; `force_direct`
// bypasses the fast path (for cross-checks). Refuses grids whose direct cost
// N^{2n} exceeds `budget_points`.
GridField apply_fio(const FIODescriptor& op, const GridField& f,
                    std::uint64_t budget_points = (1ull << 32),
                    bool force_direct = false);

enum class PropagatorKind { Cosine, Sinc, HalfWave };

// cos(t|D|), sin(t|D|)/|D| (value t at 0), e^{i t |D|}.
GridField propagator(PropagatorKind kind, double t, const GridField& f);

// Built-in registry used by the command line.
PhaseFunction builtin_phase(const std::string& name, double t = 1.0);
SymbolFunction builtin_symbol(const std::string& name);
std::vector<std::string> builtin_phase_names();
std::vector<std::string> builtin_symbol_names();

// ---------------------------------------------------------------------------
// Boundedness experiments

enum class SpacePairMode {
  HpFioSame,      // || T f ||_{H^{s,p}} / || f ||_{H^{s,p}}
  HardySandwich,  // || T f ||_{h^{s - s(p), p}} / || f ||_{h^{s + s(p), p}}
};

struct BoundednessReport {
  std::vector<double> ratios;
  double max_ratio = 0.0;
};

BoundednessReport boundedness_experiment(
    const std::function<GridField(const GridField&)>& op, SpaceContext& ctx,
    double p, double s, SpacePairMode mode,
    const std::vector<GridField>& family);

struct GrowthReport {
  std::vector<double> box_lengths;
  std::vector<double> halfwave_ratios;
  std::vector<double> cosine_ratios;
  bool growth_verdict = false;   // half-wave grows >= 1.5x per refinement
  bool cosine_bounded = false;   // cos ratios within a factor 2 overall
};

// Fixed-width low-frequency bumps on boxes of doubling size (N and L both
// double, so the lattice spacing stays put). Needs >= 4 refinements for a
// conclusive verdict.
GrowthReport halfwave_growth_experiment(double p, double s, int refinements,
                                        int base_points, double base_length,
                                        int direction_count,
                                        double bump_width = 0.5);

}  // namespace fioh
