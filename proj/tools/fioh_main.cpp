// Command-line front end: transforms, norms, propagators, oscillatory
// integral application, molecule and maximal checks, ball volumes, and the
// acceptance suites.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "fioh/acceptance.hpp"
#include "fioh/experiment.hpp"
#include "fioh/fio.hpp"
#include "fioh/maximal.hpp"
#include "fioh/molecules.hpp"
#include "fioh/spaces.hpp"
#include "fioh/tent.hpp"

namespace {

using fioh::GridField;
using nlohmann::ordered_json;

void write_report(const std::string& path, const ordered_json& j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open report path " + path);
  os << j.dump(2) << "\n";
}

struct ContextFlags {
  int octaves = 5;
  int per_octave = 4;
  int directions = 64;
  int threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--octaves", octaves, "scale ladder octaves");
    cmd->add_option("--per-octave", per_octave, "quadrature nodes per octave");
    cmd->add_option("--directions", directions, "direction count");
    cmd->add_option("--threads", threads, "worker threads (0 = default)");
  }

  fioh::SpaceContext make(const fioh::SpatialGrid& grid) const {
    if (threads > 0) fioh::set_thread_count(threads);
    return fioh::SpaceContext(grid, directions, octaves, per_octave);
  }
};

ordered_json norm_report(const fioh::NormResult& r, const std::string& space,
                         double p, double s) {
  ordered_json j;
  j["space"] = space;
  j["p"] = fioh::format_number(p);
  j["s"] = fioh::format_number(s);
  j["value"] = fioh::format_number(r.value);
  j["low_part"] = fioh::format_number(r.low_part);
  j["square_part"] = fioh::format_number(r.square_part);
  if (space == "hpfio") {
    j["weighted_mode"] = fioh::format_number(r.secondary);
    j["mode_ratio"] = fioh::format_number(r.mode_ratio);
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave packet space toolkit"};
  app.require_subcommand(1);

  try {
    // --- norm ------------------------------------------------------------
    auto* norm_cmd = app.add_subcommand("norm", "evaluate a space quasi-norm");
    std::string norm_space = "hpfio", norm_in, norm_report_path;
    double norm_p = 2.0, norm_s = 0.0;
    ContextFlags norm_ctx;
    norm_cmd->add_option("--space", norm_space,
                         "hp | hpfio | hpfio-A | hpfio-theta | hpfio-dir");
    norm_cmd->add_option("--p", norm_p, "integrability exponent");
    norm_cmd->add_option("--s", norm_s, "smoothness exponent");
    norm_cmd->add_option("--in", norm_in, "input field file")->required();
    norm_cmd->add_option("--report", norm_report_path, "report path (- = stdout)");
    norm_ctx.attach(norm_cmd);

    // --- transform / inverse ----------------------------------------------
    auto* tr_cmd = app.add_subcommand("transform", "wave packet analysis");
    std::string tr_in, tr_out;
    ContextFlags tr_ctx;
    tr_cmd->add_option("--in", tr_in)->required();
    tr_cmd->add_option("--out", tr_out)->required();
    tr_ctx.attach(tr_cmd);

    auto* inv_cmd = app.add_subcommand("inverse", "wave packet synthesis");
    std::string inv_in, inv_out;
    inv_cmd->add_option("--in", inv_in)->required();
    inv_cmd->add_option("--out", inv_out)->required();

    // --- propagate ----------------------------------------------------------
    auto* prop_cmd = app.add_subcommand("propagate", "wave propagators");
    std::string prop_kind = "cos", prop_in, prop_out;
    double prop_t = 1.0;
    prop_cmd->add_option("--kind", prop_kind, "cos | sinc | halfwave");
    prop_cmd->add_option("--t", prop_t, "time");
    prop_cmd->add_option("--in", prop_in)->required();
    prop_cmd->add_option("--out", prop_out)->required();

    // --- fio-apply ----------------------------------------------------------
    auto* fio_cmd = app.add_subcommand("fio-apply", "oscillatory integral");
    std::string fio_phase = "identity", fio_symbol = "one", fio_in, fio_out;
    double fio_t = 1.0;
    bool fio_direct = false;
    std::uint64_t fio_budget = 1ull << 32;
    fio_cmd->add_option("--phase", fio_phase, "identity | halfwave | quadratic-x1");
    fio_cmd->add_option("--t", fio_t, "phase parameter");
    fio_cmd->add_option("--symbol", fio_symbol, "one | high-pass | oscillating-x");
    fio_cmd->add_flag("--direct", fio_direct, "force the direct quadrature");
    fio_cmd->add_option("--budget", fio_budget, "direct-path point budget");
    fio_cmd->add_option("--in", fio_in)->required();
    fio_cmd->add_option("--out", fio_out)->required();

    // --- molecule -----------------------------------------------------------
    auto* mol_cmd = app.add_subcommand("molecule", "molecule tools");
    std::string mol_action = "validate", mol_in, mol_out, mol_report_path;
    double mol_tau = 1.0, mol_p = 2.0 / 3.0, mol_decay = 9.0, mol_angle = 0.0;
    double mol_x = 0.0, mol_y = 0.0;
    int mol_count = 8, mol_seeds = 10;
    ContextFlags mol_ctx;
    mol_cmd->add_option("action", mol_action, "validate | make | synthesize");
    mol_cmd->add_option("--in", mol_in, "field to validate");
    mol_cmd->add_option("--out", mol_out, "output field for make");
    mol_cmd->add_option("--report", mol_report_path);
    mol_cmd->add_option("--tau", mol_tau);
    mol_cmd->add_option("--p", mol_p);
    mol_cmd->add_option("--decay", mol_decay);
    mol_cmd->add_option("--angle", mol_angle, "direction angle");
    mol_cmd->add_option("--x", mol_x);
    mol_cmd->add_option("--y", mol_y);
    mol_cmd->add_option("--count", mol_count);
    mol_cmd->add_option("--seeds", mol_seeds);
    int mol_points = 128;
    double mol_length = fioh::kTwoPi;
    mol_cmd->add_option("--points", mol_points);
    mol_cmd->add_option("--length", mol_length);
    mol_ctx.attach(mol_cmd);

    // --- maximal-check --------------------------------------------------------
    auto* max_cmd = app.add_subcommand("maximal-check", "maximal inequalities");
    std::string max_in, max_report_path;
    double max_decay = 8.0, max_lambda = 0.5;
    int max_stride = 2;
    ContextFlags max_ctx;
    max_cmd->add_option("--N", max_decay, "decay order");
    max_cmd->add_option("--lambda", max_lambda);
    max_cmd->add_option("--stride", max_stride, "output sampling stride");
    max_cmd->add_option("--in", max_in)->required();
    max_cmd->add_option("--report", max_report_path);
    max_ctx.attach(max_cmd);

    // --- volume -----------------------------------------------------------------
    auto* vol_cmd = app.add_subcommand("volume", "Monte Carlo ball volume");
    double vol_tau = 0.25;
    std::uint64_t vol_seed = 42;
    std::size_t vol_samples = 1000000;
    int vol_dim = 2;
    vol_cmd->add_option("--tau", vol_tau)->required();
    vol_cmd->add_option("--samples", vol_samples);
    vol_cmd->add_option("--seed", vol_seed);
    vol_cmd->add_option("--n", vol_dim);

    // --- make-field ----------------------------------------------------------------
    auto* mk_cmd = app.add_subcommand("make-field", "deterministic test fields");
    std::string mk_kind = "gaussian-bump", mk_out;
    std::uint64_t mk_seed = 1;
    double mk_width = 0.5, mk_band = 12.0, mk_sigma = 0.25, mk_angle = 0.0;
    int mk_points = 256;
    double mk_length = fioh::kTwoPi;
    mk_cmd->add_option("--kind", mk_kind,
                       "gaussian-bump | band-limited-random | coherent-packet "
                       "| radial-annulus");
    mk_cmd->add_option("--seed", mk_seed);
    mk_cmd->add_option("--width", mk_width);
    mk_cmd->add_option("--band", mk_band);
    mk_cmd->add_option("--sigma", mk_sigma);
    mk_cmd->add_option("--angle", mk_angle);
    mk_cmd->add_option("--points", mk_points);
    mk_cmd->add_option("--length", mk_length);
    mk_cmd->add_option("--out", mk_out)->required();

    // --- accept ----------------------------------------------------------------------
    auto* acc_cmd = app.add_subcommand("accept", "run acceptance suites");
    std::vector<std::string> acc_suites;
    std::string acc_out, acc_format = "csv";
    int acc_threads = 0;
    acc_cmd->add_option("--suite", acc_suites,
                        "suite names (default: all)");
    acc_cmd->add_option("--out", acc_out, "report directory");
    acc_cmd->add_option("--format", acc_format, "csv | json-lines");
    acc_cmd->add_option("--threads", acc_threads);

    CLI11_PARSE(app, argc, argv);

    if (norm_cmd->parsed()) {
      GridField f = fioh::read_field(norm_in);
      fioh::SpaceContext ctx = norm_ctx.make(f.grid);
      fioh::NormResult r;
      if (norm_space == "hp")
        r = ctx.local_hardy_norm(f, norm_p, norm_s);
      else if (norm_space == "hpfio")
        r = ctx.hpfio_norm(f, norm_p, norm_s);
      else if (norm_space == "hpfio-A")
        r = ctx.equivalent_norm_A(f, norm_p, norm_s);
      else if (norm_space == "hpfio-theta")
        r = ctx.theta_square_norm(f, norm_p);
      else if (norm_space == "hpfio-dir")
        r = ctx.directional_norm(f, norm_p, norm_s);
      else
        throw fioh::InvalidInput("unknown space " + norm_space);
      ordered_json j = norm_report(r, norm_space, norm_p, norm_s);
      j["ladder"] = {{"octaves", norm_ctx.octaves},
                     {"per_octave", norm_ctx.per_octave}};
      j["directions"] = norm_ctx.directions;
      write_report(norm_report_path, j);
      return 0;
    }

    if (tr_cmd->parsed()) {
      GridField f = fioh::read_field(tr_in);
      fioh::SpaceContext ctx = tr_ctx.make(f.grid);
      fioh::PhaseSpaceField F = ctx.transform().analyze(f);
      fioh::write_phase_field(tr_out, F);
      return 0;
    }

    if (inv_cmd->parsed()) {
      fioh::PhaseSpaceField F = fioh::read_phase_field(inv_in);
      auto family = std::make_shared<fioh::PacketFamily>(F.grid, F.dirs);
      fioh::WaveTransform wt(family, F.ladder);
      fioh::write_field(inv_out, wt.synthesize(F));
      return 0;
    }

    if (prop_cmd->parsed()) {
      GridField f = fioh::read_field(prop_in);
      fioh::PropagatorKind kind;
      if (prop_kind == "cos")
        kind = fioh::PropagatorKind::Cosine;
      else if (prop_kind == "sinc")
        kind = fioh::PropagatorKind::Sinc;
      else if (prop_kind == "halfwave")
        kind = fioh::PropagatorKind::HalfWave;
      else
        throw fioh::InvalidInput("unknown propagator kind " + prop_kind);
      fioh::write_field(prop_out, fioh::propagator(kind, prop_t, f));
      return 0;
    }

    if (fio_cmd->parsed()) {
      GridField f = fioh::read_field(fio_in);
      fioh::FIODescriptor op = fioh::make_descriptor(
          fioh::builtin_phase(fio_phase, fio_t), fioh::builtin_symbol(fio_symbol),
          f.grid.n);
      fioh::write_field(fio_out,
                        fioh::apply_fio(op, f, fio_budget, fio_direct));
      return 0;
    }

    if (mol_cmd->parsed()) {
      fioh::MoleculeSpec spec;
      spec.tau = mol_tau;
      spec.p = mol_p;
      spec.decay_order = mol_decay;
      spec.center.omega = fioh::vec2(std::cos(mol_angle), std::sin(mol_angle));
      spec.center.x = fioh::vec2(mol_x, mol_y);
      if (mol_action == "validate") {
        GridField f = fioh::read_field(mol_in);
        fioh::MoleculeReport rep = fioh::molecule_validate(f, spec);
        ordered_json j;
        j["valid"] = rep.valid();
        j["support_ok"] = rep.support_ok;
        j["support_leak"] = fioh::format_number(rep.support_leak);
        j["weighted_integral"] = fioh::format_number(rep.weighted_integral);
        j["bound"] = fioh::format_number(rep.bound);
        j["margin"] = fioh::format_number(rep.margin);
        j["ball_volume"] = fioh::format_number(rep.ball_volume);
        write_report(mol_report_path, j);
        return rep.valid() ? 0 : 1;
      }
      if (mol_action == "make") {
        fioh::SpatialGrid grid;
        grid.n = 2;
        grid.points = mol_points;
        grid.length = mol_length;
        fioh::write_field(mol_out, fioh::molecule_from_packet(grid, spec));
        return 0;
      }
      if (mol_action == "synthesize") {
        fioh::SpatialGrid grid;
        grid.n = 2;
        grid.points = mol_points;
        grid.length = mol_length;
        fioh::SpaceContext ctx = mol_ctx.make(grid);
        fioh::SynthesisReport rep = fioh::synthesis_experiment(
            ctx, mol_count, mol_p, mol_decay, mol_seeds, 4000);
        ordered_json j;
        j["count"] = rep.count;
        j["p"] = fioh::format_number(rep.p);
        j["max_ratio"] = fioh::format_number(rep.max_ratio);
        for (double r : rep.ratios)
          j["ratios"].push_back(fioh::format_number(r));
        write_report(mol_report_path, j);
        return 0;
      }
      throw fioh::InvalidInput("unknown molecule action " + mol_action);
    }

    if (max_cmd->parsed()) {
      GridField f = fioh::read_field(max_in);
      fioh::SpaceContext ctx = max_ctx.make(f.grid);
      fioh::MaximalReport rep = fioh::maximal_domination_check(
          ctx, f, max_decay, max_lambda, max_stride);
      ordered_json j;
      j["lambda"] = fioh::format_number(rep.lambda);
      j["decay_order"] = fioh::format_number(rep.decay_order);
      j["max_ratio"] = fioh::format_number(rep.max_ratio);
      j["sigma_spread"] = fioh::format_number(rep.sigma_spread);
      j["finite"] = rep.finite;
      for (std::size_t k = 0; k < rep.sigmas.size(); ++k) {
        ordered_json row;
        row["sigma"] = fioh::format_number(rep.sigmas[k]);
        row["max_ratio"] = fioh::format_number(rep.max_ratio_per_sigma[k]);
        j["per_sigma"].push_back(row);
      }
      write_report(max_report_path, j);
      return 0;
    }

    if (vol_cmd->parsed()) {
      fioh::BallVolumeEstimate est =
          fioh::ball_volume_estimate(vol_dim, vol_tau, vol_samples, vol_seed);
      ordered_json j;
      j["tau"] = fioh::format_number(vol_tau);
      j["volume"] = fioh::format_number(est.value);
      j["samples"] = static_cast<std::uint64_t>(est.samples);
      j["precision_warning"] = est.precision_warning;
      write_report("-", j);
      return 0;
    }

    if (mk_cmd->parsed()) {
      fioh::SpatialGrid grid;
      grid.n = 2;
      grid.points = mk_points;
      grid.length = mk_length;
      fioh::TestFieldSpec spec;
      if (mk_kind == "gaussian-bump")
        spec.kind = fioh::TestFieldSpec::Kind::GaussianBump;
      else if (mk_kind == "band-limited-random")
        spec.kind = fioh::TestFieldSpec::Kind::BandLimitedRandom;
      else if (mk_kind == "coherent-packet")
        spec.kind = fioh::TestFieldSpec::Kind::CoherentPacket;
      else if (mk_kind == "radial-annulus")
        spec.kind = fioh::TestFieldSpec::Kind::RadialAnnulus;
      else
        throw fioh::InvalidInput("unknown field kind " + mk_kind);
      spec.seed = mk_seed;
      spec.width = mk_width;
      spec.band_limit = mk_band;
      spec.sigma = mk_sigma;
      spec.omega = fioh::vec2(std::cos(mk_angle), std::sin(mk_angle));
      fioh::write_field(mk_out, fioh::make_test_field(grid, spec));
      return 0;
    }

    if (acc_cmd->parsed()) {
      fioh::ExperimentConfig cfg;
      cfg.suites = acc_suites.empty() ? fioh::known_suites() : acc_suites;
      cfg.threads = acc_threads;
      fioh::ReportBundle bundle = fioh::run(cfg);
      if (!acc_out.empty()) fioh::emit(bundle, acc_out, acc_format);
      return bundle.all_passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
