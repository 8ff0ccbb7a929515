#include "fioh/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "fioh/experiment.hpp"
#include "fioh/fio.hpp"
#include "fioh/maximal.hpp"
#include "fioh/molecules.hpp"
#include "fioh/quadrature.hpp"
#include "fioh/spaces.hpp"
#include "fioh/tent.hpp"

namespace fioh::acceptance {

namespace {

using nlohmann::ordered_json;

SpatialGrid grid2(int points, double length = kTwoPi) {
  SpatialGrid g;
  g.n = 2;
  g.points = points;
  g.length = length;
  return g;
}

struct Check {
  bool pass = true;
  void require(bool ok) { pass = pass && ok; }
};

// --- 1: W is an isometry up to quadrature error -------------------------.

CriterionResult criterion_isometry(std::ostream& log) {
  CriterionResult res{1, "isometry", false, {}};
  SpatialGrid grid = grid2(256);
  auto family =
      std::make_shared<PacketFamily>(grid, DirectionSet::equispaced_circle(64));
  std::vector<GridField> fields = SpaceContext::standard_family(grid);

  Check chk;
  double prev_worst = 0.0;
  bool first = true;
  for (int q : {4, 8, 16}) {
    WaveTransform wt(family, ScaleLadder::make(5, q));
    double worst = 0.0;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      double defect = wt.isometry_defect(fields[i]);
      worst = std::max(worst, defect);
      ordered_json rec;
      rec["q"] = q;
      rec["field"] = SpaceContext::standard_family_names()[i];
      rec["defect"] = format_number(defect);
      res.records.push_back(rec);
      if (q == 4) chk.require(defect <= 1e-2);
    }
    log << "  Q=" << q << " worst defect " << worst << "\n";
    if (!first) chk.require(worst < prev_worst);
    prev_worst = worst;
    first = false;
  }
  res.pass = chk.pass;
  return res;
}

// --- 2: reconstruction V W f = f and adjointness ------------------------.

CriterionResult criterion_reconstruction(std::ostream& log) {
  CriterionResult res{2, "reconstruction", false, {}};
  Check chk;

  SpatialGrid grid = grid2(256);
  auto family =
      std::make_shared<PacketFamily>(grid, DirectionSet::equispaced_circle(64));
  std::vector<GridField> fields;
  for (int k = 0; k < 10; ++k) {
    TestFieldSpec spec;
    spec.kind = TestFieldSpec::Kind::BandLimitedRandom;
    spec.seed = 201 + static_cast<std::uint64_t>(k);
    spec.band_limit = 12.0;
    fields.push_back(make_test_field(grid, spec));
  }

  double prev_worst = 0.0;
  bool first = true;
  for (int q : {4, 8, 16}) {
    WaveTransform wt(family, ScaleLadder::make(5, q));
    double worst = 0.0;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      GridField r = wt.reconstruct(fields[i]);
      GridField diff(grid);
      for (std::size_t k = 0; k < r.values.size(); ++k)
        diff.values[k] = r.values[k] - fields[i].values[k];
      double err = l2_norm(diff) / l2_norm(fields[i]);
      worst = std::max(worst, err);
      ordered_json rec;
      rec["q"] = q;
      rec["field"] = static_cast<int>(i);
      rec["rel_error"] = format_number(err);
      res.records.push_back(rec);
      if (q == 4) chk.require(err <= 1e-2);
    }
    log << "  Q=" << q << " worst reconstruction error " << worst << "\n";
    if (!first) chk.require(worst < prev_worst);
    prev_worst = worst;
    first = false;
  }

  // Composition against the analyze/synthesize pipeline on a mid-size grid.
  {
    SpatialGrid g128 = grid2(128);
    auto fam =
        std::make_shared<PacketFamily>(g128, DirectionSet::equispaced_circle(64));
    WaveTransform wt(fam, ScaleLadder::make(5, 4));
    TestFieldSpec spec;
    spec.kind = TestFieldSpec::Kind::BandLimitedRandom;
    spec.seed = 211;
    spec.band_limit = 12.0;
    GridField f = make_test_field(g128, spec);
    GridField via_field = wt.synthesize(wt.analyze(f));
    GridField via_partition = wt.reconstruct(f);
    GridField diff(g128);
    for (std::size_t k = 0; k < diff.values.size(); ++k)
      diff.values[k] = via_field.values[k] - via_partition.values[k];
    double consistency = l2_norm(diff) / l2_norm(f);
    log << "  pipeline consistency " << consistency << "\n";
    chk.require(consistency <= 1e-12);
    ordered_json rec;
    rec["pipeline_consistency"] = format_number(consistency);
    res.records.push_back(rec);
  }

  // Adjointness <Wf, G> = <f, VG> on a small grid.
  {
    SpatialGrid g64 = grid2(64);
    auto fam =
        std::make_shared<PacketFamily>(g64, DirectionSet::equispaced_circle(16));
    WaveTransform wt(fam, ScaleLadder::make(3, 4));
    std::mt19937_64 eng(7);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      TestFieldSpec spec;
      spec.kind = TestFieldSpec::Kind::BandLimitedRandom;
      spec.seed = 300 + static_cast<std::uint64_t>(trial);
      spec.band_limit = 3.0;
      GridField f = make_test_field(g64, spec);
      PhaseSpaceField G(g64, fam->directions(), wt.ladder());
      for (auto& slice : G.high)
        for (cplx& v : slice) v = complex_normal(eng);
      for (cplx& v : G.low) v = complex_normal(eng);

      PhaseSpaceField Wf = wt.analyze(f);
      double cell = g64.spacing() * g64.spacing();
      cplx lhs = 0.0;
      for (int node = 0; node < wt.ladder().node_count(); ++node) {
        double w = wt.ladder().high[node].weight;
        for (int d = 0; d < fam->directions().size(); ++d) {
          const auto& a = Wf.slice(node, d);
          const auto& b = G.slice(node, d);
          cplx dotv = 0.0;
          for (std::size_t k = 0; k < a.size(); ++k)
            dotv += a[k] * std::conj(b[k]);
          lhs += w * fam->directions().weights[d] * cell * dotv;
        }
      }
      {
        cplx dotv = 0.0;
        for (std::size_t k = 0; k < Wf.low.size(); ++k)
          dotv += Wf.low[k] * std::conj(G.low[k]);
        lhs += wt.ladder().low_weight() * cell * dotv;
      }
      GridField VG = wt.synthesize(G);
      cplx rhs = inner_product(f, VG);
      double rel = std::abs(lhs - rhs) /
                   std::max(1e-300, std::abs(rhs));
      worst = std::max(worst, rel);
    }
    log << "  adjointness defect " << worst << "\n";
    chk.require(worst <= 1e-10);
    ordered_json rec;
    rec["adjointness"] = format_number(worst);
    res.records.push_back(rec);
  }

  res.pass = chk.pass;
  return res;
}

// --- 3: the p = 2 space is L^2 ------------------------------------------.

CriterionResult criterion_h2_l2(std::ostream& log) {
  CriterionResult res{3, "h2-is-l2", false, {}};
  SpatialGrid grid = grid2(256);
  SpaceContext ctx(grid, 64, 5, 4);
  std::vector<GridField> fields = SpaceContext::standard_family(grid);
  Check chk;
  double worst = 0.0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    double value = ctx.hpfio_norm(fields[i], 2.0, 0.0).value;
    double l2 = l2_norm(fields[i]);
    double defect = std::abs(value - l2) / l2;
    worst = std::max(worst, defect);
    chk.require(defect <= 2e-2);
    ordered_json rec;
    rec["field"] = SpaceContext::standard_family_names()[i];
    rec["hpfio"] = format_number(value);
    rec["l2"] = format_number(l2);
    rec["defect"] = format_number(defect);
    res.records.push_back(rec);
  }
  log << "  worst |hpfio - l2|/l2 = " << worst << "\n";
  res.pass = chk.pass;
  return res;
}

// --- 4: the norm-equivalence web -----------------------------------------.

struct WebConstants {
  // pair name -> worst two-sided ratio over the family
  std::map<std::string, double> constants;
  double worst_pairwise = 0.0;
};

WebConstants web_at(const SpatialGrid& grid, std::ostream& log,
                    std::vector<ordered_json>* records) {
  SpaceContext ctx(grid, 64, 5, 4);
  std::vector<GridField> fields = SpaceContext::standard_family(grid);
  const std::vector<std::pair<double, double>> ps = {
      {0.5, 0.0}, {2.0 / 3.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}};

  WebConstants out;
  for (const auto& [p, s] : ps) {
    std::vector<std::map<std::string, double>> values(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const GridField& f = fields[i];
      NormResult fio = ctx.hpfio_norm(f, p, s);
      values[i]["definition"] = fio.value;
      values[i]["weighted"] = fio.secondary;
      values[i]["equivalent-A"] = ctx.equivalent_norm_A(f, p, s).value;
      if (s == 0.0) values[i]["theta"] = ctx.theta_square_norm(f, p).value;
      values[i]["directional"] = ctx.directional_norm(f, p, s).value;

      ordered_json rec;
      rec["grid"] = grid.points;
      rec["p"] = format_number(p);
      rec["s"] = format_number(s);
      rec["field"] = SpaceContext::standard_family_names()[i];
      for (const auto& [k, v] : values[i]) rec[k] = format_number(v);
      if (records) records->push_back(rec);
    }
    // Pairwise two-sided constants over the family.
    std::vector<std::string> modes;
    for (const auto& [k, v] : values[0]) modes.push_back(k);
    for (std::size_t a = 0; a < modes.size(); ++a)
      for (std::size_t b = a + 1; b < modes.size(); ++b) {
        double worst = 0.0;
        for (auto& vals : values) {
          double r = vals[modes[a]] / vals[modes[b]];
          worst = std::max(worst, std::max(r, 1.0 / r));
        }
        std::string key = "p" + format_number(p) + "-s" + format_number(s) +
                          ":" + modes[a] + "/" + modes[b];
        out.constants[key] = worst;
        out.worst_pairwise = std::max(out.worst_pairwise, worst);
      }
    log << "  N=" << grid.points << " p=" << p << " s=" << s
        << " worst pairwise " << out.worst_pairwise << "\n";
  }
  return out;
}

CriterionResult criterion_norm_web(std::ostream& log) {
  CriterionResult res{4, "norm-equivalence-web", false, {}};
  Check chk;
  WebConstants coarse = web_at(grid2(128), log, &res.records);
  WebConstants fine = web_at(grid2(256), log, &res.records);
  chk.require(fine.worst_pairwise <= 100.0);
  chk.require(coarse.worst_pairwise <= 100.0);
  for (const auto& [key, c256] : fine.constants) {
    auto it = coarse.constants.find(key);
    if (it == coarse.constants.end()) continue;
    double drift = c256 / it->second;
    chk.require(drift <= 2.0 && drift >= 0.5);
    ordered_json rec;
    rec["pair"] = key;
    rec["constant_128"] = format_number(it->second);
    rec["constant_256"] = format_number(c256);
    rec["drift"] = format_number(drift);
    res.records.push_back(rec);
  }
  res.pass = chk.pass;
  return res;
}

// --- 5: Sobolev sandwich --------------------------------------------------.

CriterionResult criterion_sobolev(std::ostream& log) {
  CriterionResult res{5, "sobolev-sandwich", false, {}};
  Check chk;
  const std::vector<double> full = {0.25, 0.125, 0.0625, 0.03125, 0.015625};
  const std::vector<double> shared = {0.25, 0.125, 0.0625, 0.03125};
  for (double p : {2.0 / 3.0, 1.0}) {
    EmbeddingReport fine = embedding_experiment(grid2(256), 64, p, 0.0, full);
    EmbeddingReport fine_shared =
        embedding_experiment(grid2(256), 64, p, 0.0, shared);
    EmbeddingReport coarse =
        embedding_experiment(grid2(128), 64, p, 0.0, shared);

    double expected_gap = 2.0 * sp_exponent(2, p);
    log << "  p=" << p << " slope gap " << fine.slope_gap << " (expect "
        << expected_gap << "), constants " << fine.upper_constant << ", "
        << fine.lower_constant << "\n";
    chk.require(std::abs(fine.slope_gap - expected_gap) <= 0.1);
    chk.require(std::isfinite(fine.upper_constant) &&
                std::isfinite(fine.lower_constant));
    double drift_up = fine_shared.upper_constant / coarse.upper_constant;
    double drift_lo = fine_shared.lower_constant / coarse.lower_constant;
    chk.require(drift_up <= 2.0 && drift_up >= 0.5);
    chk.require(drift_lo <= 2.0 && drift_lo >= 0.5);

    for (std::size_t k = 0; k < full.size(); ++k) {
      ordered_json rec;
      rec["p"] = format_number(p);
      rec["sigma"] = format_number(full[k]);
      rec["upper_norm"] = format_number(fine.upper_norms[k]);
      rec["fio_norm"] = format_number(fine.fio_norms[k]);
      rec["lower_norm"] = format_number(fine.lower_norms[k]);
      res.records.push_back(rec);
    }
    ordered_json sum;
    sum["p"] = format_number(p);
    sum["slope_gap"] = format_number(fine.slope_gap);
    sum["upper_constant"] = format_number(fine.upper_constant);
    sum["lower_constant"] = format_number(fine.lower_constant);
    sum["upper_drift"] = format_number(drift_up);
    sum["lower_drift"] = format_number(drift_lo);
    res.records.push_back(sum);
  }
  res.pass = chk.pass;
  return res;
}

// --- 6: tent atoms --------------------------------------------------------.

double atoms_worst_norm(const SpatialGrid& grid, int directions, double p,
                        int count, std::uint64_t seed0, double* triangle_slack) {
  DirectionSet dirs = DirectionSet::equispaced_circle(directions);
  ScaleLadder ladder = ScaleLadder::make(3, 2);
  std::mt19937_64 eng(seed0);
  double worst = 0.0;
  std::vector<PhaseSpaceField> kept;
  for (int k = 0; k < count; ++k) {
    MetricBall ball;
    ball.radius = 0.25 * std::pow(8.0, uniform01(eng));  // in [1/4, 2]
    std::size_t flat = eng() % grid.size();
    int dir = static_cast<int>(eng() % dirs.size());
    ball.center = PhasePoint{grid.position(flat), dirs.dirs[dir].u};
    TentAtom atom = atom_generate(grid, dirs, ladder, ball, p, 0.0,
                                  seed0 + 17 * k);
    AtomReport rep = atom_validate(atom, p, 0.0);
    if (!rep.valid()) return std::numeric_limits<double>::infinity();
    TentParams params;
    params.p = p;
    worst = std::max(worst, tent_norm(atom.samples, params).value);
    if (kept.size() < 8) kept.push_back(atom.samples);
  }
  if (triangle_slack) {
    *triangle_slack = 0.0;
    TentParams params;
    params.p = p;
    for (std::size_t a = 0; a + 1 < kept.size(); a += 2) {
      PhaseSpaceField sum = kept[a];
      for (std::size_t sl = 0; sl < sum.high.size(); ++sl)
        for (std::size_t k = 0; k < sum.high[sl].size(); ++k)
          sum.high[sl][k] += kept[a + 1].high[sl][k];
      for (std::size_t k = 0; k < sum.low.size(); ++k)
        sum.low[k] += kept[a + 1].low[k];
      double lhs = std::pow(tent_norm(sum, params).value, p);
      double rhs = std::pow(tent_norm(kept[a], params).value, p) +
                   std::pow(tent_norm(kept[a + 1], params).value, p);
      *triangle_slack = std::max(*triangle_slack, lhs - rhs);
    }
  }
  return worst;
}

CriterionResult criterion_atoms(std::ostream& log) {
  CriterionResult res{6, "tent-atoms", false, {}};
  Check chk;
  for (double p : {0.5, 2.0 / 3.0, 1.0}) {
    double slack64 = 0.0, slack128 = 0.0;
    double c64 = atoms_worst_norm(grid2(64), 16, p, 50, 900, &slack64);
    double c128 = atoms_worst_norm(grid2(128), 32, p, 50, 900, &slack128);
    double drift = c128 / c64;
    log << "  p=" << p << " max atom norm " << c64 << " -> " << c128
        << ", p-triangle slack " << std::max(slack64, slack128) << "\n";
    chk.require(std::isfinite(c64) && std::isfinite(c128));
    chk.require(drift <= 2.0 && drift >= 0.5);
    chk.require(slack64 <= 1e-10 && slack128 <= 1e-10);
    ordered_json rec;
    rec["p"] = format_number(p);
    rec["max_norm_64"] = format_number(c64);
    rec["max_norm_128"] = format_number(c128);
    rec["drift"] = format_number(drift);
    rec["triangle_slack"] = format_number(std::max(slack64, slack128));
    res.records.push_back(rec);
  }
  res.pass = chk.pass;
  return res;
}

// --- 7: molecule synthesis -------------------------------------------------.

CriterionResult criterion_molecules(std::ostream& log) {
  CriterionResult res{7, "molecule-synthesis", false, {}};
  Check chk;
  SpaceContext ctx(grid2(128), 64, 5, 4);
  double p = 2.0 / 3.0;
  double decay = std::ceil(2.0 * 2 * (2.0 / p - 1.0)) + 1.0;  // = 9
  std::vector<double> per_k;
  for (int count : {1, 8, 32}) {
    SynthesisReport rep = synthesis_experiment(ctx, count, p, decay, 10, 4000);
    per_k.push_back(rep.max_ratio);
    log << "  K=" << count << " max ratio " << rep.max_ratio << "\n";
    for (std::size_t sidx = 0; sidx < rep.ratios.size(); ++sidx) {
      ordered_json rec;
      rec["count"] = count;
      rec["seed"] = static_cast<int>(4000 + sidx);
      rec["ratio"] = format_number(rep.ratios[sidx]);
      res.records.push_back(rec);
    }
  }
  double cmax = *std::max_element(per_k.begin(), per_k.end());
  double cmin = *std::min_element(per_k.begin(), per_k.end());
  chk.require(std::isfinite(cmax));
  chk.require(cmax / cmin <= 4.0);
  ordered_json sum;
  sum["reported_constant"] = format_number(cmax);
  sum["spread_across_k"] = format_number(cmax / cmin);
  res.records.push_back(sum);
  res.pass = chk.pass;
  return res;
}

// --- 8: maximal domination --------------------------------------------------.

CriterionResult criterion_maximal(std::ostream& log) {
  CriterionResult res{8, "maximal-domination", false, {}};
  Check chk;
  double lambda = 0.5;
  double decay = 2.0 * 2 / lambda;  // 2n / lambda = 8

  std::vector<TestFieldSpec> specs(3);
  specs[0].kind = TestFieldSpec::Kind::GaussianBump;
  specs[0].width = 0.5;
  specs[1].kind = TestFieldSpec::Kind::BandLimitedRandom;
  specs[1].seed = 101;
  specs[1].band_limit = 12.0;
  specs[2].kind = TestFieldSpec::Kind::CoherentPacket;
  specs[2].omega = vec2(1.0, 0.0);
  specs[2].sigma = 0.25;

  double worst128 = 0.0, worst256 = 0.0;
  for (int points : {128, 256}) {
    SpaceContext ctx(grid2(points), 64, 5, 4);
    for (std::size_t i = 0; i < specs.size(); ++i) {
      GridField f = make_test_field(ctx.grid(), specs[i]);
      MaximalReport rep = maximal_domination_check(ctx, f, decay, lambda, 2);
      chk.require(rep.finite);
      chk.require(rep.sigma_spread <= 10.0);
      (points == 128 ? worst128 : worst256) =
          std::max(points == 128 ? worst128 : worst256, rep.max_ratio);
      ordered_json rec;
      rec["grid"] = points;
      rec["field"] = static_cast<int>(i);
      rec["max_ratio"] = format_number(rep.max_ratio);
      rec["sigma_spread"] = format_number(rep.sigma_spread);
      res.records.push_back(rec);
      log << "  N=" << points << " field " << i << " max ratio "
          << rep.max_ratio << " spread " << rep.sigma_spread << "\n";
    }
  }
  double drift = worst256 / worst128;
  chk.require(drift <= 2.0 && drift >= 0.5);
  ordered_json sum;
  sum["max_ratio_128"] = format_number(worst128);
  sum["max_ratio_256"] = format_number(worst256);
  sum["drift"] = format_number(drift);
  res.records.push_back(sum);
  res.pass = chk.pass;
  return res;
}

// --- 9: wave vs half-wave dichotomy ----------------------------------------.

CriterionResult criterion_dichotomy(std::ostream& log) {
  CriterionResult res{9, "wave-halfwave-dichotomy", false, {}};
  Check chk;

  GrowthReport deep = halfwave_growth_experiment(0.5, 0.0, 4, 128, kTwoPi, 32);
  GrowthReport control = halfwave_growth_experiment(1.0, 0.0, 4, 128, kTwoPi, 32);

  log << "  p=1/2 half-wave ratios:";
  for (double r : deep.halfwave_ratios) log << " " << r;
  log << "\n  p=1/2 cosine ratios:";
  for (double r : deep.cosine_ratios) log << " " << r;
  log << "\n  p=1 half-wave ratios:";
  for (double r : control.halfwave_ratios) log << " " << r;
  log << "\n";

  chk.require(deep.growth_verdict);
  chk.require(deep.cosine_bounded);
  double hmin = *std::min_element(control.halfwave_ratios.begin(),
                                  control.halfwave_ratios.end());
  double hmax = *std::max_element(control.halfwave_ratios.begin(),
                                  control.halfwave_ratios.end());
  chk.require(hmax <= 2.0 * hmin);
  chk.require(control.cosine_bounded);

  for (std::size_t k = 0; k < deep.box_lengths.size(); ++k) {
    ordered_json rec;
    rec["box_length"] = format_number(deep.box_lengths[k]);
    rec["halfwave_p_half"] = format_number(deep.halfwave_ratios[k]);
    rec["cosine_p_half"] = format_number(deep.cosine_ratios[k]);
    rec["halfwave_p_one"] = format_number(control.halfwave_ratios[k]);
    rec["cosine_p_one"] = format_number(control.cosine_ratios[k]);
    res.records.push_back(rec);
  }
  res.pass = chk.pass;
  return res;
}

// --- 10: oscillatory integral vs multiplier path ----------------------------.

CriterionResult criterion_fio_consistency(std::ostream& log) {
  CriterionResult res{10, "fio-consistency", false, {}};
  Check chk;
  SpatialGrid grid = grid2(64);

  FIODescriptor identity =
      make_descriptor(builtin_phase("identity"), builtin_symbol("one"), 2);
  FIODescriptor halfwave =
      make_descriptor(builtin_phase("halfwave", 0.7), builtin_symbol("one"), 2);

  double worst_identity = 0.0, worst_cross = 0.0;
  for (int k = 0; k < 5; ++k) {
    TestFieldSpec spec;
    spec.kind = TestFieldSpec::Kind::BandLimitedRandom;
    spec.seed = 500 + static_cast<std::uint64_t>(k);
    spec.band_limit = 8.0;
    GridField f = make_test_field(grid, spec);

    GridField id_direct = apply_fio(identity, f, 1ull << 40, true);
    GridField diff(grid);
    for (std::size_t i = 0; i < f.values.size(); ++i)
      diff.values[i] = id_direct.values[i] - f.values[i];
    worst_identity = std::max(worst_identity, l2_norm(diff) / l2_norm(f));

    GridField direct = apply_fio(halfwave, f, 1ull << 40, true);
    GridField fast = apply_fio(halfwave, f);
    for (std::size_t i = 0; i < f.values.size(); ++i)
      diff.values[i] = direct.values[i] - fast.values[i];
    worst_cross = std::max(worst_cross, l2_norm(diff) / l2_norm(f));
  }
  log << "  identity error " << worst_identity << ", direct-vs-fast "
      << worst_cross << "\n";
  chk.require(worst_identity <= 1e-10);
  chk.require(worst_cross <= 1e-10);
  ordered_json rec;
  rec["identity_error"] = format_number(worst_identity);
  rec["direct_vs_fast"] = format_number(worst_cross);
  res.records.push_back(rec);
  res.pass = chk.pass;
  return res;
}

// --- 11: ball volume regimes -------------------------------------------------.

CriterionResult criterion_volumes(std::ostream& log) {
  CriterionResult res{11, "ball-volume-regimes", false, {}};
  Check chk;
  std::vector<double> taus_fine = {0.03125, 0.0625, 0.125, 0.25, 0.5};
  std::vector<double> taus_coarse = {2.0, 4.0, 8.0};

  std::vector<double> v_fine, v_coarse;
  for (double t : taus_fine)
    v_fine.push_back(ball_volume_estimate(2, t, 1000000, 42).value);
  for (double t : taus_coarse)
    v_coarse.push_back(ball_volume_estimate(2, t, 1000000, 42).value);

  double slope_fine = fit_loglog(taus_fine, v_fine).slope;
  double slope_coarse = fit_loglog(taus_coarse, v_coarse).slope;
  log << "  fine slope " << slope_fine << " (expect 4), coarse slope "
      << slope_coarse << " (expect 2)\n";
  chk.require(std::abs(slope_fine - 4.0) <= 0.1);
  chk.require(std::abs(slope_coarse - 2.0) <= 0.1);

  for (std::size_t k = 0; k < taus_fine.size(); ++k) {
    ordered_json rec;
    rec["tau"] = format_number(taus_fine[k]);
    rec["volume"] = format_number(v_fine[k]);
    res.records.push_back(rec);
  }
  for (std::size_t k = 0; k < taus_coarse.size(); ++k) {
    ordered_json rec;
    rec["tau"] = format_number(taus_coarse[k]);
    rec["volume"] = format_number(v_coarse[k]);
    res.records.push_back(rec);
  }
  ordered_json sum;
  sum["slope_fine"] = format_number(slope_fine);
  sum["slope_coarse"] = format_number(slope_coarse);
  res.records.push_back(sum);
  res.pass = chk.pass;
  return res;
}

}  // namespace

int criterion_count() { return 11; }

std::string criterion_name(int id) {
  static const char* names[] = {
      "isometry",          "reconstruction", "h2-is-l2",
      "norm-equivalence-web", "sobolev-sandwich", "tent-atoms",
      "molecule-synthesis", "maximal-domination", "wave-halfwave-dichotomy",
      "fio-consistency",   "ball-volume-regimes"};
  if (id < 1 || id > 11) throw InvalidInput("criterion id out of range");
  return names[id - 1];
}

CriterionResult run_criterion(int id, std::ostream& log) {
  CriterionResult res;
  switch (id) {
    case 1: res = criterion_isometry(log); break;
    case 2: res = criterion_reconstruction(log); break;
    case 3: res = criterion_h2_l2(log); break;
    case 4: res = criterion_norm_web(log); break;
    case 5: res = criterion_sobolev(log); break;
    case 6: res = criterion_atoms(log); break;
    case 7: res = criterion_molecules(log); break;
    case 8: res = criterion_maximal(log); break;
    case 9: res = criterion_dichotomy(log); break;
    case 10: res = criterion_fio_consistency(log); break;
    case 11: res = criterion_volumes(log); break;
    default: throw InvalidInput("criterion id out of range");
  }
  log << (res.pass ? "[PASS] " : "[FAIL] ") << "criterion " << id << " ("
      << criterion_name(id) << ")\n";
  return res;
}

}  // namespace fioh::acceptance
