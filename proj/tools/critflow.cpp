// Command-line front end: data generation, evolution, tracing, diagnostics,
// and the experiment harness. Exit codes: 0 success, 2 configuration or
// input error, 3 numerical failure.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include "critflow/analysis/bc_fit.hpp"
#include "critflow/analysis/calibration.hpp"
#include "critflow/analysis/diagnostics.hpp"
#include "critflow/analysis/key_lemma.hpp"
#include "critflow/errors.hpp"
#include "critflow/evolution/evolve.hpp"
#include "critflow/fields/sampling.hpp"
#include "critflow/fields/snapshot_io.hpp"
#include "critflow/flow/flow_diagnostics.hpp"
#include "critflow/harness/csv.hpp"
#include "critflow/harness/experiments.hpp"
#include "critflow/initial/initial_data.hpp"
#include "critflow/spectral/operators.hpp"

using namespace critflow;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void emit(const CsvTable& table, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << table.str();
  } else {
    table.write_atomic(path);
  }
}

std::vector<Point> parse_points(const std::vector<std::string>& items) {
  std::vector<Point> pts;
  for (const auto& item : items) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("points are written x1:x2, got " + item);
    try {
      pts.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::logic_error&) {
      throw ConfigError("cannot parse point " + item);
    }
  }
  return pts;
}

std::vector<SobolevPair> parse_pairs(const std::vector<std::string>& items) {
  std::vector<SobolevPair> out;
  for (const Point& p : parse_points(items)) out.push_back({p.x1, p.x2});
  return out;
}

VorticitySource named_source(const std::string& name, int N) {
  if (name == "bc") return bahouri_chemin_source();
  if (name == "bump") {
    BumpDataParams p;
    p.N = N;
    p.validate();
    return bump_source(p);
  }
  throw ConfigError("unknown source '" + name + "' (bc, bump)");
}

struct MakeDataArgs {
  std::string kind = "bump";
  int N = 16;
  int M = 0;
  double alpha = 0.55;
  double epsilon = 0.5;
  bool normalize = false;
  std::string out;
};

int make_data(const MakeDataArgs& a) {
  VorticityField w(Grid(64));
  if (a.kind == "bump") {
    BumpDataParams p;
    p.N = a.N;
    p.validate();
    w = make_bump_data(p, Grid(a.M > 0 ? a.M : p.required_grid_size()));
  } else if (a.kind == "continuum") {
    if (a.M <= 0) throw ConfigError("continuum data needs --M");
    const Grid g(a.M);
    ContinuumDataParams p;
    p.alpha = a.alpha;
    p.epsilon = a.epsilon;
    if (a.normalize) p = normalize_continuum_data(p, g).params;
    w = make_continuum_data(p, g);
  } else if (a.kind == "bc") {
    w = make_bahouri_chemin(Grid(a.M > 0 ? a.M : 256));
  } else if (a.kind == "mode") {
    const Grid g(a.M > 0 ? a.M : 64);
    std::vector<double> s(g.point_count());
    for (int i = 0; i < g.size(); ++i)
      for (int j = 0; j < g.size(); ++j)
        s[g.index(i, j)] = std::sin(std::numbers::pi * g.coordinate(i)) *
                           std::sin(std::numbers::pi * g.coordinate(j));
    w = VorticityField(g, std::move(s), Symmetry::kOddOdd);
  } else {
    throw ConfigError("unknown data kind '" + a.kind + "' (bump, continuum, bc, mode)");
  }
  write_snapshot(a.out, w);
  std::fprintf(stderr, "wrote %s (M=%d, sup=%.6g)\n", a.out.c_str(), w.grid().size(), w.max_abs());
  return 0;
}

struct EvolveArgs {
  std::string in, out, csv, dump;
  EvolveConfig cfg;
};

int run_evolve(EvolveArgs a) {
  a.cfg.dump_path = a.dump;
  const VorticityField w0 = read_snapshot(a.in);
  CsvTable t("evolve", {"t", "L1", "L2", "Linf", "energy", "H1", "symmetry_residual"});
  VorticityField last = w0;
  evolve(w0, a.cfg, [&](const VorticityField& f) {
    const ConservedQuantities q = conserved_quantities(f);
    t.add_row({q.time, q.l1, q.l2, q.linf, q.energy, q.h1, q.symmetry_residual});
    last = f;
  });
  emit(t, a.csv);
  if (!a.out.empty()) write_snapshot(a.out, last);
  return 0;
}

struct TraceArgs {
  std::string in, csv;
  double T = 0.1;
  double dt = 1e-3;
  double segment_N = 0.0;
  int nodes = 64;
  std::vector<std::string> points;
  int record_every = 1;
};

int run_trace(const TraceArgs& a) {
  const VorticityField w0 = read_snapshot(a.in);
  std::vector<Point> pts = parse_points(a.points);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < pts.size(); ++i) labels.push_back("p" + std::to_string(i));
  if (a.segment_N > 0.0) {
    const auto seg = make_segment(a.segment_N, a.nodes).points();
    for (std::size_t i = 0; i < seg.size(); ++i) labels.push_back("S" + std::to_string(i));
    pts.insert(pts.end(), seg.begin(), seg.end());
  }
  if (pts.empty()) throw ConfigError("trace needs --point or --segment");
  EvolveConfig cfg;
  cfg.dt = a.dt;
  cfg.final_time = a.T;
  cfg.record_every = a.record_every;
  CsvTable t("trace", {"label", "t", "x1", "x2", "phi1", "phi2", "omega_along"});
  co_evolve(w0, cfg, FlowState::at_rest(pts, w0.time(), labels), a.dt,
            [&](const VorticityField& f, const FlowState& s) {
              for (std::size_t i = 0; i < s.size(); ++i) {
                t.add_row({s.labels[i], s.time, s.launch[i].x1, s.launch[i].x2,
                           s.position[i].x1, s.position[i].x2, sample_at(f, s.position[i])});
              }
            });
  emit(t, a.csv);
  return 0;
}

struct KeyLemmaArgs {
  std::string in, source = "bc", csv;
  int N = 16;
  std::vector<std::string> points;
  int n_max = 16;
};

int run_keylemma(const KeyLemmaArgs& a) {
  const std::vector<Point> pts = parse_points(a.points);
  if (pts.empty()) throw ConfigError("keylemma needs at least one --point");
  std::vector<KeyLemmaReport> reports;
  if (!a.in.empty()) {
    // Snapshot input: spectral velocity, cellwise quadrature of the interpolant.
    const VorticityField w = read_snapshot(a.in);
    const VelocityField u = velocity_from_vorticity(w);
    for (const Point& x : pts) reports.push_back(key_lemma_decompose(w, u, x));
  } else {
    KeyLemmaOptions opt;
    opt.lattice.n_max = a.n_max;
    reports = key_lemma_decompose(named_source(a.source, a.N), pts, opt);
  }
  CsvTable t("keylemma", {"x1", "x2", "u1", "u2", "Q", "ratio1", "B1", "bound1", "bound_ratio1",
                          "ratio2", "B2", "bound2", "bound_ratio2"});
  for (const auto& r : reports) {
    const auto& c0 = r.component[0];
    const auto& c1 = r.component[1];
    t.add_row({r.x.x1, r.x.x2, r.velocity.x1, r.velocity.x2, r.integral, c0.ratio, c0.remainder,
               c0.bound, c0.bound_ratio, c1.ratio, c1.remainder, c1.bound, c1.bound_ratio});
  }
  emit(t, a.csv);
  return 0;
}

struct NormsArgs {
  std::vector<std::string> in;
  std::string csv;
  std::vector<double> deltas{1e-2, 1e-1};
  std::vector<std::string> sobolev{"1:2"};
};

int run_norms(const NormsArgs& a) {
  NormOptions opt;
  opt.deltas = a.deltas;
  opt.sobolev = parse_pairs(a.sobolev);
  std::vector<std::string> header{"t", "sup", "l2_sq", "h1_sq", "polar_radial", "polar_angular"};
  for (double d : opt.deltas) header.push_back("h1_outside_sq@" + std::to_string(d));
  for (const auto& s : a.sobolev) header.push_back("wsp@" + s);
  CsvTable t("norms", header);
  for (const auto& path : a.in) {
    const NormReport r = norm_report(read_snapshot(path), opt);
    for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    std::vector<CsvCell> row{r.time, r.sup_norm, r.l2_squared, r.h1_squared, r.polar_radial,
                             r.polar_angular};
    for (double v : r.h1_outside_squared) row.push_back(v);
    for (double v : r.sobolev_norms) row.push_back(v);
    t.add_row(std::move(row));
  }
  emit(t, a.csv);
  return 0;
}

struct OccupancyArgs {
  std::string in, csv;
  double r_min = 0.01, r_max = 0.5;
  int count = 32;
  int angles = 4096;
  double level = 0.5;
  double set_N = 0.0, growth_target = 4.0, alpha = 0.55, a0 = 1.0;
};

int run_occupancy(const OccupancyArgs& a) {
  const VorticityField w = read_snapshot(a.in);
  std::optional<OccupancySetParams> set;
  if (a.set_N > 0.0) set = OccupancySetParams{a.set_N, a.growth_target, a.alpha, a.a0};
  const auto radii = log_spaced(a.r_min, a.r_max, a.count);
  const auto occ = angular_occupancy(w, radii, a.level, a.angles, set);
  CsvTable t("occupancy", {"t", "r", "measure", "in_set"});
  for (std::size_t i = 0; i < radii.size(); ++i) {
    t.add_row({occ.time, radii[i], occ.measure[i],
               static_cast<long long>(set ? occ.in_set[i] : 0)});
  }
  emit(t, a.csv);
  std::fprintf(stderr, "haar mean |I| = %.6g\n", occ.haar_average(a.r_min, a.r_max));
  return 0;
}

struct BcFitArgs {
  std::vector<int> grids{512, 1024};
  std::string csv;
  BcFitOptions opt;
};

int run_bc_fit(const BcFitArgs& a) {
  const BcFitReport rep = fit_bc_constant(a.grids, a.opt);
  CsvTable t("bc-fit", {"M", "slope", "intercept", "slope_stderr", "half_width", "r_squared",
                        "max_abs_residual", "relative_change"});
  for (const BcFit& f : rep.fits) {
    t.add_row({static_cast<long long>(f.grid_size), f.fit.slope, f.fit.intercept,
               f.fit.slope_stderr, f.half_width, f.fit.r_squared, f.fit.max_abs_residual,
               rep.relative_change});
  }
  emit(t, a.csv);
  return 0;
}

struct LosingArgs {
  double C = 1.0, sup = 1.0, T = 1.0;
  int count = 11;
  std::string csv;
};

int run_losing(const LosingArgs& a) {
  if (a.count < 2) throw ConfigError("losing needs --count >= 2");
  std::vector<double> times;
  for (int i = 0; i < a.count; ++i) times.push_back(a.T * i / (a.count - 1));
  const LosingExponent q = losing_exponent_curve(a.C, a.sup, times);
  if (q.max_discrepancy > 1e-10) throw NumericalError("ODE and closed form disagree");
  CsvTable t("losing", {"t", "q_closed", "q_numeric"});
  for (std::size_t i = 0; i < times.size(); ++i) t.add_row({times[i], q.closed_form[i], q.numeric[i]});
  emit(t, a.csv);
  return 0;
}

struct SweepArgs {
  std::string kind, config;
  std::vector<std::string> sets;
  std::string output;
};

int run_sweep(const SweepArgs& a) {
  ExperimentConfig cfg = a.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(a.config);
  if (!a.kind.empty()) cfg.kind = parse_experiment_kind(a.kind);
  for (const auto& s : a.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects section.key=value");
    cfg.set(s.substr(0, eq), s.substr(eq + 1));
  }
  if (!a.output.empty()) cfg.output_dir = a.output;
  const RunSummary r = run_experiment(cfg);
  std::fprintf(stderr, "%s: %zu rows (%d jobs computed, %d resumed)\n", r.table.c_str(), r.rows,
               r.computed_jobs, r.resumed_jobs);
  return 0;
}

int run_calibrate(const std::string& out) {
  const CalibrationConstants c = calibrate();
  c.save(out);
  c.write(std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"critflow: odd-odd 2D Euler experiments on the torus"};
  app.require_subcommand(1);

  MakeDataArgs md;
  auto* c_make = app.add_subcommand("make-data", "Write initial vorticity as a snapshot");
  c_make->add_option("--kind", md.kind, "bump, continuum, bc, or mode")->capture_default_str();
  c_make->add_option("--N", md.N, "Bump scale parameter")->capture_default_str();
  c_make->add_option("--M", md.M, "Grid size (0 = smallest admissible)");
  c_make->add_option("--alpha", md.alpha, "Continuum exponent")->capture_default_str();
  c_make->add_option("--epsilon", md.epsilon, "Continuum cutoff")->capture_default_str();
  c_make->add_flag("--normalize", md.normalize, "Shrink epsilon to unit norms");
  c_make->add_option("-o,--out", md.out, "Snapshot path")->required();

  EvolveArgs ev;
  auto* c_evolve = app.add_subcommand("evolve", "Integrate a snapshot; CSV of conserved quantities");
  c_evolve->add_option("-i,--in", ev.in, "Input snapshot")->required()->check(CLI::ExistingFile);
  c_evolve->add_option("-T,--final-time", ev.cfg.final_time, "Duration")->required();
  c_evolve->add_option("--dt", ev.cfg.dt, "Time step")->capture_default_str();
  c_evolve->add_option("--nu", ev.cfg.viscosity, "Viscosity on d11")->capture_default_str();
  c_evolve->add_option("--cfl", ev.cfg.cfl_max, "CFL ceiling before halving")->capture_default_str();
  c_evolve->add_option("--record-every", ev.cfg.record_every, "Steps per CSV row")->capture_default_str();
  c_evolve->add_option("--csv", ev.csv, "CSV path (default stdout)");
  c_evolve->add_option("-o,--out", ev.out, "Final snapshot path");
  c_evolve->add_option("--dump", ev.dump, "Snapshot written on numerical failure");

  TraceArgs tr;
  auto* c_trace = app.add_subcommand("trace", "Advect particles alongside the evolution");
  c_trace->add_option("-i,--in", tr.in, "Initial snapshot")->required()->check(CLI::ExistingFile);
  c_trace->add_option("-T,--final-time", tr.T, "Duration")->capture_default_str();
  c_trace->add_option("--dt", tr.dt, "Time step")->capture_default_str();
  c_trace->add_option("--point", tr.points, "Launch point x1:x2 (repeatable)");
  c_trace->add_option("--segment", tr.segment_N, "Trace the diagonal segment for this N");
  c_trace->add_option("--nodes", tr.nodes, "Segment nodes")->capture_default_str();
  c_trace->add_option("--record-every", tr.record_every, "Steps per output frame")->capture_default_str();
  c_trace->add_option("--csv", tr.csv, "CSV path (default stdout)");

  KeyLemmaArgs kl;
  auto* c_kl = app.add_subcommand("keylemma", "Quadrant integral and remainder at points");
  c_kl->add_option("-i,--in", kl.in, "Snapshot (spectral velocity); else --source")->check(CLI::ExistingFile);
  c_kl->add_option("--source", kl.source, "bc or bump (lattice velocity)")->capture_default_str();
  c_kl->add_option("--N", kl.N, "Bump scale parameter")->capture_default_str();
  c_kl->add_option("--point", kl.points, "Point x1:x2 (repeatable)")->required();
  c_kl->add_option("--n-max", kl.n_max, "Lattice truncation")->capture_default_str();
  c_kl->add_option("--csv", kl.csv, "CSV path (default stdout)");

  NormsArgs nm;
  auto* c_norms = app.add_subcommand("norms", "Critical norms of snapshots");
  c_norms->add_option("-i,--in", nm.in, "Snapshots")->required()->check(CLI::ExistingFile);
  c_norms->add_option("--delta", nm.deltas, "Annulus radii")->capture_default_str();
  c_norms->add_option("--sobolev", nm.sobolev, "Pairs s:p")->capture_default_str();
  c_norms->add_option("--csv", nm.csv, "CSV path (default stdout)");

  OccupancyArgs oc;
  auto* c_occ = app.add_subcommand("occupancy", "Angular occupancy |I(t,r)| of a snapshot");
  c_occ->add_option("-i,--in", oc.in, "Snapshot")->required()->check(CLI::ExistingFile);
  c_occ->add_option("--r-min", oc.r_min, "Smallest radius")->capture_default_str();
  c_occ->add_option("--r-max", oc.r_max, "Largest radius")->capture_default_str();
  c_occ->add_option("--count", oc.count, "Log-spaced radii")->capture_default_str();
  c_occ->add_option("--angles", oc.angles, "Angle cells on [0, pi/2]")->capture_default_str();
  c_occ->add_option("--level", oc.level, "Threshold")->capture_default_str();
  c_occ->add_option("--set-N", oc.set_N, "Report A(t) membership for this N");
  c_occ->add_option("--growth-target", oc.growth_target, "M in the A(t) threshold")->capture_default_str();
  c_occ->add_option("--alpha", oc.alpha, "alpha in the A(t) threshold")->capture_default_str();
  c_occ->add_option("--a0", oc.a0, "Outer radius parameter a0")->capture_default_str();
  c_occ->add_option("--csv", oc.csv, "CSV path (default stdout)");

  BcFitArgs bc;
  auto* c_bc = app.add_subcommand("bc-fit", "Bahouri-Chemin hyperbolic constant");
  c_bc->add_option("--grids", bc.grids, "Grid sizes")->capture_default_str();
  c_bc->add_option("--x2-min", bc.opt.x2_min)->capture_default_str();
  c_bc->add_option("--x2-max", bc.opt.x2_max)->capture_default_str();
  c_bc->add_option("--x2-count", bc.opt.x2_count)->capture_default_str();
  c_bc->add_option("--csv", bc.csv, "CSV path (default stdout)");

  LosingArgs lo;
  auto* c_lo = app.add_subcommand("losing", "Losing exponent q(t), closed form and ODE");
  c_lo->add_option("--C", lo.C, "Constant C > 0")->capture_default_str();
  c_lo->add_option("--sup", lo.sup, "|w0|_inf")->capture_default_str();
  c_lo->add_option("-T,--final-time", lo.T, "Last sample time")->capture_default_str();
  c_lo->add_option("--count", lo.count, "Sample count")->capture_default_str();
  c_lo->add_option("--csv", lo.csv, "CSV path (default stdout)");

  SweepArgs sw;
  auto* c_sw = app.add_subcommand("sweep", "Run an experiment recipe");
  c_sw->add_option("--kind", sw.kind,
                   "thm11-sweep, thm12-run, viscous-limit, bc-calibration, losing-check");
  c_sw->add_option("-c,--config", sw.config, "Sectioned key=value file")->check(CLI::ExistingFile);
  c_sw->add_option("--set", sw.sets, "Override section.key=value (repeatable)");
  c_sw->add_option("-o,--output", sw.output, "Output directory");

  std::string calib_out = "calibration/constants.ini";
  auto* c_cal = app.add_subcommand("calibrate", "Fit and freeze the calibration constants");
  c_cal->add_option("-o,--out", calib_out, "Constants file")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*c_make) return make_data(md);
    if (*c_evolve) return run_evolve(ev);
    if (*c_trace) return run_trace(tr);
    if (*c_kl) return run_keylemma(kl);
    if (*c_norms) return run_norms(nm);
    if (*c_occ) return run_occupancy(oc);
    if (*c_bc) return run_bc_fit(bc);
    if (*c_lo) return run_losing(lo);
    if (*c_sw) return run_sweep(sw);
    if (*c_cal) return run_calibrate(calib_out);
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return 0;
}
