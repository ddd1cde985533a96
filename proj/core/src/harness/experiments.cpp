#include "critflow/harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "critflow/analysis/bc_fit.hpp"
#include "critflow/analysis/diagnostics.hpp"
#include "critflow/analysis/key_lemma.hpp"
#include "critflow/errors.hpp"
#include "critflow/fields/sampling.hpp"
#include "critflow/flow/flow_diagnostics.hpp"
#include "critflow/initial/initial_data.hpp"
#include "critflow/parallel.hpp"
#include "critflow/spectral/operators.hpp"

namespace critflow {
namespace {

namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

std::string label(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

fs::path run_root(const ExperimentConfig& cfg) { return cfg.output_dir / to_string(cfg.kind); }

/// Runs one job per key, reusing row files that already exist, and returns the
/// tables in key order.
template <class Key>
std::vector<CsvTable> run_resumable(const ExperimentConfig& cfg, const std::vector<Key>& keys,
                                    const std::function<std::string(const Key&)>& file_name,
                                    const std::function<CsvTable(const Key&)>& job,
                                    RunSummary& summary) {
  const fs::path rows = run_root(cfg) / "rows";
  std::vector<std::optional<CsvTable>> tables(keys.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const fs::path p = rows / file_name(keys[i]);
    if (fs::exists(p)) {
      tables[i] = CsvTable::read(p);
      ++summary.resumed_jobs;
    } else {
      todo.push_back(i);
    }
  }
  run_job_pool(todo.size(), [&](std::size_t j) {
    const std::size_t i = todo[j];
    CsvTable t = job(keys[i]);
    t.write_atomic(rows / file_name(keys[i]));
    tables[i] = std::move(t);
  });
  summary.computed_jobs += static_cast<int>(todo.size());
  std::vector<CsvTable> out;
  for (auto& t : tables) out.push_back(std::move(*t));
  return out;
}

RunSummary write_combined(const ExperimentConfig& cfg, const std::vector<CsvTable>& parts,
                          RunSummary summary) {
  CsvTable all(parts.front().name(), parts.front().header());
  for (const auto& p : parts) all.append(p);
  summary.table = run_root(cfg) / (to_string(cfg.kind) + ".csv");
  summary.rows = all.rows().size();
  all.write_atomic(summary.table);
  return summary;
}

struct BumpRun {
  VorticityField initial;
  double t_star;
  EvolveConfig evolve;
};

BumpRun bump_run(const ExperimentConfig& cfg, int N, double viscosity = 0.0) {
  BumpDataParams p;
  p.N = N;
  const Grid grid(cfg.grid_size_for(N));
  VorticityField w0 = make_bump_data(p, grid);
  const double t_star = cfg.bump_time_scale(N);
  const double umax = velocity_from_vorticity(w0).max_speed();
  EvolveConfig e = cfg.evolve_config(grid, umax, t_star, viscosity);
  return {std::move(w0), t_star, e};
}

}  // namespace

void run_job_pool(std::size_t count, const std::function<void(std::size_t)>& job) {
  const std::size_t workers = std::min<std::size_t>(std::max(worker_count(), 1), count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex error_lock;
  auto drain = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(error_lock);
        if (!first) first = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(drain);
    drain();
  }
  if (first) std::rethrow_exception(first);
}

CsvTable thm11_job(const ExperimentConfig& cfg, int N) {
  const BumpRun run = bump_run(cfg, N);
  const int m = run.initial.grid().size();
  const double r_lo = std::pow(N, -5.0 / 6.0);
  const double r_hi = std::pow(N, -4.0 / 6.0);
  const auto radii = log_spaced(r_lo, r_hi, 32);
  const double xh = std::pow(N, -7.0 / 8.0);
  const double case_one_level = 1.0 / cfg.growth_target;

  CsvTable t("thm11-sweep", {"N", "M", "t", "t_star", "h1", "growth_ratio", "linf",
                             "occupancy_mean", "case_I_fraction", "case_I", "Q_xhat",
                             "wedge_min_ratio"});
  double h1_0 = 0.0;
  const FlowState segment = FlowState::at_rest(make_segment(N, 256).points());
  co_evolve(run.initial, run.evolve, segment, run.evolve.dt,
            [&](const VorticityField& f, const FlowState& s) {
              const double h1 = gradient_l2(f);
              if (t.rows().empty()) h1_0 = h1;
              const auto occ = angular_occupancy(f, radii);
              const double frac = occ.haar_fraction_at_most(case_one_level, r_lo, r_hi);
              const double q = quadrant_integral(f, {xh, xh});
              const auto wedge = case_II_wedge_diagnostic(s, {});
              t.add_row({static_cast<long long>(N), static_cast<long long>(m), f.time(), run.t_star,
                         h1, h1 / h1_0, f.max_abs(), occ.haar_average(r_lo, r_hi), frac,
                         static_cast<long long>(frac > 0.5), q, wedge.min_ratio});
            });
  return t;
}

RunSummary run_thm11_sweep(const ExperimentConfig& cfg) {
  RunSummary summary;
  const auto parts = run_resumable<int>(
      cfg, cfg.n_list, [](const int& n) { return "N=" + std::to_string(n) + ".csv"; },
      [&cfg](const int& n) { return thm11_job(cfg, n); }, summary);

  CsvTable digest("thm11-summary", {"N", "M", "t_star", "max_ratio", "time_of_max", "Q0",
                                    "Q_final", "occupancy_mean_0", "occupancy_mean_final",
                                    "wedge_min_ratio_final", "case_I_hit"});
  for (const CsvTable& p : parts) {
    const std::size_t last = p.rows().size() - 1;
    double best = 0.0, when = 0.0;
    long long hit = 0;
    for (std::size_t r = 0; r <= last; ++r) {
      if (p.number(r, "growth_ratio") > best) {
        best = p.number(r, "growth_ratio");
        when = p.number(r, "t");
      }
      hit = std::max(hit, static_cast<long long>(p.number(r, "case_I")));
    }
    digest.add_row({static_cast<long long>(p.number(0, "N")), static_cast<long long>(p.number(0, "M")),
                    p.number(0, "t_star"), best, when, p.number(0, "Q_xhat"),
                    p.number(last, "Q_xhat"), p.number(0, "occupancy_mean"),
                    p.number(last, "occupancy_mean"), p.number(last, "wedge_min_ratio"), hit});
  }
  digest.write_atomic(run_root(cfg) / "thm11-summary.csv");
  return write_combined(cfg, parts, summary);
}

CsvTable thm12_job(const ExperimentConfig& cfg, int grid_size) {
  ContinuumDataParams c;
  c.alpha = cfg.alpha;
  c.epsilon = cfg.epsilon;
  const Grid grid(grid_size);
  const VorticityField w0 = make_continuum_data(c, grid);
  const double t_star = cfg.continuum_time_scale(cfg.n_list.front());
  const EvolveConfig e =
      cfg.evolve_config(grid, velocity_from_vorticity(w0).max_speed(), t_star);

  std::vector<std::string> header{"M", "t", "t_star", "h1", "linf"};
  for (double d : cfg.deltas) header.push_back("h1_outside@" + label(d));
  for (const SobolevPair& sp : cfg.sobolev)
    header.push_back("wsp@" + label(sp.s) + ":" + label(sp.p));
  CsvTable t("thm12-run", header);

  NormOptions opt;
  opt.deltas = cfg.deltas;
  opt.sobolev = cfg.sobolev;
  opt.polar = false;
  evolve(w0, e, [&](const VorticityField& f) {
    const NormReport r = norm_report(f, opt);
    std::vector<CsvCell> row{static_cast<long long>(grid_size), f.time(), t_star,
                             std::sqrt(r.h1_squared), r.sup_norm};
    for (double v : r.h1_outside_squared) row.push_back(v);
    for (double v : r.sobolev_norms) row.push_back(v);
    t.add_row(std::move(row));
  });
  return t;
}

RunSummary run_thm12(const ExperimentConfig& cfg) {
  RunSummary summary;
  const auto parts = run_resumable<int>(
      cfg, cfg.refinement_grids, [](const int& m) { return "M=" + std::to_string(m) + ".csv"; },
      [&cfg](const int& m) { return thm12_job(cfg, m); }, summary);
  return write_combined(cfg, parts, summary);
}

CsvTable viscous_job(const ExperimentConfig& cfg, double viscosity) {
  const int N = cfg.n_list.front();
  BumpRun run = bump_run(cfg, N, viscosity);
  // The energy identity uses the trapezoid rule between frames: keep every step.
  run.evolve.record_every = 1;
  const Trajectory traj = evolve(run.initial, run.evolve);
  const GrowthSeries g = growth_ratio(traj);
  const EnergyBalanceReport eb = energy_balance(traj, viscosity);
  std::string regime = "crossover";
  if (viscosity < 0.1 * run.t_star) regime = "nu<<t";
  if (viscosity > 10.0 * run.t_star) regime = "t<<nu";
  CsvTable t("viscous-limit", {"nu", "N", "M", "t_star", "max_ratio", "final_ratio",
                               "energy_relative_residual", "regime"});
  t.add_row({viscosity, static_cast<long long>(N),
             static_cast<long long>(run.initial.grid().size()), run.t_star, g.max_ratio,
             g.ratio.back(), viscosity > 0.0 ? eb.relative_residual : 0.0, regime});
  return t;
}

RunSummary run_viscous_limit(const ExperimentConfig& cfg) {
  RunSummary summary;
  const auto parts = run_resumable<double>(
      cfg, cfg.viscosities, [](const double& nu) { return "nu=" + label(nu) + ".csv"; },
      [&cfg](const double& nu) { return viscous_job(cfg, nu); }, summary);
  return write_combined(cfg, parts, summary);
}

RunSummary run_bc_calibration(const ExperimentConfig& cfg) {
  const BcFitReport rep = fit_bc_constant(cfg.refinement_grids);
  CsvTable t("bc-calibration", {"M", "slope", "intercept", "slope_stderr", "half_width",
                                "r_squared", "max_abs_residual", "relative_change"});
  for (const BcFit& f : rep.fits) {
    t.add_row({static_cast<long long>(f.grid_size), f.fit.slope, f.fit.intercept,
               f.fit.slope_stderr, f.half_width, f.fit.r_squared, f.fit.max_abs_residual,
               rep.relative_change});
  }
  RunSummary s;
  s.table = run_root(cfg) / "bc-calibration.csv";
  s.rows = t.rows().size();
  s.computed_jobs = 1;
  t.write_atomic(s.table);
  return s;
}

RunSummary run_losing_check(const ExperimentConfig& cfg) {
  const double C = cfg.losing_constant > 0.0
                       ? cfg.losing_constant
                       : CalibrationConstants::load(cfg.calibration_file).losing_constant;
  const int N = cfg.n_list.front();
  const BumpRun run = bump_run(cfg, N);
  const Trajectory traj = evolve(run.initial, run.evolve);
  std::vector<double> times;
  for (const auto& f : traj) times.push_back(f.time());
  const LosingExponent q = losing_exponent_curve(C, traj.front().max_abs(), times);
  const double h1_0 = gradient_l2(traj.front());
  CsvTable t("losing-check", {"N", "t", "C", "q_closed", "q_numeric", "grad_lq", "h1_0",
                              "ratio"});
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double lq = gradient_lq(traj[i], q.closed_form[i]);
    t.add_row({static_cast<long long>(N), times[i], C, q.closed_form[i], q.numeric[i], lq, h1_0,
               lq / h1_0});
  }
  RunSummary s;
  s.table = run_root(cfg) / "losing-check.csv";
  s.rows = t.rows().size();
  s.computed_jobs = 1;
  t.write_atomic(s.table);
  return s;
}

RunSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  switch (cfg.kind) {
    case ExperimentKind::kThm11Sweep:
      return run_thm11_sweep(cfg);
    case ExperimentKind::kThm12Run:
      return run_thm12(cfg);
    case ExperimentKind::kViscousLimit:
      return run_viscous_limit(cfg);
    case ExperimentKind::kBcCalibration:
      return run_bc_calibration(cfg);
    case ExperimentKind::kLosingCheck:
      return run_losing_check(cfg);
  }
  throw ConfigError("unhandled experiment kind");
}

std::vector<Point> key_lemma_points(std::span<const double> x1, std::span<const double> aspect) {
  std::vector<Point> pts;
  for (double a : x1)
    for (double r : aspect)
      if (a * r < 0.5) pts.push_back({a, a * r});
  return pts;
}

double fit_losing_constant(const Trajectory& frames) {
  if (frames.size() < 2) throw ConfigError("losing fit needs at least two frames");
  const double h1_0 = gradient_l2(frames.front());
  const double sup = frames.front().max_abs();
  const double area = std::pow(frames.front().grid().spacing(), 2);
  std::vector<std::vector<double>> slopes;
  std::vector<double> times;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const GradientField g = gradient(frames[i]);
    std::vector<double> mag(g.d1.size());
    for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::hypot(g.d1[k], g.d2[k]);
    slopes.push_back(std::move(mag));
    times.push_back(frames[i].time());
  }
  auto holds = [&](double C) {
    for (std::size_t i = 0; i < slopes.size(); ++i) {
      const double q = 2.0 / (1.0 + 2.0 * C * sup * times[i]);
      double s = 0.0;
      for (double v : slopes[i]) s += std::pow(v, q);
      if (std::pow(s * area, 1.0 / q) > h1_0) return false;
    }
    return true;
  };
  if (holds(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (!holds(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw NumericalError("no losing constant below 1e6 bounds the run");
  }
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  return hi;
}

CalibrationConstants calibrate(const CalibrationPlan& plan) {
  CalibrationConstants c;
  const ExperimentConfig policy;

  // Flow separation and radial exponents on one bump run.
  {
    BumpRun run = bump_run(policy, plan.flow_N);
    run.evolve.record_every = 1;
    const Trajectory traj = evolve(run.initial, run.evolve);
    const SnapshotVelocity velocity(traj);
    const double N = plan.flow_N;
    std::vector<PointPair> pairs;
    for (double r : log_spaced(1.0 / N, std::pow(N, -0.5), 8)) {
      for (double th : {kPi / 8.0, 3.0 * kPi / 8.0}) {
        const Point x = Point::polar(r, th);
        pairs.push_back({x, {}});
        pairs.push_back({x, x + Point::polar(0.05 * r, th + 1.0)});
      }
    }
    std::vector<double> times;
    for (int k = 0; k <= 8; ++k) times.push_back(run.t_star * k / 8.0);
    const auto ql = check_quasi_lipschitz(velocity, pairs, times, run.evolve.dt,
                                          run.initial.max_abs());
    c.flow_expansion = ql.expansion_rate;
    c.flow_contraction = ql.contraction_rate;

    std::vector<Point> starts;
    for (double r : log_spaced(1.0 / N, std::pow(N, -0.5), 12))
      for (double th : {kPi / 6.0, kPi / 4.0, kPi / 3.0}) starts.push_back(Point::polar(r, th));
    const auto track = trace(FlowState::at_rest(starts), velocity, run.evolve.dt, times);
    const double per_tau = std::log(N) / std::log(std::log(N));
    for (const RadialSample& s : radial_exponents(track, N)) {
      if (s.t <= 0.0) continue;
      const double tau = s.t * per_tau;
      c.radial_lower = std::max(c.radial_lower, -s.exponent / tau);
      c.radial_upper = std::max(c.radial_upper, s.exponent / tau);
    }
    if (plan.losing_N == plan.flow_N) c.losing_constant = fit_losing_constant(traj);
  }
  if (plan.losing_N != plan.flow_N) {
    const BumpRun run = bump_run(policy, plan.losing_N);
    c.losing_constant = fit_losing_constant(evolve(run.initial, run.evolve));
  }

  // Key Lemma remainder over the calibration point set.
  {
    const auto pts = key_lemma_points(plan.key_lemma_x1, plan.key_lemma_aspect);
    std::vector<VorticitySource> sources{bahouri_chemin_source()};
    for (int n : plan.key_lemma_N) {
      BumpDataParams p;
      p.N = n;
      sources.push_back(bump_source(p));
    }
    for (const auto& src : sources)
      for (const auto& r : key_lemma_decompose(src, pts))
        c.key_lemma_bound = std::max(c.key_lemma_bound, r.max_bound_ratio());
  }

  const std::vector<int> grid{plan.bc_grid};
  c.bc_slope = fit_bc_constant(grid).fits.front().fit.slope;
  return c;
}

}  // namespace critflow
