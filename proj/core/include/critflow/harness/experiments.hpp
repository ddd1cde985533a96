#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include "critflow/analysis/calibration.hpp"
#include "critflow/harness/csv.hpp"
#include "critflow/harness/experiment_config.hpp"

namespace critflow {

/// Outcome of a run. Every run writes <output>/<kind>/<kind>.csv; runs made of
/// independent jobs (one per N, grid, or viscosity) also keep one row file per
/// job under <output>/<kind>/rows/ and skip jobs whose row file exists.
struct RunSummary {
  std::filesystem::path table;
  std::size_t rows = 0;
  int computed_jobs = 0;
  int resumed_jobs = 0;
};

/// Validates the config and dispatches on its kind.
RunSummary run_experiment(const ExperimentConfig& cfg);

/// Per N: growth ratio, occupancy, Q at the inner corner, segment wedge, one
/// row per recorded frame. Also writes thm11-summary.csv with one row per N.
RunSummary run_thm11_sweep(const ExperimentConfig& cfg);
/// Per refinement grid: restricted H1 on the delta ladder and W^{s,p} norms.
RunSummary run_thm12(const ExperimentConfig& cfg);
/// Per viscosity: growth ratio at t* and the energy identity residual.
RunSummary run_viscous_limit(const ExperimentConfig& cfg);
/// Per refinement grid: Bahouri-Chemin slope fit.
RunSummary run_bc_calibration(const ExperimentConfig& cfg);
/// |grad w(t)|_{q(t)} against |grad w0|_2 along a bump run.
RunSummary run_losing_check(const ExperimentConfig& cfg);

/// Single jobs, as run by the sweeps (no files written).
CsvTable thm11_job(const ExperimentConfig& cfg, int N);
CsvTable thm12_job(const ExperimentConfig& cfg, int grid_size);
CsvTable viscous_job(const ExperimentConfig& cfg, double viscosity);

/// Runs jobs 0..count-1 on a bounded pool (CRITFLOW_WORKERS). All jobs run to
/// completion; the first exception is rethrown afterwards.
void run_job_pool(std::size_t count, const std::function<void(std::size_t)>& job);

/// Fits the frozen constants on the calibration runs.
struct CalibrationPlan {
  int flow_N = 32;
  int losing_N = 32;
  std::vector<int> key_lemma_N{16, 32, 64, 128};
  std::vector<double> key_lemma_x1{1e-3, 3e-3, 1e-2, 3e-2};
  std::vector<double> key_lemma_aspect{1.0, 3.0, 10.0, 30.0, 100.0};
  int bc_grid = 1024;
};
CalibrationConstants calibrate(const CalibrationPlan& plan = {});

/// Smallest C (to relative precision 1e-6) with |grad w(t)|_{q(t)} <= |grad w0|_2
/// on every frame, where q(t) = 2 / (1 + 2 C |w0|_inf t).
double fit_losing_constant(const Trajectory& frames);

/// Key Lemma points x = (x1, aspect * x1) with x2 < 1/2.
std::vector<Point> key_lemma_points(std::span<const double> x1, std::span<const double> aspect);

}  // namespace critflow
