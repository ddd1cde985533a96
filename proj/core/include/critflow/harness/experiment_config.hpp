#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "critflow/analysis/diagnostics.hpp"
#include "critflow/evolution/evolve.hpp"

namespace critflow {

enum class ExperimentKind { kThm11Sweep, kThm12Run, kViscousLimit, kBcCalibration, kLosingCheck };

/// "thm11-sweep", "thm12-run", "viscous-limit", "bc-calibration", "losing-check".
std::string to_string(ExperimentKind kind);
/// Throws ConfigError for unknown names.
ExperimentKind parse_experiment_kind(const std::string& name);

/// Sectioned key=value configuration:
///
///   [experiment]  kind, output, seed
///   [data]        N (list), tau_star, growth_target, alpha, epsilon
///   [grid]        size.<N> = M overrides, refinement (list, continuum runs)
///   [time]        cfl, min_steps, frames
///   [norms]       delta (list), sobolev (list of s:p)
///   [viscous]     nu (list)
///   [losing]      constant (0 = take the calibration file)
///   [calibration] file
///
/// Lists are comma separated. Flags override file values key by key.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kThm11Sweep;
  std::filesystem::path output_dir = "out";
  unsigned seed = 1;

  std::vector<int> n_list{16, 32, 64, 128};
  double tau_star = 1.0;
  double growth_target = 4.0;  // M
  double alpha = 0.55;
  double epsilon = 0.5;

  std::map<int, int> grid_overrides;
  std::vector<int> refinement_grids{256, 512, 1024};

  /// dt = min(cfl h / max|u_0|, t* / min_steps).
  double cfl = 0.5;
  int min_steps = 64;
  /// Recorded intervals per run (analysis cost), at most one per step.
  int frames = 32;

  std::vector<double> deltas{1e-2, 1e-1, 1.0};
  std::vector<SobolevPair> sobolev{{1.0, 2.0}, {1.2, 5.0 / 3.0}, {1.9, 20.0 / 19.0}};

  std::vector<double> viscosities{0.0, 1e-4, 1e-3, 1e-2};
  double losing_constant = 0.0;
  std::filesystem::path calibration_file = "calibration/constants.ini";

  static ExperimentConfig load(const std::filesystem::path& path);
  static ExperimentConfig read(std::istream& in);
  /// Applies one "section.key=value" assignment.
  void set(const std::string& key, const std::string& value);
  /// Throws ConfigError on inconsistent or out-of-range values.
  void validate() const;

  /// Override if present, else the smallest power of two with h <= 1/(8N).
  int grid_size_for(int N) const;
  /// Evolution settings for a run to final_time from data with the given
  /// max speed: the dt policy above, record_every chosen to give `frames`.
  EvolveConfig evolve_config(const Grid& grid, double max_speed, double final_time,
                             double viscosity = 0.0) const;

  /// tau* ln ln N / ln N.
  double bump_time_scale(int N) const;
  /// tau* ln ln N / (ln N)^{1 - 5 alpha / 3}.
  double continuum_time_scale(int N) const;
};

/// Smallest power of two M >= 64 with 2/M <= 1/(8N).
int policy_grid_size(int N);

}  // namespace critflow
