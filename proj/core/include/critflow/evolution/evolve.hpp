#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <vector>

#include "critflow/fields/field_types.hpp"
#include "critflow/spectral/spectral_field.hpp"

namespace critflow {

/// Time integration of  d_t w + u.grad w = nu d_{x1 x1} w.
struct EvolveConfig {
  double dt = 1e-3;
  double final_time = 0.0;
  double viscosity = 0.0;
  double cfl_max = 0.5;
  int record_every = 1;
  /// Re-project onto odd-odd symmetry after every step (odd-odd input only).
  bool project_symmetry = true;
  /// When non-empty, the last finite state is written here (VRT1) before a
  /// NumericalError is raised.
  std::filesystem::path dump_path;

  void validate() const;
};

struct StepReport {
  int substeps = 1;
  double dt_used = 0.0;
  double max_speed = 0.0;
};

/// Stateful pseudo-spectral integrator. The state lives in coefficient space,
/// restricted to the 2/3-rule band: the initial field is dealiased (and, for
/// odd-odd input, re-projected) on construction, so every recorded frame
/// including the first is a band-limited field.
class Evolver {
 public:
  Evolver(const VorticityField& initial, EvolveConfig config);
  ~Evolver();
  Evolver(Evolver&&) noexcept;
  Evolver& operator=(Evolver&&) noexcept;

  double time() const;
  const Grid& grid() const;
  const EvolveConfig& config() const;

  /// One RK4 step of size dt. Halves the step (repeatedly) when
  /// dt * max|u| / h exceeds cfl_max; throws NumericalError on non-finite state.
  StepReport advance(double dt);

  VorticityField snapshot() const;
  const SpectralField& spectrum() const;
  /// Total number of CFL halvings so far.
  int halvings() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One step of cfg.dt from omega.time().
VorticityField step(const VorticityField& omega, const EvolveConfig& cfg,
                    StepReport* report = nullptr);

using Trajectory = std::vector<VorticityField>;
using FrameObserver = std::function<void(const VorticityField&)>;

/// Steps of cfg.dt (the last one shortened to land on final_time exactly);
/// frames are recorded every record_every steps, plus the initial and final
/// states.
Trajectory evolve(const VorticityField& initial, const EvolveConfig& cfg);
/// Streaming variant: frames go to the observer instead of being stored.
/// Returns the number of CFL halvings.
int evolve(const VorticityField& initial, const EvolveConfig& cfg, const FrameObserver& observer);

/// Conserved-quantity diagnostics for one frame (Lebesgue measure on [-1,1)^2).
struct ConservedQuantities {
  double time = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  double l4 = 0.0;
  double energy = 0.0;  // 1/2 |u|_2^2
  double h1 = 0.0;      // |grad w|_2
  double symmetry_residual = 0.0;
};
ConservedQuantities conserved_quantities(const VorticityField& omega);

/// Per-interval residual of d/dt |w|_2^2 + 2 nu |d_1 w|_2^2 = 0. The interval
/// mean of each mode's dissipation is the log-mean of its endpoint powers,
/// exact for the integrating-factor decay of stiff modes.
struct EnergyBalanceReport {
  std::vector<double> interval_residual;
  std::vector<double> interval_dissipation;  // interval mean of 2 nu |d_1 w|_2^2
  std::vector<double> enstrophy;             // |w|_2^2 per frame
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double max_dissipation = 0.0;
  /// max_i |residual_i| / max_i |dissipation_i|; infinity when nu = 0.
  double relative_residual = 0.0;
  bool monotone_nonincreasing = true;
};
EnergyBalanceReport energy_balance(const Trajectory& trajectory, double viscosity);

}  // namespace critflow
