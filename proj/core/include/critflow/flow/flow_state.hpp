#pragma once

#include <string>
#include <vector>

#include "critflow/flow/velocity_provider.hpp"
#include "critflow/point.hpp"

namespace critflow {

/// Particles launched together at launch_time; position[i] = Phi(time, launch[i]).
struct FlowState {
  std::vector<Point> launch;
  std::vector<Point> position;
  std::vector<std::string> labels;  // empty, or one per particle
  double launch_time = 0.0;
  double time = 0.0;

  static FlowState at_rest(std::vector<Point> points, double t = 0.0,
                           std::vector<std::string> labels = {});
  std::size_t size() const { return launch.size(); }
  /// Throws ConfigError on inconsistent list sizes.
  void validate() const;
};

/// RK4 integration of dPhi/dt = u(t, Phi) from state.time to final_time with
/// equal steps no longer than |dt|; runs backward when final_time < state.time.
/// Positions are wrapped onto the torus after every step.
FlowState advect_particles(const FlowState& state, const VelocityProvider& velocity, double dt,
                           double final_time);

/// Advects and calls observer after every step (and once for the input state).
void advect_particles(FlowState& state, const VelocityProvider& velocity, double dt,
                      double final_time, const std::function<void(const FlowState&)>& observer);

}  // namespace critflow
