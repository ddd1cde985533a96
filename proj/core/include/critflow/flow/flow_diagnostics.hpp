#pragma once

#include <string>
#include <utility>
#include <vector>

#include "critflow/evolution/evolve.hpp"
#include "critflow/flow/flow_state.hpp"

namespace critflow {

/// Snapshots of a state advected through the given increasing times.
std::vector<FlowState> trace(const FlowState& state, const VelocityProvider& velocity, double dt,
                             std::span<const double> times);

/// |w(t, Phi(t, x)) - w0(x)| over the particles of a state launched at t = 0.
struct TransportReport {
  std::vector<double> residuals;
  double max_residual = 0.0;
  double mean_residual = 0.0;
};
TransportReport transport_consistency(const VorticityField& initial, const VorticityField& current,
                                      const FlowState& state);
/// Uses the first frame and the frame whose time matches state.time; throws
/// DomainError if no frame matches.
TransportReport transport_consistency(const Trajectory& trajectory, const FlowState& state);

struct PointPair {
  Point x;
  Point y;
};

/// beta(t) = ln d(t) / ln d(0) for a pair at separation d.
struct QuasiLipschitzSample {
  std::size_t pair = 0;
  double t = 0.0;
  double d0 = 0.0;
  double d = 0.0;
  double beta = 1.0;
};

/// Bounds exp(-C t W) <= beta(t) <= exp(c t W), W = |w|_inf.
struct QuasiLipschitzReport {
  std::vector<QuasiLipschitzSample> samples;
  std::vector<std::string> notes;
  double sup_norm = 0.0;
  /// Smallest c and C (both >= 0) for which every sample with t > 0 satisfies
  /// the bounds.
  double expansion_rate = 0.0;
  double contraction_rate = 0.0;
  bool holds(double c, double C) const;
};
/// Pairs whose separation is not below 1 at launch or at some sample time are
/// skipped with a note.
QuasiLipschitzReport check_quasi_lipschitz(const VelocityProvider& velocity,
                                           std::span<const PointPair> pairs,
                                           std::span<const double> times, double dt,
                                           double sup_norm);

/// Radius ratio |Phi(t,x)| / |x| written as (ln N)^e.
struct RadialSample {
  std::size_t particle = 0;
  double t = 0.0;
  double r0 = 0.0;
  double r = 0.0;
  double exponent = 0.0;
};
std::vector<RadialSample> radial_exponents(std::span<const FlowState> track, double N);

/// Finite-difference det(D Phi) at each base point, using launches at x +- eps e_i.
std::vector<double> jacobian_determinants(const VelocityProvider& velocity,
                                          std::span<const Point> base, double eps, double t0,
                                          double t1, double dt);

/// max_i |Phi(t0, Phi(t1, x_i)) - x_i| after advecting forward to t1 and back.
double forward_backward_error(const VelocityProvider& velocity, std::span<const Point> points,
                              double t0, double t1, double dt);

/// Diagonal segment {(s, s) : lower <= s <= upper} sampled at log-spaced nodes.
struct SegmentSpec {
  Point start;
  Point end;
  int nodes = 0;
  /// Throws ConfigError unless both endpoints are on the diagonal, start is
  /// closer to the origin, and nodes >= 2.
  void validate() const;
  std::vector<Point> points() const;
};
/// s from N^{-1} to N^{-7/10}.
SegmentSpec make_segment(double N, int nodes);

/// Points where the polyline crosses the circle |y| = r (linear interpolation
/// of the radius along each edge).
std::vector<Point> circle_crossings(std::span<const Point> polyline, double r);

struct CircleCoverage {
  std::vector<double> radii;
  std::vector<bool> covered;
  double fraction = 0.0;
};
CircleCoverage segment_circle_coverage(std::span<const Point> polyline,
                                       std::span<const double> radii);

/// Evolves the vorticity and advects particles alongside it without storing
/// the trajectory: between consecutive frames the particles see the linear
/// time interpolation of the two frame velocities. observer(frame, particles)
/// runs for every recorded frame, starting with the initial one.
using CoEvolutionObserver = std::function<void(const VorticityField&, const FlowState&)>;
int co_evolve(const VorticityField& initial, const EvolveConfig& cfg, FlowState particles,
              double particle_dt, const CoEvolutionObserver& observer);

}  // namespace critflow
