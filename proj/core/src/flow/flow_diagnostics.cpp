#include "critflow/flow/flow_diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "critflow/errors.hpp"
#include "critflow/fields/sampling.hpp"
#include "critflow/spectral/operators.hpp"

namespace critflow {

std::vector<FlowState> trace(const FlowState& state, const VelocityProvider& velocity, double dt,
                             std::span<const double> times) {
  std::vector<FlowState> out;
  out.reserve(times.size());
  FlowState cur = state;
  for (double t : times) {
    if (t != cur.time) cur = advect_particles(cur, velocity, dt, t);
    out.push_back(cur);
  }
  return out;
}

TransportReport transport_consistency(const VorticityField& initial, const VorticityField& current,
                                      const FlowState& state) {
  state.validate();
  TransportReport r;
  r.residuals.reserve(state.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double e = std::abs(sample_at(current, state.position[i]) - sample_at(initial, state.launch[i]));
    r.residuals.push_back(e);
    r.max_residual = std::max(r.max_residual, e);
    sum += e;
  }
  r.mean_residual = state.size() ? sum / static_cast<double>(state.size()) : 0.0;
  return r;
}

TransportReport transport_consistency(const Trajectory& trajectory, const FlowState& state) {
  if (trajectory.empty()) throw ConfigError("empty trajectory");
  const double tol = 1e-12 * std::max(1.0, std::abs(state.time));
  for (const auto& frame : trajectory) {
    if (std::abs(frame.time() - state.time) <= tol) {
      return transport_consistency(trajectory.front(), frame, state);
    }
  }
  throw DomainError("no recorded frame at t = " + std::to_string(state.time));
}

bool QuasiLipschitzReport::holds(double c, double C) const {
  for (const auto& s : samples) {
    if (s.t <= 0.0) continue;
    const double tw = s.t * sup_norm;
    if (s.beta < std::exp(-C * tw) || s.beta > std::exp(c * tw)) return false;
  }
  return true;
}

QuasiLipschitzReport check_quasi_lipschitz(const VelocityProvider& velocity,
                                           std::span<const PointPair> pairs,
                                           std::span<const double> times, double dt,
                                           double sup_norm) {
  std::vector<Point> pts;
  pts.reserve(2 * pairs.size());
  for (const auto& p : pairs) {
    pts.push_back(p.x);
    pts.push_back(p.y);
  }
  if (times.empty()) throw ConfigError("quasi-Lipschitz check needs sample times");
  const FlowState start = FlowState::at_rest(pts, times.front());
  const auto track = trace(start, velocity, dt, times);

  QuasiLipschitzReport rep;
  rep.sup_norm = sup_norm;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const double d0 = (pairs[p].x - pairs[p].y).norm();
    std::vector<QuasiLipschitzSample> rows;
    bool usable = d0 > 0.0 && d0 < 1.0;
    for (const auto& snap : track) {
      if (!usable) break;
      const double d = torus_difference(snap.position[2 * p], snap.position[2 * p + 1]).norm();
      if (!(d > 0.0 && d < 1.0)) {
        usable = false;
        break;
      }
      rows.push_back({p, snap.time - start.time, d0, d, std::log(d) / std::log(d0)});
    }
    if (!usable) {
      rep.notes.push_back("pair " + std::to_string(p) + " skipped: separation not in (0, 1)");
      continue;
    }
    for (const auto& s : rows) {
      if (s.t > 0.0 && sup_norm > 0.0) {
        const double rate = std::log(s.beta) / (s.t * sup_norm);
        rep.expansion_rate = std::max(rep.expansion_rate, rate);
        rep.contraction_rate = std::max(rep.contraction_rate, -rate);
      }
      rep.samples.push_back(s);
    }
  }
  return rep;
}

std::vector<RadialSample> radial_exponents(std::span<const FlowState> track, double N) {
  const double lnln = std::log(std::log(N));
  std::vector<RadialSample> out;
  for (const auto& snap : track) {
    for (std::size_t i = 0; i < snap.size(); ++i) {
      const double r0 = snap.launch[i].norm();
      const double r = snap.position[i].norm();
      if (r0 <= 0.0 || r <= 0.0) continue;
      out.push_back({i, snap.time - snap.launch_time, r0, r, std::log(r / r0) / lnln});
    }
  }
  return out;
}

std::vector<double> jacobian_determinants(const VelocityProvider& velocity,
                                          std::span<const Point> base, double eps, double t0,
                                          double t1, double dt) {
  std::vector<Point> pts;
  pts.reserve(4 * base.size());
  for (Point x : base) {
    pts.push_back(x + Point{eps, 0.0});
    pts.push_back(x - Point{eps, 0.0});
    pts.push_back(x + Point{0.0, eps});
    pts.push_back(x - Point{0.0, eps});
  }
  const FlowState end = advect_particles(FlowState::at_rest(pts, t0), velocity, dt, t1);
  std::vector<double> det;
  det.reserve(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const Point* q = &end.position[4 * i];
    const Point a = torus_difference(q[1], q[0]) * (0.5 / eps);
    const Point b = torus_difference(q[3], q[2]) * (0.5 / eps);
    det.push_back(a.x1 * b.x2 - a.x2 * b.x1);
  }
  return det;
}

double forward_backward_error(const VelocityProvider& velocity, std::span<const Point> points,
                              double t0, double t1, double dt) {
  const FlowState start = FlowState::at_rest({points.begin(), points.end()}, t0);
  const FlowState fwd = advect_particles(start, velocity, dt, t1);
  const FlowState back = advect_particles(fwd, velocity, dt, t0);
  double err = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    err = std::max(err, torus_difference(points[i], back.position[i]).norm());
  }
  return err;
}

void SegmentSpec::validate() const {
  if (start.x1 != start.x2 || end.x1 != end.x2) throw ConfigError("segment endpoints must lie on the diagonal");
  if (!(start.x1 > 0.0 && end.x1 > start.x1)) throw ConfigError("segment must run outward from the origin");
  if (nodes < 2) throw ConfigError("segment needs at least two nodes");
}

std::vector<Point> SegmentSpec::points() const {
  validate();
  std::vector<Point> out;
  out.reserve(nodes);
  const double a = std::log(start.x1), b = std::log(end.x1);
  for (int j = 0; j < nodes; ++j) {
    const double s = j + 1 == nodes ? end.x1 : std::exp(a + (b - a) * j / (nodes - 1));
    out.push_back({s, s});
  }
  return out;
}

SegmentSpec make_segment(double N, int nodes) {
  SegmentSpec s{{1.0 / N, 1.0 / N}, {std::pow(N, -0.7), std::pow(N, -0.7)}, nodes};
  s.validate();
  return s;
}

std::vector<Point> circle_crossings(std::span<const Point> polyline, double r) {
  std::vector<Point> out;
  for (std::size_t j = 0; j + 1 < polyline.size(); ++j) {
    const double ra = polyline[j].norm(), rb = polyline[j + 1].norm();
    if ((ra - r) * (rb - r) > 0.0 || ra == rb) continue;
    const double s = (r - ra) / (rb - ra);
    out.push_back(polyline[j] + s * (polyline[j + 1] - polyline[j]));
  }
  return out;
}

CircleCoverage segment_circle_coverage(std::span<const Point> polyline,
                                       std::span<const double> radii) {
  CircleCoverage c;
  c.radii.assign(radii.begin(), radii.end());
  std::size_t hit = 0;
  for (double r : radii) {
    const bool ok = !circle_crossings(polyline, r).empty();
    c.covered.push_back(ok);
    hit += ok;
  }
  c.fraction = radii.empty() ? 0.0 : static_cast<double>(hit) / radii.size();
  return c;
}

}  // namespace critflow

namespace critflow {

int co_evolve(const VorticityField& initial, const EvolveConfig& cfg, FlowState particles,
              double particle_dt, const CoEvolutionObserver& observer) {
  std::shared_ptr<const VelocityField> prev;
  return evolve(initial, cfg, [&](const VorticityField& frame) {
    auto cur = std::make_shared<const VelocityField>(velocity_from_vorticity(frame));
    if (prev) {
      const SnapshotVelocity window({prev, cur});
      const double span = frame.time() - particles.time;
      advect_particles(particles, window, std::min(particle_dt, span), frame.time(), nullptr);
    } else {
      particles.time = particles.launch_time = frame.time();
    }
    prev = std::move(cur);
    if (observer) observer(frame, particles);
  });
}

}  // namespace critflow
