#include "critflow/flow/flow_state.hpp"

#include <cmath>

#include "critflow/errors.hpp"
#include "critflow/parallel.hpp"

namespace critflow {

FlowState FlowState::at_rest(std::vector<Point> points, double t, std::vector<std::string> labels) {
  FlowState s;
  s.position = points;
  s.launch = std::move(points);
  s.labels = std::move(labels);
  s.launch_time = t;
  s.time = t;
  s.validate();
  return s;
}

void FlowState::validate() const {
  if (position.size() != launch.size()) throw ConfigError("flow state: position/launch size mismatch");
  if (!labels.empty() && labels.size() != launch.size()) {
    throw ConfigError("flow state: label count does not match particle count");
  }
}

namespace {

void rk4_step(std::vector<Point>& x, double t, double h, const VelocityProvider& velocity,
              std::vector<Point>& k1, std::vector<Point>& k2, std::vector<Point>& k3,
              std::vector<Point>& k4, std::vector<Point>& tmp) {
  const std::size_t n = x.size();
  const std::size_t chunks = std::min<std::size_t>(worker_count(), std::max<std::size_t>(n, 1));
  const std::size_t per = (n + chunks - 1) / std::max<std::size_t>(chunks, 1);
  auto stage = [&](double ts, std::vector<Point>& k) {
    parallel_for(chunks, [&](std::size_t c) {
      const std::size_t lo = std::min(n, c * per), hi = std::min(n, lo + per);
      velocity.velocities(ts, std::span<const Point>(tmp).subspan(lo, hi - lo),
                          std::span<Point>(k).subspan(lo, hi - lo));
    });
  };
  tmp = x;
  stage(t, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + (0.5 * h) * k1[i];
  stage(t + 0.5 * h, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + (0.5 * h) * k2[i];
  stage(t + 0.5 * h, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
  stage(t + h, k4);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = wrap_point(x[i] + (h / 6.0) * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]));
  }
}

}  // namespace

void advect_particles(FlowState& state, const VelocityProvider& velocity, double dt,
                      double final_time, const std::function<void(const FlowState&)>& observer) {
  state.validate();
  if (!(std::abs(dt) > 0.0)) throw ConfigError("particle step must be nonzero");
  velocity.check_window(state.time, final_time);
  if (observer) observer(state);
  const double span = final_time - state.time;
  if (span == 0.0) return;
  const long steps = std::max(1L, static_cast<long>(std::ceil(std::abs(span) / std::abs(dt) - 1e-9)));
  const double h = span / static_cast<double>(steps);
  const double t0 = state.time;
  // Prime the provider's cache sequentially; stage evaluation is then read-only.
  velocity.velocity(t0, Point{});
  std::vector<Point> k1(state.size()), k2(state.size()), k3(state.size()), k4(state.size()), tmp;
  for (long s = 0; s < steps; ++s) {
    const double t = t0 + s * h;
    velocity.velocity(t + h, Point{});
    velocity.velocity(t, Point{});
    rk4_step(state.position, t, h, velocity, k1, k2, k3, k4, tmp);
    state.time = s + 1 == steps ? final_time : t0 + (s + 1) * h;
    if (observer) observer(state);
  }
}

FlowState advect_particles(const FlowState& state, const VelocityProvider& velocity, double dt,
                           double final_time) {
  FlowState out = state;
  advect_particles(out, velocity, dt, final_time, nullptr);
  return out;
}

}  // namespace critflow
