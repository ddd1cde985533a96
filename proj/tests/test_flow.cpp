#include "critflow/errors.hpp"
#include "critflow/fields/sampling.hpp"
#include "critflow/flow/flow_diagnostics.hpp"
#include "critflow/initial/initial_data.hpp"
#include "critflow/spectral/operators.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace critflow;
using namespace critflow::testing;

namespace {

const AnalyticVelocity kStill([](double, Point) { return Point{}; }, 0.0, 10.0);

// Rigid rotation inside r < 0.5, smoothly switched off by r = 0.8.
Point rotation(double, Point x) {
  const double r = x.norm();
  const double cut = 1.0 - smoothstep((r - 0.5) / 0.3);
  return Point{-x.x2, x.x1} * cut;
}

}  // namespace

TEST_CASE("flow state validation") {
  FlowState s = FlowState::at_rest({{0.1, 0.2}, {0.3, 0.4}});
  CHECK(s.size() == 2);
  s.position.pop_back();
  CHECK_THROWS_AS(s.validate(), ConfigError);
  CHECK_THROWS_AS(FlowState::at_rest({{0.1, 0.2}}, 0.0, {"a", "b"}), ConfigError);
}

TEST_CASE("zero velocity leaves particles in place") {
  const FlowState s = FlowState::at_rest({{0.1, 0.2}, {-0.7, 0.4}});
  const FlowState e = advect_particles(s, kStill, 0.1, 1.0);
  CHECK(e.time == 1.0);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(e.position[i] == s.launch[i]);

  const std::vector<PointPair> pairs{{{0.1, 0.1}, {0.2, 0.3}}, {{0.01, 0.02}, {0.0, 0.0}}};
  const std::vector<double> times{0.0, 0.5, 1.0};
  const auto rep = check_quasi_lipschitz(kStill, pairs, times, 0.1, 1.0);
  REQUIRE(rep.samples.size() == 6);
  for (const auto& q : rep.samples) CHECK(q.beta == 1.0);
  CHECK(rep.expansion_rate == 0.0);
  CHECK(rep.contraction_rate == 0.0);
  CHECK(rep.holds(0.0, 0.0));
}

TEST_CASE("requested times outside the window are rejected") {
  const FlowState s = FlowState::at_rest({{0.1, 0.2}});
  CHECK_THROWS_AS(advect_particles(s, kStill, 0.1, 11.0), DomainError);
  const Grid g(64);
  const Trajectory traj{single_mode(g)};
  const SnapshotVelocity sv(traj);
  CHECK_THROWS_AS(advect_particles(s, sv, 0.1, 0.5), DomainError);
}

TEST_CASE("stagnation point of the single mode") {
  const Grid g(128);
  const Trajectory traj = evolve(single_mode(g), {.dt = 0.05, .final_time = 0.5, .record_every = 2});
  const SnapshotVelocity sv(traj);
  const FlowState e = advect_particles(FlowState::at_rest({{0.0, 0.0}}), sv, 0.05, 0.5);
  CHECK(e.position[0].norm() < 1e-15);
}

TEST_CASE("rigid rotation returns after one period") {
  const AnalyticVelocity rot(rotation);
  const FlowState s = FlowState::at_rest({{0.1, 0.0}, Point::polar(0.1, 1.0)});
  const FlowState e = advect_particles(s, rot, 0.01, 2 * kPi);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK((e.position[i] - s.launch[i]).norm() < 1e-6);
  const FlowState back = advect_particles(e, rot, 0.01, 0.0);
  CHECK(back.time == 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK((back.position[i] - s.launch[i]).norm() < 1e-6);
}

TEST_CASE("snapshot velocity interpolates linearly between frames") {
  const Grid g(64);
  VorticityField a = single_mode(g), b = single_mode(g);
  for (double& x : b.samples()) x *= 3.0;
  b.set_time(1.0);
  const Trajectory traj{a, b};
  const SnapshotVelocity sv(traj);
  const Point x{0.3, -0.2};
  const Point ua = sample_at(velocity_from_vorticity(a), x);
  const Point mid = sv.velocity(0.25, x);
  CHECK((mid - ua * 1.5).norm() < 1e-15);
  CHECK((sv.velocity(1.0, x) - ua * 3.0).norm() < 1e-15);
}

TEST_CASE("transport consistency") {
  const BumpDataParams p{16};
  const Grid g(p.required_grid_size());
  const VorticityField w = make_bump_data(p, g);
  std::vector<Point> pts;
  for (double r : log_spaced(1.0 / 16, 0.25, 10)) {
    for (int j = 0; j < 10; ++j) pts.push_back(Point::polar(r, kPi / 4 + j * kPi / 120));
  }
  const FlowState start = FlowState::at_rest(pts);
  const Trajectory traj = evolve(w, {.dt = 5e-3, .final_time = 0.05});
  CHECK(transport_consistency(traj, start).max_residual == 0.0);

  const SnapshotVelocity sv(traj);
  const FlowState end = advect_particles(start, sv, 5e-3, 0.05);
  const TransportReport r = transport_consistency(traj, end);
  MESSAGE("max " << r.max_residual << " mean " << r.mean_residual);
  CHECK(r.max_residual < 5e-2);
  CHECK(r.mean_residual <= r.max_residual);

  FlowState off = end;
  off.time = 0.0123;
  CHECK_THROWS_AS(transport_consistency(traj, off), DomainError);

  // Streaming co-advection matches the stored-trajectory path.
  FlowState streamed;
  co_evolve(w, {.dt = 5e-3, .final_time = 0.05}, start, 5e-3,
            [&](const VorticityField&, const FlowState& s) { streamed = s; });
  CHECK(streamed.time == 0.05);
  double gap = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) gap = std::max(gap, (streamed.position[i] - end.position[i]).norm());
  CHECK(gap < 1e-14);
}

TEST_CASE("area preservation and time reversal on a smooth flow") {
  const Grid g(128);
  const VorticityField w = sample_function(
      g,
      [](Point x) {
        return std::sin(kPi * x.x1) * std::sin(kPi * x.x2) +
               0.5 * std::sin(2 * kPi * x.x1) * std::sin(kPi * x.x2);
      },
      Symmetry::kOddOdd);
  const Trajectory traj = evolve(w, {.dt = 0.01, .final_time = 0.5});
  const SnapshotVelocity sv(traj);
  std::vector<Point> base;
  for (double a : {-0.6, -0.2, 0.15, 0.45}) {
    for (double b : {-0.5, 0.05, 0.35, 0.7}) base.push_back({a, b});
  }
  for (double d : jacobian_determinants(sv, base, 1e-3, 0.0, 0.5, 0.01)) CHECK(std::abs(d - 1) < 1e-3);
  CHECK(forward_backward_error(sv, base, 0.0, 0.5, 0.01) < 1e-4);
}

TEST_CASE("segment S and circle coverage") {
  const SegmentSpec s = make_segment(64, 50);
  CHECK(s.start.x1 == doctest::Approx(1.0 / 64));
  CHECK(s.end.x1 == doctest::Approx(std::pow(64.0, -0.7)));
  const auto pts = s.points();
  CHECK(pts.size() == 50);
  CHECK(pts.back() == s.end);
  for (Point q : pts) CHECK(q.x1 == q.x2);
  CHECK_THROWS_AS((SegmentSpec{{0.1, 0.2}, {0.3, 0.3}, 5}.validate()), ConfigError);
  CHECK_THROWS_AS((SegmentSpec{{0.3, 0.3}, {0.1, 0.1}, 5}.validate()), ConfigError);
  CHECK_THROWS_AS(make_segment(64, 1), ConfigError);

  const std::vector<double> radii = log_spaced(pts.front().norm() * 1.01, pts.back().norm() * 0.99, 20);
  const CircleCoverage c = segment_circle_coverage(pts, radii);
  CHECK(c.fraction == 1.0);
  const std::vector<double> outside{1.0};
  CHECK(segment_circle_coverage(pts, outside).fraction == 0.0);

  const auto hits = circle_crossings(pts, 0.05);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].norm() == doctest::Approx(0.05));
}

TEST_CASE("radial exponents and quasi-Lipschitz rates on a hyperbolic flow") {
  // u = (-x1, x2) contracts x1 and stretches x2: |Phi| / |x| is explicit.
  const AnalyticVelocity hyper([](double, Point x) { return Point{-x.x1, x.x2}; });
  const std::vector<double> times{0.0, 0.1, 0.2};
  const auto track = trace(FlowState::at_rest({{0.01, 0.0}, {0.0, 0.01}}), hyper, 0.01, times);
  const auto samples = radial_exponents(track, 64);
  REQUIRE(samples.size() == 6);
  const double lnln = std::log(std::log(64.0));
  CHECK(samples[2].exponent == doctest::Approx(-0.1 / lnln).epsilon(1e-8));
  CHECK(samples[3].exponent == doctest::Approx(0.1 / lnln).epsilon(1e-8));

  const std::vector<PointPair> pairs{{{0.01, 0.0}, {0.0, 0.0}}};
  const auto rep = check_quasi_lipschitz(hyper, pairs, times, 0.01, 1.0);
  // d(t) = 0.01 e^{-t}: beta = 1 + t / ln(100), so ln beta / t is about 0.2.
  CHECK(rep.expansion_rate == doctest::Approx(std::log(1 + 0.1 / std::log(100.0)) / 0.1).epsilon(1e-6));
  CHECK(rep.contraction_rate == 0.0);
  CHECK(rep.holds(rep.expansion_rate * 1.0001, 0.0));
  CHECK_FALSE(rep.holds(rep.expansion_rate * 0.5, 0.0));

  const std::vector<PointPair> far{{{0.9, 0.0}, {-0.9, 0.0}}};
  const auto skipped = check_quasi_lipschitz(hyper, far, times, 0.01, 1.0);
  CHECK(skipped.samples.empty());
  CHECK(skipped.notes.size() == 1);
}
