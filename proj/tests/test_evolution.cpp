#include <chrono>
#include <filesystem>

#include "critflow/errors.hpp"
#include "critflow/evolution/evolve.hpp"
#include "critflow/initial/initial_data.hpp"
#include "critflow/spectral/operators.hpp"
#include "critflow/spectral/transform.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace critflow;
using namespace critflow::testing;

namespace {

// Band-limited odd-odd field with a nontrivial nonlinear term.
VorticityField smooth_field(const Grid& g) {
  return sample_function(
      g,
      [](Point p) {
        return std::sin(kPi * p.x1) * std::sin(kPi * p.x2) +
               0.5 * std::sin(2 * kPi * p.x1) * std::sin(kPi * p.x2) +
               0.25 * std::sin(kPi * p.x1) * std::sin(3 * kPi * p.x2);
      },
      Symmetry::kOddOdd);
}

double t_star(int n) { return std::log(std::log(n)) / std::log(n); }

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(EvolveConfig{.dt = 0.0}.validate(), ConfigError);
  CHECK_THROWS_AS(EvolveConfig{.final_time = -1.0}.validate(), ConfigError);
  CHECK_THROWS_AS(EvolveConfig{.viscosity = -1e-3}.validate(), ConfigError);
  CHECK_THROWS_AS(EvolveConfig{.record_every = 0}.validate(), ConfigError);
  CHECK_THROWS_AS(EvolveConfig{.cfl_max = 0.0}.validate(), ConfigError);
  CHECK_NOTHROW(EvolveConfig{}.validate());
}

TEST_CASE("step on trivial inputs") {
  const Grid g(128);
  const VorticityField s = single_mode(g);
  const VorticityField s1 = step(s, {.dt = 1e-2});
  CHECK(max_abs_diff(s1.samples(), s.samples()) < 1e-12);
  CHECK(s1.time() == doctest::Approx(1e-2));

  const VorticityField zero(g);
  CHECK(max_abs(step(zero, {.dt = 1e-2}).samples()) == 0.0);

  std::vector<double> ones(g.point_count(), 1.0);
  CHECK_THROWS_AS(step(VorticityField(g, ones), {.dt = 1e-2}), InvalidInputError);
}

TEST_CASE("single mode is stationary to T = 1") {
  const Grid g(256);
  const VorticityField s = single_mode(g);
  const Trajectory traj = evolve(s, {.dt = 1e-2, .final_time = 1.0, .record_every = 1000});
  CHECK(traj.back().time() == 1.0);
  CHECK(l2_diff(g, traj.back().samples(), s.samples()) < 1e-10);
}

TEST_CASE("evolve records frames and lands on the final time") {
  const Grid g(64);
  const VorticityField w = smooth_field(g);
  const Trajectory t0 = evolve(w, {.dt = 1e-2, .final_time = 0.0});
  REQUIRE(t0.size() == 1);
  CHECK(t0[0].time() == 0.0);
  // Band-limited input is unchanged by the initial dealias/projection.
  CHECK(max_abs_diff(t0[0].samples(), w.samples()) < 1e-14);

  const Trajectory t1 = evolve(w, {.dt = 0.03, .final_time = 0.1, .record_every = 2});
  // steps at 0.03, 0.06, 0.09, 0.1 -> frames 0, 0.06, 0.1
  REQUIRE(t1.size() == 3);
  CHECK(t1[1].time() == doctest::Approx(0.06));
  CHECK(t1[2].time() == 0.1);

  int frames = 0;
  evolve(w, {.dt = 0.01, .final_time = 0.05}, [&](const VorticityField&) { ++frames; });
  CHECK(frames == 6);
}

TEST_CASE("CFL violations halve the step") {
  const Grid g(64);
  VorticityField w = smooth_field(g);
  for (double& x : w.samples()) x *= 100.0;
  StepReport rep;
  step(w, {.dt = 0.1, .cfl_max = 0.5}, &rep);
  CHECK(rep.substeps > 1);
  CHECK(rep.dt_used * rep.max_speed / g.spacing() <= 0.5);
}

TEST_CASE("non-finite state raises with a dump") {
  const Grid g(64);
  VorticityField w = smooth_field(g);
  w.set_symmetry(Symmetry::kNone);
  w(3, 5) = std::numeric_limits<double>::quiet_NaN();
  const auto dump = std::filesystem::temp_directory_path() / "critflow_nan_dump.vrt";
  std::filesystem::remove(dump);
  CHECK_THROWS_AS(step(w, {.dt = 1e-3, .dump_path = dump}), NumericalError);
  CHECK(std::filesystem::exists(dump));
  std::filesystem::remove(dump);
}

TEST_CASE("bump data conservation over T = 0.1") {
  const auto start = std::chrono::steady_clock::now();
  const Grid g(512);
  const VorticityField w = make_bump_data({16}, g);
  const Trajectory traj = evolve(w, {.dt = 2e-3, .final_time = 0.1, .record_every = 10});
  const auto q0 = conserved_quantities(traj.front());
  const auto q1 = conserved_quantities(traj.back());
  MESSAGE("L2 drift " << std::abs(q1.l2 - q0.l2) / q0.l2 << " energy drift "
                      << std::abs(q1.energy - q0.energy) / q0.energy);
  CHECK(std::abs(q1.l2 - q0.l2) / q0.l2 < 1e-6);
  CHECK(std::abs(std::sqrt(q1.energy) - std::sqrt(q0.energy)) / std::sqrt(q0.energy) < 1e-5);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(seconds < 300);
}

TEST_CASE("Lp norms conserved over t*(1, N)") {
  // Reference resolution: 8x the policy grid (M = 1024 for N = 8).
  const int n = 8;
  const BumpDataParams p{n};
  const Grid g(8 * p.required_grid_size());
  const Trajectory traj =
      evolve(make_bump_data(p, g), {.dt = 2e-3, .final_time = t_star(n), .record_every = 1000});
  const auto q0 = conserved_quantities(traj.front());
  const auto q1 = conserved_quantities(traj.back());
  MESSAGE("L1 " << q1.l1 / q0.l1 - 1 << " L2 " << q1.l2 / q0.l2 - 1 << " L4 " << q1.l4 / q0.l4 - 1
                << " Linf " << q1.linf / q0.linf - 1);
  CHECK(std::abs(q1.l1 / q0.l1 - 1) < 1e-4);
  CHECK(std::abs(q1.l2 / q0.l2 - 1) < 1e-4);
  CHECK(std::abs(q1.l4 / q0.l4 - 1) < 1e-4);
  CHECK(std::abs(q1.linf / q0.linf - 1) < 1e-4);
  CHECK(std::abs(q1.energy / q0.energy - 1) < 1e-5);
}

TEST_CASE("odd-odd symmetry persists without projection") {
  const Grid g(128);
  const Trajectory traj = evolve(make_bump_data({8}, Grid(128)),
                                 {.dt = 5e-3, .final_time = 0.5, .record_every = 100,
                                  .project_symmetry = false});
  REQUIRE(traj.size() == 2);
  CHECK(traj.back().antisymmetry_residual() < 1e-10);
}

TEST_CASE("fourth-order temporal convergence") {
  const Grid g(64);
  const VorticityField w = smooth_field(g);
  const double T = 0.8;
  // Spectral RK4 is stable well past cfl_max = 0.5 for this field; the default
  // would halve every step and hide the convergence order.
  auto run = [&](double dt) {
    return evolve(w, {.dt = dt, .final_time = T, .cfl_max = 4.0, .record_every = 1000}).back();
  };
  const double dt = 0.1;
  const VorticityField ref = run(dt / 4);
  const double e1 = l2_diff(g, run(dt).samples(), ref.samples());
  const double e2 = l2_diff(g, run(dt / 2).samples(), ref.samples());
  MESSAGE("errors " << e1 << " " << e2 << " ratio " << e1 / e2);
  CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("viscous decay of a single mode is exact") {
  const Grid g(64);
  const double nu = 0.01, T = 0.5;
  const Trajectory traj = evolve(single_mode(g), {.dt = 0.05, .final_time = T, .viscosity = nu});
  // d_{x1x1} sin(pi x1) = -pi^2 sin(pi x1); the nonlinear term vanishes.
  const double decay = std::exp(-nu * kPi * kPi * T);
  const VorticityField initial = single_mode(g);
  std::vector<double> expect(initial.samples().begin(), initial.samples().end());
  for (double& x : expect) x *= decay;
  CHECK(max_abs_diff(traj.back().samples(), expect) < 1e-13);
}

TEST_CASE("energy balance") {
  const Grid g(512);
  const VorticityField w = make_bump_data({16}, g);

  const Trajectory inviscid = evolve(w, {.dt = 2e-3, .final_time = 0.1, .record_every = 5});
  const EnergyBalanceReport r0 = energy_balance(inviscid, 0.0);
  CHECK(r0.max_dissipation == 0.0);
  CHECK(r0.max_residual * 0.1 / r0.enstrophy.front() < 1e-6);

  const double nu = 1e-3;
  const Trajectory viscous =
      evolve(w, {.dt = 2e-3, .final_time = 0.1, .viscosity = nu, .record_every = 1});
  const EnergyBalanceReport r1 = energy_balance(viscous, nu);
  MESSAGE("relative residual " << r1.relative_residual);
  CHECK(r1.monotone_nonincreasing);
  CHECK(r1.relative_residual < 0.01);
  for (std::size_t i = 0; i + 1 < r1.enstrophy.size(); ++i) CHECK(r1.enstrophy[i + 1] <= r1.enstrophy[i]);
}
