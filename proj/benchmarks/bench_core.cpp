// Hot paths: transforms, Biot-Savart, one integrator step, the lattice
// oracle, and the quadrant integral.

#include <benchmark/benchmark.h>

#include "critflow/analysis/biot_savart.hpp"
#include "critflow/analysis/key_lemma.hpp"
#include "critflow/evolution/evolve.hpp"
#include "critflow/initial/initial_data.hpp"
#include "critflow/spectral/operators.hpp"
#include "critflow/spectral/transform.hpp"

using namespace critflow;

namespace {

VorticityField bump(int grid_size) {
  BumpDataParams p;
  p.N = grid_size / 16;
  return make_bump_data(p, Grid(grid_size));
}

void BM_ForwardTransform(benchmark::State& state) {
  const VorticityField w = bump(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(forward_transform(w.grid(), w.samples()));
}
BENCHMARK(BM_ForwardTransform)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Velocity(benchmark::State& state) {
  const VorticityField w = bump(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(velocity_from_vorticity(w));
}
BENCHMARK(BM_Velocity)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_EvolveStep(benchmark::State& state) {
  const VorticityField w = bump(static_cast<int>(state.range(0)));
  EvolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.final_time = 1.0;
  Evolver ev(w, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(ev.advance(cfg.dt));
}
BENCHMARK(BM_EvolveStep)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_LatticeVelocity(benchmark::State& state) {
  const VorticitySource src = bahouri_chemin_source();
  const std::vector<Point> pts{{0.01, 0.02}};
  LatticeOptions opt;
  opt.n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lattice_biot_savart_report(src, pts, opt));
}
BENCHMARK(BM_LatticeVelocity)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_QuadrantIntegralSource(benchmark::State& state) {
  BumpDataParams p;
  p.N = 32;
  const VorticitySource src = bump_source(p);
  for (auto _ : state) benchmark::DoNotOptimize(quadrant_integral(src, Point{0.01, 0.01}));
}
BENCHMARK(BM_QuadrantIntegralSource)->Unit(benchmark::kMillisecond);

void BM_QuadrantIntegralGrid(benchmark::State& state) {
  const VorticityField w = bump(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(quadrant_integral(w, Point{0.02, 0.02}));
}
BENCHMARK(BM_QuadrantIntegralGrid)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
