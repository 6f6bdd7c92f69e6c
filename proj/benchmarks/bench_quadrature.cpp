#include <benchmark/benchmark.h>

#include "hypoharnack/norms.hpp"

using namespace hypoharnack;

namespace {
Grid bench_grid(int n) {
  Grid g;
  g.dim = 1;
  g.nt = n;
  g.t_min = -1.0;
  g.t_max = 0.0;
  g.nx[0] = n;
  g.nv[0] = n;
  g.x_min[0] = -3.0;
  g.x_max[0] = 3.0;
  g.v_min[0] = -2.5;
  g.v_max[0] = 2.5;
  return g;
}
} // namespace

static void BM_CylinderWeights(benchmark::State& state) {
  const Grid g = bench_grid(static_cast<int>(state.range(0)));
  const Cylinder c{PhasePoint{0.0, {0, 0}, {0, 0}}, 1.0, 2.0, DriftKind::Kinetic, 1};
  for (auto _ : state) {
    const RegionWeights w = cylinder_weights(g, c);
    benchmark::DoNotOptimize(w.measure);
  }
}
BENCHMARK(BM_CylinderWeights)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_LpNorm(benchmark::State& state) {
  const Grid g = bench_grid(64);
  const Cylinder c{PhasePoint{0.0, {0, 0}, {0, 0}}, 1.0, 2.0, DriftKind::Kinetic, 1};
  const RegionWeights w = cylinder_weights(g, c);
  GridField f(g, 1.37);
  for (auto _ : state) benchmark::DoNotOptimize(lp_norm(f, w, 2.2));
}
BENCHMARK(BM_LpNorm);
