#include <benchmark/benchmark.h>

#include "hypoharnack/kernel.hpp"

using namespace hypoharnack;

static void BM_KernelEval(benchmark::State& state) {
  const KernelSpec spec{1};
  PhasePoint p, q;
  p.pos[0] = 0.7;
  p.vel[0] = -0.2;
  double tau = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fundamental_solution(spec, tau, p, 0.0, q));
    tau = tau < 1.0 ? tau + 1e-6 : 0.3;
  }
}
BENCHMARK(BM_KernelEval);

static void BM_KernelMass(benchmark::State& state) {
  const KernelSpec spec{1};
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernel_mass(spec, 0.5, n));
}
BENCHMARK(BM_KernelMass)->Arg(100)->Arg(400);
