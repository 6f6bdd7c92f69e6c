#include <benchmark/benchmark.h>

#include "hypoharnack/rough.hpp"
#include "hypoharnack/schemes.hpp"

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

static void BM_ImplicitStep(benchmark::State& state) {
  const Grid g = bench_grid(static_cast<int>(state.range(0)));
  SchemeOptions opt;
  ImplicitStepper stepper(g, opt);
  const std::int64_t S = g.slice_size();
  std::vector<double> prev(S, 0.0), cur(S, 0.0), rhs(S, 1.0);
  stepper.step(1, prev.data(), rhs.data(), cur.data()); // factorize once
  for (auto _ : state) {
    stepper.step(1, prev.data(), rhs.data(), cur.data());
    benchmark::DoNotOptimize(cur.data());
  }
}
BENCHMARK(BM_ImplicitStep)->Arg(32)->Arg(64);

static void BM_Evolve(benchmark::State& state) {
  const Grid g = bench_grid(static_cast<int>(state.range(0)));
  CoefficientRecipe r;
  r.kind = "checkerboard";
  const RoughCoefficients coeffs = make_coefficients(g, r);
  GridField u0(g, 1.0);
  for (auto _ : state) {
    const EvolveResult ev = evolve(coeffs, u0);
    benchmark::DoNotOptimize(ev.u.data.data());
  }
}
BENCHMARK(BM_Evolve)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);
