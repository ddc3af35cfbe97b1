#include "linkspec/disc_potential.hpp"
#include "linkspec/surface_link.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace linkspec;

static void BM_CliffordCritical(benchmark::State& state) {
  const DiscPotential w = clifford_potential(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_critical_points(w).points.size());
}
BENCHMARK(BM_CliffordCritical)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_TreeCritical(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const DiscPotential w = specialize(build_potential(random_genus0_link(static_cast<int>(state.range(0)), rng)));
  for (auto _ : state) benchmark::DoNotOptimize(find_critical_points(w).points.size());
}
BENCHMARK(BM_TreeCritical)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_EvalGradHess(benchmark::State& state) {
  const DiscPotential w = clifford_potential(8);
  const std::vector<Complex> x(8, Complex(0.9, 0.2));
  for (auto _ : state) benchmark::DoNotOptimize(eval_grad_hess(w, x).value);
}
BENCHMARK(BM_EvalGradHess);

BENCHMARK_MAIN();
