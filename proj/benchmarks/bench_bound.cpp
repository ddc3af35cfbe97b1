#include "linkspec/equidistributed.hpp"
#include "linkspec/hamiltonian.hpp"
#include "linkspec/spectral_calculus.hpp"
#include "linkspec/surface_link.hpp"

#include <benchmark/benchmark.h>

using namespace linkspec;

static void BM_AdaptedBound(benchmark::State& state) {
  const SurfaceLink L = build_parallel_link(static_cast<int>(state.range(0)), Rational(0));
  const Hamiltonian h = Hamiltonian::z_profile("cos(2*t)*z^2 + z");
  for (auto _ : state) benchmark::DoNotOptimize(bound(h, L).lower);
}
BENCHMARK(BM_AdaptedBound)->Arg(2)->Arg(16)->Arg(64);

static void BM_GridBound(benchmark::State& state) {
  GridData g;
  g.nx = 9;
  g.ntheta = 8;
  for (int i = 0; i < g.nx * g.ntheta; ++i) g.values.push_back(((i * 37) % 11) / 10.0 - 0.5);
  const Hamiltonian h = Hamiltonian::grid(Model::sphere, g);
  const SurfaceLink L = build_parallel_link(static_cast<int>(state.range(0)), Rational(0));
  for (auto _ : state) benchmark::DoNotOptimize(bound(h, L).width());
}
BENCHMARK(BM_GridBound)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_EquidistributedBound(benchmark::State& state) {
  const EquidistributedLink E = build_equidistributed_link(static_cast<int>(state.range(0)), Rational(0));
  const Hamiltonian h = mean_normalize(Hamiltonian::z_profile("z^2"));
  for (auto _ : state) benchmark::DoNotOptimize(bound(h, E.link, E.eta).width());
}
BENCHMARK(BM_EquidistributedBound)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
