#include "linkspec/hamiltonian.hpp"
#include "linkspec/quadrature.hpp"
#include "linkspec/twist.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace linkspec;

static void BM_Adaptive(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_adaptive([](double x) { return std::sqrt(x) * std::cos(9 * x); }, 0.0, 1.0).value);
}
BENCHMARK(BM_Adaptive);

static void BM_IntegrateTimeDependent(benchmark::State& state) {
  const Hamiltonian h = Hamiltonian::z_profile("sin(3*t)*z^2 + exp(-z)*t");
  for (auto _ : state) benchmark::DoNotOptimize(integrate(h));
}
BENCHMARK(BM_IntegrateTimeDependent)->Unit(benchmark::kMicrosecond);

static void BM_TwistCalabi(benchmark::State& state) {
  const TwistProfile p = make_twist_profile(Expr::parse("r^-4"), 0.38);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(twist_hamiltonian(p, static_cast<double>(state.range(0)))));
}
BENCHMARK(BM_TwistCalabi)->Arg(10)->Arg(1000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
