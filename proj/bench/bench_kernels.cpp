#include <benchmark/benchmark.h>
#include <omp.h>

#include "lpp/fredholm.hpp"
#include "lpp/montecarlo.hpp"
#include "lpp/symbols.hpp"

using namespace lpp;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "openmp"); }

void BM_FourierCoeffs(benchmark::State& state) {
  const SymbolSpec s = build_symbol(ModelSpec::lattice(ModelKind::LatticeA, {0.6, 0.5, 0.7}, {0.8, 0.4}));
  for (auto _ : state) benchmark::DoNotOptimize(fourier_coeffs(s, 256, 0, mode(state)));
  label(state);
}

void BM_KernelMatrix(benchmark::State& state) {
  const IntegrableKernelSpec k = IntegrableKernelSpec::square(4.0, 10, 512);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_matrix(k, mode(state)));
  label(state);
}

void BM_Simulate(benchmark::State& state) {
  const SimConfig cfg{ModelSpec::poisson_triangle(3.0, 0.5), 100000, 1, omp_get_max_threads()};
  for (auto _ : state) benchmark::DoNotOptimize(simulate(cfg, mode(state)));
  label(state);
}

void BM_HaarOrthogonal(benchmark::State& state) {
  const SymbolSpec psi = build_orthogonal_weight(ModelSpec::poisson_triangle(1.0, 0.5));
  for (auto _ : state) benchmark::DoNotOptimize(haar_orthogonal_expectation(psi, 5, 100000, 1, omp_get_max_threads(), mode(state)));
  label(state);
}

}  // namespace

BENCHMARK(BM_FourierCoeffs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelMatrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HaarOrthogonal)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
