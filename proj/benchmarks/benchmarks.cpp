#include <benchmark/benchmark.h>

#include "regmeas/dilation.hpp"
#include "regmeas/measure.hpp"
#include "regmeas/spectral.hpp"
#include "regmeas/sums.hpp"

using namespace regmeas;

static void BM_Evaluate(benchmark::State& state) {
  LinearRepresentation rep = builtin("stern");
  std::uint64_t m = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(rep, 1000000 + m));
    ++m;
  }
}
BENCHMARK(BM_Evaluate);

static void BM_SigmaVector(benchmark::State& state) {
  LinearRepresentation rep = builtin("stern");
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sigma_vector(rep, n));
}
BENCHMARK(BM_SigmaVector)->Arg(64)->Arg(512)->Arg(4096);

static void BM_Approximant(benchmark::State& state) {
  LinearRepresentation rep = builtin("stern");
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(approximant(rep, n));
}
BENCHMARK(BM_Approximant)->Arg(8)->Arg(12);

static void BM_JsrBounds(benchmark::State& state) {
  LinearRepresentation rep = builtin("stern");
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(jsr_bounds(rep.digit_matrices, depth));
}
BENCHMARK(BM_JsrBounds)->Arg(8)->Arg(12);

static void BM_SolveDilation(benchmark::State& state) {
  LinearRepresentation rep = transpose_rep(builtin("stern"));
  JordanData jd = jordan_data(rep);
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_dilation(rep, jd, depth));
}
BENCHMARK(BM_SolveDilation)->Arg(8)->Arg(10)->Arg(12);

static void BM_ScanInterval(benchmark::State& state) {
  LinearRepresentation rep = builtin("dumas");
  const int levels = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        scan_interval(rep, Rational(0), Rational(1, 2), levels));
}
BENCHMARK(BM_ScanInterval)->Arg(1000)->Arg(10000);

static void BM_FourierProduct(benchmark::State& state) {
  LinearRepresentation rep = builtin("stern");
  for (auto _ : state)
    benchmark::DoNotOptimize(fourier_product(rep, 1.0, 30));
}
BENCHMARK(BM_FourierProduct);

BENCHMARK_MAIN();
