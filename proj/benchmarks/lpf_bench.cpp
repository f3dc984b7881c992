#include <benchmark/benchmark.h>

#include "vexint/corpus.hpp"
#include "vexint/lpf.hpp"

using namespace vexint;

static void BM_Analyze(benchmark::State& state) {
  const Grid g = make_grid(1, 4.0, 1024);
  const auto duals = build_dual_pair(build_admissible_pair(g, 5));
  Rng rng(6);
  const auto f = random_band_limited(g, 32.0, 10, rng);
  for (auto _ : state) benchmark::DoNotOptimize(analyze(f, duals));
}
BENCHMARK(BM_Analyze);

static void BM_Synthesize(benchmark::State& state) {
  const Grid g = make_grid(1, 4.0, 1024);
  const auto duals = build_dual_pair(build_admissible_pair(g, 5));
  Rng rng(7);
  const auto lambda = random_coefficients(g, 5, 200, rng);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(lambda, duals));
}
BENCHMARK(BM_Synthesize);
