#include <benchmark/benchmark.h>

#include "vexint/calderon.hpp"
#include "vexint/corpus.hpp"

using namespace vexint;

static void BM_FactorizePP(benchmark::State& state) {
  const Grid g = make_grid(1, 4.0, 1024);
  Rng rng(5);
  const auto lambda = random_coefficients(g, 5, static_cast<std::size_t>(state.range(0)), rng);
  const auto p0 = build_exponent(SineRecipe{2.0, 0.5, 1.0}, g);
  const auto p1 = build_exponent(PlateauRampRecipe{1.5, 3.5, 0.5}, g);
  const auto a0 = constant_field(g, 0.5, ExponentRole::smoothness);
  const auto a1 = build_exponent(SineRecipe{-0.25, 0.5, 2.0}, g, ExponentRole::smoothness);
  const auto params = make_pp_params(0.4, p0, p1, a0, a1);
  for (auto _ : state) benchmark::DoNotOptimize(factorize_pp(lambda, params).norm);
}
BENCHMARK(BM_FactorizePP)->Arg(20)->Arg(100)->Arg(400);
