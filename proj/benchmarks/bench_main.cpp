#include <benchmark/benchmark.h>

#include "specshift/specshift.hpp"

using namespace specshift;

namespace {

HermitianOperator sample(int dim, std::uint64_t seed = 1) {
  Rng rng(seed);
  return random_hermitian(rng, dim, -1.0, 1.0);
}

void BM_Decompose(benchmark::State& state) {
  const HermitianOperator a = sample(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(decompose(a));
}
BENCHMARK(BM_Decompose)->RangeMultiplier(2)->Range(2, 64);

void BM_ApplyFunction(benchmark::State& state) {
  const HermitianOperator a = sample(static_cast<int>(state.range(0)));
  const ScalarFunction f = get_function("sqrt_abs");
  for (auto _ : state) benchmark::DoNotOptimize(apply_function(f, a));
}
BENCHMARK(BM_ApplyFunction)->RangeMultiplier(2)->Range(2, 64);

void BM_SchattenOne(benchmark::State& state) {
  const HermitianOperator a = sample(static_cast<int>(state.range(0)));
  const HermitianOperator b = sample(static_cast<int>(state.range(0)), 2);
  const ComplexMatrix d = a.matrix() - b.matrix();
  for (auto _ : state) benchmark::DoNotOptimize(schatten_norm(d, Schatten::one));
}
BENCHMARK(BM_SchattenOne)->RangeMultiplier(2)->Range(2, 64);

void BM_IncrementRatio(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const HermitianOperator a = sample(dim), b = sample(dim, 2);
  const ScalarFunction f = get_function("abs");
  for (auto _ : state) benchmark::DoNotOptimize(increment_ratio(f, a, b));
}
BENCHMARK(BM_IncrementRatio)->RangeMultiplier(2)->Range(2, 32);

void BM_SeminormSearch(benchmark::State& state) {
  const FiniteSpectrumSet f0 = restrict_to_grid({-1, 1}, 9);
  const ScalarFunction f = get_function("abs");
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        seminorm_lower_bound(f, f0, static_cast<int>(state.range(0)), NormKind::schatten1, 500, 3));
  }
}
BENCHMARK(BM_SeminormSearch)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_DivergentFamily(benchmark::State& state) {
  const ScalarFunction f = get_function("sqrt_abs");
  const int k = static_cast<int>(state.range(0));
  const std::vector<double> deltas = geometric_schedule(1.0, k);
  for (auto _ : state) benchmark::DoNotOptimize(build_divergent_family(f, deltas, k, 400, 7));
}
BENCHMARK(BM_DivergentFamily)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_FloorReciprocal(benchmark::State& state) {
  double x = 3.7e-19;
  for (auto _ : state) benchmark::DoNotOptimize(floor_reciprocal(x));
}
BENCHMARK(BM_FloorReciprocal);

}  // namespace

BENCHMARK_MAIN();
