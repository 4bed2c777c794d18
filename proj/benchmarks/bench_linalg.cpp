#include <benchmark/benchmark.h>

#include <dobrushin/linalg.hpp>
#include <dobrushin/sampling.hpp>
#include <dobrushin/semigroup.hpp>

using namespace dobrushin;

static void BM_Expm(benchmark::State& state) {
  sampling::Rng rng(1);
  const Matrix a = 5.0 * sampling::random_rate_matrix(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::expm(a));
}
BENCHMARK(BM_Expm)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

static void BM_CesaroContinuous(benchmark::State& state) {
  sampling::Rng rng(2);
  const int n = static_cast<int>(state.range(0));
  const Semigroup s = Semigroup::continuous(StateSpace::classical(n), sampling::random_rate_matrix(n, rng));
  for (auto _ : state) benchmark::DoNotOptimize(s.cesaro(3.0));
}
BENCHMARK(BM_CesaroContinuous)->Arg(2)->Arg(4)->Arg(8);
