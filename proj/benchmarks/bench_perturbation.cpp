#include <benchmark/benchmark.h>

#include <dobrushin/perturbation.hpp>
#include <dobrushin/sampling.hpp>

using namespace dobrushin;

static void BM_DysonEval(benchmark::State& state) {
  sampling::Rng rng(4);
  const Semigroup s = Semigroup::continuous(StateSpace::classical(4), sampling::random_rate_matrix(4, rng));
  const MarkovOperator q(s.space(), sampling::random_markov(4, rng));
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dyson_eval(s, q, 1.5, 1.0, k));
}
BENCHMARK(BM_DysonEval)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_RhoR(benchmark::State& state) {
  sampling::Rng rng(5);
  const auto c = StateSpace::classical(3);
  const Semigroup a = Semigroup::continuous(c, sampling::random_rate_matrix(3, rng));
  const Semigroup b = Semigroup::continuous(c, sampling::random_rate_matrix(3, rng));
  const double r = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rho_r(a, b, r));
}
BENCHMARK(BM_RhoR)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_RhoFull(benchmark::State& state) {
  sampling::Rng rng(6);
  const auto c = StateSpace::classical(3);
  const Semigroup a = Semigroup::continuous(c, sampling::random_rate_matrix(3, rng));
  const Semigroup b = Semigroup::continuous(c, sampling::random_rate_matrix(3, rng));
  for (auto _ : state) benchmark::DoNotOptimize(rho_full(a, b, 20));
}
BENCHMARK(BM_RhoFull)->Unit(benchmark::kMillisecond);
