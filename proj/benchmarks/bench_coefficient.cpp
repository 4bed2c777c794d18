#include <benchmark/benchmark.h>

#include <dobrushin/coefficient.hpp>
#include <dobrushin/qubit_example.hpp>
#include <dobrushin/sampling.hpp>

using namespace dobrushin;

namespace {

struct Instance {
  Matrix t;
  MarkovProjection p;
};

Instance instance(int n) {
  sampling::Rng rng(3);
  MarkovProjection p = sampling::random_block_projection(n, (n + 1) / 2, rng);
  return {sampling::random_markov(n, rng), std::move(p)};
}

}  // namespace

static void BM_DeltaExact(benchmark::State& state) {
  const Instance in = instance(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(delta_exact(in.t, in.p));
}
BENCHMARK(BM_DeltaExact)->Arg(4)->Arg(8)->Arg(32);

static void BM_DeltaPairFormula(benchmark::State& state) {
  const Instance in = instance(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(delta_pair_formula(in.t, in.p));
}
BENCHMARK(BM_DeltaPairFormula)->Arg(4)->Arg(8)->Arg(32);

static void BM_DeltaVertexEnum(benchmark::State& state) {
  const Instance in = instance(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(delta_vertex_enum(in.t, in.p.matrix()));
}
BENCHMARK(BM_DeltaVertexEnum)->Arg(4)->Arg(6)->Arg(8);

static void BM_DeltaBracketQubit(benchmark::State& state) {
  const auto q = StateSpace::qubit();
  const Matrix p = example_projection().matrix();
  const Matrix a = cesaro_phi(7);
  for (auto _ : state) benchmark::DoNotOptimize(delta_bracket(q, a, p));
}
BENCHMARK(BM_DeltaBracketQubit);
