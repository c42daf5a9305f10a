#include <benchmark/benchmark.h>

#include "pyrsts/pyramidal.hpp"

using namespace pyrsts;

namespace {

void BM_SolveFano(benchmark::State& state) {
  AbelianGroup g({7});
  for (auto _ : state) {
    auto res = solve_relative_df(g, PartialSpread{}, 1'000'000);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_SolveFano);

void BM_SolveCyclicRel2(benchmark::State& state) {
  AbelianGroup g = AbelianGroup::cyclic(state.range(0));
  PartialSpread spread{{cyclic_subgroup(g, g.make({state.range(0) / 2}))}};
  for (auto _ : state) {
    auto res = solve_relative_df(g, spread, kDefaultSolverBudget);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_SolveCyclicRel2)->Arg(32)->Arg(56)->Arg(80);

void BM_SolveSpreadRelative(benchmark::State& state) {
  DifferenceFamily table = df_over_z2x3_z3x2();
  for (auto _ : state) {
    auto res = solve_relative_df(table.group, table.spread, kDefaultSolverBudget);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_SolveSpreadRelative);

void BM_DmSearchZ2p4(benchmark::State& state) {
  AbelianGroup g({2, 2, 2, 2});
  for (auto _ : state) {
    auto res = dm_search(g, kDefaultDmBudget);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_DmSearchZ2p4);

void BM_LangfordOrder40(benchmark::State& state) {
  for (auto _ : state) {
    auto res = find_extended_langford(1, 40, 3);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_LangfordOrder40);

void BM_DevelopSts79(benchmark::State& state) {
  DifferenceFamily df = df_over_z2x3_z3x2();
  for (auto _ : state) {
    TripleSystem sys = develop(df);
    benchmark::DoNotOptimize(sys);
  }
}
BENCHMARK(BM_DevelopSts79);

void BM_VerifyPyramidalSts79(benchmark::State& state) {
  TripleSystem sys = develop(df_over_z2x3_z3x2());
  for (auto _ : state) {
    auto rep = verify_pyramidal(sys);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(BM_VerifyPyramidalSts79);

void BM_ConstructSts159(benchmark::State& state) {
  for (auto _ : state) {
    Workspace ws;
    auto c = construct(ws, 7, 159);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_ConstructSts159);

}  // namespace

BENCHMARK_MAIN();
