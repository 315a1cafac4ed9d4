#include <benchmark/benchmark.h>

#include "rbmedian/exact.hpp"
#include "rbmedian/gap.hpp"
#include "rbmedian/local_search.hpp"

namespace {

using namespace rbm;

Instance<double> euclidean(std::size_t n) {
  GeneratorParams g;
  g.n_clients = n;
  g.n_red = n / 4;
  g.n_blue = n / 4;
  g.k_r = n / 16 + 1;
  g.k_b = n / 16 + 1;
  g.seed = 7;
  return gen_euclidean(g, 1000.0);
}

void BM_Evaluate(benchmark::State& state) {
  const auto inst = euclidean(static_cast<std::size_t>(state.range(0)));
  const Solution sol = random_solution(inst, 1);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(inst, sol).total);
}
BENCHMARK(BM_Evaluate)->RangeMultiplier(4)->Range(64, 1024);

void BM_DeltaCost(benchmark::State& state) {
  const auto inst = euclidean(static_cast<std::size_t>(state.range(0)));
  const Solution sol = random_solution(inst, 1);
  const auto asg = evaluate(inst, sol);
  const SwapMove move = *Neighborhood::of(inst, sol, 1).begin();
  for (auto _ : state) benchmark::DoNotOptimize(delta_cost(inst, sol, asg, move));
}
BENCHMARK(BM_DeltaCost)->RangeMultiplier(4)->Range(64, 1024);

void BM_NeighborhoodScan(benchmark::State& state) {
  const auto inst = euclidean(48);
  const Solution sol = random_solution(inst, 1);
  const auto asg = evaluate(inst, sol);
  const auto p = static_cast<std::size_t>(state.range(0));
  const auto threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(scan_neighborhood(inst, sol, asg, p, ScanMode::kBest, 0.0, threads));
  }
}
BENCHMARK(BM_NeighborhoodScan)->Args({1, 1})->Args({2, 1})->Args({2, 4})->UseRealTime();

void BM_LocalSearchRun(benchmark::State& state) {
  const auto inst = euclidean(static_cast<std::size_t>(state.range(0)));
  SearchConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(run(inst, config).assignment.total);
}
BENCHMARK(BM_LocalSearchRun)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BruteForceGap(benchmark::State& state) {
  const GapInstance gap = build_gap({1, state.range(0)});
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_opt(gap.instance).cost);
}
BENCHMARK(BM_BruteForceGap)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
