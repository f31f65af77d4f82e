#include <benchmark/benchmark.h>

#include "polyevac/lp.hpp"
#include "polyevac/reference.hpp"
#include "polyevac/search.hpp"
#include "polyevac/upperbounds.hpp"

using namespace polyevac;

static void BM_ConfigLp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const auto c = find_lp_reference(n, k)->config();
  const PolygonGeometry g(n);
  for (auto _ : state) benchmark::DoNotOptimize(config_lp_value(c, g, 0.0));
}
BENCHMARK(BM_ConfigLp)->Args({6, 1})->Args({12, 1})->Args({11, 2})->Args({10, 4})->Unit(benchmark::kMillisecond);

static void BM_FullLpModel(benchmark::State& state) {
  const auto c = find_lp_reference(9, 3)->config();
  const PolygonGeometry g(9);
  for (auto _ : state) {
    const auto m = build_lp(c, g, 0.0);
    std::uint64_t rows = 0;
    m.for_each_triangle([&](int, int, int) { ++rows; });
    benchmark::DoNotOptimize(rows);
  }
}
BENCHMARK(BM_FullLpModel)->Unit(benchmark::kMillisecond);

static void BM_Enumeration(benchmark::State& state) {
  SearchRequest req;
  req.n = static_cast<int>(state.range(0));
  req.k = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(min_over_configs(req).raw_min);
}
BENCHMARK(BM_Enumeration)->Args({6, 1})->Args({7, 1})->Args({5, 2})->Args({5, 3})->Unit(benchmark::kMillisecond);

static void BM_CatalogSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PolygonGeometry g(n);
  const QueenPlan* plan = find_plan(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_plan(*plan, g).residual_norm);
}
BENCHMARK(BM_CatalogSolve)->Arg(9)->Arg(12)->Arg(13);

static void BM_Optimizer(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto c = find_lp_reference(n, 1)->config();
  const PolygonGeometry g(n);
  for (auto _ : state) benchmark::DoNotOptimize(local_minimax_optimize(c, g, 0.0, std::nullopt).times.back());
}
BENCHMARK(BM_Optimizer)->Arg(7)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
