#include <benchmark/benchmark.h>

#include <random>

#include "dremnet/analysis.hpp"
#include "dremnet/drem.hpp"
#include "dremnet/scenario.hpp"
#include "dremnet/simulation.hpp"

namespace {

dremnet::Matrix random_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  dremnet::Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = u(rng);
  return m;
}

void BM_Extend(benchmark::State& state) {
  const auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(dremnet::extend(m));
}
BENCHMARK(BM_Extend)->DenseRange(1, 6);

void BM_RunSingle(benchmark::State& state) {
  auto s = dremnet::builtin_scenario("sec5");
  s.horizon = state.range(0);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dremnet::run_single(s, ++seed));
  state.SetItemsProcessed(state.iterations() * s.horizon);
}
BENCHMARK(BM_RunSingle)->Arg(500)->Arg(5000);

void BM_MonteCarlo(benchmark::State& state) {
  const auto s = dremnet::builtin_scenario("sec5");
  const auto workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dremnet::run_monte_carlo(s, 256, 0, workers));
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_MomentRecursions(benchmark::State& state) {
  const auto s = dremnet::builtin_scenario("sec5");
  for (auto _ : state) benchmark::DoNotOptimize(dremnet::moment_recursions(s, state.range(0)));
}
BENCHMARK(BM_MomentRecursions)->Arg(500)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
