#include <benchmark/benchmark.h>

#include "wkm/baselines.hpp"
#include "wkm/core.hpp"
#include "wkm/ptas.hpp"
#include "wkm/random.hpp"
#include "wkm/sampling.hpp"
#include "wkm/sensor.hpp"

namespace {

wkm::WeightedPointSet random_set(std::size_t n, std::size_t d, std::uint64_t seed) {
  wkm::RandomSource rng(seed);
  std::vector<double> coords(n * d);
  std::vector<double> weights(n);
  for (auto& x : coords) x = 20 * rng.uniform() - 10;
  for (auto& w : weights) w = 0.1 + 10 * rng.uniform();
  return {d, std::move(coords), std::move(weights)};
}

void BM_WeightedCost(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = random_set(n, 3, 1);
  wkm::RandomSource rng(2);
  const auto centers = wkm::kmeanspp_seed(p, 8, rng);
  for (auto _ : state) benchmark::DoNotOptimize(wkm::weighted_cost(p, centers));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_WeightedCost)->Arg(1 << 10)->Arg(1 << 14);

void BM_D2Sample(benchmark::State& state) {
  const auto p = random_set(static_cast<std::size_t>(state.range(0)), 2, 3);
  const auto centers = wkm::CenterSet::from_rows({{0, 0}, {5, 5}});
  wkm::RandomSource rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(wkm::d2_sample(p, centers, 256, rng));
}
BENCHMARK(BM_D2Sample)->Arg(1 << 10)->Arg(1 << 14);

void BM_PtasSolve(benchmark::State& state) {
  const auto p = random_set(200, 2, 5);
  wkm::PtasOverrides o;
  o.c1 = 8;
  o.c2 = 4;
  o.tuple_budget = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(wkm::solve(p, 3, 0.5, o, seed++));
}
BENCHMARK(BM_PtasSolve)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_KmeansppLloyd(benchmark::State& state) {
  const auto p = random_set(static_cast<std::size_t>(state.range(0)), 2, 6);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    wkm::RandomSource rng(seed++);
    benchmark::DoNotOptimize(wkm::lloyd_descend(p, wkm::kmeanspp_seed(p, 5, rng)));
  }
}
BENCHMARK(BM_KmeansppLloyd)->Arg(1 << 10)->Arg(1 << 13)->Unit(benchmark::kMicrosecond);

void BM_Discretize(benchmark::State& state) {
  wkm::GaussianMixtureDensity mix;
  mix.components.push_back({{0.3, 0.4}, {0.04, 0.01, 0.01, 0.03}, 2.0});
  mix.components.push_back({{0.75, 0.7}, {0.02, 0.0, 0.0, 0.05}, 1.0});
  const auto region = wkm::normalize_density(
      wkm::make_region({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, wkm::Density(mix)));
  const double grid = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wkm::discretize(region, grid));
}
BENCHMARK(BM_Discretize)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_CoverageCost(benchmark::State& state) {
  const auto region = wkm::make_region({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, wkm::Density(wkm::UniformDensity{}));
  wkm::RandomSource rng(8);
  wkm::CenterSet centers(2);
  for (int i = 0; i < state.range(0); ++i) centers.add(std::vector<double>{rng.uniform(), rng.uniform()});
  for (auto _ : state) benchmark::DoNotOptimize(wkm::coverage_cost(region, centers));
}
BENCHMARK(BM_CoverageCost)->Arg(4)->Arg(32)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
