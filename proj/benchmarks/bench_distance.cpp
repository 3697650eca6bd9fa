// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "ggospa/distance.hpp"
#include "ggospa/experiments.hpp"
#include "ggospa/gospa.hpp"
#include "ggospa/lp_formulation.hpp"
#include "ggospa/random.hpp"

namespace {

using namespace ggospa;

std::pair<Graph, Graph> make_pair(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Graph x = er_graph(n, 0.6, 2, rng);
  Graph y = perturb(x, PerturbationCase::attr_noise, 1.0, rng);
  return {std::move(x), std::move(y)};
}

void BM_Gospa(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto [x, y] = make_pair(n, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gospa(x.attributes(), y.attributes(), 3.0, 1.0, {}));
  }
}
BENCHMARK(BM_Gospa)->RangeMultiplier(2)->Range(4, 64);

void BM_Exact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto [x, y] = make_pair(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(family_distance(x, y, FamilyParams{}, Backend::exact));
  }
}
BENCHMARK(BM_Exact)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_BuildLp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto [x, y] = make_pair(n, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_family_program(x, y, FamilyParams{}, Integrality::relaxed));
  }
}
BENCHMARK(BM_BuildLp)->Arg(5)->Arg(10)->Arg(20);

void BM_Relaxed(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto [x, y] = make_pair(n, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(family_distance(x, y, FamilyParams{}, Backend::relaxed));
  }
}
BENCHMARK(BM_Relaxed)->Arg(4)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Integer(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto [x, y] = make_pair(n, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(family_distance(x, y, FamilyParams{}, Backend::integer));
  }
}
BENCHMARK(BM_Integer)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
