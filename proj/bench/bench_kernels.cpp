// SPDX-License-Identifier: Apache-2.0
//
// Parallel vs serial far-field kernels on a front-hemisphere grid.

#include <benchmark/benchmark.h>

#include <random>

#include "dpbf/pattern.hpp"

namespace {

dpbf::DualPolWeights random_weights(const dpbf::ArrayGeometry& geom) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<dpbf::cplx> a(geom.size());
  std::vector<dpbf::cplx> b(geom.size());
  for (std::size_t k = 0; k < geom.size(); ++k) {
    a[k] = {g(rng), g(rng)};
    b[k] = {g(rng), g(rng)};
  }
  if (geom.kind() == dpbf::ArrayKind::ULA) return dpbf::DualPolWeights::ula(a, b);
  return dpbf::DualPolWeights::ura(geom.rows(), geom.cols(), a, b);
}

dpbf::ArrayGeometry square_ura(std::int64_t side) {
  const auto n = static_cast<std::size_t>(side);
  return dpbf::ArrayGeometry::ura(n, n, 0.7, 0.5);
}

void BM_RadiateParallel(benchmark::State& state) {
  const auto geom = square_ura(state.range(0));
  const auto elem = dpbf::ElementPattern::symmetric(90.0);
  const auto w = random_weights(geom);
  const auto grid = dpbf::AngularGrid::front_hemisphere(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(dpbf::radiate(geom, elem, w, grid));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}

void BM_RadiateSerial(benchmark::State& state) {
  const auto geom = square_ura(state.range(0));
  const auto elem = dpbf::ElementPattern::symmetric(90.0);
  const auto w = random_weights(geom);
  const auto grid = dpbf::AngularGrid::front_hemisphere(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(dpbf::reference::radiate(geom, elem, w, grid));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}

void BM_ParallelityParallel(benchmark::State& state) {
  const auto geom = square_ura(state.range(0));
  const auto elem = dpbf::ElementPattern::symmetric(90.0);
  const auto grid = dpbf::AngularGrid::front_hemisphere(1.0);
  const auto f = dpbf::radiate(geom, elem, random_weights(geom), grid);
  for (auto _ : state) benchmark::DoNotOptimize(dpbf::parallelity(f, f));
}

void BM_ParallelitySerial(benchmark::State& state) {
  const auto geom = square_ura(state.range(0));
  const auto elem = dpbf::ElementPattern::symmetric(90.0);
  const auto grid = dpbf::AngularGrid::front_hemisphere(1.0);
  const auto f = dpbf::radiate(geom, elem, random_weights(geom), grid);
  for (auto _ : state) benchmark::DoNotOptimize(dpbf::reference::parallelity(f, f));
}

}  // namespace

BENCHMARK(BM_RadiateParallel)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RadiateSerial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParallelityParallel)->Arg(8)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ParallelitySerial)->Arg(8)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
