/**
 * Copyright 2026 The specstop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "specstop/linalg.hpp"
#include "specstop/rng.hpp"
#include "specstop/validation.hpp"

namespace {

using namespace specstop;

std::vector<double> random_rows(std::size_t k, std::size_t len) {
  Rng r(42);
  std::vector<double> v(k * len);
  for (double& x : v) x = r.normal();
  return v;
}

void BM_GramParallel(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const std::vector<double> rows = random_rows(k, 2 * k);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gram_parallel(rows, k, 2 * k));
  state.SetComplexityN(state.range(0));
}

void BM_GramReference(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const std::vector<double> rows = random_rows(k, 2 * k);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gram_reference(rows, k, 2 * k));
  state.SetComplexityN(state.range(0));
}

void BM_Calibrate(benchmark::State& state) {
  const TrialGrid grid{{0.5}, {static_cast<std::size_t>(state.range(0))}, 20, 1};
  const HarnessOptions opts{state.range(1) != 0};
  for (auto _ : state) benchmark::DoNotOptimize(calibrate(grid, NullSampler::kWishart, opts));
}

BENCHMARK(BM_GramParallel)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramReference)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Calibrate)->ArgNames({"n", "parallel"})->ArgsProduct({{500, 2000}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
