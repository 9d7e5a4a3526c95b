// Copyright 2026 The disctok Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against the OpenMP versions.

#include <benchmark/benchmark.h>

#include <vector>

#include "disctok/kernels.hpp"
#include "disctok/rng.hpp"

namespace {

constexpr std::size_t kDim = 32;

struct Problem {
  std::vector<float> data;
  std::vector<double> centroids;
  std::vector<std::uint32_t> labels;
  std::vector<double> dist;
};

Problem MakeProblem(std::size_t n, std::size_t k) {
  disctok::Rng rng(7);
  Problem p;
  p.data.resize(n * kDim);
  for (auto& v : p.data) v = static_cast<float>(rng.Normal());
  p.centroids.resize(k * kDim);
  for (auto& v : p.centroids) v = rng.Normal();
  p.labels.resize(n);
  p.dist.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.labels[i] = static_cast<std::uint32_t>(rng.UniformInt(k));
  return p;
}

void BM_NearestSerial(benchmark::State& state) {
  Problem p = MakeProblem(state.range(0), state.range(1));
  for (auto _ : state) {
    disctok::kernels::serial::NearestCentroid(p.data, kDim, p.centroids, p.labels, p.dist);
    benchmark::DoNotOptimize(p.labels.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_NearestParallel(benchmark::State& state) {
  Problem p = MakeProblem(state.range(0), state.range(1));
  for (auto _ : state) {
    disctok::kernels::NearestCentroid(p.data, kDim, p.centroids, p.labels, p.dist);
    benchmark::DoNotOptimize(p.labels.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AccumulateSerial(benchmark::State& state) {
  Problem p = MakeProblem(state.range(0), state.range(1));
  for (auto _ : state) {
    auto sums = disctok::kernels::serial::AccumulateClusters(p.data, kDim, p.labels, state.range(1));
    benchmark::DoNotOptimize(sums.sums.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AccumulateParallel(benchmark::State& state) {
  Problem p = MakeProblem(state.range(0), state.range(1));
  for (auto _ : state) {
    auto sums = disctok::kernels::AccumulateClusters(p.data, kDim, p.labels, state.range(1));
    benchmark::DoNotOptimize(sums.sums.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SumSerial(benchmark::State& state) {
  Problem p = MakeProblem(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(disctok::kernels::serial::Sum(p.dist));
}

void BM_SumChunked(benchmark::State& state) {
  Problem p = MakeProblem(state.range(0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        disctok::kernels::ChunkedSum(p.dist, disctok::kernels::kDefaultChunkFrames));
  }
}

}  // namespace

BENCHMARK(BM_NearestSerial)->Args({20000, 100})->Args({20000, 500});
BENCHMARK(BM_NearestParallel)->Args({20000, 100})->Args({20000, 500});
BENCHMARK(BM_AccumulateSerial)->Args({200000, 500});
BENCHMARK(BM_AccumulateParallel)->Args({200000, 500});
BENCHMARK(BM_SumSerial)->Arg(1 << 20);
BENCHMARK(BM_SumChunked)->Arg(1 << 20);

BENCHMARK_MAIN();
