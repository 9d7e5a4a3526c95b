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

// Data-parallel inner loops of k-means. Every kernel has a plain serial
// twin in kernels::serial that the tests and benchmarks compare against.
//
// Determinism: results never depend on the OpenMP thread count.
//  - NearestCentroid writes one independent result per frame.
//  - ClusterSums gathers each cluster's members in frame order and sums
//    them sequentially, so it is bit-identical to the serial reference.
//  - ChunkedSum reduces fixed-size chunks, then combines them in chunk
//    order; it matches the serial sum only up to rounding.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace disctok::kernels {

inline constexpr std::size_t kDefaultChunkFrames = 4096;

struct ClusterSums {
  std::vector<double> sums;           // k x dim
  std::vector<std::uint64_t> counts;  // k
};

// Squared Euclidean distance between a float frame and a double centroid.
inline double SquaredDistance(const float* x, const double* c, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const double d = static_cast<double>(x[j]) - c[j];
    acc += d * d;
  }
  return acc;
}

// For each frame, the index of the closest centroid (ties go to the
// smaller index) and the squared distance to it.
void NearestCentroid(std::span<const float> data, std::size_t dim,
                     std::span<const double> centroids, std::span<std::uint32_t> labels,
                     std::span<double> sq_dist);

// min_sq_dist[i] = min(min_sq_dist[i], |data[i] - centroid|^2).
void UpdateMinDistance(std::span<const float> data, std::size_t dim,
                       std::span<const double> centroid, std::span<double> min_sq_dist);

ClusterSums AccumulateClusters(std::span<const float> data, std::size_t dim,
                               std::span<const std::uint32_t> labels, std::size_t k);

double ChunkedSum(std::span<const double> values, std::size_t chunk);

namespace serial {

void NearestCentroid(std::span<const float> data, std::size_t dim,
                     std::span<const double> centroids, std::span<std::uint32_t> labels,
                     std::span<double> sq_dist);

void UpdateMinDistance(std::span<const float> data, std::size_t dim,
                       std::span<const double> centroid, std::span<double> min_sq_dist);

ClusterSums AccumulateClusters(std::span<const float> data, std::size_t dim,
                               std::span<const std::uint32_t> labels, std::size_t k);

double Sum(std::span<const double> values);

}  // namespace serial

// Thin wrappers over omp_{get,set}_max_threads that compile without OpenMP.
int MaxThreads();
void SetThreads(int n);

}  // namespace disctok::kernels
