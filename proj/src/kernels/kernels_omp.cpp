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

#include <algorithm>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "disctok/kernels.hpp"

namespace disctok::kernels {

int MaxThreads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void SetThreads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

void NearestCentroid(std::span<const float> data, std::size_t dim,
                     std::span<const double> centroids, std::span<std::uint32_t> labels,
                     std::span<double> sq_dist) {
  const auto n = static_cast<std::int64_t>(data.size() / dim);
  const std::size_t k = centroids.size() / dim;
  const float* base = data.data();
  const double* cent = centroids.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const float* x = base + static_cast<std::size_t>(i) * dim;
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_c = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const double d = SquaredDistance(x, cent + c * dim, dim);
      if (d < best) {
        best = d;
        best_c = static_cast<std::uint32_t>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = best_c;
    sq_dist[static_cast<std::size_t>(i)] = best;
  }
}

void UpdateMinDistance(std::span<const float> data, std::size_t dim,
                       std::span<const double> centroid, std::span<double> min_sq_dist) {
  const auto n = static_cast<std::int64_t>(data.size() / dim);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const double d = SquaredDistance(data.data() + u * dim, centroid.data(), dim);
    if (d < min_sq_dist[u]) min_sq_dist[u] = d;
  }
}

ClusterSums AccumulateClusters(std::span<const float> data, std::size_t dim,
                               std::span<const std::uint32_t> labels, std::size_t k) {
  ClusterSums out;
  out.sums.assign(k * dim, 0.0);
  out.counts.assign(k, 0);

  // Stable counting sort of frame indices by label.
  std::vector<std::size_t> offsets(k + 1, 0);
  for (std::uint32_t c : labels) ++offsets[c + 1];
  for (std::size_t c = 0; c < k; ++c) offsets[c + 1] += offsets[c];
  std::vector<std::size_t> members(labels.size());
  {
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = 0; i < labels.size(); ++i) members[cursor[labels[i]]++] = i;
  }

  const auto kk = static_cast<std::int64_t>(k);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t ci = 0; ci < kk; ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    double* s = out.sums.data() + c * dim;
    for (std::size_t m = offsets[c]; m < offsets[c + 1]; ++m) {
      const float* x = data.data() + members[m] * dim;
      for (std::size_t j = 0; j < dim; ++j) s[j] += x[j];
    }
    out.counts[c] = offsets[c + 1] - offsets[c];
  }
  return out;
}

double ChunkedSum(std::span<const double> values, std::size_t chunk) {
  if (chunk == 0) chunk = kDefaultChunkFrames;
  const std::size_t num_chunks = (values.size() + chunk - 1) / chunk;
  std::vector<double> partial(num_chunks, 0.0);
  const auto nc = static_cast<std::int64_t>(num_chunks);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nc; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * chunk;
    const std::size_t hi = std::min(values.size(), lo + chunk);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += values[i];
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace disctok::kernels
