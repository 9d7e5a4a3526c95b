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

#include <limits>

#include "disctok/kernels.hpp"

namespace disctok::kernels::serial {

void NearestCentroid(std::span<const float> data, std::size_t dim,
                     std::span<const double> centroids, std::span<std::uint32_t> labels,
                     std::span<double> sq_dist) {
  const std::size_t n = data.size() / dim;
  const std::size_t k = centroids.size() / dim;
  for (std::size_t i = 0; i < n; ++i) {
    const float* x = data.data() + i * dim;
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_c = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const double d = SquaredDistance(x, centroids.data() + c * dim, dim);
      if (d < best) {
        best = d;
        best_c = static_cast<std::uint32_t>(c);
      }
    }
    labels[i] = best_c;
    sq_dist[i] = best;
  }
}

void UpdateMinDistance(std::span<const float> data, std::size_t dim,
                       std::span<const double> centroid, std::span<double> min_sq_dist) {
  const std::size_t n = data.size() / dim;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = SquaredDistance(data.data() + i * dim, centroid.data(), dim);
    if (d < min_sq_dist[i]) min_sq_dist[i] = d;
  }
}

ClusterSums AccumulateClusters(std::span<const float> data, std::size_t dim,
                               std::span<const std::uint32_t> labels, std::size_t k) {
  ClusterSums out;
  out.sums.assign(k * dim, 0.0);
  out.counts.assign(k, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::uint32_t c = labels[i];
    double* s = out.sums.data() + c * dim;
    const float* x = data.data() + i * dim;
    for (std::size_t j = 0; j < dim; ++j) s[j] += x[j];
    ++out.counts[c];
  }
  return out;
}

double Sum(std::span<const double> values) {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc;
}

}  // namespace disctok::kernels::serial
