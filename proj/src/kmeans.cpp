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

#include "disctok/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "disctok/binary_io.hpp"
#include "disctok/error.hpp"
#include "disctok/rng.hpp"

namespace disctok {

std::vector<std::uint64_t> SampleIndices(std::uint64_t total, std::uint64_t target,
                                         std::uint64_t seed) {
  std::vector<std::uint64_t> out;
  if (target >= total) {
    out.resize(total);
    for (std::uint64_t i = 0; i < total; ++i) out[i] = i;
    return out;
  }
  out.reserve(target);
  Rng rng(seed);
  // Knuth's selection sampling: index i is kept with probability
  // needed / remaining, which yields a uniform subset in sorted order.
  std::uint64_t needed = target;
  for (std::uint64_t i = 0; i < total && needed > 0; ++i) {
    const std::uint64_t remaining = total - i;
    if (rng.UniformInt(remaining) < needed) {
      out.push_back(i);
      --needed;
    }
  }
  return out;
}

FrameMatrix SubsampleFrames(const CorpusManifest& manifest, std::uint64_t target_frames,
                            std::uint64_t seed) {
  if (target_frames == 0) throw Error(ErrorCode::kInvalidConfig, "target_frames must be >= 1");
  if (manifest.total_frames == 0) throw Error(ErrorCode::kEmptyCorpus, "corpus has no frames");
  const auto picks = SampleIndices(manifest.total_frames, target_frames, seed);

  FrameMatrix out;
  bool have_dim = false;
  std::uint64_t offset = 0;
  std::size_t next = 0;
  for (const auto& e : manifest.entries) {
    const std::uint64_t end = offset + e.num_frames;
    if (next < picks.size() && picks[next] < end) {
      const FeatureSequence seq = ReadFeatures(e.path);
      if (seq.num_frames() != e.num_frames) {
        throw Error(ErrorCode::kHeaderMismatch, e.utterance_id + ": manifest frame count mismatch");
      }
      if (!have_dim) {
        out.dim = seq.dim;
        out.values.reserve(picks.size() * seq.dim);
        have_dim = true;
      } else if (seq.dim != out.dim) {
        throw Error(ErrorCode::kDimMismatch, e.utterance_id + ": dim differs from corpus");
      }
      for (; next < picks.size() && picks[next] < end; ++next) {
        auto r = seq.row(picks[next] - offset);
        out.values.insert(out.values.end(), r.begin(), r.end());
      }
    }
    offset = end;
  }
  return out;
}

namespace {

void CheckFinite(const FrameMatrix& data) {
  for (float v : data.values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteValue, "training frames contain NaN/Inf");
  }
}

std::vector<double> ToDouble(std::span<const float> v) { return {v.begin(), v.end()}; }

}  // namespace

Codebook KMeansPlusPlusInit(const FrameMatrix& data, std::uint32_t k, std::uint64_t seed) {
  if (k == 0) throw Error(ErrorCode::kInvalidConfig, "k must be >= 1");
  if (data.dim == 0) throw Error(ErrorCode::kInvalidConfig, "dim must be positive");
  const std::size_t n = data.rows();
  if (n < k) {
    throw Error(ErrorCode::kTooFewDistinctPoints,
                std::to_string(n) + " frames for k=" + std::to_string(k));
  }
  CheckFinite(data);

  Rng rng(seed);
  Codebook cb;
  cb.k = k;
  cb.dim = data.dim;
  cb.meta.seed = seed;
  cb.centroids.reserve(static_cast<std::size_t>(k) * data.dim);

  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  std::size_t pick = rng.UniformInt(n);
  for (std::uint32_t c = 0;; ++c) {
    auto r = data.row(pick);
    cb.centroids.insert(cb.centroids.end(), r.begin(), r.end());
    if (c + 1 == k) break;
    kernels::UpdateMinDistance(data.values, data.dim, ToDouble(r), min_d2);
    const double total = kernels::serial::Sum(min_d2);
    if (!(total > 0.0)) {
      throw Error(ErrorCode::kTooFewDistinctPoints,
                  "only " + std::to_string(c + 1) + " distinct frames for k=" + std::to_string(k));
    }
    // Walk the cumulative distribution. A point with zero weight can
    // never be the first index whose running sum exceeds the target.
    const double target = rng.Uniform() * total;
    double cum = 0.0;
    std::size_t chosen = n;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (min_d2[i] > 0.0) last_positive = i;
      cum += min_d2[i];
      if (cum > target && min_d2[i] > 0.0) {
        chosen = i;
        break;
      }
    }
    pick = chosen == n ? last_positive : chosen;
  }
  return cb;
}

Codebook LloydFit(const FrameMatrix& data, std::uint32_t k, const KMeansConfig& config) {
  if (config.max_iters == 0) throw Error(ErrorCode::kInvalidConfig, "max_iters must be >= 1");
  if (!(config.rel_tol >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "rel_tol must be >= 0");
  Codebook cb = KMeansPlusPlusInit(data, k, config.seed);

  const std::size_t n = data.rows();
  const std::size_t dim = data.dim;
  std::vector<double> centroids = ToDouble(cb.centroids);
  std::vector<std::uint32_t> labels(n), prev_labels;
  std::vector<double> d2(n);
  std::vector<double>& history = cb.meta.inertia_history;

  std::uint32_t updates = 0;
  for (;;) {
    kernels::NearestCentroid(data.values, dim, centroids, labels, d2);
    const double inertia = kernels::ChunkedSum(d2, config.chunk_frames);
    history.push_back(inertia);
    if (inertia == 0.0) break;
    if (history.size() > 1) {
      const double prev = history[history.size() - 2];
      if (labels == prev_labels || prev - inertia < config.rel_tol * prev) break;
    }
    if (updates == config.max_iters) break;

    kernels::ClusterSums acc = kernels::AccumulateClusters(data.values, dim, labels, k);
    for (std::size_t c = 0; c < k; ++c) {
      if (acc.counts[c] == 0) continue;
      const double inv = static_cast<double>(acc.counts[c]);
      for (std::size_t j = 0; j < dim; ++j) centroids[c * dim + j] = acc.sums[c * dim + j] / inv;
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (acc.counts[c] != 0) continue;
      const auto far = std::max_element(d2.begin(), d2.end());
      if (far == d2.end() || *far <= 0.0) break;
      const auto i = static_cast<std::size_t>(far - d2.begin());
      for (std::size_t j = 0; j < dim; ++j) centroids[c * dim + j] = data.values[i * dim + j];
      *far = -1.0;  // not eligible again this round
    }
    prev_labels = labels;
    ++updates;
  }

  for (std::size_t i = 0; i < centroids.size(); ++i) cb.centroids[i] = static_cast<float>(centroids[i]);
  cb.meta.iterations_run = updates;
  cb.meta.final_inertia = history.back();
  return cb;
}

TokenSequence Assign(const Codebook& codebook, const FeatureSequence& features) {
  if (features.dim != codebook.dim) {
    throw Error(ErrorCode::kDimMismatch, features.utterance_id + ": features have dim " +
                                             std::to_string(features.dim) + ", codebook " +
                                             std::to_string(codebook.dim));
  }
  TokenSequence out;
  out.utterance_id = features.utterance_id;
  out.vocab_size = codebook.k;
  out.frame_rate_hz = features.frame_rate_hz;
  const std::size_t n = features.num_frames();
  out.tokens.resize(n);
  if (n == 0) return out;
  const std::vector<double> centroids = ToDouble(codebook.centroids);
  std::vector<double> d2(n);
  kernels::NearestCentroid(features.frames, features.dim, centroids, out.tokens, d2);
  return out;
}

std::vector<std::uint8_t> EncodeCodebook(const Codebook& cb) {
  ByteWriter w;
  w.Reserve(kCodebookHeaderBytes + cb.centroids.size() * 4);
  w.Bytes(std::string_view(kCodebookMagic, 4));
  w.U32(kCodebookVersion);
  w.U32(cb.k);
  w.U32(cb.dim);
  w.U64(cb.meta.seed);
  w.F64(cb.meta.final_inertia);
  for (float v : cb.centroids) w.F32(v);
  return w.Release();
}

Codebook DecodeCodebook(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, ErrorCode::kHeaderMismatch);
  if (!r.ConsumeMagic(std::string_view(kCodebookMagic, 4))) {
    throw Error(ErrorCode::kBadMagic, "not a codebook file");
  }
  const auto version = r.U32();
  if (version != kCodebookVersion) {
    throw Error(ErrorCode::kHeaderMismatch, "unsupported codebook version " + std::to_string(version));
  }
  Codebook cb;
  cb.k = r.U32();
  cb.dim = r.U32();
  cb.meta.seed = r.U64();
  cb.meta.final_inertia = r.F64();
  if (cb.k == 0 || cb.dim == 0) throw Error(ErrorCode::kHeaderMismatch, "k and dim must be positive");
  const std::uint64_t values = static_cast<std::uint64_t>(cb.k) * cb.dim;
  if (r.remaining() != values * 4) {
    throw Error(ErrorCode::kHeaderMismatch, "centroid payload has " + std::to_string(r.remaining()) +
                                                " bytes, header implies " + std::to_string(values * 4));
  }
  cb.centroids.resize(values);
  for (auto& v : cb.centroids) {
    v = r.F32();
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteValue, "codebook has a non-finite centroid");
  }
  return cb;
}

void SaveCodebook(const Codebook& codebook, const std::filesystem::path& path) {
  WriteFileAtomic(path, EncodeCodebook(codebook));
}

Codebook LoadCodebook(const std::filesystem::path& path) {
  return DecodeCodebook(ReadFileBytes(path));
}

}  // namespace disctok
