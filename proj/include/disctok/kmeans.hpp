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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "disctok/feature_io.hpp"
#include "disctok/kernels.hpp"
#include "disctok/tokens.hpp"

namespace disctok {

inline constexpr char kCodebookMagic[] = "DSCB";
inline constexpr std::uint32_t kCodebookVersion = 1;
inline constexpr std::size_t kCodebookHeaderBytes = 4 + 4 + 4 + 4 + 8 + 8;

// Row-major frames pooled from one or more utterances.
struct FrameMatrix {
  std::uint32_t dim = 1;
  std::vector<float> values;

  std::size_t rows() const { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(values).subspan(i * dim, dim);
  }
};

struct TrainingMeta {
  std::uint64_t seed = 0;
  std::uint32_t iterations_run = 0;
  double final_inertia = 0.0;
  std::vector<double> inertia_history;  // one entry per assignment pass; not persisted
};

struct Codebook {
  std::uint32_t k = 0;
  std::uint32_t dim = 0;
  std::vector<float> centroids;  // k x dim
  TrainingMeta meta;

  std::span<const float> centroid(std::size_t c) const {
    return std::span<const float>(centroids).subspan(c * dim, dim);
  }
};

struct KMeansConfig {
  std::uint32_t max_iters = 100;
  double rel_tol = 1e-6;
  std::uint64_t seed = 0;
  std::size_t chunk_frames = kernels::kDefaultChunkFrames;
};

// Uniform sample without replacement of `target_frames` frames over the
// whole corpus, returned in corpus order; the whole corpus if smaller.
FrameMatrix SubsampleFrames(const CorpusManifest& manifest, std::uint64_t target_frames,
                            std::uint64_t seed);

// Index-level selection sampling used by SubsampleFrames: a sorted list of
// min(target, total) distinct indices in [0, total).
std::vector<std::uint64_t> SampleIndices(std::uint64_t total, std::uint64_t target,
                                         std::uint64_t seed);

// k-means++ seeding: first centroid uniform, then each next one drawn with
// probability proportional to squared distance from the nearest chosen one.
Codebook KMeansPlusPlusInit(const FrameMatrix& data, std::uint32_t k, std::uint64_t seed);

// Lloyd iterations from a k-means++ start. Empty clusters are re-seeded
// with the frame farthest from its centroid.
Codebook LloydFit(const FrameMatrix& data, std::uint32_t k, const KMeansConfig& config);

// Nearest-centroid quantization; ties go to the smaller centroid index.
TokenSequence Assign(const Codebook& codebook, const FeatureSequence& features);

std::vector<std::uint8_t> EncodeCodebook(const Codebook& codebook);
Codebook DecodeCodebook(std::span<const std::uint8_t> bytes);
void SaveCodebook(const Codebook& codebook, const std::filesystem::path& path);
Codebook LoadCodebook(const std::filesystem::path& path);

}  // namespace disctok
