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

// Feature matrices ("DSFT" files), corpus manifests, and the synthetic
// corpus generator used in place of real SSL embeddings.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace disctok {

inline constexpr char kFeatureMagic[] = "DSFT";
inline constexpr std::uint32_t kFeatureVersion = 1;
inline constexpr std::size_t kFeatureHeaderBytes = 4 + 4 + 8 + 4 + 4;

struct FeatureSequence {
  std::string utterance_id;
  std::uint32_t dim = 1;
  float frame_rate_hz = 50.0f;
  std::vector<float> frames;  // row-major, num_frames() x dim

  std::size_t num_frames() const { return dim == 0 ? 0 : frames.size() / dim; }
  double duration_seconds() const { return num_frames() / static_cast<double>(frame_rate_hz); }
  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(frames).subspan(i * dim, dim);
  }

  // Throws InvalidConfig for a bad shape or rate, NonFiniteValue for NaN/Inf.
  void Validate() const;
};

struct FeatureHeader {
  std::uint64_t num_frames = 0;
  std::uint32_t dim = 0;
  float frame_rate_hz = 0.0f;
};

// The utterance id of a file read from disk is its filename stem.
FeatureSequence ReadFeatures(const std::filesystem::path& path);
FeatureHeader ReadFeatureHeader(const std::filesystem::path& path);
void WriteFeatures(const FeatureSequence& seq, const std::filesystem::path& path);

std::vector<std::uint8_t> EncodeFeatures(const FeatureSequence& seq);
FeatureSequence DecodeFeatures(std::span<const std::uint8_t> bytes, std::string utterance_id);

struct ManifestEntry {
  std::string utterance_id;
  std::filesystem::path path;
  std::uint64_t num_frames = 0;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  std::uint64_t total_frames = 0;

  // Appends and keeps total_frames in sync; rejects duplicate ids.
  void Add(ManifestEntry entry);
};

// Relative paths in a manifest resolve against the manifest's directory.
CorpusManifest ReadManifest(const std::filesystem::path& path);
void WriteManifest(const CorpusManifest& manifest, const std::filesystem::path& path);

// Checks every entry's num_frames against the header of its file.
void VerifyManifest(const CorpusManifest& manifest);

// Reads every file in the manifest (in parallel), preserving entry order.
std::vector<FeatureSequence> ReadCorpus(const CorpusManifest& manifest);

struct SynthConfig {
  std::uint32_t num_utts = 100;
  std::uint32_t frames_per_utt = 200;
  std::uint32_t dim = 16;
  std::uint32_t num_clusters = 16;
  std::uint32_t num_phones = 0;  // 0 means one phone per cluster
  double separation = 10.0;      // minimum mean distance, in units of within_std
  double within_std = 1.0;
  double persistence = 0.7;      // probability the next frame keeps the same cluster
  float frame_rate_hz = 50.0f;
  std::uint64_t seed = 0;
};

struct SynthCorpus {
  std::vector<FeatureSequence> utterances;
  std::vector<std::vector<std::uint32_t>> cluster_labels;  // per frame
  std::vector<std::vector<std::uint32_t>> phone_labels;    // per frame
  std::vector<double> means;                               // num_clusters x dim
  std::vector<std::uint32_t> phone_of_cluster;
};

SynthCorpus GenerateSynthCorpus(const SynthConfig& config);

// Writes features/<id>.dsft, manifest.tsv, phones.tsv and clusters.tsv
// under `dir` and returns the manifest.
CorpusManifest WriteSynthCorpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

// `utterance_id<TAB>space-separated labels` lines, shared by phone and
// cluster label sidecars.
void WriteLabelTsv(const std::vector<std::string>& ids,
                   const std::vector<std::vector<std::uint32_t>>& labels,
                   const std::filesystem::path& path);

}  // namespace disctok
