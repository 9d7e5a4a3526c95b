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

// Pipeline configuration: an INI-style file of [section] key = value
// lines. Unknown sections or keys are rejected.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "disctok/feature_io.hpp"

namespace disctok {

struct PipelineConfig {
  struct Paths {
    std::filesystem::path manifest;      // default: <output_dir>/corpus/manifest.tsv
    std::filesystem::path output_dir = "disctok_out";
    std::filesystem::path codebook;      // default: <output_dir>/codebook.dscb
    std::filesystem::path subword_model; // default: <output_dir>/subword.model
    std::filesystem::path phone_labels;  // default: phones.tsv next to the manifest
  } paths;

  struct KMeans {
    std::uint32_t k = 2000;
    std::uint64_t seed = 0;
    std::uint32_t max_iters = 100;
    double rel_tol = 1e-6;
    std::uint64_t subsample_frames = 18'000'000;  // about 100 h at 50 fps
    std::uint64_t chunk_frames = 4096;
  } kmeans;

  struct Reduction {
    bool dedup = false;
    bool subword = false;
    std::uint32_t target_vocab = 6000;
    std::uint32_t max_piece_len = 8;
    std::uint32_t seed_vocab_size = 100000;
  } reduction;

  struct Masking {
    bool enabled = false;
    std::uint32_t num_masks = 2;
    std::uint32_t max_span_frames = 10;
    std::uint64_t seed = 0;
  } masking;

  SynthConfig synth;

  struct Report {
    std::string split = "train";
    double hypothetical_hours = 0.0;  // extra size rows for a corpus of this length
  } report;

  struct Runtime {
    int threads = 0;  // 0 keeps the OpenMP default
  } runtime;

  std::filesystem::path ManifestPath() const;
  std::filesystem::path CodebookPath() const;
  std::filesystem::path SubwordModelPath() const;
  std::filesystem::path PhoneLabelsPath() const;
  std::filesystem::path TokensDir() const;
  std::filesystem::path SynthDir() const;

  // Throws InvalidConfig on a violated constraint.
  void Validate() const;

  friend bool operator==(const PipelineConfig& a, const PipelineConfig& b);
};

PipelineConfig ParseConfig(const std::string& text,
                           const std::vector<std::string>& overrides = {});
PipelineConfig LoadConfig(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides = {});
std::string SerializeConfig(const PipelineConfig& config);

}  // namespace disctok
