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

// The batch commands behind the `disctok` tool. Each returns a report
// with a human-readable table and a key=value rendering.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "disctok/config.hpp"
#include "disctok/kmeans.hpp"
#include "disctok/metrics.hpp"
#include "disctok/storage.hpp"

namespace disctok {

struct Report {
  std::string title;
  std::vector<std::pair<std::string, std::string>> values;  // ordered key=value
  std::string table;                                          // human-readable

  void Set(const std::string& key, const std::string& value) { values.emplace_back(key, value); }
  void Set(const std::string& key, double value);
  void Set(const std::string& key, std::uint64_t value);

  std::string ToText() const;
  std::string ToKeyValue() const;
};

Report CmdSynth(const PipelineConfig& config);
Report CmdTrainKMeans(const PipelineConfig& config);
Report CmdTrainSubword(const PipelineConfig& config);
Report CmdEncode(const PipelineConfig& config);
Report CmdStats(const PipelineConfig& config);
Report CmdEval(const PipelineConfig& config);

// Raw per-frame tokens for every utterance in the manifest.
std::vector<TokenSequence> QuantizeCorpus(const Codebook& codebook, const CorpusManifest& manifest);

// Raw tokens, de-duplicated when the config asks for it; the input to
// subword training and encoding.
std::vector<TokenSequence> ReduceForSubword(std::vector<TokenSequence> raw,
                                            const PipelineConfig& config);

}  // namespace disctok
