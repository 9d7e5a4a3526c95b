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

// Sequence-level length reduction and augmentation on token streams.
// The unigram subword model lives in unigram.hpp.

#pragma once

#include <cstdint>
#include <vector>

#include "disctok/tokens.hpp"

namespace disctok {

// Collapses maximal runs of equal tokens and records each run's length.
TokenSequence Dedup(const TokenSequence& tokens);

// Inverse of Dedup.
TokenSequence Expand(const TokenSequence& deduped);

struct MaskConfig {
  std::uint32_t num_masks = 2;
  std::uint32_t max_span_frames = 10;
};

struct MaskSpan {
  std::size_t start = 0;
  std::size_t length = 0;  // after clamping at the sequence end
};

struct MaskResult {
  TokenSequence tokens;
  std::vector<MaskSpan> spans;
};

// Replaces up to num_masks random spans with the id `vocab_size`, which
// becomes a new symbol (output vocab_size is one larger). Spans may
// overlap and are clamped at the end of the sequence.
MaskResult TimeMask(const TokenSequence& tokens, const MaskConfig& config, std::uint64_t seed);

}  // namespace disctok
