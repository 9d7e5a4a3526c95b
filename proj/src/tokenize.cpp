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

#include "disctok/tokenize.hpp"

#include <algorithm>

#include "disctok/error.hpp"
#include "disctok/rng.hpp"

namespace disctok {

void TokenSequence::Validate() const {
  if (vocab_size == 0) throw Error(ErrorCode::kInvalidConfig, "vocab_size must be positive");
  for (TokenId t : tokens) {
    if (t >= vocab_size) {
      throw Error(ErrorCode::kCorruptPayload, utterance_id + ": token " + std::to_string(t) +
                                                  " >= vocab_size " + std::to_string(vocab_size));
    }
  }
  if (!run_lengths) return;
  if (run_lengths->size() != tokens.size()) {
    throw Error(ErrorCode::kMissingRunLengths, utterance_id + ": run_lengths size mismatch");
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if ((*run_lengths)[i] == 0) {
      throw Error(ErrorCode::kMissingRunLengths, utterance_id + ": zero run length");
    }
    if (i > 0 && tokens[i] == tokens[i - 1]) {
      throw Error(ErrorCode::kCorruptPayload, utterance_id + ": adjacent repeat in deduped stream");
    }
  }
}

TokenSequence Dedup(const TokenSequence& in) {
  if (in.run_lengths) throw Error(ErrorCode::kAlreadyDeduped, in.utterance_id);
  TokenSequence out;
  out.utterance_id = in.utterance_id;
  out.vocab_size = in.vocab_size;
  out.frame_rate_hz = in.frame_rate_hz;
  std::vector<std::uint32_t> runs;
  for (TokenId t : in.tokens) {
    if (!out.tokens.empty() && out.tokens.back() == t) {
      ++runs.back();
    } else {
      out.tokens.push_back(t);
      runs.push_back(1);
    }
  }
  out.run_lengths = std::move(runs);
  return out;
}

TokenSequence Expand(const TokenSequence& in) {
  if (!in.run_lengths || in.run_lengths->size() != in.tokens.size()) {
    throw Error(ErrorCode::kMissingRunLengths, in.utterance_id);
  }
  TokenSequence out;
  out.utterance_id = in.utterance_id;
  out.vocab_size = in.vocab_size;
  out.frame_rate_hz = in.frame_rate_hz;
  for (std::size_t i = 0; i < in.tokens.size(); ++i) {
    const std::uint32_t run = (*in.run_lengths)[i];
    if (run == 0) throw Error(ErrorCode::kMissingRunLengths, in.utterance_id + ": zero run length");
    out.tokens.insert(out.tokens.end(), run, in.tokens[i]);
  }
  return out;
}

MaskResult TimeMask(const TokenSequence& in, const MaskConfig& config, std::uint64_t seed) {
  if (config.max_span_frames == 0) {
    throw Error(ErrorCode::kInvalidConfig, "max_span_frames must be >= 1");
  }
  MaskResult result;
  result.tokens = in;
  result.tokens.vocab_size = in.vocab_size + 1;
  const TokenId mask_id = in.vocab_size;
  const std::size_t n = in.tokens.size();
  if (n == 0) return result;

  Rng rng(seed);
  for (std::uint32_t m = 0; m < config.num_masks; ++m) {
    const auto length = static_cast<std::size_t>(1 + rng.UniformInt(config.max_span_frames));
    const auto start = static_cast<std::size_t>(rng.UniformInt(n));
    const std::size_t end = std::min(n, start + length);
    std::fill(result.tokens.tokens.begin() + static_cast<std::ptrdiff_t>(start),
              result.tokens.tokens.begin() + static_cast<std::ptrdiff_t>(end), mask_id);
    result.spans.push_back({start, end - start});
  }
  return result;
}

}  // namespace disctok
