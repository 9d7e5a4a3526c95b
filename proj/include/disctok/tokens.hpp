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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace disctok {

using TokenId = std::uint32_t;

// Discrete token ids for one utterance. run_lengths is present only after
// de-duplication and then has one entry per token.
struct TokenSequence {
  std::string utterance_id;
  std::vector<TokenId> tokens;
  std::uint32_t vocab_size = 1;
  float frame_rate_hz = 50.0f;
  std::optional<std::vector<std::uint32_t>> run_lengths;

  std::size_t size() const { return tokens.size(); }

  // Throws CorruptPayload on an out-of-range id, MissingRunLengths on a
  // malformed run-length vector.
  void Validate() const;

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

}  // namespace disctok
