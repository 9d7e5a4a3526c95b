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

// Shared helpers for the test binaries: scratch directories and random
// value generators for property tests.

#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "disctok/error.hpp"
#include "disctok/feature_io.hpp"
#include "disctok/rng.hpp"
#include "disctok/tokens.hpp"

namespace disctok::testing {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("disctok_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline TokenSequence RandomTokens(Rng& rng, std::size_t length, std::uint32_t vocab,
                                  double repeat_prob = 0.0) {
  TokenSequence seq;
  seq.utterance_id = "u";
  seq.vocab_size = vocab;
  for (std::size_t i = 0; i < length; ++i) {
    if (i > 0 && rng.Bernoulli(repeat_prob)) {
      seq.tokens.push_back(seq.tokens.back());
    } else {
      seq.tokens.push_back(static_cast<TokenId>(rng.UniformInt(vocab)));
    }
  }
  return seq;
}

inline FeatureSequence RandomFeatures(Rng& rng, std::size_t frames, std::uint32_t dim,
                                      double scale = 1.0) {
  FeatureSequence seq;
  seq.utterance_id = "u";
  seq.dim = dim;
  seq.frames.resize(frames * dim);
  for (auto& v : seq.frames) v = static_cast<float>(scale * rng.Normal());
  return seq;
}

// True if fn throws an Error carrying `code`.
template <typename Fn>
bool ThrowsCode(Fn&& fn, ErrorCode code) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace disctok::testing
