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
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "disctok/tokens.hpp"

namespace disctok {

// Joint frame counts of (token, phone).
struct ContingencyTable {
  std::size_t num_tokens = 0;
  std::size_t num_phones = 0;
  std::vector<std::uint64_t> counts;  // num_tokens x num_phones
  std::uint64_t total = 0;

  ContingencyTable() = default;
  ContingencyTable(std::size_t tokens, std::size_t phones)
      : num_tokens(tokens), num_phones(phones), counts(tokens * phones, 0) {}

  std::uint64_t at(std::size_t t, std::size_t y) const { return counts[t * num_phones + y]; }
  void Add(std::size_t t, std::size_t y, std::uint64_t n = 1) {
    counts[t * num_phones + y] += n;
    total += n;
  }
  ContingencyTable Transposed() const;
};

// Frame-level phone labels keyed by utterance id. Phone symbols are
// interned to dense ids in order of first appearance.
struct PhoneAlignment {
  std::vector<std::string> phone_names;
  std::unordered_map<std::string, std::vector<std::uint32_t>> labels;
};

// Parses `utterance_id<TAB>space-separated phone symbols` lines.
PhoneAlignment ReadPhoneLabels(const std::filesystem::path& path);

// Accumulates frames over the corpus. Each utterance's label sequence must
// have exactly as many frames as its raw (not de-duplicated) token stream.
ContingencyTable JointCounts(const std::vector<TokenSequence>& tokens,
                             const std::vector<std::vector<std::uint32_t>>& phones,
                             std::size_t num_phones);
ContingencyTable JointCounts(const std::vector<TokenSequence>& tokens, const PhoneAlignment& phones);

// sum_t max_y p(t, y)
double PhonePurity(const ContingencyTable& table);
// sum_y max_t p(t, y)
double TokenPurity(const ContingencyTable& table);
// I(token; phone) / H(phone), natural logs.
double Pnmi(const ContingencyTable& table);

struct QualityReport {
  double phone_purity = 0.0;
  double token_purity = 0.0;
  double pnmi = 0.0;
  std::uint64_t frames = 0;
};

QualityReport EvaluateQuality(const ContingencyTable& table);

struct SplitLengthStats {
  std::string split_name;
  std::size_t num_utts = 0;
  double before_mean = 0.0;
  double mean_length = 0.0;
  double reduction_fraction = 0.0;  // 1 - mean_length / before_mean
};

// Per-utterance lengths keyed by utterance id.
using LengthTable = std::map<std::string, std::uint64_t>;

// Both tables must hold the same set of utterance ids.
SplitLengthStats LengthStats(const std::string& split_name, const LengthTable& before,
                             const LengthTable& after);

}  // namespace disctok
