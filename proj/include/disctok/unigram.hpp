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

// Unigram subword model over discrete token ids.
//
// A piece is a short string of base token ids with a log-probability. The
// likelihood of a sequence sums, over all of its segmentations into
// pieces, the product of piece probabilities. Training seeds the inventory
// with frequent substrings, runs EM (forward-backward over the
// segmentation lattice) and prunes pieces whose loss hurts the corpus
// likelihood least, until the target size is reached. Encoding is the
// Viterbi segmentation.
//
// Every single-token piece is always present, so any sequence over the
// base vocabulary can be encoded. Pieces never span utterances.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "disctok/tokens.hpp"

namespace disctok {

struct Piece {
  std::vector<TokenId> tokens;
  double log_prob = 0.0;
};

class SubwordModel {
 public:
  SubwordModel() = default;

  // Validates the invariants: unique non-empty pieces over
  // [0, base_vocab_size), every single token present, finite log-probs
  // whose probabilities sum to 1 within 1e-9.
  SubwordModel(std::uint32_t base_vocab_size, std::vector<Piece> pieces,
               std::uint32_t target_vocab_size = 0);

  const std::vector<Piece>& pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }
  std::uint32_t base_vocab_size() const { return base_vocab_size_; }
  std::uint32_t target_vocab_size() const { return target_vocab_size_; }
  std::size_t max_piece_length() const { return max_len_; }
  std::uint64_t fingerprint() const { return fingerprint_; }

  // Piece id of the single-token piece [t].
  std::uint32_t single_piece(TokenId t) const { return single_[t]; }

  // Index of an exact piece, or -1.
  std::int64_t Find(std::span<const TokenId> tokens) const;

  // Calls fn(piece_id, length) for every piece matching seq at `pos`,
  // shortest first.
  template <typename Fn>
  void ForEachMatch(std::span<const TokenId> seq, std::size_t pos, Fn&& fn) const {
    std::uint32_t node = 0;
    for (std::size_t i = pos; i < seq.size() && i - pos < max_len_; ++i) {
      const auto it = trie_[node].next.find(seq[i]);
      if (it == trie_[node].next.end()) return;
      node = it->second;
      if (trie_[node].piece >= 0) fn(static_cast<std::uint32_t>(trie_[node].piece), i - pos + 1);
    }
  }

  double SumOfProbabilities() const;

 private:
  struct TrieNode {
    std::int64_t piece = -1;
    std::unordered_map<TokenId, std::uint32_t> next;
  };

  std::uint32_t base_vocab_size_ = 0;
  std::uint32_t target_vocab_size_ = 0;
  std::vector<Piece> pieces_;
  std::vector<TrieNode> trie_;
  std::vector<std::uint32_t> single_;
  std::size_t max_len_ = 0;
  std::uint64_t fingerprint_ = 0;
};

struct PieceSequence {
  std::string utterance_id;
  std::vector<std::uint32_t> piece_ids;
  std::uint64_t model_fingerprint = 0;
  float frame_rate_hz = 50.0f;
};

struct SeedConfig {
  std::uint32_t max_piece_len = 8;
  std::uint32_t seed_vocab_size = 100000;
};

struct UnigramConfig {
  std::uint32_t max_piece_len = 8;
  std::uint32_t seed_vocab_size = 100000;
  std::uint32_t em_steps_per_round = 2;
  double keep_fraction = 0.8;
  std::uint32_t final_em_steps = 2;
};

struct EmStepResult {
  SubwordModel model;
  double log_likelihood = 0.0;  // corpus log-likelihood before the update
};

struct UnigramTrainResult {
  SubwordModel model;
  // Pre-update log-likelihoods for each EM phase (one phase per pruning
  // round plus the final polish). Non-decreasing within a phase.
  std::vector<std::vector<double>> phase_log_likelihoods;
};

struct Segmentation {
  std::vector<std::uint32_t> piece_ids;
  double score = 0.0;  // sum of piece log-probs
};

// All single tokens plus the most frequent substrings of length
// 2..max_piece_len, with log-probs proportional to counts. Tokens absent
// from the corpus get a pseudo-count of one.
SubwordModel UnigramSeedVocab(const std::vector<TokenSequence>& corpus, const SeedConfig& config);

// log sum over segmentations of prod p(piece), summed over utterances.
double CorpusLogLikelihood(const SubwordModel& model, const std::vector<TokenSequence>& corpus);

// One EM iteration. Single-token pieces with zero expected count keep their
// probability; multi-token pieces with zero expected count are dropped.
EmStepResult UnigramEmStep(const SubwordModel& model, const std::vector<TokenSequence>& corpus);

// Keeps ceil(keep_fraction * m) of the m multi-token pieces, dropping those
// whose removal loses the least likelihood. The loss of piece p is its
// Viterbi frequency times (log p - best score of p's tokens without p).
SubwordModel UnigramPrune(const SubwordModel& model, const std::vector<TokenSequence>& corpus,
                          double keep_fraction);

UnigramTrainResult UnigramTrain(const std::vector<TokenSequence>& corpus,
                                std::uint32_t target_vocab_size, const UnigramConfig& config);

// Best segmentation: maximum score, then fewest pieces, then the
// lexicographically smallest piece-id sequence. `excluded` removes one
// piece from consideration (-1 for none).
Segmentation ViterbiSegment(const SubwordModel& model, std::span<const TokenId> tokens,
                            std::int64_t excluded = -1);

PieceSequence Encode(const SubwordModel& model, const TokenSequence& tokens);
TokenSequence Decode(const SubwordModel& model, const PieceSequence& pieces);

// Piece ids as a plain token stream with vocab_size = model.size().
TokenSequence AsTokenSequence(const PieceSequence& pieces, const SubwordModel& model);
PieceSequence AsPieceSequence(const TokenSequence& tokens, const SubwordModel& model);

std::string SerializeSubwordModel(const SubwordModel& model);
SubwordModel ParseSubwordModel(const std::string& text);
void SaveSubwordModel(const SubwordModel& model, const std::filesystem::path& path);
SubwordModel LoadSubwordModel(const std::filesystem::path& path);

}  // namespace disctok
