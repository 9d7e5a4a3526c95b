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

#include "disctok/unigram.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <string_view>

#include "disctok/binary_io.hpp"
#include "disctok/error.hpp"

namespace disctok {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kProbSumTolerance = 1e-9;
constexpr std::string_view kModelHeader = "#disctok-unigram v1 base_vocab=";

// log(exp(a) + exp(b)).
double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

std::uint64_t Fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Utterances are processed in fixed blocks whose size depends only on the
// corpus size; per-block partial results are combined in block order.
std::size_t BlockSize(std::size_t num_utts) {
  return std::max<std::size_t>(16, (num_utts + 63) / 64);
}

template <typename Fn>
void ForEachBlock(std::size_t num_utts, Fn&& fn) {
  const std::size_t block = BlockSize(num_utts);
  const auto num_blocks = static_cast<std::int64_t>((num_utts + block - 1) / block);
  std::exception_ptr failure;
  std::mutex mu;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t b = 0; b < num_blocks; ++b) {
    try {
      const std::size_t lo = static_cast<std::size_t>(b) * block;
      fn(static_cast<std::size_t>(b), lo, std::min(num_utts, lo + block));
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::size_t NumBlocks(std::size_t num_utts) {
  const std::size_t block = BlockSize(num_utts);
  return (num_utts + block - 1) / block;
}

std::uint32_t CorpusBaseVocab(const std::vector<TokenSequence>& corpus) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "subword corpus is empty");
  const std::uint32_t v = corpus.front().vocab_size;
  for (const auto& seq : corpus) {
    if (seq.vocab_size != v) {
      throw Error(ErrorCode::kVocabMismatch, seq.utterance_id + ": vocab_size " +
                                                 std::to_string(seq.vocab_size) + " != " +
                                                 std::to_string(v));
    }
    for (TokenId t : seq.tokens) {
      if (t >= v) throw Error(ErrorCode::kCorruptPayload, seq.utterance_id + ": token out of range");
    }
  }
  return v;
}

void CheckCorpusVocab(const SubwordModel& model, const std::vector<TokenSequence>& corpus) {
  for (const auto& seq : corpus) {
    if (seq.vocab_size != model.base_vocab_size()) {
      throw Error(ErrorCode::kVocabMismatch,
                  seq.utterance_id + ": vocab_size " + std::to_string(seq.vocab_size) +
                      ", model base vocab " + std::to_string(model.base_vocab_size()));
    }
  }
}

struct Edge {
  std::uint32_t start;
  std::uint32_t end;
  std::uint32_t piece;
};

std::vector<Edge> BuildLattice(const SubwordModel& model, std::span<const TokenId> seq) {
  std::vector<Edge> edges;
  edges.reserve(seq.size() * 2);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    model.ForEachMatch(seq, i, [&](std::uint32_t piece, std::size_t len) {
      edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + len), piece});
    });
  }
  return edges;
}

// Forward pass only; returns log Z.
double LogPartition(const SubwordModel& model, std::span<const TokenId> seq) {
  if (seq.empty()) return 0.0;
  std::vector<double> alpha(seq.size() + 1, kNegInf);
  alpha[0] = 0.0;
  const auto& pieces = model.pieces();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (alpha[i] == kNegInf) continue;
    model.ForEachMatch(seq, i, [&](std::uint32_t piece, std::size_t len) {
      alpha[i + len] = LogAdd(alpha[i + len], alpha[i] + pieces[piece].log_prob);
    });
  }
  return alpha.back();
}

// Adds expected piece counts for one utterance; returns log Z.
double ForwardBackward(const SubwordModel& model, std::span<const TokenId> seq,
                       std::vector<double>& counts) {
  if (seq.empty()) return 0.0;
  const auto& pieces = model.pieces();
  const std::vector<Edge> edges = BuildLattice(model, seq);
  const std::size_t n = seq.size();
  std::vector<double> alpha(n + 1, kNegInf), beta(n + 1, kNegInf);
  alpha[0] = 0.0;
  beta[n] = 0.0;
  // Edges are ordered by start, so every alpha[start] is final when read.
  for (const Edge& e : edges) {
    alpha[e.end] = LogAdd(alpha[e.end], alpha[e.start] + pieces[e.piece].log_prob);
  }
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
    beta[it->start] = LogAdd(beta[it->start], pieces[it->piece].log_prob + beta[it->end]);
  }
  const double log_z = alpha[n];
  for (const Edge& e : edges) {
    counts[e.piece] += std::exp(alpha[e.start] + pieces[e.piece].log_prob + beta[e.end] - log_z);
  }
  return log_z;
}

SubwordModel Renormalized(const SubwordModel& model, std::vector<Piece> pieces) {
  double total = 0.0;
  for (const auto& p : pieces) total += std::exp(p.log_prob);
  const double log_total = std::log(total);
  for (auto& p : pieces) p.log_prob -= log_total;
  return SubwordModel(model.base_vocab_size(), std::move(pieces), model.target_vocab_size());
}

SubwordModel PruneToCount(const SubwordModel& model, const std::vector<TokenSequence>& corpus,
                          std::size_t keep_multi) {
  const auto& pieces = model.pieces();
  std::vector<std::uint32_t> multi;
  for (std::uint32_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].tokens.size() > 1) multi.push_back(i);
  }
  if (keep_multi >= multi.size()) return model;

  // Viterbi usage count per piece.
  std::vector<std::vector<std::uint64_t>> block_freq(NumBlocks(corpus.size()));
  ForEachBlock(corpus.size(), [&](std::size_t b, std::size_t lo, std::size_t hi) {
    auto& freq = block_freq[b];
    freq.assign(pieces.size(), 0);
    for (std::size_t u = lo; u < hi; ++u) {
      for (std::uint32_t id : ViterbiSegment(model, corpus[u].tokens).piece_ids) ++freq[id];
    }
  });
  std::vector<std::uint64_t> freq(pieces.size(), 0);
  for (const auto& bf : block_freq) {
    for (std::size_t i = 0; i < bf.size(); ++i) freq[i] += bf[i];
  }

  struct Candidate {
    double loss;
    std::uint64_t freq;
    std::uint32_t id;
  };
  std::vector<Candidate> cands;
  cands.reserve(multi.size());
  for (std::uint32_t id : multi) {
    double loss = 0.0;
    if (freq[id] > 0) {
      const double alt = ViterbiSegment(model, pieces[id].tokens, id).score;
      loss = static_cast<double>(freq[id]) * (pieces[id].log_prob - alt);
    }
    cands.push_back({loss, freq[id], id});
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.loss != b.loss) return a.loss < b.loss;
    if (a.freq != b.freq) return a.freq < b.freq;
    return a.id > b.id;
  });
  std::vector<bool> drop(pieces.size(), false);
  for (std::size_t i = 0; i < multi.size() - keep_multi; ++i) drop[cands[i].id] = true;

  std::vector<Piece> kept;
  kept.reserve(pieces.size());
  for (std::uint32_t i = 0; i < pieces.size(); ++i) {
    if (!drop[i]) kept.push_back(pieces[i]);
  }
  return Renormalized(model, std::move(kept));
}

std::size_t NumMulti(const SubwordModel& model) {
  return model.size() - model.base_vocab_size();
}

}  // namespace

SubwordModel::SubwordModel(std::uint32_t base_vocab_size, std::vector<Piece> pieces,
                           std::uint32_t target_vocab_size)
    : base_vocab_size_(base_vocab_size),
      target_vocab_size_(target_vocab_size == 0 ? static_cast<std::uint32_t>(pieces.size())
                                                : target_vocab_size),
      pieces_(std::move(pieces)) {
  if (base_vocab_size_ == 0) throw Error(ErrorCode::kInvalidConfig, "base vocab must be positive");
  trie_.emplace_back();
  single_.assign(base_vocab_size_, UINT32_MAX);
  fingerprint_ = Fnv1a(0xcbf29ce484222325ULL, base_vocab_size_);
  double total = 0.0;
  for (std::uint32_t id = 0; id < pieces_.size(); ++id) {
    const Piece& p = pieces_[id];
    if (p.tokens.empty()) throw Error(ErrorCode::kInvalidConfig, "empty piece");
    if (!std::isfinite(p.log_prob) || p.log_prob > 0.0) {
      throw Error(ErrorCode::kInvalidConfig, "piece log-prob must be finite and <= 0");
    }
    std::uint32_t node = 0;
    for (TokenId t : p.tokens) {
      if (t >= base_vocab_size_) throw Error(ErrorCode::kInvalidConfig, "piece token out of range");
      auto it = trie_[node].next.find(t);
      if (it == trie_[node].next.end()) {
        const auto child = static_cast<std::uint32_t>(trie_.size());
        trie_[node].next.emplace(t, child);
        trie_.emplace_back();
        node = child;
      } else {
        node = it->second;
      }
    }
    if (trie_[node].piece >= 0) throw Error(ErrorCode::kInvalidConfig, "duplicate piece");
    trie_[node].piece = id;
    if (p.tokens.size() == 1) single_[p.tokens[0]] = id;
    max_len_ = std::max(max_len_, p.tokens.size());
    total += std::exp(p.log_prob);

    fingerprint_ = Fnv1a(fingerprint_, p.tokens.size());
    for (TokenId t : p.tokens) fingerprint_ = Fnv1a(fingerprint_, t);
    fingerprint_ = Fnv1a(fingerprint_, std::bit_cast<std::uint64_t>(p.log_prob));
  }
  for (TokenId t = 0; t < base_vocab_size_; ++t) {
    if (single_[t] == UINT32_MAX) {
      throw Error(ErrorCode::kInvalidConfig, "single-token piece [" + std::to_string(t) + "] missing");
    }
  }
  if (std::abs(total - 1.0) > kProbSumTolerance) {
    throw Error(ErrorCode::kInvalidConfig, "piece probabilities sum to " + std::to_string(total));
  }
}

std::int64_t SubwordModel::Find(std::span<const TokenId> tokens) const {
  std::uint32_t node = 0;
  for (TokenId t : tokens) {
    const auto it = trie_[node].next.find(t);
    if (it == trie_[node].next.end()) return -1;
    node = it->second;
  }
  return tokens.empty() ? -1 : trie_[node].piece;
}

double SubwordModel::SumOfProbabilities() const {
  double total = 0.0;
  for (const auto& p : pieces_) total += std::exp(p.log_prob);
  return total;
}

SubwordModel UnigramSeedVocab(const std::vector<TokenSequence>& corpus, const SeedConfig& config) {
  const std::uint32_t base = CorpusBaseVocab(corpus);
  if (config.max_piece_len == 0) throw Error(ErrorCode::kInvalidConfig, "max_piece_len must be >= 1");

  std::vector<double> single_count(base, 0.0);
  std::unordered_map<std::string, std::uint64_t> substr_count;
  for (const auto& seq : corpus) {
    const auto& tok = seq.tokens;
    for (std::size_t i = 0; i < tok.size(); ++i) {
      single_count[tok[i]] += 1.0;
      std::string key(reinterpret_cast<const char*>(&tok[i]), sizeof(TokenId));
      for (std::size_t len = 2; len <= config.max_piece_len && i + len <= tok.size(); ++len) {
        key.append(reinterpret_cast<const char*>(&tok[i + len - 1]), sizeof(TokenId));
        ++substr_count[key];
      }
    }
  }

  struct Cand {
    std::vector<TokenId> tokens;
    std::uint64_t count;
  };
  std::vector<Cand> cands;
  cands.reserve(substr_count.size());
  for (const auto& [key, count] : substr_count) {
    std::vector<TokenId> toks(key.size() / sizeof(TokenId));
    std::memcpy(toks.data(), key.data(), key.size());
    cands.push_back({std::move(toks), count});
  }
  const std::size_t room = config.seed_vocab_size > base ? config.seed_vocab_size - base : 0;
  const auto by_rank = [](const Cand& a, const Cand& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.tokens < b.tokens;
  };
  if (cands.size() > room) {
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(room), cands.end(),
                      by_rank);
    cands.resize(room);
  } else {
    std::sort(cands.begin(), cands.end(), by_rank);
  }

  std::vector<Piece> pieces;
  pieces.reserve(base + cands.size());
  double total = 0.0;
  for (TokenId t = 0; t < base; ++t) {
    const double c = single_count[t] > 0.0 ? single_count[t] : 1.0;
    pieces.push_back({{t}, c});
    total += c;
  }
  for (auto& c : cands) {
    pieces.push_back({std::move(c.tokens), static_cast<double>(c.count)});
    total += static_cast<double>(c.count);
  }
  for (auto& p : pieces) p.log_prob = std::log(p.log_prob / total);
  return SubwordModel(base, std::move(pieces));
}

double CorpusLogLikelihood(const SubwordModel& model, const std::vector<TokenSequence>& corpus) {
  CheckCorpusVocab(model, corpus);
  std::vector<double> partial(NumBlocks(corpus.size()), 0.0);
  ForEachBlock(corpus.size(), [&](std::size_t b, std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t u = lo; u < hi; ++u) acc += LogPartition(model, corpus[u].tokens);
    partial[b] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

EmStepResult UnigramEmStep(const SubwordModel& model, const std::vector<TokenSequence>& corpus) {
  CheckCorpusVocab(model, corpus);
  const auto& pieces = model.pieces();
  const std::size_t num_blocks = NumBlocks(corpus.size());
  std::vector<std::vector<double>> block_counts(num_blocks);
  std::vector<double> block_ll(num_blocks, 0.0);
  ForEachBlock(corpus.size(), [&](std::size_t b, std::size_t lo, std::size_t hi) {
    auto& counts = block_counts[b];
    counts.assign(pieces.size(), 0.0);
    double ll = 0.0;
    for (std::size_t u = lo; u < hi; ++u) ll += ForwardBackward(model, corpus[u].tokens, counts);
    block_ll[b] = ll;
  });

  std::vector<double> counts(pieces.size(), 0.0);
  double log_likelihood = 0.0;
  for (std::size_t b = 0; b < num_blocks; ++b) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += block_counts[b][i];
    log_likelihood += block_ll[b];
  }

  // M-step. Unseen single tokens hold their mass fixed; everything that
  // was observed shares the remainder in proportion to expected counts.
  double fixed_mass = 0.0;
  double observed = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (counts[i] > 0.0) {
      observed += counts[i];
    } else if (pieces[i].tokens.size() == 1) {
      fixed_mass += std::exp(pieces[i].log_prob);
    }
  }
  if (!(observed > 0.0)) return {model, log_likelihood};

  const double log_scale = std::log1p(-fixed_mass) - std::log(observed);
  std::vector<Piece> next;
  next.reserve(pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (counts[i] > 0.0) {
      next.push_back({pieces[i].tokens, std::min(0.0, std::log(counts[i]) + log_scale)});
    } else if (pieces[i].tokens.size() == 1) {
      next.push_back(pieces[i]);
    }
  }
  return {Renormalized(model, std::move(next)), log_likelihood};
}

SubwordModel UnigramPrune(const SubwordModel& model, const std::vector<TokenSequence>& corpus,
                          double keep_fraction) {
  if (!(keep_fraction > 0.0 && keep_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "keep_fraction must lie in (0, 1)");
  }
  CheckCorpusVocab(model, corpus);
  const std::size_t multi = NumMulti(model);
  const auto keep = static_cast<std::size_t>(
      std::ceil(keep_fraction * static_cast<double>(multi) - 1e-9));
  return PruneToCount(model, corpus, keep);
}

UnigramTrainResult UnigramTrain(const std::vector<TokenSequence>& corpus,
                                std::uint32_t target_vocab_size, const UnigramConfig& config) {
  const std::uint32_t base = CorpusBaseVocab(corpus);
  if (target_vocab_size < base) {
    throw Error(ErrorCode::kTargetBelowBaseVocab, "target " + std::to_string(target_vocab_size) +
                                                      " < base vocab " + std::to_string(base));
  }
  if (!(config.keep_fraction > 0.0 && config.keep_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "keep_fraction must lie in (0, 1)");
  }
  UnigramTrainResult result;
  SubwordModel model = UnigramSeedVocab(corpus, {config.max_piece_len, config.seed_vocab_size});

  auto run_phase = [&](std::uint32_t steps) {
    std::vector<double> lls;
    for (std::uint32_t s = 0; s < steps; ++s) {
      EmStepResult r = UnigramEmStep(model, corpus);
      lls.push_back(r.log_likelihood);
      model = std::move(r.model);
    }
    result.phase_log_likelihoods.push_back(std::move(lls));
  };

  while (model.size() > target_vocab_size) {
    run_phase(config.em_steps_per_round);
    if (model.size() <= target_vocab_size) break;
    const std::size_t multi = NumMulti(model);
    auto keep = static_cast<std::size_t>(
        std::ceil(config.keep_fraction * static_cast<double>(multi) - 1e-9));
    keep = std::min(keep, multi - 1);  // always make progress
    keep = std::max<std::size_t>(keep, target_vocab_size - base);
    model = PruneToCount(model, corpus, keep);
  }
  run_phase(config.final_em_steps);

  std::vector<Piece> pieces = model.pieces();
  result.model = SubwordModel(base, std::move(pieces), target_vocab_size);
  return result;
}

Segmentation ViterbiSegment(const SubwordModel& model, std::span<const TokenId> tokens,
                            std::int64_t excluded) {
  struct Cell {
    double score = kNegInf;
    std::uint32_t count = 0;
    std::uint32_t prev = 0;
    std::uint32_t piece = 0;
    bool reached = false;
  };
  const std::size_t n = tokens.size();
  std::vector<Cell> best(n + 1);
  best[0].score = 0.0;
  best[0].reached = true;

  const auto path_to = [&](std::size_t j) {
    std::vector<std::uint32_t> path;
    while (j > 0) {
      path.push_back(best[j].piece);
      j = best[j].prev;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  const auto& pieces = model.pieces();
  for (std::size_t i = 0; i < n; ++i) {
    if (!best[i].reached) continue;
    model.ForEachMatch(tokens, i, [&](std::uint32_t piece, std::size_t len) {
      if (static_cast<std::int64_t>(piece) == excluded) return;
      Cell& cur = best[i + len];
      const double score = best[i].score + pieces[piece].log_prob;
      const std::uint32_t count = best[i].count + 1;
      bool take = !cur.reached || score > cur.score ||
                  (score == cur.score && count < cur.count);
      if (!take && score == cur.score && count == cur.count) {
        auto candidate = path_to(i);
        candidate.push_back(piece);
        take = candidate < path_to(i + len);
      }
      if (take) cur = {score, count, static_cast<std::uint32_t>(i), piece, true};
    });
  }
  if (!best[n].reached) return {{}, kNegInf};
  return {path_to(n), best[n].score};
}

PieceSequence Encode(const SubwordModel& model, const TokenSequence& tokens) {
  if (tokens.vocab_size != model.base_vocab_size()) {
    throw Error(ErrorCode::kVocabMismatch, tokens.utterance_id + ": vocab_size " +
                                               std::to_string(tokens.vocab_size) +
                                               ", model base vocab " +
                                               std::to_string(model.base_vocab_size()));
  }
  for (TokenId t : tokens.tokens) {
    if (t >= model.base_vocab_size()) {
      throw Error(ErrorCode::kCorruptPayload, tokens.utterance_id + ": token out of range");
    }
  }
  PieceSequence out;
  out.utterance_id = tokens.utterance_id;
  out.model_fingerprint = model.fingerprint();
  out.frame_rate_hz = tokens.frame_rate_hz;
  out.piece_ids = ViterbiSegment(model, tokens.tokens).piece_ids;
  return out;
}

TokenSequence Decode(const SubwordModel& model, const PieceSequence& pieces) {
  if (pieces.model_fingerprint != model.fingerprint()) {
    throw Error(ErrorCode::kFingerprintMismatch, pieces.utterance_id);
  }
  TokenSequence out;
  out.utterance_id = pieces.utterance_id;
  out.vocab_size = model.base_vocab_size();
  out.frame_rate_hz = pieces.frame_rate_hz;
  for (std::uint32_t id : pieces.piece_ids) {
    if (id >= model.size()) throw Error(ErrorCode::kCorruptPayload, "piece id out of range");
    const auto& toks = model.pieces()[id].tokens;
    out.tokens.insert(out.tokens.end(), toks.begin(), toks.end());
  }
  return out;
}

TokenSequence AsTokenSequence(const PieceSequence& pieces, const SubwordModel& model) {
  if (pieces.model_fingerprint != model.fingerprint()) {
    throw Error(ErrorCode::kFingerprintMismatch, pieces.utterance_id);
  }
  TokenSequence out;
  out.utterance_id = pieces.utterance_id;
  out.tokens = pieces.piece_ids;
  out.vocab_size = static_cast<std::uint32_t>(model.size());
  out.frame_rate_hz = pieces.frame_rate_hz;
  return out;
}

PieceSequence AsPieceSequence(const TokenSequence& tokens, const SubwordModel& model) {
  if (tokens.vocab_size != model.size()) {
    throw Error(ErrorCode::kVocabMismatch, tokens.utterance_id + ": piece vocabulary size differs");
  }
  return {tokens.utterance_id, tokens.tokens, model.fingerprint(), tokens.frame_rate_hz};
}

std::string SerializeSubwordModel(const SubwordModel& model) {
  std::string out;
  out += kModelHeader;
  out += std::to_string(model.base_vocab_size());
  out += '\n';
  char buf[64];
  for (const auto& p : model.pieces()) {
    for (std::size_t i = 0; i < p.tokens.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(p.tokens[i]);
    }
    out += '\t';
    const auto res = std::to_chars(buf, buf + sizeof(buf), p.log_prob);
    out.append(buf, res.ptr);
    out += '\n';
  }
  return out;
}

SubwordModel ParseSubwordModel(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind(kModelHeader, 0) != 0) {
    throw Error(ErrorCode::kBadMagic, "missing '#disctok-unigram v1' header");
  }
  std::uint32_t base = 0;
  {
    const std::string_view v = std::string_view(line).substr(kModelHeader.size());
    const auto res = std::from_chars(v.data(), v.data() + v.size(), base);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
      throw Error(ErrorCode::kHeaderMismatch, "bad base_vocab in header");
    }
  }
  std::vector<Piece> pieces;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kCorruptPayload, "line " + std::to_string(line_no) + ": missing tab");
    }
    Piece p;
    std::istringstream toks(line.substr(0, tab));
    std::string tok;
    while (toks >> tok) {
      TokenId t = 0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), t);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw Error(ErrorCode::kCorruptPayload, "line " + std::to_string(line_no) + ": bad token id");
      }
      p.tokens.push_back(t);
    }
    const std::string lp = line.substr(tab + 1);
    const auto res = std::from_chars(lp.data(), lp.data() + lp.size(), p.log_prob);
    if (res.ec != std::errc() || res.ptr != lp.data() + lp.size()) {
      throw Error(ErrorCode::kCorruptPayload, "line " + std::to_string(line_no) + ": bad log-prob");
    }
    pieces.push_back(std::move(p));
  }
  return SubwordModel(base, std::move(pieces));
}

void SaveSubwordModel(const SubwordModel& model, const std::filesystem::path& path) {
  WriteTextAtomic(path, SerializeSubwordModel(model));
}

SubwordModel LoadSubwordModel(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  return ParseSubwordModel(std::string(bytes.begin(), bytes.end()));
}

}  // namespace disctok
