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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Each criterion also has a wall-clock budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "disctok/config.hpp"
#include "disctok/error.hpp"
#include "disctok/feature_io.hpp"
#include "disctok/kmeans.hpp"
#include "disctok/metrics.hpp"
#include "disctok/pipeline.hpp"
#include "disctok/rng.hpp"
#include "disctok/storage.hpp"
#include "disctok/tokenize.hpp"
#include "disctok/unigram.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace disctok {
namespace {

namespace fs = std::filesystem;

// Collects failed sub-checks for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::ostringstream detail;

  void Expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok) ++failed;
  }
  std::uint64_t failed = 0;
};

std::string Num(double v) {
  std::ostringstream o;
  o.precision(6);
  o << v;
  return o.str();
}

std::string Get(const Report& r, const std::string& key) {
  for (const auto& [k, v] : r.values) {
    if (k == key) return v;
  }
  throw std::runtime_error("report has no key " + key);
}

double GetNum(const Report& r, const std::string& key) { return std::stod(Get(r, key)); }

std::map<std::string, std::vector<std::uint8_t>> Snapshot(const fs::path& dir) {
  std::map<std::string, std::vector<std::uint8_t>> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    out[fs::relative(e.path(), dir).string()] =
        std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
  }
  return out;
}

// --- 1 ---------------------------------------------------------------------

void SizeFormulas(Check& c) {
  for (double t : {0.0, 1.0, 3600.0}) {
    c.Expect(SizeBits(SizeModel::Default(DataFormat::kRawWaveform), t) == 16.0 * 16000.0 * t, "raw");
    c.Expect(SizeBits(SizeModel::Default(DataFormat::kAcousticFeatures), t) == 32.0 * 80.0 * 100.0 * t,
             "acoustic");
    SizeModel ac = SizeModel::Default(DataFormat::kAcousticFeatures);
    ac.feature_dim = 40.0;
    c.Expect(SizeBits(ac, t) == 32.0 * 40.0 * 100.0 * t, "acoustic D=40");
    c.Expect(SizeBits(SizeModel::Default(DataFormat::kSslFeatures), t) == 32.0 * 1024.0 * 50.0 * t, "ssl");
    c.Expect(SizeBits(SizeModel::Default(DataFormat::kDiscreteTokens), t) == 12.0 * 50.0 * t, "tokens");
  }
  c.detail << "4 formulas x T in {0, 1, 3600}";
}

// --- 2 ---------------------------------------------------------------------

void StorageClaim(Check& c) {
  const double seconds = 960.0 * 3600.0;
  const double bits = SizeBits(SizeModel::Default(DataFormat::kDiscreteTokens), seconds);
  c.Expect(bits == 2073600000.0, "960 h bits");
  c.Expect(bits / 8e9 < 0.3, "under 0.3 GB");

  const std::uint64_t n = 960ull * 3600ull * 50ull;
  const std::uint8_t width = BitWidth(4096);
  c.Expect(width == 12, "bit width 12");
  std::vector<std::uint8_t> buf;
  buf.reserve(1 << 20);
  std::uint64_t bytes = 0;
  std::uint64_t hash = 1469598103934665603ull;
  {
    BitPacker packer(width, buf);
    for (std::uint64_t i = 0; i < n; ++i) {
      packer.Put(static_cast<std::uint32_t>((i * 2654435761ull) & 4095u));
      if (buf.size() >= (1u << 20)) {
        for (auto b : buf) hash = (hash ^ b) * 1099511628211ull;
        bytes += buf.size();
        buf.clear();
      }
    }
    packer.Finish();
  }
  bytes += buf.size();
  c.Expect(bytes == static_cast<std::uint64_t>(std::ceil(bits / 8.0)), "payload bytes");
  c.detail << "bits=" << static_cast<std::uint64_t>(bits) << " (" << Num(bits / 8e9)
           << " GB), packed " << n << " tokens into " << bytes << " bytes";
}

// --- 3 ---------------------------------------------------------------------

FrameMatrix RandomMatrix(Rng& rng, std::size_t n, std::uint32_t dim, std::uint32_t blobs) {
  std::vector<double> centers(static_cast<std::size_t>(blobs) * dim);
  for (auto& v : centers) v = 4.0 * rng.Normal();
  FrameMatrix m;
  m.dim = dim;
  m.values.resize(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = rng.UniformInt(blobs);
    for (std::uint32_t j = 0; j < dim; ++j) {
      m.values[i * dim + j] = static_cast<float>(centers[b * dim + j] + rng.Normal());
    }
  }
  return m;
}

void KMeansCorrectness(Check& c) {
  Rng rng(3);
  std::uint64_t assignments = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const auto dim = static_cast<std::uint32_t>(1 + rng.UniformInt(4));
    const auto k = static_cast<std::uint32_t>(1 + rng.UniformInt(16));
    const FrameMatrix data = RandomMatrix(rng, 10000, dim, 1 + rng.UniformInt(20));
    KMeansConfig kc;
    kc.seed = inst;
    const Codebook cb = LloydFit(data, k, kc);
    const auto& h = cb.meta.inertia_history;
    for (std::size_t i = 1; i < h.size(); ++i) {
      c.Expect(h[i] <= h[i - 1], "inertia increased on instance " + std::to_string(inst));
    }
    FeatureSequence seq;
    seq.utterance_id = "x";
    seq.dim = dim;
    seq.frames = data.values;
    const TokenSequence tok = Assign(cb, seq);
    for (std::size_t i = 0; i < data.rows(); ++i) {
      c.Expect(tok.tokens[i] == oracle::NearestCentroid(data.row(i), cb.centroids, k),
               "assign differs on instance " + std::to_string(inst));
    }
    assignments += data.rows();
  }

  SynthConfig sc;
  sc.num_utts = 100;
  sc.frames_per_utt = 200;
  sc.dim = 8;
  sc.num_clusters = 16;
  sc.separation = 100.0;
  sc.seed = 1;
  const SynthCorpus corpus = GenerateSynthCorpus(sc);
  FrameMatrix all;
  all.dim = sc.dim;
  std::vector<std::uint32_t> truth, predicted;
  for (std::size_t u = 0; u < corpus.utterances.size(); ++u) {
    all.values.insert(all.values.end(), corpus.utterances[u].frames.begin(),
                      corpus.utterances[u].frames.end());
    truth.insert(truth.end(), corpus.cluster_labels[u].begin(), corpus.cluster_labels[u].end());
  }
  const Codebook cb = LloydFit(all, sc.num_clusters, {});
  for (const auto& u : corpus.utterances) {
    const auto t = Assign(cb, u).tokens;
    predicted.insert(predicted.end(), t.begin(), t.end());
  }
  const double match = oracle::BestPermutationMatch(truth, predicted, sc.num_clusters);
  c.Expect(match >= 0.99, "cluster recovery " + Num(match));
  c.detail << "100 instances, " << assignments << " assignments checked, recovery=" << Num(match);
}

// --- 4 ---------------------------------------------------------------------

void DedupExpand(Check& c) {
  Rng rng(4);
  for (int i = 0; i < 10000; ++i) {
    const auto vocab = static_cast<std::uint32_t>(1 + rng.UniformInt(20));
    const TokenSequence x = testing::RandomTokens(rng, rng.UniformInt(200), vocab, rng.Uniform());
    const TokenSequence d = Dedup(x);
    c.Expect(Expand(d) == x, "expand(dedup(x)) != x");
    for (std::size_t t = 1; t < d.tokens.size(); ++t) {
      c.Expect(d.tokens[t] != d.tokens[t - 1], "adjacent duplicate");
    }
  }

  testing::TempDir dir;
  PipelineConfig cfg;
  cfg.paths.output_dir = dir / "out";
  cfg.kmeans.k = cfg.synth.num_clusters;
  cfg.reduction.dedup = true;
  CmdSynth(cfg);
  CmdTrainKMeans(cfg);
  CmdEncode(cfg);
  const double reduction = GetNum(CmdStats(cfg), "length.train.reduction");
  // The generator leaves a cluster only for a different one, so the
  // chain repeats with probability exactly `persistence`.
  const double expected =
      oracle::ExpectedDedupReduction(cfg.synth.persistence, cfg.synth.frames_per_utt);
  const SynthCorpus truth = GenerateSynthCorpus(cfg.synth);
  std::uint64_t frames = 0, runs = 0;
  for (const auto& labels : truth.cluster_labels) {
    TokenSequence s;
    s.vocab_size = cfg.synth.num_clusters;
    s.tokens = labels;
    frames += labels.size();
    runs += Dedup(s).tokens.size();
  }
  const double true_reduction = 1.0 - static_cast<double>(runs) / static_cast<double>(frames);
  c.Expect(reduction >= 0.25 && reduction <= 0.35,
           "synthetic dedup reduction " + Num(reduction) + " outside [0.25, 0.35]");
  c.detail << "10^4 sequences; synthetic reduction=" << Num(reduction) << " (true labels "
           << Num(true_reduction) << ", chain expectation " << Num(expected) << ", persistence "
           << cfg.synth.persistence << ")";
}

// --- 5 ---------------------------------------------------------------------

SubwordModel DyadicModel(Rng& rng, std::uint32_t base, std::size_t max_len, std::size_t extra) {
  std::map<std::vector<TokenId>, double> raw;
  for (TokenId t = 0; t < base; ++t) raw[{t}] = 0.05 + rng.Uniform();
  for (std::size_t i = 0; i < extra; ++i) {
    std::vector<TokenId> p(2 + rng.UniformInt(max_len - 1));
    for (auto& t : p) t = static_cast<TokenId>(rng.UniformInt(base));
    raw[p] = 0.05 + rng.Uniform();
  }
  double total = 0;
  for (const auto& [p, w] : raw) total += w;
  std::vector<Piece> pieces;
  for (const auto& [p, w] : raw) {
    pieces.push_back({p, std::ldexp(std::round(std::ldexp(std::log(w / total), 40)), -40)});
  }
  return SubwordModel(base, std::move(pieces));
}

void Subword(Check& c) {
  Rng rng(5);
  for (int corpus_i = 0; corpus_i < 20; ++corpus_i) {
    std::vector<TokenSequence> corpus;
    const auto base = static_cast<std::uint32_t>(2 + rng.UniformInt(4));
    for (int u = 0; u < 10; ++u) {
      corpus.push_back(testing::RandomTokens(rng, 2 + rng.UniformInt(30), base, 0.4));
    }
    SubwordModel m = UnigramSeedVocab(corpus, {4, 60});
    double prev = -INFINITY;
    for (int step = 0; step < 10; ++step) {
      EmStepResult r = UnigramEmStep(m, corpus);
      c.Expect(r.log_likelihood >= prev - 1e-9, "EM log-likelihood decreased");
      prev = r.log_likelihood;
      m = std::move(r.model);
    }
  }

  std::uint64_t viterbi_checked = 0;
  for (std::uint32_t base = 1; base <= 5; ++base) {
    for (int model_i = 0; model_i < 4; ++model_i) {
      const SubwordModel m = DyadicModel(rng, base, 4, 3 * base);
      std::map<std::vector<std::uint32_t>, std::pair<std::uint32_t, double>> inv;
      for (std::uint32_t i = 0; i < m.size(); ++i) inv[m.pieces()[i].tokens] = {i, m.pieces()[i].log_prob};
      const auto check = [&](const std::vector<TokenId>& seq) {
        const auto want = oracle::ExhaustiveSegment(inv, seq);
        const auto got = ViterbiSegment(m, seq);
        c.Expect(got.piece_ids == want.pieces && got.score == want.score, "Viterbi != exhaustive");
        ++viterbi_checked;
      };
      // Every sequence up to a length where that stays cheap, then random
      // sequences up to length 12.
      std::size_t full_len = 0;
      for (std::uint64_t count = 1; full_len < 12 && count * base <= 4096; ++full_len) count *= base;
      for (std::size_t len = 1; len <= full_len; ++len) {
        std::vector<TokenId> seq(len, 0);
        while (true) {
          check(seq);
          std::size_t p = 0;
          while (p < len && ++seq[p] == base) seq[p++] = 0;
          if (p == len) break;
        }
      }
      for (int i = 0; i < 500; ++i) {
        check(testing::RandomTokens(rng, 1 + rng.UniformInt(12), base, 0.3).tokens);
      }
    }
  }

  std::vector<TokenSequence> train;
  for (int u = 0; u < 50; ++u) train.push_back(testing::RandomTokens(rng, 100, 12, 0.5));
  const SubwordModel trained = UnigramTrain(train, 40, {.max_piece_len = 6}).model;
  for (int i = 0; i < 10000; ++i) {
    TokenSequence x = testing::RandomTokens(rng, rng.UniformInt(60), 12, rng.Uniform());
    x.utterance_id = "r" + std::to_string(i);
    c.Expect(Decode(trained, Encode(trained, x)) == x, "decode(encode(x)) != x");
  }

  testing::TempDir dir;
  PipelineConfig cfg;
  cfg.paths.output_dir = dir / "out";
  cfg.kmeans.k = cfg.synth.num_clusters;
  cfg.reduction.subword = true;
  cfg.reduction.target_vocab = 3 * cfg.kmeans.k;
  CmdSynth(cfg);
  CmdTrainKMeans(cfg);
  CmdTrainSubword(cfg);
  CmdEncode(cfg);
  const double reduction = GetNum(CmdStats(cfg), "length.train.reduction");
  c.Expect(reduction >= 0.25, "subword reduction " + Num(reduction));
  c.detail << viterbi_checked << " Viterbi checks; synthetic subword reduction=" << Num(reduction)
           << " (k=" << cfg.kmeans.k << ", vocab " << cfg.reduction.target_vocab << ")";
}

// --- 6 ---------------------------------------------------------------------

void Packing(Check& c) {
  Rng rng(6);
  for (std::uint32_t vocab : {2u, 3u, 2000u, 4096u, 1u << 20}) {
    for (std::size_t n : {0, 1, 7, 8, 1000000}) {
      TokenSequence s = testing::RandomTokens(rng, n, vocab);
      const PackedTokenFile f = Pack(s);
      TokenSequence back = Unpack(ParseTokenFile(SerializeTokenFile(f)));
      back.utterance_id = s.utterance_id;
      c.Expect(back == s, "round trip vocab=" + std::to_string(vocab) + " n=" + std::to_string(n));
      c.Expect(f.payload.size() == PayloadBytes(n, BitWidth(vocab)), "payload size");
    }
  }
  c.Expect(BitWidth(2000) == 11, "bit_width(2000)");
  c.Expect(BitWidth(4096) == 12, "bit_width(4096)");

  std::uint64_t rejected = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto vocab = static_cast<std::uint32_t>(2 + rng.UniformInt(5000));
    const TokenSequence s = testing::RandomTokens(rng, 1 + rng.UniformInt(64), vocab);
    const auto bytes = SerializeTokenFile(Pack(s));
    const unsigned used = static_cast<unsigned>((s.size() * BitWidth(vocab)) % 8);
    for (unsigned bit = used == 0 ? 8 : used; bit < 8; ++bit) {
      auto bad = bytes;
      bad.back() ^= static_cast<std::uint8_t>(1u << bit);
      c.Expect(testing::ThrowsCode([&] { ParseTokenFile(bad); }, ErrorCode::kCorruptPayload),
               "corrupt padding accepted");
      ++rejected;
    }
  }
  c.detail << "25 round trips; " << rejected << " corrupted paddings rejected";
}

// --- 7 ---------------------------------------------------------------------

using Grid = std::vector<std::vector<std::uint64_t>>;

ContingencyTable FromGrid(const Grid& g) {
  ContingencyTable t(g.size(), g[0].size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g[i].size(); ++j) t.Add(i, j, g[i][j]);
  }
  return t;
}

Grid RandomGrid(Rng& rng, std::size_t rows, std::size_t cols) {
  Grid g(rows, std::vector<std::uint64_t>(cols, 0));
  for (auto& row : g) {
    for (auto& v : row) v = rng.Bernoulli(0.4) ? 0 : rng.UniformInt(40);
  }
  g[0][0] += 1;
  g[rows - 1][cols - 1] += 1;
  return g;
}

void Metrics(Check& c) {
  Rng rng(7);
  for (std::size_t n = 2; n <= 12; ++n) {
    Grid g(n, std::vector<std::uint64_t>(n, 0));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.UniformInt(i)]);
    for (std::size_t i = 0; i < n; ++i) g[i][perm[i]] = 1 + rng.UniformInt(100);
    const auto t = FromGrid(g);
    c.Expect(PhonePurity(t) == 1.0 && TokenPurity(t) == 1.0, "bijective purity");
    c.Expect(std::abs(Pnmi(t) - 1.0) <= 1e-12, "bijective PNMI");

    Grid ind(n, std::vector<std::uint64_t>(n + 1));
    std::vector<std::uint64_t> a(n), b(n + 1);
    for (auto& v : a) v = 1 + rng.UniformInt(5);
    for (auto& v : b) v = 1 + rng.UniformInt(5);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= n; ++j) ind[i][j] = a[i] * b[j];
    }
    c.Expect(std::abs(Pnmi(FromGrid(ind))) <= 1e-12, "independent MI");
  }

  for (int trial = 0; trial < 1000; ++trial) {
    const Grid g = RandomGrid(rng, 1 + rng.UniformInt(10), 2 + rng.UniformInt(10));
    const auto t = FromGrid(g);
    const auto e = oracle::DirectEntropies(g);
    Grid tg(g[0].size(), std::vector<std::uint64_t>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < g[0].size(); ++j) tg[j][i] = g[i][j];
    }
    c.Expect(std::abs(PhonePurity(t) - oracle::DirectPhonePurity(g)) <= 1e-12, "phone purity");
    c.Expect(std::abs(TokenPurity(t) - oracle::DirectPhonePurity(tg)) <= 1e-12, "token purity");
    c.Expect(std::abs(Pnmi(t) - std::clamp(e.mutual_information / e.h_phone, 0.0, 1.0)) <= 1e-12,
             "PNMI vs oracle");

    std::vector<std::size_t> rp(g.size()), cp(g[0].size());
    std::iota(rp.begin(), rp.end(), 0);
    std::iota(cp.begin(), cp.end(), 0);
    for (std::size_t i = rp.size(); i > 1; --i) std::swap(rp[i - 1], rp[rng.UniformInt(i)]);
    for (std::size_t i = cp.size(); i > 1; --i) std::swap(cp[i - 1], cp[rng.UniformInt(i)]);
    Grid h(g.size(), std::vector<std::uint64_t>(g[0].size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < g[0].size(); ++j) h[rp[i]][cp[j]] = g[i][j];
    }
    const auto p = FromGrid(h);
    c.Expect(PhonePurity(p) == PhonePurity(t) && TokenPurity(p) == TokenPurity(t) &&
                 std::abs(Pnmi(p) - Pnmi(t)) <= 1e-12,
             "permutation invariance");
  }

  for (int trial = 0; trial < 100; ++trial) {
    Grid g = RandomGrid(rng, 3 + rng.UniformInt(8), 2 + rng.UniformInt(8));
    const double before = Pnmi(FromGrid(g));
    const std::size_t a = rng.UniformInt(g.size());
    std::size_t b = rng.UniformInt(g.size() - 1);
    if (b >= a) ++b;
    for (std::size_t j = 0; j < g[a].size(); ++j) g[a][j] += g[b][j];
    g.erase(g.begin() + static_cast<std::ptrdiff_t>(b));
    c.Expect(Pnmi(FromGrid(g)) <= before + 1e-12, "row merge increased PNMI");
  }
  c.detail << "1000 oracle tables, 100 row merges";
}

// --- 8 ---------------------------------------------------------------------

void Determinism(Check& c) {
  testing::TempDir dir;
  PipelineConfig cfg;
  cfg.paths.output_dir = dir / "out";
  cfg.kmeans.k = 32;
  cfg.reduction.dedup = true;
  cfg.reduction.subword = true;
  cfg.reduction.target_vocab = 96;
  const auto run = [&] {
    fs::remove_all(cfg.paths.output_dir);
    CmdSynth(cfg);
    CmdTrainKMeans(cfg);
    CmdTrainSubword(cfg);
    CmdEncode(cfg);
    const Report e = CmdEval(cfg);
    return std::make_pair(Snapshot(cfg.paths.output_dir), e.ToKeyValue());
  };
  const auto a = run();
  const auto b = run();
  c.Expect(a.first.size() > cfg.synth.num_utts, "artifacts written");
  c.Expect(a.first == b.first, "artifacts differ between runs");
  c.Expect(a.second == b.second, "eval report differs between runs");
  c.detail << a.first.size() << " files compared byte for byte";
}

// --- 9 ---------------------------------------------------------------------

void PnmiTrend(Check& c) {
  testing::TempDir dir;
  PipelineConfig cfg;
  cfg.paths.output_dir = dir / "out";
  cfg.synth.num_clusters = 64;
  cfg.synth.num_utts = 200;
  cfg.synth.frames_per_utt = 200;
  cfg.synth.seed = 9;
  CmdSynth(cfg);
  double prev = -1.0;
  for (std::uint32_t k : {8u, 16u, 32u, 64u}) {
    cfg.kmeans.k = k;
    CmdTrainKMeans(cfg);
    const double pnmi = GetNum(CmdEval(cfg), "pnmi");
    c.Expect(pnmi > prev, "PNMI not increasing at k=" + std::to_string(k));
    c.detail << "k=" << k << ":" << Num(pnmi) << " ";
    prev = pnmi;
  }
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<void(Check&)> run;
};

}  // namespace
}  // namespace disctok

int main() {
  using namespace disctok;
  const std::vector<Criterion> criteria = {
      {1, "size formulas", 1, SizeFormulas},
      {2, "960 h token storage", 10, StorageClaim},
      {3, "k-means correctness", 60, KMeansCorrectness},
      {4, "dedup and expand", 30, DedupExpand},
      {5, "unigram subword", 120, Subword},
      {6, "token packing", 30, Packing},
      {7, "quality metrics", 30, Metrics},
      {8, "end-to-end determinism", 300, Determinism},
      {9, "PNMI grows with k", 120, PnmiTrend},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.Expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.Expect(secs < cr.budget_s, "over time budget");
    const bool ok = check.failed == 0;
    failed += ok ? 0 : 1;
    std::printf("%s %d %s [%.2f s / %.0f s] %s", ok ? "PASS" : "FAIL", cr.id, cr.name, secs,
                cr.budget_s, check.detail.str().c_str());
    if (!ok) {
      std::printf(" | %llu failed checks:", static_cast<unsigned long long>(check.failed));
      for (const auto& f : check.failures) std::printf(" %s;", f.c_str());
    }
    std::printf("\n");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
