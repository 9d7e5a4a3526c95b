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

#include "disctok/pipeline.hpp"

#include <charconv>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>

#include "disctok/error.hpp"
#include "disctok/tokenize.hpp"
#include "disctok/unigram.hpp"

namespace disctok {

namespace fs = std::filesystem;

namespace {

std::string Fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + dir.string() + ": " + ec.message());
}

// splitmix64 finalizer; derives independent per-utterance seeds.
std::uint64_t Mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CorpusManifest LoadVerifiedManifest(const PipelineConfig& cfg) {
  CorpusManifest m = ReadManifest(cfg.ManifestPath());
  VerifyManifest(m);
  return m;
}

template <typename Fn>
void ParallelForEach(std::size_t n, Fn&& fn) {
  std::exception_ptr failure;
  std::mutex mu;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double MeanLength(const std::vector<TokenSequence>& seqs) {
  if (seqs.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : seqs) total += static_cast<double>(s.size());
  return total / static_cast<double>(seqs.size());
}

}  // namespace

void Report::Set(const std::string& key, double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  values.emplace_back(key, std::string(buf, res.ptr));
}

void Report::Set(const std::string& key, std::uint64_t value) {
  values.emplace_back(key, std::to_string(value));
}

std::string Report::ToText() const {
  std::ostringstream out;
  out << "== " << title << " ==\n";
  if (!table.empty()) {
    out << table;
    if (table.back() != '\n') out << '\n';
  } else {
    for (const auto& [k, v] : values) out << "  " << k << ": " << v << '\n';
  }
  return out.str();
}

std::string Report::ToKeyValue() const {
  std::ostringstream out;
  for (const auto& [k, v] : values) out << k << '=' << v << '\n';
  return out.str();
}

std::vector<TokenSequence> QuantizeCorpus(const Codebook& codebook, const CorpusManifest& manifest) {
  const std::vector<FeatureSequence> feats = ReadCorpus(manifest);
  std::vector<TokenSequence> out(feats.size());
  ParallelForEach(feats.size(), [&](std::size_t i) { out[i] = Assign(codebook, feats[i]); });
  return out;
}

std::vector<TokenSequence> ReduceForSubword(std::vector<TokenSequence> raw,
                                            const PipelineConfig& config) {
  if (!config.reduction.dedup) return raw;
  for (auto& seq : raw) {
    seq = Dedup(seq);
    seq.run_lengths.reset();  // subword pieces are built on the token ids alone
  }
  return raw;
}

Report CmdSynth(const PipelineConfig& cfg) {
  const SynthCorpus corpus = GenerateSynthCorpus(cfg.synth);
  const fs::path manifest_path = cfg.ManifestPath();
  const fs::path dir = manifest_path.parent_path().empty() ? fs::path(".") : manifest_path.parent_path();
  EnsureDir(dir);
  const CorpusManifest manifest = WriteSynthCorpus(corpus, dir);
  if (manifest_path.filename() != "manifest.tsv") WriteManifest(manifest, manifest_path);

  std::uint64_t repeats = 0;
  for (const auto& labels : corpus.cluster_labels) {
    for (std::size_t t = 1; t < labels.size(); ++t) repeats += labels[t] == labels[t - 1];
  }
  Report r;
  r.title = "synth";
  r.Set("manifest", manifest_path.string());
  r.Set("utterances", static_cast<std::uint64_t>(manifest.entries.size()));
  r.Set("frames", manifest.total_frames);
  r.Set("dim", static_cast<std::uint64_t>(cfg.synth.dim));
  r.Set("clusters", static_cast<std::uint64_t>(cfg.synth.num_clusters));
  r.Set("phones", static_cast<std::uint64_t>(corpus.phone_labels.empty() ? 0 : (cfg.synth.num_phones ? cfg.synth.num_phones : cfg.synth.num_clusters)));
  r.Set("adjacent_repeat_fraction",
        manifest.total_frames ? static_cast<double>(repeats) / static_cast<double>(manifest.total_frames) : 0.0);
  return r;
}

Report CmdTrainKMeans(const PipelineConfig& cfg) {
  const CorpusManifest manifest = LoadVerifiedManifest(cfg);
  const FrameMatrix data = SubsampleFrames(manifest, cfg.kmeans.subsample_frames, cfg.kmeans.seed);
  KMeansConfig kc;
  kc.max_iters = cfg.kmeans.max_iters;
  kc.rel_tol = cfg.kmeans.rel_tol;
  kc.seed = cfg.kmeans.seed;
  kc.chunk_frames = cfg.kmeans.chunk_frames;
  const Codebook cb = LloydFit(data, cfg.kmeans.k, kc);
  EnsureDir(cfg.CodebookPath().parent_path());
  SaveCodebook(cb, cfg.CodebookPath());

  Report r;
  r.title = "train-kmeans";
  r.Set("codebook", cfg.CodebookPath().string());
  r.Set("k", static_cast<std::uint64_t>(cb.k));
  r.Set("dim", static_cast<std::uint64_t>(cb.dim));
  r.Set("training_frames", static_cast<std::uint64_t>(data.rows()));
  r.Set("iterations", static_cast<std::uint64_t>(cb.meta.iterations_run));
  r.Set("final_inertia", cb.meta.final_inertia);
  std::ostringstream table;
  table << "k=" << cb.k << " dim=" << cb.dim << " frames=" << data.rows()
        << " iterations=" << cb.meta.iterations_run << "\n";
  table << "iter  inertia\n";
  for (std::size_t i = 0; i < cb.meta.inertia_history.size(); ++i) {
    r.Set("inertia." + std::to_string(i), cb.meta.inertia_history[i]);
    table << i << "  " << Fixed(cb.meta.inertia_history[i], 6) << "\n";
  }
  r.table = table.str();
  return r;
}

Report CmdTrainSubword(const PipelineConfig& cfg) {
  const Codebook cb = LoadCodebook(cfg.CodebookPath());
  const CorpusManifest manifest = LoadVerifiedManifest(cfg);
  const auto corpus = ReduceForSubword(QuantizeCorpus(cb, manifest), cfg);
  UnigramConfig uc;
  uc.max_piece_len = cfg.reduction.max_piece_len;
  uc.seed_vocab_size = cfg.reduction.seed_vocab_size;
  const UnigramTrainResult res = UnigramTrain(corpus, cfg.reduction.target_vocab, uc);
  EnsureDir(cfg.SubwordModelPath().parent_path());
  SaveSubwordModel(res.model, cfg.SubwordModelPath());

  std::vector<TokenSequence> encoded(corpus.size());
  ParallelForEach(corpus.size(), [&](std::size_t i) {
    encoded[i] = AsTokenSequence(Encode(res.model, corpus[i]), res.model);
  });

  Report r;
  r.title = "train-subword";
  r.Set("model", cfg.SubwordModelPath().string());
  r.Set("pieces", static_cast<std::uint64_t>(res.model.size()));
  r.Set("base_vocab", static_cast<std::uint64_t>(res.model.base_vocab_size()));
  r.Set("input", cfg.reduction.dedup ? "dedup" : "raw");
  r.Set("mean_length_before", MeanLength(corpus));
  r.Set("mean_length_after", MeanLength(encoded));
  for (std::size_t p = 0; p < res.phase_log_likelihoods.size(); ++p) {
    const auto& lls = res.phase_log_likelihoods[p];
    for (std::size_t s = 0; s < lls.size(); ++s) {
      r.Set("loglik." + std::to_string(p) + "." + std::to_string(s), lls[s]);
    }
  }
  return r;
}

Report CmdEncode(const PipelineConfig& cfg) {
  const Codebook cb = LoadCodebook(cfg.CodebookPath());
  const CorpusManifest manifest = LoadVerifiedManifest(cfg);
  const std::vector<TokenSequence> raw = QuantizeCorpus(cb, manifest);

  std::optional<SubwordModel> model;
  if (cfg.reduction.subword) {
    model = LoadSubwordModel(cfg.SubwordModelPath());
    if (model->base_vocab_size() != cb.k) {
      throw Error(ErrorCode::kVocabMismatch, "subword model base vocab differs from codebook k");
    }
  }

  const fs::path dir = cfg.TokensDir();
  EnsureDir(dir);
  {
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      if (entry.path().extension() == ".dstk") fs::remove(entry.path(), ec);
    }
  }

  std::vector<std::uint64_t> lengths(raw.size());
  ParallelForEach(raw.size(), [&](std::size_t i) {
    TokenSequence seq = raw[i];
    TokenFileFlags flags;
    std::vector<std::uint32_t> runs;
    if (cfg.reduction.dedup) {
      seq = Dedup(seq);
      runs = std::move(*seq.run_lengths);
      seq.run_lengths.reset();
      flags.deduped = true;
    }
    if (model) {
      seq = AsTokenSequence(Encode(*model, seq), *model);
      flags.subworded = true;
    }
    if (cfg.masking.enabled) {
      seq = TimeMask(seq, {cfg.masking.num_masks, cfg.masking.max_span_frames},
                     Mix(cfg.masking.seed ^ Mix(i)))
                .tokens;
      flags.masked = true;
    }
    // Runs are re-attached to the token stream only where they stay
    // aligned one-to-one with unmasked ids.
    if (flags.deduped && !flags.subworded && !flags.masked) seq.run_lengths = runs;
    const PackedTokenFile f =
        seq.run_lengths ? Pack(seq, flags) : Pack(seq, flags, runs);
    WriteTokenFile(f, dir / (seq.utterance_id + ".dstk"));
    lengths[i] = f.num_tokens;
  });

  double raw_mean = MeanLength(raw);
  double enc_mean = 0.0;
  for (auto n : lengths) enc_mean += static_cast<double>(n);
  if (!lengths.empty()) enc_mean /= static_cast<double>(lengths.size());

  Report r;
  r.title = "encode";
  r.Set("tokens_dir", dir.string());
  r.Set("files", static_cast<std::uint64_t>(raw.size()));
  r.Set("dedup", cfg.reduction.dedup ? "true" : "false");
  r.Set("subword", cfg.reduction.subword ? "true" : "false");
  r.Set("masked", cfg.masking.enabled ? "true" : "false");
  r.Set("mean_length_raw", raw_mean);
  r.Set("mean_length_encoded", enc_mean);
  return r;
}

Report CmdStats(const PipelineConfig& cfg) {
  const CorpusManifest manifest = LoadVerifiedManifest(cfg);
  const fs::path dir = cfg.TokensDir();
  CorpusSizeReport sizes;
  const bool have_tokens = fs::is_directory(dir);
  if (have_tokens) {
    sizes = MeasureTokenDirectory(dir, &manifest);
  } else {
    sizes.duration_seconds = ManifestDurationSeconds(manifest);
  }

  Report r;
  r.title = "stats";
  std::ostringstream table;

  // Per-format sizes for the corpus duration and an optional
  // hypothetical corpus length.
  const auto size_rows = [&](const std::string& prefix, double seconds) {
    const SizeModel raw_m = SizeModel::Default(DataFormat::kRawWaveform);
    const SizeModel ac_m = SizeModel::Default(DataFormat::kAcousticFeatures);
    const SizeModel ssl_m = SizeModel::Default(DataFormat::kSslFeatures);
    SizeModel tok_m = SizeModel::Default(DataFormat::kDiscreteTokens);
    SizeModel int_m = tok_m;
    int_m.token_bits = 32.0;
    const double raw_bits = SizeBits(raw_m, seconds);
    const double tok_bits = SizeBits(tok_m, seconds);
    r.Set(prefix + ".seconds", seconds);
    r.Set(prefix + ".raw_waveform_bits", raw_bits);
    r.Set(prefix + ".acoustic_features_bits", SizeBits(ac_m, seconds));
    r.Set(prefix + ".ssl_features_bits", SizeBits(ssl_m, seconds));
    r.Set(prefix + ".discrete_tokens_bits", tok_bits);
    r.Set(prefix + ".int32_tokens_bits", SizeBits(int_m, seconds));
    r.Set(prefix + ".raw_to_token_ratio", tok_bits > 0 ? raw_bits / tok_bits : 0.0);
    table << prefix << " (" << Fixed(seconds / 3600.0, 3) << " h)\n"
          << "  raw waveform       " << Fixed(raw_bits, 0) << " bits\n"
          << "  acoustic features  " << Fixed(SizeBits(ac_m, seconds), 0) << " bits\n"
          << "  SSL features       " << Fixed(SizeBits(ssl_m, seconds), 0) << " bits\n"
          << "  discrete tokens    " << Fixed(tok_bits, 0) << " bits ("
          << Fixed(tok_bits / 8e9, 3) << " GB)\n"
          << "  int32 tokens       " << Fixed(SizeBits(int_m, seconds), 0) << " bits ("
          << Fixed(SizeBits(int_m, seconds) / 8e9, 3) << " GB)\n";
  };
  size_rows("corpus", sizes.duration_seconds);
  if (cfg.report.hypothetical_hours > 0.0) {
    size_rows("hypothetical", cfg.report.hypothetical_hours * 3600.0);
  }

  r.Set("measured.files", sizes.num_files);
  r.Set("measured.tokens", sizes.num_tokens);
  r.Set("measured.file_bytes", sizes.file_bytes);
  r.Set("measured.header_bytes", sizes.header_bytes);
  r.Set("measured.run_length_bytes", sizes.run_length_bytes);
  r.Set("measured.payload_bytes", sizes.payload_bytes);
  r.Set("measured.int32_bytes", sizes.int32_bytes);
  r.Set("measured.ratio_vs_raw", sizes.ratio_vs_raw());
  r.Set("measured.ratio_vs_ssl", sizes.ratio_vs_ssl());
  table << "measured token files: " << sizes.num_files << " files, " << sizes.num_tokens
        << " tokens, " << sizes.file_bytes << " bytes (payload " << sizes.payload_bytes
        << ", run lengths " << sizes.run_length_bytes << ", headers " << sizes.header_bytes
        << "; as int32 " << sizes.int32_bytes << ")\n";

  if (have_tokens && sizes.num_files > 0) {
    LengthTable before, after;
    for (const auto& e : manifest.entries) before[e.utterance_id] = e.num_frames;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() != ".dstk") continue;
      after[entry.path().stem().string()] = ReadTokenFile(entry.path()).num_tokens;
    }
    const SplitLengthStats ls = LengthStats(cfg.report.split, before, after);
    r.Set("length." + ls.split_name + ".utterances", static_cast<std::uint64_t>(ls.num_utts));
    r.Set("length." + ls.split_name + ".before_mean", ls.before_mean);
    r.Set("length." + ls.split_name + ".mean", ls.mean_length);
    r.Set("length." + ls.split_name + ".reduction", ls.reduction_fraction);
    table << "Avg. input length (" << ls.split_name << "): " << Fixed(ls.before_mean, 1) << " -> "
          << Fixed(ls.mean_length, 1) << " (" << Fixed(100.0 * ls.reduction_fraction, 1)
          << "% shorter)\n";
  }
  r.table = table.str();
  return r;
}

Report CmdEval(const PipelineConfig& cfg) {
  const Codebook cb = LoadCodebook(cfg.CodebookPath());
  const CorpusManifest manifest = LoadVerifiedManifest(cfg);
  const PhoneAlignment phones = ReadPhoneLabels(cfg.PhoneLabelsPath());
  // Quality is always measured on raw per-frame tokens, before any
  // length reduction.
  const std::vector<TokenSequence> tokens = QuantizeCorpus(cb, manifest);
  const ContingencyTable table = JointCounts(tokens, phones);
  const QualityReport q = EvaluateQuality(table);

  Report r;
  r.title = "eval";
  r.Set("k", static_cast<std::uint64_t>(cb.k));
  r.Set("frames", q.frames);
  r.Set("phones", static_cast<std::uint64_t>(phones.phone_names.size()));
  r.Set("phn_pur", q.phone_purity);
  r.Set("dsc_pur", q.token_purity);
  r.Set("pnmi", q.pnmi);
  std::ostringstream t;
  t << "# of tokens | phn_pur | dsc_pur | PNMI\n"
    << cb.k << " | " << Fixed(q.phone_purity) << " | " << Fixed(q.token_purity) << " | "
    << Fixed(q.pnmi) << "\n";
  r.table = t.str();
  return r;
}

}  // namespace disctok
