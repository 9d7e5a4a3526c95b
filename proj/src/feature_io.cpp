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

#include "disctok/feature_io.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <unordered_set>

#include "disctok/binary_io.hpp"
#include "disctok/error.hpp"
#include "disctok/rng.hpp"

namespace disctok {

namespace fs = std::filesystem;

void FeatureSequence::Validate() const {
  if (dim == 0) throw Error(ErrorCode::kInvalidConfig, "feature dim must be positive");
  if (!(frame_rate_hz > 0.0f) || !std::isfinite(frame_rate_hz)) {
    throw Error(ErrorCode::kInvalidConfig, "frame rate must be positive");
  }
  if (frames.size() % dim != 0) {
    throw Error(ErrorCode::kInvalidConfig, "frame buffer is not a multiple of dim");
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!std::isfinite(frames[i])) {
      throw Error(ErrorCode::kNonFiniteValue,
                  utterance_id + ": frame " + std::to_string(i / dim) + " is not finite");
    }
  }
}

std::vector<std::uint8_t> EncodeFeatures(const FeatureSequence& seq) {
  seq.Validate();
  ByteWriter w;
  w.Reserve(kFeatureHeaderBytes + seq.frames.size() * 4);
  w.Bytes(std::string_view(kFeatureMagic, 4));
  w.U32(kFeatureVersion);
  w.U64(seq.num_frames());
  w.U32(seq.dim);
  w.F32(seq.frame_rate_hz);
  for (float v : seq.frames) w.F32(v);
  return w.Release();
}

namespace {

FeatureHeader ParseHeader(ByteReader& r) {
  if (!r.ConsumeMagic(std::string_view(kFeatureMagic, 4))) {
    throw Error(ErrorCode::kBadMagic, "not a feature file");
  }
  const auto version = r.U32();
  if (version != kFeatureVersion) {
    throw Error(ErrorCode::kHeaderMismatch, "unsupported version " + std::to_string(version));
  }
  FeatureHeader h;
  h.num_frames = r.U64();
  h.dim = r.U32();
  h.frame_rate_hz = r.F32();
  if (h.dim == 0) throw Error(ErrorCode::kHeaderMismatch, "dim is zero");
  if (!(h.frame_rate_hz > 0.0f) || !std::isfinite(h.frame_rate_hz)) {
    throw Error(ErrorCode::kHeaderMismatch, "frame rate must be positive");
  }
  return h;
}

}  // namespace

FeatureSequence DecodeFeatures(std::span<const std::uint8_t> bytes, std::string utterance_id) {
  ByteReader r(bytes, ErrorCode::kHeaderMismatch);
  const FeatureHeader h = ParseHeader(r);
  const std::uint64_t values = h.num_frames * h.dim;
  if (h.num_frames != 0 && values / h.num_frames != h.dim) {
    throw Error(ErrorCode::kHeaderMismatch, "shape overflows");
  }
  if (r.remaining() != values * 4) {
    throw Error(ErrorCode::kHeaderMismatch,
                "payload has " + std::to_string(r.remaining()) + " bytes, header implies " +
                    std::to_string(values * 4));
  }
  FeatureSequence seq;
  seq.utterance_id = std::move(utterance_id);
  seq.dim = h.dim;
  seq.frame_rate_hz = h.frame_rate_hz;
  seq.frames.resize(values);
  for (auto& v : seq.frames) {
    v = r.F32();
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteValue, seq.utterance_id + ": non-finite payload value");
    }
  }
  return seq;
}

FeatureSequence ReadFeatures(const fs::path& path) {
  const auto bytes = ReadFileBytes(path);
  return DecodeFeatures(bytes, path.stem().string());
}

FeatureHeader ReadFeatureHeader(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> buf(kFeatureHeaderBytes);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  buf.resize(static_cast<std::size_t>(in.gcount()));
  ByteReader r(buf, ErrorCode::kHeaderMismatch);
  return ParseHeader(r);
}

void WriteFeatures(const FeatureSequence& seq, const fs::path& path) {
  WriteFileAtomic(path, EncodeFeatures(seq));
}

void CorpusManifest::Add(ManifestEntry entry) {
  for (const auto& e : entries) {
    if (e.utterance_id == entry.utterance_id) {
      throw Error(ErrorCode::kInvalidConfig, "duplicate utterance id " + entry.utterance_id);
    }
  }
  total_frames += entry.num_frames;
  entries.push_back(std::move(entry));
}

CorpusManifest ReadManifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open manifest " + path.string());
  CorpusManifest manifest;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig,
                  path.string() + ":" + std::to_string(line_no) + ": expected 3 fields");
    }
    ManifestEntry e;
    e.utterance_id = line.substr(0, t1);
    e.path = line.substr(t1 + 1, t2 - t1 - 1);
    if (e.path.is_relative()) e.path = path.parent_path() / e.path;
    try {
      std::size_t used = 0;
      const std::string n = line.substr(t2 + 1);
      e.num_frames = std::stoull(n, &used);
      if (used != n.size()) throw std::invalid_argument(n);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidConfig,
                  path.string() + ":" + std::to_string(line_no) + ": bad frame count");
    }
    if (!seen.insert(e.utterance_id).second) {
      throw Error(ErrorCode::kInvalidConfig, "duplicate utterance id " + e.utterance_id);
    }
    manifest.total_frames += e.num_frames;
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

void WriteManifest(const CorpusManifest& manifest, const fs::path& path) {
  std::ostringstream out;
  const fs::path base = path.parent_path();
  for (const auto& e : manifest.entries) {
    fs::path p = e.path;
    if (!base.empty()) {
      auto rel = p.lexically_relative(base);
      if (!rel.empty() && *rel.begin() != "..") p = rel;
    }
    out << e.utterance_id << '\t' << p.generic_string() << '\t' << e.num_frames << '\n';
  }
  WriteTextAtomic(path, out.str());
}

void VerifyManifest(const CorpusManifest& manifest) {
  std::uint64_t total = 0;
  for (const auto& e : manifest.entries) {
    const auto h = ReadFeatureHeader(e.path);
    if (h.num_frames != e.num_frames) {
      throw Error(ErrorCode::kHeaderMismatch,
                  e.utterance_id + ": manifest says " + std::to_string(e.num_frames) +
                      " frames, file has " + std::to_string(h.num_frames));
    }
    total += e.num_frames;
  }
  if (total != manifest.total_frames) {
    throw Error(ErrorCode::kHeaderMismatch, "manifest total_frames disagrees with entries");
  }
}

std::vector<FeatureSequence> ReadCorpus(const CorpusManifest& manifest) {
  const auto n = static_cast<std::int64_t>(manifest.entries.size());
  std::vector<FeatureSequence> out(manifest.entries.size());
  std::exception_ptr failure;
  std::mutex failure_mu;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const auto& e = manifest.entries[static_cast<std::size_t>(i)];
      auto seq = ReadFeatures(e.path);
      seq.utterance_id = e.utterance_id;
      if (seq.num_frames() != e.num_frames) {
        throw Error(ErrorCode::kHeaderMismatch,
                    e.utterance_id + ": manifest frame count disagrees with file");
      }
      out[static_cast<std::size_t>(i)] = std::move(seq);
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

std::vector<double> PlaceMeans(const SynthConfig& cfg, Rng& rng) {
  const double min_dist = cfg.separation * cfg.within_std;
  const double min_dist2 = min_dist * min_dist;
  double half_width = min_dist;
  std::vector<double> means;
  means.reserve(static_cast<std::size_t>(cfg.num_clusters) * cfg.dim);
  std::vector<double> candidate(cfg.dim);
  for (std::uint32_t c = 0; c < cfg.num_clusters;) {
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      for (auto& v : candidate) v = (2.0 * rng.Uniform() - 1.0) * half_width;
      placed = true;
      for (std::uint32_t o = 0; o < c && placed; ++o) {
        double d2 = 0.0;
        for (std::uint32_t j = 0; j < cfg.dim; ++j) {
          const double diff = candidate[j] - means[o * cfg.dim + j];
          d2 += diff * diff;
        }
        placed = d2 >= min_dist2;
      }
    }
    if (placed) {
      means.insert(means.end(), candidate.begin(), candidate.end());
      ++c;
    } else {
      half_width *= 1.5;
    }
  }
  return means;
}

}  // namespace

SynthCorpus GenerateSynthCorpus(const SynthConfig& cfg) {
  if (cfg.num_utts == 0 || cfg.frames_per_utt == 0 || cfg.dim == 0 || cfg.num_clusters == 0) {
    throw Error(ErrorCode::kInvalidConfig, "synthetic corpus counts must be positive");
  }
  if (!(cfg.separation > 0.0) || !(cfg.within_std > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "separation and within_std must be positive");
  }
  if (!(cfg.persistence >= 0.0 && cfg.persistence <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "persistence must lie in [0, 1]");
  }
  if (!(cfg.frame_rate_hz > 0.0f)) throw Error(ErrorCode::kInvalidConfig, "frame rate must be positive");
  const std::uint32_t num_phones = cfg.num_phones == 0 ? cfg.num_clusters : cfg.num_phones;
  if (num_phones > cfg.num_clusters) {
    throw Error(ErrorCode::kInvalidConfig, "num_phones cannot exceed num_clusters");
  }

  Rng rng(cfg.seed);
  SynthCorpus corpus;
  corpus.means = PlaceMeans(cfg, rng);
  corpus.phone_of_cluster.resize(cfg.num_clusters);
  for (std::uint32_t c = 0; c < cfg.num_clusters; ++c) corpus.phone_of_cluster[c] = c % num_phones;

  const int width = std::max<int>(6, static_cast<int>(std::to_string(cfg.num_utts).size()));
  for (std::uint32_t u = 0; u < cfg.num_utts; ++u) {
    FeatureSequence seq;
    std::string num = std::to_string(u);
    seq.utterance_id = "utt" + std::string(static_cast<std::size_t>(width) - num.size(), '0') + num;
    seq.dim = cfg.dim;
    seq.frame_rate_hz = cfg.frame_rate_hz;
    seq.frames.resize(static_cast<std::size_t>(cfg.frames_per_utt) * cfg.dim);
    std::vector<std::uint32_t> clusters(cfg.frames_per_utt);
    std::vector<std::uint32_t> phones(cfg.frames_per_utt);

    auto cluster = static_cast<std::uint32_t>(rng.UniformInt(cfg.num_clusters));
    for (std::uint32_t t = 0; t < cfg.frames_per_utt; ++t) {
      if (t > 0 && cfg.num_clusters > 1 && !rng.Bernoulli(cfg.persistence)) {
        // switch to a different cluster, uniformly
        auto next = static_cast<std::uint32_t>(rng.UniformInt(cfg.num_clusters - 1));
        cluster = next >= cluster ? next + 1 : next;
      }
      clusters[t] = cluster;
      phones[t] = corpus.phone_of_cluster[cluster];
      for (std::uint32_t j = 0; j < cfg.dim; ++j) {
        seq.frames[static_cast<std::size_t>(t) * cfg.dim + j] = static_cast<float>(
            corpus.means[static_cast<std::size_t>(cluster) * cfg.dim + j] +
            cfg.within_std * rng.Normal());
      }
    }
    corpus.utterances.push_back(std::move(seq));
    corpus.cluster_labels.push_back(std::move(clusters));
    corpus.phone_labels.push_back(std::move(phones));
  }
  return corpus;
}

void WriteLabelTsv(const std::vector<std::string>& ids,
                   const std::vector<std::vector<std::uint32_t>>& labels, const fs::path& path) {
  std::ostringstream out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << ids[i] << '\t';
    for (std::size_t t = 0; t < labels[i].size(); ++t) {
      if (t) out << ' ';
      out << labels[i][t];
    }
    out << '\n';
  }
  WriteTextAtomic(path, out.str());
}

CorpusManifest WriteSynthCorpus(const SynthCorpus& corpus, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir / "features", ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + (dir / "features").string());
  CorpusManifest manifest;
  std::vector<std::string> ids;
  for (const auto& seq : corpus.utterances) {
    const fs::path p = dir / "features" / (seq.utterance_id + ".dsft");
    WriteFeatures(seq, p);
    manifest.Add({seq.utterance_id, p, seq.num_frames()});
    ids.push_back(seq.utterance_id);
  }
  WriteManifest(manifest, dir / "manifest.tsv");
  WriteLabelTsv(ids, corpus.phone_labels, dir / "phones.tsv");
  WriteLabelTsv(ids, corpus.cluster_labels, dir / "clusters.tsv");
  return manifest;
}

}  // namespace disctok
