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

#include "disctok/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "disctok/error.hpp"

namespace disctok {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

template <typename T>
std::string Format(const T& v) {
  if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else if constexpr (std::is_same_v<T, fs::path>) {
    return v.generic_string();
  } else {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  }
}

template <typename T>
void Parse(const std::string& key, const std::string& s, T& out) {
  if constexpr (std::is_same_v<T, bool>) {
    if (s == "true" || s == "1" || s == "yes") {
      out = true;
    } else if (s == "false" || s == "0" || s == "no") {
      out = false;
    } else {
      throw Error(ErrorCode::kInvalidConfig, key + ": expected a boolean, got '" + s + "'");
    }
  } else if constexpr (std::is_same_v<T, std::string> || std::is_same_v<T, fs::path>) {
    out = s;
  } else {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw Error(ErrorCode::kInvalidConfig, key + ": cannot parse '" + s + "'");
    }
    out = v;
  }
}

// Single table of (section, key, member) used for both directions.
template <typename Visitor>
void VisitFields(PipelineConfig& c, Visitor&& v) {
  v("paths", "manifest", c.paths.manifest);
  v("paths", "output_dir", c.paths.output_dir);
  v("paths", "codebook", c.paths.codebook);
  v("paths", "subword_model", c.paths.subword_model);
  v("paths", "phone_labels", c.paths.phone_labels);

  v("kmeans", "k", c.kmeans.k);
  v("kmeans", "seed", c.kmeans.seed);
  v("kmeans", "max_iters", c.kmeans.max_iters);
  v("kmeans", "rel_tol", c.kmeans.rel_tol);
  v("kmeans", "subsample_frames", c.kmeans.subsample_frames);
  v("kmeans", "chunk_frames", c.kmeans.chunk_frames);

  v("reduction", "dedup", c.reduction.dedup);
  v("reduction", "subword", c.reduction.subword);
  v("reduction", "target_vocab", c.reduction.target_vocab);
  v("reduction", "max_piece_len", c.reduction.max_piece_len);
  v("reduction", "seed_vocab_size", c.reduction.seed_vocab_size);

  v("masking", "enabled", c.masking.enabled);
  v("masking", "num_masks", c.masking.num_masks);
  v("masking", "max_span_frames", c.masking.max_span_frames);
  v("masking", "seed", c.masking.seed);

  v("synth", "num_utts", c.synth.num_utts);
  v("synth", "frames_per_utt", c.synth.frames_per_utt);
  v("synth", "dim", c.synth.dim);
  v("synth", "num_clusters", c.synth.num_clusters);
  v("synth", "num_phones", c.synth.num_phones);
  v("synth", "separation", c.synth.separation);
  v("synth", "within_std", c.synth.within_std);
  v("synth", "persistence", c.synth.persistence);
  v("synth", "frame_rate_hz", c.synth.frame_rate_hz);
  v("synth", "seed", c.synth.seed);

  v("report", "split", c.report.split);
  v("report", "hypothetical_hours", c.report.hypothetical_hours);

  v("runtime", "threads", c.runtime.threads);
}

PipelineConfig FromTree(const pt::ptree& tree) {
  PipelineConfig cfg;
  std::set<std::string> known_sections;
  std::set<std::string> known_keys;
  VisitFields(cfg, [&](const char* section, const char* key, auto& member) {
    known_sections.insert(section);
    known_keys.insert(std::string(section) + "." + key);
    const auto sec = tree.get_child_optional(section);
    if (!sec) return;
    const auto val = sec->get_optional<std::string>(key);
    if (val) Parse(std::string(section) + "." + key, *val, member);
  });
  for (const auto& [section, body] : tree) {
    if (!known_sections.count(section)) {
      throw Error(ErrorCode::kInvalidConfig, "unknown section [" + section + "]");
    }
    for (const auto& [key, unused] : body) {
      if (!known_keys.count(section + "." + key)) {
        throw Error(ErrorCode::kInvalidConfig, "unknown key " + section + "." + key);
      }
    }
  }
  return cfg;
}

void ApplyOverrides(pt::ptree& tree, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw Error(ErrorCode::kInvalidConfig, "override '" + o + "' is not section.key=value");
    }
    tree.put(pt::ptree::path_type(o.substr(0, eq), '.'), o.substr(eq + 1));
  }
}

}  // namespace

fs::path PipelineConfig::SynthDir() const { return paths.output_dir / "corpus"; }

fs::path PipelineConfig::ManifestPath() const {
  return paths.manifest.empty() ? SynthDir() / "manifest.tsv" : paths.manifest;
}

fs::path PipelineConfig::CodebookPath() const {
  return paths.codebook.empty() ? paths.output_dir / "codebook.dscb" : paths.codebook;
}

fs::path PipelineConfig::SubwordModelPath() const {
  return paths.subword_model.empty() ? paths.output_dir / "subword.model" : paths.subword_model;
}

fs::path PipelineConfig::PhoneLabelsPath() const {
  return paths.phone_labels.empty() ? ManifestPath().parent_path() / "phones.tsv"
                                    : paths.phone_labels;
}

fs::path PipelineConfig::TokensDir() const { return paths.output_dir / "tokens"; }

void PipelineConfig::Validate() const {
  const auto fail = [](const std::string& m) { throw Error(ErrorCode::kInvalidConfig, m); };
  if (paths.output_dir.empty()) fail("paths.output_dir must be set");
  if (kmeans.k < 1) fail("kmeans.k must be >= 1");
  if (kmeans.max_iters < 1) fail("kmeans.max_iters must be >= 1");
  if (!(kmeans.rel_tol >= 0.0)) fail("kmeans.rel_tol must be >= 0");
  if (kmeans.subsample_frames < 1) fail("kmeans.subsample_frames must be >= 1");
  if (kmeans.chunk_frames < 1) fail("kmeans.chunk_frames must be >= 1");
  if (reduction.subword && reduction.target_vocab < kmeans.k) {
    fail("reduction.target_vocab must be >= kmeans.k when subword is enabled");
  }
  if (reduction.max_piece_len < 1) fail("reduction.max_piece_len must be >= 1");
  if (masking.max_span_frames < 1) fail("masking.max_span_frames must be >= 1");
  if (!(report.hypothetical_hours >= 0.0)) fail("report.hypothetical_hours must be >= 0");
  if (runtime.threads < 0) fail("runtime.threads must be >= 0");
}

bool operator==(const PipelineConfig& a, const PipelineConfig& b) {
  return SerializeConfig(a) == SerializeConfig(b);
}

PipelineConfig ParseConfig(const std::string& text, const std::vector<std::string>& overrides) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  ApplyOverrides(tree, overrides);
  PipelineConfig cfg = FromTree(tree);
  cfg.Validate();
  return cfg;
}

PipelineConfig LoadConfig(const fs::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  PipelineConfig cfg = ParseConfig(buf.str(), overrides);
  // Relative paths in a config file are relative to the file itself.
  const fs::path base = path.parent_path();
  for (fs::path* p : {&cfg.paths.manifest, &cfg.paths.output_dir, &cfg.paths.codebook,
                      &cfg.paths.subword_model, &cfg.paths.phone_labels}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  return cfg;
}

std::string SerializeConfig(const PipelineConfig& config) {
  PipelineConfig copy = config;
  std::ostringstream out;
  std::string current;
  VisitFields(copy, [&](const char* section, const char* key, auto& member) {
    if (current != section) {
      if (!current.empty()) out << '\n';
      out << '[' << section << "]\n";
      current = section;
    }
    out << key << " = " << Format(member) << '\n';
  });
  return out.str();
}

}  // namespace disctok
