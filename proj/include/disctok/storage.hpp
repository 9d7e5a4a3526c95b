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

// Bit-packed token files ("DSTK") and data-size accounting.
//
// Layout, all integers little-endian:
//   "DSTK" | version u32 | vocab_size u32 | bit_width u8 | flags u8 |
//   frame_rate_hz f32 | num_tokens u64 | run_length_section_bytes u64 |
//   run-length varints | payload
//
// The payload holds num_tokens ids of bit_width = max(1, ceil(log2 vocab))
// bits each, LSB-first in sequence order. The unused high bits of the last
// byte must be zero.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "disctok/feature_io.hpp"
#include "disctok/tokens.hpp"

namespace disctok {

inline constexpr char kTokenMagic[] = "DSTK";
inline constexpr std::uint32_t kTokenVersion = 1;
inline constexpr std::size_t kTokenHeaderBytes = 4 + 4 + 4 + 1 + 1 + 4 + 8 + 8;

struct TokenFileFlags {
  bool deduped = false;
  bool subworded = false;
  bool masked = false;

  std::uint8_t bits() const {
    return static_cast<std::uint8_t>((deduped ? 1 : 0) | (subworded ? 2 : 0) | (masked ? 4 : 0));
  }
  static TokenFileFlags FromBits(std::uint8_t b) {
    return {(b & 1) != 0, (b & 2) != 0, (b & 4) != 0};
  }
  friend bool operator==(const TokenFileFlags&, const TokenFileFlags&) = default;
};

struct PackedTokenFile {
  std::uint32_t vocab_size = 1;
  std::uint8_t bit_width = 1;
  TokenFileFlags flags;
  float frame_rate_hz = 50.0f;
  std::uint64_t num_tokens = 0;
  // Present when flags.deduped. For subworded files there is one run per
  // de-duplicated base token rather than one per stored piece id. Masked
  // files keep the runs but Unpack does not attach them, since masked
  // spans may repeat the mask id.
  std::vector<std::uint32_t> run_lengths;
  std::vector<std::uint8_t> payload;
};

std::uint8_t BitWidth(std::uint32_t vocab_size);

inline std::uint64_t PayloadBytes(std::uint64_t num_tokens, std::uint32_t bit_width) {
  return (num_tokens * bit_width + 7) / 8;
}

// Streaming LSB-first packer; appends to `out`.
class BitPacker {
 public:
  BitPacker(std::uint8_t bit_width, std::vector<std::uint8_t>& out)
      : width_(bit_width), mask_((std::uint64_t{1} << bit_width) - 1), out_(out) {}
  ~BitPacker() { Finish(); }
  BitPacker(const BitPacker&) = delete;
  BitPacker& operator=(const BitPacker&) = delete;

  void Put(std::uint32_t id) {
    acc_ |= (static_cast<std::uint64_t>(id) & mask_) << filled_;
    filled_ += width_;
    while (filled_ >= 8) {
      out_.push_back(static_cast<std::uint8_t>(acc_));
      acc_ >>= 8;
      filled_ -= 8;
    }
  }

  // Flushes the final partial byte (zero-padded high bits). Idempotent.
  void Finish() {
    if (filled_ > 0) {
      out_.push_back(static_cast<std::uint8_t>(acc_));
      acc_ = 0;
      filled_ = 0;
    }
  }

 private:
  std::uint8_t width_;
  std::uint64_t mask_;
  std::uint64_t acc_ = 0;
  unsigned filled_ = 0;
  std::vector<std::uint8_t>& out_;
};

// Packs a token stream. A stream carrying run_lengths is stored with the
// deduped flag; `base_run_lengths` supplies runs for a subworded stream
// built on de-duplicated tokens.
PackedTokenFile Pack(const TokenSequence& tokens, TokenFileFlags flags = {},
                     std::span<const std::uint32_t> base_run_lengths = {});

// Exact inverse of Pack. run_lengths are attached to the result only for
// files that are deduped and not subworded.
TokenSequence Unpack(const PackedTokenFile& file);

std::vector<std::uint8_t> SerializeTokenFile(const PackedTokenFile& file);

// Validates the full layout: magic, version, bit width, run-length
// section, payload length, zero padding and id range.
PackedTokenFile ParseTokenFile(std::span<const std::uint8_t> bytes);

void WriteTokenFile(const PackedTokenFile& file, const std::filesystem::path& path);
PackedTokenFile ReadTokenFile(const std::filesystem::path& path);

enum class DataFormat { kRawWaveform, kAcousticFeatures, kSslFeatures, kDiscreteTokens };

// Parameters of a per-second data-size formula. Defaults reproduce the
// usual ASR settings: 16 kHz 16-bit audio, 80-dim float features at 100
// fps, 1024-dim float SSL features at 50 fps, 12-bit tokens at 50 fps.
struct SizeModel {
  DataFormat format = DataFormat::kDiscreteTokens;
  double sample_rate = 16000.0;
  double sample_bits = 16.0;
  double feature_dim = 80.0;
  double frame_rate = 50.0;
  double float_bits = 32.0;
  double token_bits = 12.0;

  static SizeModel Default(DataFormat format);
};

// Size in bits of `duration_s` seconds of data in the given format.
double SizeBits(const SizeModel& model, double duration_s);

struct CorpusSizeReport {
  std::uint64_t num_files = 0;
  std::uint64_t num_tokens = 0;
  std::uint64_t file_bytes = 0;
  std::uint64_t header_bytes = 0;
  std::uint64_t run_length_bytes = 0;
  std::uint64_t payload_bytes = 0;
  std::uint64_t int32_bytes = 0;  // the same ids stored as plain 32-bit ints
  double duration_seconds = 0.0;
  bool duration_complete = true;  // false if some file's duration was unknown
  double raw_waveform_bytes = 0.0;
  double ssl_feature_bytes = 0.0;

  double ratio_vs_raw() const { return file_bytes ? raw_waveform_bytes / file_bytes : 0.0; }
  double ratio_vs_ssl() const { return file_bytes ? ssl_feature_bytes / file_bytes : 0.0; }
};

// Total speech duration of the manifest's feature files, from their headers.
double ManifestDurationSeconds(const CorpusManifest& manifest);

// Sums the *.dstk files under `dir`. Speech duration comes from the
// manifest when one is given, otherwise from the token files themselves
// (not possible for subworded files without run lengths).
CorpusSizeReport MeasureTokenDirectory(const std::filesystem::path& dir,
                                       const CorpusManifest* manifest = nullptr);

}  // namespace disctok
