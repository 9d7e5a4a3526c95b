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

#include "disctok/storage.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "disctok/binary_io.hpp"
#include "disctok/error.hpp"

namespace disctok {

namespace fs = std::filesystem;

std::uint8_t BitWidth(std::uint32_t vocab_size) {
  if (vocab_size <= 2) return 1;
  return static_cast<std::uint8_t>(std::bit_width(vocab_size - 1));
}

namespace {

void PutVarint(ByteWriter& w, std::uint32_t v) {
  while (v >= 0x80) {
    w.U8(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  w.U8(static_cast<std::uint8_t>(v));
}

std::vector<std::uint8_t> EncodeRuns(std::span<const std::uint32_t> runs) {
  ByteWriter w;
  for (std::uint32_t r : runs) PutVarint(w, r);
  return w.Release();
}

std::vector<std::uint32_t> DecodeRuns(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint32_t> runs;
  std::uint64_t v = 0;
  int shift = 0;
  for (std::uint8_t b : bytes) {
    if (shift > 28) throw Error(ErrorCode::kCorruptPayload, "run-length varint too long");
    v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
    if (b & 0x80) {
      shift += 7;
      continue;
    }
    if (v == 0 || v > UINT32_MAX) throw Error(ErrorCode::kCorruptPayload, "invalid run length");
    runs.push_back(static_cast<std::uint32_t>(v));
    v = 0;
    shift = 0;
  }
  if (shift != 0) throw Error(ErrorCode::kCorruptPayload, "truncated run-length varint");
  return runs;
}

}  // namespace

PackedTokenFile Pack(const TokenSequence& tokens, TokenFileFlags flags,
                     std::span<const std::uint32_t> base_run_lengths) {
  tokens.Validate();
  PackedTokenFile f;
  f.vocab_size = tokens.vocab_size;
  f.bit_width = BitWidth(tokens.vocab_size);
  f.flags = flags;
  f.frame_rate_hz = tokens.frame_rate_hz;
  f.num_tokens = tokens.tokens.size();
  if (tokens.run_lengths) {
    f.flags.deduped = true;
    f.run_lengths = *tokens.run_lengths;
  } else if (!base_run_lengths.empty() || (flags.deduped && tokens.tokens.empty())) {
    f.flags.deduped = true;
    f.run_lengths.assign(base_run_lengths.begin(), base_run_lengths.end());
  } else if (flags.deduped) {
    throw Error(ErrorCode::kMissingRunLengths, tokens.utterance_id + ": deduped flag without runs");
  }
  f.payload.reserve(PayloadBytes(f.num_tokens, f.bit_width));
  {
    BitPacker packer(f.bit_width, f.payload);
    for (TokenId t : tokens.tokens) packer.Put(t);
  }
  return f;
}

TokenSequence Unpack(const PackedTokenFile& f) {
  if (f.bit_width != BitWidth(f.vocab_size)) {
    throw Error(ErrorCode::kCorruptPayload, "bit width does not match vocab size");
  }
  if (f.payload.size() != PayloadBytes(f.num_tokens, f.bit_width)) {
    throw Error(ErrorCode::kCorruptPayload,
                "payload has " + std::to_string(f.payload.size()) + " bytes, expected " +
                    std::to_string(PayloadBytes(f.num_tokens, f.bit_width)));
  }
  if (f.flags.deduped && !f.flags.subworded && f.run_lengths.size() != f.num_tokens) {
    throw Error(ErrorCode::kCorruptPayload, "run-length count differs from token count");
  }
  if (!f.flags.deduped && !f.run_lengths.empty()) {
    throw Error(ErrorCode::kCorruptPayload, "run lengths present without the deduped flag");
  }

  TokenSequence out;
  out.vocab_size = f.vocab_size;
  out.frame_rate_hz = f.frame_rate_hz;
  out.tokens.resize(f.num_tokens);
  const std::uint64_t mask = (std::uint64_t{1} << f.bit_width) - 1;
  std::uint64_t acc = 0;
  unsigned filled = 0;
  std::size_t byte = 0;
  for (auto& t : out.tokens) {
    while (filled < f.bit_width) {
      acc |= static_cast<std::uint64_t>(f.payload[byte++]) << filled;
      filled += 8;
    }
    const auto id = static_cast<std::uint32_t>(acc & mask);
    if (id >= f.vocab_size) {
      throw Error(ErrorCode::kCorruptPayload,
                  "id " + std::to_string(id) + " >= vocab " + std::to_string(f.vocab_size));
    }
    t = id;
    acc >>= f.bit_width;
    filled -= f.bit_width;
  }
  if (acc != 0) throw Error(ErrorCode::kCorruptPayload, "nonzero padding bits");

  if (f.flags.deduped && !f.flags.subworded && !f.flags.masked) {
    out.run_lengths = f.run_lengths;
    out.Validate();
  }
  return out;
}

std::vector<std::uint8_t> SerializeTokenFile(const PackedTokenFile& f) {
  const auto runs = EncodeRuns(f.run_lengths);
  ByteWriter w;
  w.Reserve(kTokenHeaderBytes + runs.size() + f.payload.size());
  w.Bytes(std::string_view(kTokenMagic, 4));
  w.U32(kTokenVersion);
  w.U32(f.vocab_size);
  w.U8(f.bit_width);
  w.U8(f.flags.bits());
  w.F32(f.frame_rate_hz);
  w.U64(f.num_tokens);
  w.U64(runs.size());
  w.Append(runs);
  w.Append(f.payload);
  return w.Release();
}

PackedTokenFile ParseTokenFile(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, ErrorCode::kCorruptPayload);
  if (!r.ConsumeMagic(std::string_view(kTokenMagic, 4))) {
    throw Error(ErrorCode::kBadMagic, "not a token file");
  }
  const auto version = r.U32();
  if (version != kTokenVersion) {
    throw Error(ErrorCode::kHeaderMismatch, "unsupported token file version " + std::to_string(version));
  }
  PackedTokenFile f;
  f.vocab_size = r.U32();
  f.bit_width = r.U8();
  const std::uint8_t flag_bits = r.U8();
  if (flag_bits & ~0x7) throw Error(ErrorCode::kCorruptPayload, "unknown flag bits");
  f.flags = TokenFileFlags::FromBits(flag_bits);
  f.frame_rate_hz = r.F32();
  f.num_tokens = r.U64();
  const std::uint64_t run_bytes = r.U64();
  if (f.vocab_size == 0) throw Error(ErrorCode::kCorruptPayload, "vocab size is zero");
  if (f.bit_width != BitWidth(f.vocab_size)) {
    throw Error(ErrorCode::kCorruptPayload, "bit width does not match vocab size");
  }
  if (run_bytes > r.remaining()) throw Error(ErrorCode::kCorruptPayload, "run-length section truncated");
  if (run_bytes != 0 && !f.flags.deduped) {
    throw Error(ErrorCode::kCorruptPayload, "run-length section without the deduped flag");
  }
  f.run_lengths = DecodeRuns(r.Take(run_bytes));
  const std::uint64_t expected = PayloadBytes(f.num_tokens, f.bit_width);
  if (f.num_tokens > (UINT64_MAX - 7) / 32 || r.remaining() != expected) {
    throw Error(ErrorCode::kCorruptPayload, "payload has " + std::to_string(r.remaining()) +
                                                " bytes, header implies " + std::to_string(expected));
  }
  auto payload = r.Take(expected);
  f.payload.assign(payload.begin(), payload.end());
  Unpack(f);  // id range, padding and run-length checks
  return f;
}

void WriteTokenFile(const PackedTokenFile& file, const fs::path& path) {
  WriteFileAtomic(path, SerializeTokenFile(file));
}

PackedTokenFile ReadTokenFile(const fs::path& path) { return ParseTokenFile(ReadFileBytes(path)); }

SizeModel SizeModel::Default(DataFormat format) {
  SizeModel m;
  m.format = format;
  switch (format) {
    case DataFormat::kRawWaveform:
      break;
    case DataFormat::kAcousticFeatures:
      m.feature_dim = 80.0;
      m.frame_rate = 100.0;
      break;
    case DataFormat::kSslFeatures:
      m.feature_dim = 1024.0;
      m.frame_rate = 50.0;
      break;
    case DataFormat::kDiscreteTokens:
      m.frame_rate = 50.0;
      m.token_bits = 12.0;
      break;
  }
  return m;
}

double SizeBits(const SizeModel& m, double duration_s) {
  if (!(duration_s >= 0.0) || !std::isfinite(duration_s)) {
    throw Error(ErrorCode::kInvalidConfig, "duration must be finite and >= 0");
  }
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  switch (m.format) {
    case DataFormat::kRawWaveform:
      if (!positive(m.sample_bits) || !positive(m.sample_rate)) break;
      return m.sample_bits * m.sample_rate * duration_s;
    case DataFormat::kAcousticFeatures:
    case DataFormat::kSslFeatures:
      if (!positive(m.float_bits) || !positive(m.feature_dim) || !positive(m.frame_rate)) break;
      return m.float_bits * m.feature_dim * m.frame_rate * duration_s;
    case DataFormat::kDiscreteTokens:
      if (!positive(m.token_bits) || !positive(m.frame_rate)) break;
      return m.token_bits * m.frame_rate * duration_s;
  }
  throw Error(ErrorCode::kInvalidConfig, "size model parameters must be positive");
}

namespace {

// Frame counts kept per frame rate so a corpus duration is one division
// per rate rather than a sum of per-file fractions.
class FrameTally {
 public:
  void Add(std::uint64_t frames, float rate_hz) { frames_[rate_hz] += frames; }
  double Seconds() const {
    double s = 0.0;
    for (const auto& [rate, n] : frames_) s += static_cast<double>(n) / static_cast<double>(rate);
    return s;
  }

 private:
  std::map<float, std::uint64_t> frames_;
};

}  // namespace

double ManifestDurationSeconds(const CorpusManifest& manifest) {
  FrameTally tally;
  for (const auto& e : manifest.entries) {
    const auto h = ReadFeatureHeader(e.path);
    tally.Add(h.num_frames, h.frame_rate_hz);
  }
  return tally.Seconds();
}

CorpusSizeReport MeasureTokenDirectory(const fs::path& dir, const CorpusManifest* manifest) {
  CorpusSizeReport rep;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::kIoFailure, dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".dstk") files.push_back(entry.path());
  }
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());

  FrameTally token_frames;
  for (const auto& p : files) {
    const auto bytes = ReadFileBytes(p);
    const PackedTokenFile f = ParseTokenFile(bytes);
    ++rep.num_files;
    rep.num_tokens += f.num_tokens;
    rep.file_bytes += bytes.size();
    const std::uint64_t payload = PayloadBytes(f.num_tokens, f.bit_width);
    rep.payload_bytes += payload;
    rep.run_length_bytes += bytes.size() - kTokenHeaderBytes - payload;
    rep.header_bytes += kTokenHeaderBytes;
    rep.int32_bytes += 4 * f.num_tokens;
    if (f.flags.deduped) {
      std::uint64_t frames = 0;
      for (std::uint32_t r : f.run_lengths) frames += r;
      token_frames.Add(frames, f.frame_rate_hz);
    } else if (!f.flags.subworded) {
      token_frames.Add(f.num_tokens, f.frame_rate_hz);
    } else {
      rep.duration_complete = false;
    }
  }

  if (manifest != nullptr) {
    rep.duration_seconds = ManifestDurationSeconds(*manifest);
    rep.duration_complete = true;
  } else {
    rep.duration_seconds = token_frames.Seconds();
  }
  rep.raw_waveform_bytes = SizeBits(SizeModel::Default(DataFormat::kRawWaveform), rep.duration_seconds) / 8.0;
  rep.ssl_feature_bytes = SizeBits(SizeModel::Default(DataFormat::kSslFeatures), rep.duration_seconds) / 8.0;
  return rep;
}

}  // namespace disctok
