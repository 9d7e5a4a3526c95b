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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "disctok/error.hpp"

namespace disctok {

// Little-endian serializer. Output is independent of host byte order.
class ByteWriter {
 public:
  void Bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void U8(std::uint8_t v) { buf_.push_back(v); }
  void U32(std::uint32_t v) { Le(v, 4); }
  void U64(std::uint64_t v) { Le(v, 8); }
  void F32(float v) { U32(std::bit_cast<std::uint32_t>(v)); }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }
  void Append(std::span<const std::uint8_t> bytes) {
    buf_.insert(buf_.end(), bytes.begin(), bytes.end());
  }
  void Reserve(std::size_t n) { buf_.reserve(n); }

  const std::vector<std::uint8_t>& data() const { return buf_; }
  std::vector<std::uint8_t> Release() { return std::move(buf_); }

 private:
  void Le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> buf_;
};

// Bounds-checked little-endian reader. Running off the end raises
// `truncation_code`, which lets each format report its own error kind.
class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> bytes, ErrorCode truncation_code)
      : bytes_(bytes), truncation_code_(truncation_code) {}

  bool ConsumeMagic(std::string_view magic);
  std::uint8_t U8() { return static_cast<std::uint8_t>(Le(1)); }
  std::uint32_t U32() { return static_cast<std::uint32_t>(Le(4)); }
  std::uint64_t U64() { return Le(8); }
  float F32() { return std::bit_cast<float>(U32()); }
  double F64() { return std::bit_cast<double>(U64()); }
  std::span<const std::uint8_t> Take(std::size_t n);

  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t position() const { return pos_; }

 private:
  std::uint64_t Le(int n);
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  ErrorCode truncation_code_;
};

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);

// Writes to a sibling temp file and renames it into place, so concurrent
// readers never observe a partial file.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::span<const std::uint8_t> bytes);
void WriteTextAtomic(const std::filesystem::path& path, std::string_view text);

}  // namespace disctok
