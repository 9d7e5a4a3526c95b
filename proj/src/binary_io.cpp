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

#include "disctok/binary_io.hpp"

#include <atomic>
#include <cstring>
#include <fstream>
#include <system_error>

#include <unistd.h>

namespace disctok {

bool ByteReader::ConsumeMagic(std::string_view magic) {
  if (remaining() < magic.size()) return false;
  if (std::memcmp(bytes_.data() + pos_, magic.data(), magic.size()) != 0) return false;
  pos_ += magic.size();
  return true;
}

std::span<const std::uint8_t> ByteReader::Take(std::size_t n) {
  if (n > remaining()) {
    throw Error(truncation_code_, "need " + std::to_string(n) + " bytes at offset " +
                                      std::to_string(pos_) + ", have " +
                                      std::to_string(remaining()));
  }
  auto out = bytes_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::uint64_t ByteReader::Le(int n) {
  auto raw = Take(static_cast<std::size_t>(n));
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(raw[i]) << (8 * i);
  return v;
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  if (size < 0) throw Error(ErrorCode::kIoFailure, "cannot size " + path.string());
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  if (!bytes.empty() &&
      !in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size))) {
    throw Error(ErrorCode::kIoFailure, "short read on " + path.string());
  }
  return bytes;
}

void WriteFileAtomic(const std::filesystem::path& path,
                     std::span<const std::uint8_t> bytes) {
  static std::atomic<unsigned> counter{0};
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorCode::kIoFailure, "write failed on " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw Error(ErrorCode::kIoFailure, "rename to " + path.string() + ": " + ec.message());
  }
}

void WriteTextAtomic(const std::filesystem::path& path, std::string_view text) {
  WriteFileAtomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                  text.size()));
}

}  // namespace disctok
