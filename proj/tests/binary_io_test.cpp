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

#include <gtest/gtest.h>

#include <filesystem>

#include "test_util.hpp"

namespace disctok {
namespace {

TEST(ByteWriter, LittleEndianLayout) {
  ByteWriter w;
  w.U32(0x04030201u);
  w.U64(0x0807060504030201ull);
  w.F32(1.0f);
  const std::vector<std::uint8_t> expect = {1, 2, 3, 4, 1, 2, 3, 4, 5, 6, 7, 8, 0, 0, 0x80, 0x3f};
  EXPECT_EQ(w.data(), expect);
}

TEST(ByteReader, ReadsBackWhatWasWritten) {
  ByteWriter w;
  w.Bytes("ABCD");
  w.U8(7);
  w.U32(123456);
  w.U64(1ull << 40);
  w.F64(-2.5);
  const auto bytes = w.Release();
  ByteReader r(bytes, ErrorCode::kHeaderMismatch);
  EXPECT_TRUE(r.ConsumeMagic("ABCD"));
  EXPECT_EQ(r.U8(), 7);
  EXPECT_EQ(r.U32(), 123456u);
  EXPECT_EQ(r.U64(), 1ull << 40);
  EXPECT_EQ(r.F64(), -2.5);
  EXPECT_EQ(r.remaining(), 0u);
}

TEST(ByteReader, TruncationThrowsConfiguredCode) {
  const std::vector<std::uint8_t> bytes = {1, 2, 3};
  ByteReader r(bytes, ErrorCode::kCorruptPayload);
  EXPECT_TRUE(testing::ThrowsCode([&] { r.U32(); }, ErrorCode::kCorruptPayload));
}

TEST(AtomicWrite, WritesAndReplaces) {
  testing::TempDir dir;
  const auto path = dir / "f.bin";
  const std::vector<std::uint8_t> a = {1, 2, 3}, b = {9};
  WriteFileAtomic(path, a);
  EXPECT_EQ(ReadFileBytes(path), a);
  WriteFileAtomic(path, b);
  EXPECT_EQ(ReadFileBytes(path), b);
  for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
    EXPECT_EQ(e.path().filename(), "f.bin");
  }
}

TEST(AtomicWrite, UnwritableDirectoryIsIoFailure) {
  const std::vector<std::uint8_t> a = {1};
  EXPECT_TRUE(testing::ThrowsCode(
      [&] { WriteFileAtomic("/nonexistent_dir_for_test/x.bin", a); }, ErrorCode::kIoFailure));
  EXPECT_TRUE(testing::ThrowsCode([&] { ReadFileBytes("/nonexistent_dir_for_test/x.bin"); },
                                  ErrorCode::kIoFailure));
}

}  // namespace
}  // namespace disctok
