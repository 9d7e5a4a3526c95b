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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "disctok/binary_io.hpp"
#include "test_util.hpp"

namespace disctok {
namespace {

using testing::TempDir;
using testing::ThrowsCode;

std::vector<std::uint8_t> Header(std::uint64_t frames, std::uint32_t dim, float rate) {
  ByteWriter w;
  w.Bytes("DSFT");
  w.U32(1);
  w.U64(frames);
  w.U32(dim);
  w.F32(rate);
  return w.Release();
}

TEST(FeatureFormat, HeaderIs24Bytes) {
  EXPECT_EQ(kFeatureHeaderBytes, 24u);
  FeatureSequence s;
  s.dim = 3;
  EXPECT_EQ(EncodeFeatures(s).size(), 24u);
}

TEST(FeatureFormat, EmptyPayloadGivesZeroFrames) {
  const auto bytes = Header(0, 1024, 50.0f);
  const FeatureSequence s = DecodeFeatures(bytes, "x");
  EXPECT_EQ(s.num_frames(), 0u);
  EXPECT_EQ(s.dim, 1024u);
  EXPECT_EQ(s.frame_rate_hz, 50.0f);
}

TEST(FeatureFormat, RowMajorPayload) {
  ByteWriter w;
  w.Append(Header(2, 3, 50.0f));
  for (int i = 0; i < 6; ++i) w.F32(static_cast<float>(i));
  const FeatureSequence s = DecodeFeatures(w.data(), "x");
  ASSERT_EQ(s.num_frames(), 2u);
  EXPECT_EQ(s.row(1)[0], 3.0f);
  EXPECT_EQ(s.row(0)[2], 2.0f);
}

TEST(FeatureFormat, ShortPayloadIsHeaderMismatch) {
  ByteWriter w;
  w.Append(Header(2, 3, 50.0f));
  for (int i = 0; i < 5; ++i) w.F32(1.0f);
  EXPECT_TRUE(ThrowsCode([&] { DecodeFeatures(w.data(), "x"); }, ErrorCode::kHeaderMismatch));
}

TEST(FeatureFormat, WrongMagicIsBadMagic) {
  auto bytes = Header(0, 1, 50.0f);
  bytes[0] = 'X';
  EXPECT_TRUE(ThrowsCode([&] { DecodeFeatures(bytes, "x"); }, ErrorCode::kBadMagic));
}

TEST(FeatureFormat, NonFiniteValueRejected) {
  for (float bad : {std::numeric_limits<float>::quiet_NaN(), std::numeric_limits<float>::infinity()}) {
    ByteWriter w;
    w.Append(Header(1, 2, 50.0f));
    w.F32(0.0f);
    w.F32(bad);
    EXPECT_TRUE(ThrowsCode([&] { DecodeFeatures(w.data(), "x"); }, ErrorCode::kNonFiniteValue));
  }
}

TEST(FeatureFormat, RoundTripSmall) {
  TempDir dir;
  FeatureSequence s;
  s.utterance_id = "one";
  s.dim = 1;
  s.frames = {0.5f};
  WriteFeatures(s, dir / "one.dsft");
  const FeatureSequence back = ReadFeatures(dir / "one.dsft");
  EXPECT_EQ(back.utterance_id, "one");
  EXPECT_EQ(back.frames, s.frames);
}

TEST(FeatureFormat, RoundTripLargeIsBitExact) {
  TempDir dir;
  Rng rng(3);
  FeatureSequence s = testing::RandomFeatures(rng, 1000, 1024, 10.0);
  s.utterance_id = "big";
  s.frames[5] = -0.0f;
  s.frames[6] = std::numeric_limits<float>::denorm_min();
  WriteFeatures(s, dir / "big.dsft");
  const FeatureSequence back = ReadFeatures(dir / "big.dsft");
  ASSERT_EQ(back.frames.size(), s.frames.size());
  EXPECT_EQ(std::memcmp(back.frames.data(), s.frames.data(), s.frames.size() * sizeof(float)), 0);
  const auto h = ReadFeatureHeader(dir / "big.dsft");
  EXPECT_EQ(h.num_frames, 1000u);
  EXPECT_EQ(h.dim, 1024u);
}

TEST(FeatureFormat, UnwritablePathIsIoFailure) {
  FeatureSequence s;
  s.frames = {1.0f};
  EXPECT_TRUE(ThrowsCode([&] { WriteFeatures(s, "/nonexistent_dir_for_test/a.dsft"); },
                         ErrorCode::kIoFailure));
}

TEST(Manifest, RoundTripAndTotals) {
  TempDir dir;
  CorpusManifest m;
  for (int i = 0; i < 3; ++i) {
    FeatureSequence s;
    s.utterance_id = "u" + std::to_string(i);
    s.dim = 2;
    s.frames.assign(2 * (i + 1), 1.0f);
    WriteFeatures(s, dir / (s.utterance_id + ".dsft"));
    m.Add({s.utterance_id, dir / (s.utterance_id + ".dsft"), static_cast<std::uint64_t>(i + 1)});
  }
  EXPECT_EQ(m.total_frames, 6u);
  WriteManifest(m, dir / "manifest.tsv");
  const CorpusManifest back = ReadManifest(dir / "manifest.tsv");
  ASSERT_EQ(back.entries.size(), 3u);
  EXPECT_EQ(back.total_frames, 6u);
  EXPECT_EQ(std::filesystem::weakly_canonical(back.entries[2].path),
            std::filesystem::weakly_canonical(dir / "u2.dsft"));
  EXPECT_NO_THROW(VerifyManifest(back));
  EXPECT_EQ(ReadCorpus(back)[1].num_frames(), 2u);
}

TEST(Manifest, DuplicateIdRejected) {
  CorpusManifest m;
  m.Add({"a", "a.dsft", 1});
  EXPECT_THROW(m.Add({"a", "b.dsft", 1}), Error);
}

TEST(Manifest, FrameCountDisagreeingWithHeaderRejected) {
  TempDir dir;
  FeatureSequence s;
  s.utterance_id = "a";
  s.frames = {1.0f, 2.0f};
  WriteFeatures(s, dir / "a.dsft");
  CorpusManifest m;
  m.Add({"a", dir / "a.dsft", 3});
  EXPECT_TRUE(ThrowsCode([&] { VerifyManifest(m); }, ErrorCode::kHeaderMismatch));
}

TEST(Manifest, MissingFileIsIoFailure) {
  EXPECT_TRUE(ThrowsCode([] { ReadManifest("/nonexistent_dir_for_test/m.tsv"); },
                         ErrorCode::kIoFailure));
}

SynthConfig SmallSynth() {
  SynthConfig c;
  c.num_utts = 5;
  c.frames_per_utt = 40;
  c.dim = 3;
  c.num_clusters = 4;
  c.seed = 11;
  return c;
}

TEST(Synth, EmitsExactShapeAndIsDeterministic) {
  const SynthCorpus a = GenerateSynthCorpus(SmallSynth());
  const SynthCorpus b = GenerateSynthCorpus(SmallSynth());
  ASSERT_EQ(a.utterances.size(), 5u);
  for (std::size_t u = 0; u < 5; ++u) {
    EXPECT_EQ(a.utterances[u].num_frames(), 40u);
    EXPECT_EQ(a.utterances[u].frames, b.utterances[u].frames);
    EXPECT_EQ(a.cluster_labels[u], b.cluster_labels[u]);
  }
}

TEST(Synth, MeansRespectSeparation) {
  SynthConfig c = SmallSynth();
  c.num_clusters = 12;
  c.separation = 7.0;
  c.within_std = 0.5;
  const SynthCorpus s = GenerateSynthCorpus(c);
  for (std::uint32_t a = 0; a < c.num_clusters; ++a) {
    for (std::uint32_t b = a + 1; b < c.num_clusters; ++b) {
      double d2 = 0;
      for (std::uint32_t j = 0; j < c.dim; ++j) {
        const double d = s.means[a * c.dim + j] - s.means[b * c.dim + j];
        d2 += d * d;
      }
      EXPECT_GE(std::sqrt(d2), 3.5);
    }
  }
}

TEST(Synth, PhonesAreSurjectiveFunctionOfClusters) {
  SynthConfig c = SmallSynth();
  c.num_clusters = 6;
  c.num_phones = 4;
  c.frames_per_utt = 500;
  const SynthCorpus s = GenerateSynthCorpus(c);
  std::vector<bool> seen(4, false);
  for (std::size_t u = 0; u < s.utterances.size(); ++u) {
    for (std::size_t t = 0; t < s.cluster_labels[u].size(); ++t) {
      EXPECT_EQ(s.phone_labels[u][t], s.phone_of_cluster[s.cluster_labels[u][t]]);
    }
  }
  for (auto p : s.phone_of_cluster) seen[p] = true;
  for (bool b : seen) EXPECT_TRUE(b);
}

TEST(Synth, SingleFrameUtterancesHaveNoRepeats) {
  SynthConfig c = SmallSynth();
  c.frames_per_utt = 1;
  const SynthCorpus s = GenerateSynthCorpus(c);
  for (const auto& labels : s.cluster_labels) EXPECT_EQ(labels.size(), 1u);
}

TEST(Synth, InvalidCountsRejected) {
  SynthConfig c = SmallSynth();
  c.num_utts = 0;
  EXPECT_TRUE(ThrowsCode([&] { GenerateSynthCorpus(c); }, ErrorCode::kInvalidConfig));
  c = SmallSynth();
  c.separation = 0.0;
  EXPECT_TRUE(ThrowsCode([&] { GenerateSynthCorpus(c); }, ErrorCode::kInvalidConfig));
}

TEST(Synth, WrittenCorpusMatchesHeaders) {
  TempDir dir;
  const SynthCorpus s = GenerateSynthCorpus(SmallSynth());
  const CorpusManifest m = WriteSynthCorpus(s, dir.path());
  EXPECT_EQ(m.total_frames, 200u);
  const CorpusManifest back = ReadManifest(dir / "manifest.tsv");
  EXPECT_NO_THROW(VerifyManifest(back));
  EXPECT_TRUE(std::filesystem::exists(dir / "phones.tsv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "clusters.tsv"));
}

}  // namespace
}  // namespace disctok
