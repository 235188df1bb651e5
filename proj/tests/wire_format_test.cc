// Copyright 2026 The Stockpile PSI Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "stockpile/wire_format.h"

#include <gtest/gtest.h>

namespace stockpile {
namespace {

Frame Sample() {
  Frame f;
  f.kind = FrameKind::kAndLayer;
  f.epoch = 0x0102030405060708ull;
  f.round = 7;
  f.sender = 2;
  f.range_id = 9;
  f.payload = {1, 0, 1, 1, 0, 0, 0, 1, 1, 1, 0};
  return f;
}

TEST(WireFormatTest, RoundTrip) {
  Frame f = Sample();
  Bytes bytes = EncodeFrame(f);
  EXPECT_EQ(bytes.size(), kFrameOverheadBytes + 2);
  EXPECT_EQ(DecodeFrame(bytes, ErrorCode::kTransportFailure), f);
}

TEST(WireFormatTest, HeaderIsVersionedLittleEndian) {
  Bytes bytes = EncodeFrame(Sample());
  EXPECT_EQ(bytes[0], kWireFormatVersion);
  EXPECT_EQ(bytes[1], static_cast<std::uint8_t>(FrameKind::kAndLayer));
  EXPECT_EQ(bytes[2], 0x08);  // epoch, low byte first
  EXPECT_EQ(bytes[9], 0x01);
}

TEST(WireFormatTest, EveryBitFlipIsDetected) {
  Bytes bytes = EncodeFrame(Sample());
  for (std::size_t i = 0; i < bytes.size() * 8; ++i) {
    Bytes bad = bytes;
    bad[i / 8] ^= static_cast<std::uint8_t>(1u << (i % 8));
    try {
      DecodeFrame(bad, ErrorCode::kCorruptBlob);
      ADD_FAILURE() << "flip " << i << " accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kCorruptBlob);
    }
  }
}

TEST(WireFormatTest, TruncationIsDetected) {
  Bytes bytes = EncodeFrame(Sample());
  for (std::size_t len = 0; len < bytes.size(); ++len) {
    EXPECT_THROW(DecodeFrame(std::span(bytes).first(len),
                             ErrorCode::kTransportFailure),
                 Error);
  }
}

}  // namespace
}  // namespace stockpile
