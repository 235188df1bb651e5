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


#include "stockpile/bits.h"

#include <gtest/gtest.h>

#include <set>

namespace stockpile {
namespace {

TEST(BitsTest, BytesToBitsIsMsbFirst) {
  Bytes bytes = {0x80, 0x01};
  BitVector bits = BytesToBits(bytes, 16);
  ASSERT_EQ(bits.size(), 16u);
  EXPECT_EQ(bits[0], 1);
  EXPECT_EQ(bits[15], 1);
  EXPECT_EQ(BitsToBytes(bits), bytes);
}

TEST(BitsTest, UintRoundTrip) {
  for (std::uint64_t v : {0ull, 1ull, 5ull, 255ull, 0xdeadbeefull}) {
    EXPECT_EQ(BitsToUint(UintToBits(v, 40)), v);
  }
  // Leading bit is the most significant.
  EXPECT_EQ(UintToBits(4, 3), (BitVector{1, 0, 0}));
}

TEST(BitsTest, PackUnpack) {
  BitRng rng(3);
  for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 100u}) {
    BitVector bits = rng.Bits(n);
    EXPECT_EQ(UnpackBits(PackBits(bits), n), bits);
  }
}

TEST(BitsTest, HexRoundTrip) {
  Bytes b = {0x00, 0xab, 0xff};
  EXPECT_EQ(HexEncode(b), "00abff");
  EXPECT_EQ(HexDecode("00ABff"), b);
  EXPECT_FALSE(HexDecode("abc").has_value());
  EXPECT_FALSE(HexDecode("zz").has_value());
}

TEST(BitsTest, RngIsSeededAndForksDiffer) {
  BitRng a(42), b(42);
  EXPECT_EQ(a.Bits(64), b.Bits(64));
  BitRng c(42);
  BitRng f1 = c.Fork(1), f2 = c.Fork(2);
  EXPECT_NE(f1.NextU64(), f2.NextU64());
  BitRng d(42);
  EXPECT_EQ(d.Fork(1).NextU64(), BitRng(42).Fork(1).NextU64());
}

TEST(BitsTest, UniformStaysInRange) {
  BitRng rng(9);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    auto x = rng.Uniform(7);
    ASSERT_LT(x, 7u);
    seen.insert(x);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(BitsTest, PowerOfTwoHelpers) {
  EXPECT_TRUE(IsPowerOfTwo(64));
  EXPECT_FALSE(IsPowerOfTwo(0));
  EXPECT_FALSE(IsPowerOfTwo(12));
  EXPECT_EQ(NextPowerOfTwo(5), 8u);
  EXPECT_EQ(CeilLog2(1), 0u);
  EXPECT_EQ(CeilLog2(5), 3u);
  EXPECT_EQ(CeilLog2(8), 3u);
}

}  // namespace
}  // namespace stockpile
