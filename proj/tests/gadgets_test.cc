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


#include "stockpile/gadgets.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "stockpile/error.h"

namespace stockpile {
namespace {

std::uint64_t Eval1(const BooleanCircuit& c, const PartyInputs& in) {
  return BitsToUint(EvalPlaintext(c, in));
}

TEST(LessThanTest, Examples) {
  auto c = fragments::LessThan(4);
  EXPECT_EQ(Eval1(c, {{0, UintToBits(2, 4)}, {1, UintToBits(5, 4)}}), 1u);
  EXPECT_EQ(Eval1(c, {{0, UintToBits(9, 4)}, {1, UintToBits(9, 4)}}), 0u);
}

TEST(LessThanTest, ExhaustiveSigma4) {
  auto c = fragments::LessThan(4);
  for (std::uint64_t a = 0; a < 16; ++a) {
    for (std::uint64_t b = 0; b < 16; ++b) {
      EXPECT_EQ(Eval1(c, {{0, UintToBits(a, 4)}, {1, UintToBits(b, 4)}}),
                a < b ? 1u : 0u)
          << a << " " << b;
    }
  }
}

TEST(LessThanTest, AndCountAtMostSigma) {
  for (std::size_t s : {1u, 4u, 8u, 16u, 256u}) {
    EXPECT_LE(CountGates(fragments::LessThan(s)).and_count, s);
  }
}

TEST(EqualityTest, Examples) {
  auto c = fragments::Equality(8);
  EXPECT_EQ(Eval1(c, {{0, UintToBits(0x5a, 8)}, {1, UintToBits(0x5a, 8)}}), 1u);
  EXPECT_EQ(Eval1(c, {{0, UintToBits(0x5a, 8)}, {1, UintToBits(0x5b, 8)}}), 0u);
  EXPECT_EQ(CountGates(c).and_count, 7u);
}

TEST(EqualityTest, ExhaustiveSigma3) {
  auto c = fragments::Equality(3);
  for (std::uint64_t a = 0; a < 8; ++a) {
    for (std::uint64_t b = 0; b < 8; ++b) {
      EXPECT_EQ(Eval1(c, {{0, UintToBits(a, 3)}, {1, UintToBits(b, 3)}}),
                a == b ? 1u : 0u);
    }
  }
}

TEST(EqualConstTest, Exhaustive) {
  for (std::uint64_t k = 0; k < 8; ++k) {
    CircuitBuilder b;
    Wires x = b.Inputs(0, 3);
    BitVector kb = UintToBits(k, 3);
    b.AddOutput(EqualConst(b, x, kb));
    auto c = std::move(b).Finish();
    for (std::uint64_t a = 0; a < 8; ++a) {
      EXPECT_EQ(Eval1(c, {{0, UintToBits(a, 3)}}), a == k ? 1u : 0u);
    }
  }
}

TEST(MuxTest, ExhaustiveWidth2) {
  auto c = fragments::Mux(2);
  EXPECT_EQ(CountGates(c).and_count, 2u);
  for (std::uint64_t s = 0; s < 2; ++s) {
    for (std::uint64_t x0 = 0; x0 < 4; ++x0) {
      for (std::uint64_t x1 = 0; x1 < 4; ++x1) {
        auto out = Eval1(c, {{0, UintToBits(s, 1)},
                             {1, UintToBits(x0, 2)},
                             {2, UintToBits(x1, 2)}});
        EXPECT_EQ(out, s ? x1 : x0);
      }
    }
  }
}

TEST(CondSwapTest, ExhaustiveWidth2) {
  auto c = fragments::CondSwap(2);
  EXPECT_EQ(CountGates(c).and_count, 2u);
  for (std::uint64_t s = 0; s < 2; ++s) {
    for (std::uint64_t x = 0; x < 4; ++x) {
      for (std::uint64_t y = 0; y < 4; ++y) {
        auto out = Eval1(c, {{0, UintToBits(s, 1)},
                             {1, UintToBits(x, 2)},
                             {2, UintToBits(y, 2)}});
        std::uint64_t want = s ? (y << 2 | x) : (x << 2 | y);
        EXPECT_EQ(out, want);
      }
    }
  }
}

TEST(FoldTest, OrAndFold) {
  for (std::size_t n : {0u, 1u, 3u, 5u}) {
    CircuitBuilder b;
    Wires x = b.Inputs(0, n);
    b.AddOutput(OrFold(b, x));
    b.AddOutput(AndFold(b, x));
    auto c = std::move(b).Finish();
    for (std::uint64_t v = 0; v < (1u << n); ++v) {
      auto out = EvalPlaintext(c, {{0, UintToBits(v, n)}});
      EXPECT_EQ(out[0], v != 0 ? 1 : 0);
      EXPECT_EQ(out[1], v == (1u << n) - 1 ? 1 : 0);
    }
  }
}

// Evaluates a merger fragment on (key, payload) records and returns them.
std::vector<std::pair<std::uint64_t, std::uint64_t>> RunMerger(
    const BooleanCircuit& c, const std::vector<std::uint64_t>& keys,
    std::size_t key_bits, std::size_t payload_bits) {
  BitVector in;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto k = UintToBits(keys[i], key_bits);
    auto p = UintToBits(i, payload_bits);
    in.insert(in.end(), k.begin(), k.end());
    in.insert(in.end(), p.begin(), p.end());
  }
  BitVector out = EvalPlaintext(c, {{0, in}});
  std::vector<std::pair<std::uint64_t, std::uint64_t>> recs;
  std::size_t w = key_bits + payload_bits;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    std::span<const std::uint8_t> r(out.data() + i * w, w);
    recs.push_back({BitsToUint(r.subspan(0, key_bits)),
                    BitsToUint(r.subspan(key_bits))});
  }
  return recs;
}

TEST(BitonicMergerTest, Examples) {
  auto c = fragments::BitonicMerger(4, 3, 2);
  auto out = RunMerger(c, {1, 3, 2, 4}, 3, 2);
  std::vector<std::uint64_t> keys, payloads;
  for (auto [k, p] : out) keys.push_back(k), payloads.push_back(p);
  EXPECT_EQ(keys, (std::vector<std::uint64_t>{1, 2, 3, 4}));
  // Payloads follow their keys: input index of 1,2,3,4 is 0,2,1,3.
  EXPECT_EQ(payloads, (std::vector<std::uint64_t>{0, 2, 1, 3}));

  out = RunMerger(c, {1, 2, 1, 2}, 3, 2);
  keys.clear();
  for (auto [k, p] : out) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::uint64_t>{1, 1, 2, 2}));
}

TEST(BitonicMergerTest, AllSortedHalvesSigma3) {
  const std::size_t n = 4, key_bits = 3, payload_bits = 2;
  auto c = fragments::BitonicMerger(n, key_bits, payload_bits);
  auto g = CountGates(c);
  // (n/2) log n compare-exchanges of 2*key + payload ANDs at most.
  EXPECT_LE(g.and_count, (n / 2) * 2 * (2 * key_bits + payload_bits));
  for (std::uint64_t a = 0; a < 8; ++a)
    for (std::uint64_t b = a; b < 8; ++b)
      for (std::uint64_t x = 0; x < 8; ++x)
        for (std::uint64_t y = x; y < 8; ++y) {
          std::vector<std::uint64_t> keys = {a, b, x, y};
          auto out = RunMerger(c, keys, key_bits, payload_bits);
          std::vector<std::uint64_t> got_keys;
          std::multiset<std::pair<std::uint64_t, std::uint64_t>> got, want;
          for (std::size_t i = 0; i < n; ++i) {
            got_keys.push_back(out[i].first);
            got.insert(out[i]);
            want.insert({keys[i], i});
          }
          EXPECT_TRUE(std::is_sorted(got_keys.begin(), got_keys.end()));
          EXPECT_EQ(got, want);
        }
}

TEST(BitonicMergerTest, RejectsNonPowerOfTwo) {
  try {
    fragments::BitonicMerger(6, 3, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPowerOfTwo);
  }
}

TEST(BitonicMergeTest, UnequalLengthsWithVirtualPads) {
  BitRng rng(21);
  for (std::size_t n1 : {1u, 2u, 3u, 5u}) {
    for (std::size_t n2 : {1u, 3u, 4u, 7u}) {
      CircuitBuilder b;
      std::vector<Wires> first, second;
      for (std::size_t i = 0; i < n1; ++i) first.push_back(b.Inputs(0, 5));
      for (std::size_t i = 0; i < n2; ++i) second.push_back(b.Inputs(1, 5));
      for (const auto& r : BitonicMerge(b, first, second, 5)) b.AddOutputs(r);
      auto c = std::move(b).Finish();
      EXPECT_LE(CountGates(c).and_count,
                BitonicMergeComparatorCount(n1, n2) * 15);
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::uint64_t> xs(n1), ys(n2);
        for (auto& x : xs) x = rng.Uniform(32);
        for (auto& y : ys) y = rng.Uniform(32);
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
        BitVector in0, in1;
        for (auto x : xs) {
          auto bits = UintToBits(x, 5);
          in0.insert(in0.end(), bits.begin(), bits.end());
        }
        for (auto y : ys) {
          auto bits = UintToBits(y, 5);
          in1.insert(in1.end(), bits.begin(), bits.end());
        }
        BitVector out = EvalPlaintext(c, {{0, in0}, {1, in1}});
        std::vector<std::uint64_t> want = xs;
        want.insert(want.end(), ys.begin(), ys.end());
        std::sort(want.begin(), want.end());
        std::vector<std::uint64_t> got;
        for (std::size_t i = 0; i < n1 + n2; ++i) {
          got.push_back(BitsToUint(std::span(out).subspan(i * 5, 5)));
        }
        EXPECT_EQ(got, want);
      }
    }
  }
}

std::vector<std::uint64_t> RunWaksman(const BooleanCircuit& c, std::size_t n,
                                      const BitVector& controls) {
  std::size_t w = CeilLog2(n) + 1;
  BitVector in;
  for (std::size_t i = 0; i < n; ++i) {
    auto bits = UintToBits(i, w);
    in.insert(in.end(), bits.begin(), bits.end());
  }
  BitVector out = EvalPlaintext(c, {{0, in}, {1, controls}});
  std::vector<std::uint64_t> perm;
  for (std::size_t i = 0; i < n; ++i) {
    perm.push_back(BitsToUint(std::span(out).subspan(i * w, w)));
  }
  return perm;
}

TEST(WaksmanTest, SwitchCounts) {
  EXPECT_EQ(WaksmanSwitchCount(1), 0u);
  EXPECT_EQ(WaksmanSwitchCount(2), 1u);
  EXPECT_EQ(WaksmanSwitchCount(4), 5u);
  EXPECT_EQ(WaksmanSwitchCount(8), 17u);
  for (std::size_t n = 2; n <= 64; n *= 2) {
    EXPECT_EQ(WaksmanSwitchCount(n), n * CeilLog2(n) - n + 1);
  }
}

TEST(WaksmanTest, ZeroControlsIsIdentityAndTwoSwaps) {
  auto c4 = fragments::Waksman(4, 3);
  EXPECT_EQ(RunWaksman(c4, 4, BitVector(5, 0)),
            (std::vector<std::uint64_t>{0, 1, 2, 3}));
  auto c2 = fragments::Waksman(2, 2);
  EXPECT_EQ(RunWaksman(c2, 2, {1}), (std::vector<std::uint64_t>{1, 0}));
}

TEST(WaksmanTest, FourReachesAll24Permutations) {
  auto c = fragments::Waksman(4, 3);
  EXPECT_LE(CountGates(c).and_count, 3u * 5);
  std::set<std::vector<std::uint64_t>> seen;
  for (std::uint64_t s = 0; s < 32; ++s) {
    BitVector ctl = UintToBits(s, 5);
    auto perm = RunWaksman(c, 4, ctl);
    auto sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    ASSERT_EQ(sorted, (std::vector<std::uint64_t>{0, 1, 2, 3}));
    auto model = WaksmanPermutation(4, ctl);
    EXPECT_EQ(std::vector<std::uint64_t>(model.begin(), model.end()), perm);
    seen.insert(perm);
  }
  EXPECT_EQ(seen.size(), 24u);
}

TEST(WaksmanTest, RandomControlsPermuteAtEight) {
  auto c = fragments::Waksman(8, 4);
  BitRng rng(3);
  for (int i = 0; i < 1000; ++i) {
    auto perm = RunWaksman(c, 8, rng.Bits(WaksmanSwitchCount(8)));
    std::sort(perm.begin(), perm.end());
    ASSERT_EQ(perm, (std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5, 6, 7}));
  }
}

TEST(WaksmanTest, RouteRealizesEveryPermutationOfSmallSizes) {
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::set<std::vector<std::size_t>> reached;
    do {
      BitVector ctl = WaksmanRoute(perm);
      ASSERT_EQ(ctl.size(), WaksmanSwitchCount(n));
      EXPECT_EQ(WaksmanPermutation(n, ctl), perm);
      reached.insert(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::size_t fact = 1;
    for (std::size_t k = 2; k <= n; ++k) fact *= k;
    EXPECT_EQ(reached.size(), fact);
  }
}

TEST(WaksmanTest, RouteOnLargeArbitrarySizes) {
  BitRng rng(8);
  for (std::size_t n : {7u, 12u, 33u, 100u, 257u}) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_EQ(WaksmanPermutation(n, WaksmanRoute(perm)), perm) << n;
  }
}

TEST(WaksmanTest, CircuitMatchesModelAtArbitrarySize) {
  const std::size_t n = 6;
  CircuitBuilder b;
  std::vector<Wires> recs;
  for (std::size_t i = 0; i < n; ++i) recs.push_back(b.Inputs(0, 4));
  Wires ctl = b.Inputs(1, WaksmanSwitchCount(n));
  for (const auto& r : WaksmanNetwork(b, recs, ctl)) b.AddOutputs(r);
  auto c = std::move(b).Finish();
  BitRng rng(4);
  for (int i = 0; i < 50; ++i) {
    BitVector controls = rng.Bits(WaksmanSwitchCount(n));
    auto perm = RunWaksman(c, n, controls);
    auto model = WaksmanPermutation(n, controls);
    EXPECT_EQ(std::vector<std::uint64_t>(model.begin(), model.end()), perm);
  }
}

TEST(WaksmanTest, FragmentRejectsNonPowerOfTwo) {
  EXPECT_THROW(fragments::Waksman(6, 2), Error);
}

}  // namespace
}  // namespace stockpile
