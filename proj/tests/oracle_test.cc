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


#include "stockpile/oracle.h"

#include <gtest/gtest.h>

#include "stockpile/bits.h"

namespace stockpile::oracle {
namespace {

Value V(std::uint8_t hi, std::uint8_t lo) {
  return Value{static_cast<char>(hi), static_cast<char>(lo)};
}

TEST(BruteForceTest, TwoPartiesOneValue) {
  PlainStockpileSet sets = {{1, {V(0, 5)}}, {2, {V(0, 5)}}};
  SharedSets want = {{1, {V(0, 5)}}, {2, {V(0, 5)}}};
  EXPECT_EQ(BruteForceShared(sets, {}), want);
}

TEST(BruteForceTest, EveryPartyListed) {
  PlainStockpileSet sets = {{1, {V(0, 1)}}, {2, {}}, {3, {V(0, 2)}}};
  auto got = BruteForceShared(sets, {});
  EXPECT_EQ(got.size(), 3u);
  for (const auto& [p, s] : got) EXPECT_TRUE(s.empty()) << p;
}

TEST(BruteForceTest, AtLeastM) {
  PlainStockpileSet sets = {{1, {V(0, 7), V(0, 8)}},
                            {2, {V(0, 7), V(0, 8)}},
                            {3, {V(0, 7)}},
                            {4, {}}};
  Rule rule{RuleKind::kAtLeastM, 3, {}};
  auto got = BruteForceShared(sets, rule);
  EXPECT_EQ(got[1], std::set<Value>{V(0, 7)});
  EXPECT_EQ(got[3], std::set<Value>{V(0, 7)});
  EXPECT_TRUE(got[4].empty());
  rule.m = 4;
  EXPECT_TRUE(BruteForceShared(sets, rule)[1].empty());
}

TEST(BruteForceTest, FixedPlusM) {
  Rule rule{RuleKind::kFixedPlusM, 1, {1, 2}};
  PlainStockpileSet yes = {{1, {V(1, 1)}}, {2, {V(1, 1)}}, {3, {V(1, 1)}},
                           {4, {}}};
  EXPECT_EQ(BruteForceShared(yes, rule)[3], std::set<Value>{V(1, 1)});
  PlainStockpileSet no = {{1, {}}, {2, {V(1, 1)}}, {3, {V(1, 1)}},
                          {4, {V(1, 1)}}};
  for (const auto& [p, s] : BruteForceShared(no, rule)) EXPECT_TRUE(s.empty());
  // Fixed parties alone are not enough when m >= 1.
  PlainStockpileSet fixed_only = {{1, {V(1, 1)}}, {2, {V(1, 1)}}, {3, {}}};
  EXPECT_TRUE(BruteForceShared(fixed_only, rule)[1].empty());
}

TEST(RuleForTest, MirrorsConfig) {
  SessionConfig cfg;
  cfg.variant = VariantKind::kFixedPlusM;
  cfg.m = 2;
  cfg.fixed_parties = {4, 9};
  Rule r = RuleFor(cfg);
  EXPECT_EQ(r.kind, RuleKind::kFixedPlusM);
  EXPECT_EQ(r.m, 2u);
  EXPECT_EQ(r.fixed_parties, (std::set<std::uint32_t>{4, 9}));
}

PlainStockpileSet RandomSets(BitRng& rng, std::size_t n, std::size_t max_size,
                             std::size_t universe) {
  PlainStockpileSet sets;
  for (std::uint32_t p = 0; p < n; ++p) {
    auto& s = sets[p];
    const std::size_t size = rng.Uniform(max_size + 1);
    while (s.size() < size) {
      s.insert(V(0, static_cast<std::uint8_t>(1 + rng.Uniform(universe))));
    }
  }
  return sets;
}

TEST(ReferencePipelineTest, AgreesWithBruteForce) {
  BitRng rng(21);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 2 + rng.Uniform(4);
    SessionConfig cfg;
    cfg.sigma = 16;
    cfg.seed = rng.NextU64();
    for (std::uint32_t p = 0; p < n; ++p) cfg.active_parties.push_back(p);
    switch (trial % 3) {
      case 0:
        break;
      case 1:
        cfg.variant = VariantKind::kAtLeastM;
        cfg.m = 1 + rng.Uniform(n);
        break;
      case 2:
        cfg.variant = VariantKind::kFixedPlusM;
        cfg.fixed_parties = {0};
        if (n > 3) cfg.fixed_parties.push_back(2);
        cfg.m = rng.Uniform(n - cfg.fixed_parties.size()) + 1;
        break;
    }
    auto sets = RandomSets(rng, n, 4, 6);
    ASSERT_EQ(ReferencePipeline(sets, cfg), BruteForceShared(sets, RuleFor(cfg)))
        << "trial " << trial;
  }
}

TEST(ReferencePipelineTest, BoundaryCases) {
  SessionConfig cfg;
  cfg.sigma = 16;
  cfg.active_parties = {0, 1, 2};
  // All empty, all identical, and a single full overlap.
  std::vector<PlainStockpileSet> cases = {
      {{0, {}}, {1, {}}, {2, {}}},
      {{0, {V(0, 1), V(0, 2)}}, {1, {V(0, 1), V(0, 2)}}, {2, {V(0, 1), V(0, 2)}}},
      {{0, {V(0xff, 0xff)}}, {1, {}}, {2, {V(0xff, 0xff)}}},
  };
  for (const auto& sets : cases) {
    EXPECT_EQ(ReferencePipeline(sets, cfg), BruteForceShared(sets, RuleFor(cfg)));
  }
}

}  // namespace
}  // namespace stockpile::oracle
