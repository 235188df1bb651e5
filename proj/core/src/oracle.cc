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

#include <algorithm>

namespace stockpile::oracle {

SharedSets BruteForceShared(const PlainStockpileSet& sets, const Rule& rule) {
  std::map<Value, std::set<std::uint32_t>> holders;
  for (const auto& [party, values] : sets) {
    for (const auto& v : values) holders[v].insert(party);
  }
  SharedSets out;
  for (const auto& [party, values] : sets) out[party];
  for (const auto& [value, who] : holders) {
    bool shared = false;
    switch (rule.kind) {
      case RuleKind::kAtLeastTwo:
        shared = who.size() >= 2;
        break;
      case RuleKind::kAtLeastM:
        shared = who.size() >= rule.m;
        break;
      case RuleKind::kFixedPlusM: {
        std::size_t others = 0;
        bool all_fixed = true;
        for (auto f : rule.fixed_parties) all_fixed = all_fixed && who.count(f);
        for (auto p : who) others += rule.fixed_parties.count(p) ? 0 : 1;
        shared = all_fixed && others >= rule.m;
        break;
      }
    }
    if (!shared) continue;
    for (auto p : who) out[p].insert(value);
  }
  return out;
}

Rule RuleFor(const SessionConfig& cfg) {
  Rule rule;
  switch (cfg.variant) {
    case VariantKind::kAtLeastTwo:
      rule.kind = RuleKind::kAtLeastTwo;
      break;
    case VariantKind::kAtLeastM:
      rule.kind = RuleKind::kAtLeastM;
      rule.m = cfg.m;
      break;
    case VariantKind::kFixedPlusM:
      rule.kind = RuleKind::kFixedPlusM;
      rule.m = cfg.m;
      rule.fixed_parties = {cfg.fixed_parties.begin(), cfg.fixed_parties.end()};
      break;
  }
  return rule;
}

namespace {

Value ToValue(const HashedId& id) {
  return {id.bytes().begin(), id.bytes().end()};
}

}  // namespace

SharedSets FromReports(const std::map<PartyId, IntersectionReport>& reports) {
  SharedSets out;
  for (const auto& [party, report] : reports) {
    auto& shared = out[party];
    for (const auto& v : report.SharedValues()) shared.insert(ToValue(v));
  }
  return out;
}

SharedSets ReferencePipeline(const PlainStockpileSet& sets,
                             const SessionConfig& cfg) {
  SessionConfig plain = cfg;
  plain.backend = Backend::kPlaintext;
  plain.active_parties.clear();
  std::size_t u = 1;
  for (const auto& [party, values] : sets) {
    plain.active_parties.push_back(party);
    u = std::max(u, values.size());
  }
  BitRng rng(cfg.seed);
  std::vector<PreparedInput> inputs;
  for (const auto& [party, values] : sets) {
    Stockpile s(party, cfg.sigma);
    for (const auto& v : values) {
      s.Add(HashedId(Bytes(v.begin(), v.end()), cfg.sigma));
    }
    inputs.push_back(PrepareInputs(s, u, plain.KeyBits(), plain.epoch, rng));
  }
  return FromReports(RunRound(plain, inputs).reports);
}

}  // namespace stockpile::oracle
