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

// Ground truth for the intersection variants.
//
// BruteForceShared works on plain sets and shares no code with the circuit
// or compiler: it counts holders per value and applies the rule directly.
// ReferencePipeline pushes the same sets through preparation and plaintext
// evaluation of the compiled circuit, for differential testing.

#ifndef STOCKPILE_ORACLE_H_
#define STOCKPILE_ORACLE_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "stockpile/session.h"

namespace stockpile::oracle {

enum class RuleKind { kAtLeastTwo, kAtLeastM, kFixedPlusM };

struct Rule {
  RuleKind kind = RuleKind::kAtLeastTwo;
  std::size_t m = 2;
  std::set<std::uint32_t> fixed_parties;
};

// Values are raw big-endian byte strings.
using Value = std::string;
using PlainStockpileSet = std::map<std::uint32_t, std::set<Value>>;
using SharedSets = std::map<std::uint32_t, std::set<Value>>;

// Every party appears in the result, possibly with an empty set.
//   AtLeastTwo:  held by >= 2 parties
//   AtLeastM:    held by >= m parties
//   FixedPlusM:  held by every fixed party and by >= m others
SharedSets BruteForceShared(const PlainStockpileSet& sets, const Rule& rule);

Rule RuleFor(const SessionConfig& cfg);

// Prepares the sets exactly like a session (u = largest set, at least 1),
// evaluates the compiled circuit with the plaintext backend and reads the
// reports. The value width is cfg.sigma.
SharedSets ReferencePipeline(const PlainStockpileSet& sets,
                             const SessionConfig& cfg);

SharedSets FromReports(const std::map<PartyId, IntersectionReport>& reports);

}  // namespace stockpile::oracle

#endif  // STOCKPILE_ORACLE_H_
