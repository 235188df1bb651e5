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

// Compiles the multi-party duplicate-detection circuit:
//
//   SortCheck  per party, strict ascending order of v; one flag per party is
//              opened reactively before anything else runs.
//   MergeTree  N-1 bitonic mergers combine the sorted party lists.
//   DupSelect  neighbouring records with equal v select their 1-keys, all
//              others their 0-keys (with >= m and fixed-tag variants).
//   Shuffle    one Waksman network per computing party permutes the keys.
//
// Owner layout of the compiled circuit:
//   owners 0..N-1       u records each: v | tag | valid | k0 | k1
//   owners N..N+L-1     Waksman control bits of shuffle layer j = owner - N

#ifndef STOCKPILE_COMPILER_H_
#define STOCKPILE_COMPILER_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stockpile/bits.h"
#include "stockpile/circuit.h"

namespace stockpile {

enum class VariantKind { kAtLeastTwo, kAtLeastM, kFixedPlusM };

struct Variant {
  VariantKind kind = VariantKind::kAtLeastTwo;
  // Threshold m. AtLeastTwo ignores it.
  std::size_t m = 2;
  // Tags T_1..T_z of the fixed parties (FixedPlusM only).
  std::vector<std::uint32_t> fixed_tags;

  static Variant AtLeastTwo() { return {}; }
  static Variant AtLeastM(std::size_t m) {
    return {VariantKind::kAtLeastM, m, {}};
  }
  static Variant FixedPlusM(std::vector<std::uint32_t> tags, std::size_t m) {
    return {VariantKind::kFixedPlusM, m, std::move(tags)};
  }

  std::size_t z() const { return fixed_tags.size(); }
  std::string Name() const;

  friend bool operator==(const Variant&, const Variant&) = default;
};

// "at-least-two", "at-least-m", "fixed-plus-m".
Variant ParseVariant(const std::string& name, std::size_t m,
                     std::vector<std::uint32_t> fixed_tags = {});

struct CircuitConfig {
  std::size_t n_parties = 2;
  std::size_t inputs_per_party = 1;
  std::size_t sigma = 256;
  // Width of k0 / k1. 0 selects sigma.
  std::size_t key_bits = 0;
  Variant variant;
  // Width of party tags (FixedPlusM). 0 selects ceil(log2(z + 1)).
  std::size_t tag_bits = 0;
  // Number of Waksman layers. 0 selects n_parties.
  std::size_t shuffle_layers = 0;

  std::size_t KeyBits() const { return key_bits ? key_bits : sigma; }
  std::size_t TagBits() const;
  std::size_t ShuffleLayers() const {
    return shuffle_layers ? shuffle_layers : n_parties;
  }
  std::size_t RecordCount() const { return n_parties * inputs_per_party; }
  // Tag carried by every non-fixed party: a value outside the closed range
  // spanned by the fixed tags, so equal-v runs sort with all fixed tags
  // contiguous at one end.
  std::uint32_t OtherTag() const;

  // Records a duplicate window spans: 2, m, or m + z. A window wider than
  // N*u is accepted and yields a circuit that flags nothing.
  std::size_t WindowSize() const;

  // Throws Error(kConfigInvalid).
  void Validate() const;

  friend bool operator==(const CircuitConfig&, const CircuitConfig&) = default;
};

// Bit layout of one input record: v | dummy | tag | k0 | k1. The sort key
// is v | dummy | tag, so within a run of equal v the real records are
// contiguous (grouped by tag) and any dummy with that value trails them.
struct RecordLayout {
  std::size_t v_bits = 0;
  std::size_t tag_bits = 0;
  std::size_t key_bits = 0;

  std::size_t dummy_offset() const { return v_bits; }
  std::size_t tag_offset() const { return v_bits + 1; }
  std::size_t sort_key_bits() const { return v_bits + 1 + tag_bits; }
  std::size_t k0_offset() const { return sort_key_bits(); }
  std::size_t k1_offset() const { return k0_offset() + key_bits; }
  std::size_t record_bits() const { return k1_offset() + key_bits; }

  BitVector Encode(std::span<const std::uint8_t> v_bits_value,
                   std::uint32_t tag, bool valid,
                   std::span<const std::uint8_t> k0,
                   std::span<const std::uint8_t> k1) const;
};

RecordLayout LayoutFor(const CircuitConfig& cfg);

enum class StageKind { kSortCheck, kMergeTree, kDupSelect, kShuffle };
std::string StageName(StageKind kind);

struct StageBounds {
  double sort_check = 0;
  double merge_tree = 0;
  double dup_select = 0;
  double shuffle = 0;

  double For(StageKind kind) const;
};

// Analytic AND-count bounds: N(u-1)(sigma+1), 2 N^2 u sigma log2(Nu),
// 4 N u sigma and L sigma 2Nu log2(2Nu).
StageBounds AnalyticBounds(const CircuitConfig& cfg);

struct CompiledCircuit {
  CircuitConfig config;
  // Empty when compiled in count-only mode.
  BooleanCircuit circuit;
  // SortCheck, MergeTree, DupSelect, Shuffle, in gate order.
  std::vector<StageSummary> stages;
  GateCounts totals;

  const StageSummary& Stage(StageKind kind) const;
};

enum class BuildMode { kMaterialize, kCountOnly, kCountWithDepth };

CompiledCircuit BuildDepletionCircuit(const CircuitConfig& cfg,
                                      BuildMode mode = BuildMode::kMaterialize);

// Single stage as a standalone circuit, for testing stages in isolation.
//   kSortCheck: owners 0..N-1 supply records; outputs are the N flags.
//   kMergeTree: owners 0..N-1 supply records; outputs the N*u merged records.
//   kDupSelect: owner 0 supplies N*u merged records; outputs 2*N*u keys.
//   kShuffle:   owner 0 supplies 2*N*u keys, owners N..N+L-1 the controls;
//               outputs the permuted keys.
struct StageCircuit {
  BooleanCircuit circuit;
  StageSummary summary;
};
StageCircuit BuildStageCircuit(StageKind kind, const CircuitConfig& cfg);

// Maximum of N unsigned count_bits-wide values; owner i supplies value i.
BooleanCircuit BuildMaxCircuit(std::size_t n_parties,
                               std::size_t count_bits = 20);

// Tab-separated: stage, gate range, wire range, and, xor, depth, bound.
void WriteStageManifest(std::ostream& out, const CompiledCircuit& compiled);

}  // namespace stockpile

#endif  // STOCKPILE_COMPILER_H_
