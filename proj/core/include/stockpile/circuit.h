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

// Boolean circuit intermediate representation.
//
// Gates are XOR or AND over wire ids; NOT is XOR with the constant-one wire
// (wire 0). Gates are stored in topological order and each gate drives a
// fresh wire. A circuit may carry reactive open points: wire groups that an
// evaluator must open after executing the gates before `gate_boundary`, and
// before any later gate runs.

#ifndef STOCKPILE_CIRCUIT_H_
#define STOCKPILE_CIRCUIT_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stockpile/bits.h"

namespace stockpile {

using WireId = std::uint32_t;
using OwnerId = std::uint32_t;

enum class GateKind : std::uint8_t { kXor, kAnd };

struct Gate {
  GateKind kind;
  WireId in0;
  WireId in1;
  WireId out;

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct ReactiveOpen {
  std::size_t gate_boundary = 0;
  std::vector<WireId> wires;

  friend bool operator==(const ReactiveOpen&, const ReactiveOpen&) = default;
};

struct GateCounts {
  std::uint64_t and_count = 0;
  std::uint64_t xor_count = 0;
  // Longest AND path. With reactive open points this is the sum of the
  // per-segment depths, since no gate after an open point may start before
  // the open completes.
  std::uint64_t depth_and = 0;

  friend bool operator==(const GateCounts&, const GateCounts&) = default;
};

struct BooleanCircuit {
  static constexpr WireId kConstantOne = 0;

  std::uint64_t wire_count = 1;
  std::vector<Gate> gates;
  // Input wires per logical owner, in the order the owner supplies bits.
  std::map<OwnerId, std::vector<WireId>> input_map;
  std::vector<WireId> output_wires;
  std::vector<ReactiveOpen> reactive_opens;

  std::size_t input_wire_count() const;

  // Throws Error(kMalformedCircuit) if gates are not topologically ordered,
  // a wire is driven twice, or an output / reactive wire is undriven.
  void Validate() const;

  friend bool operator==(const BooleanCircuit&, const BooleanCircuit&) = default;
};

GateCounts CountGates(const BooleanCircuit& circuit);

using PartyInputs = std::map<OwnerId, BitVector>;

struct PlainEvaluation {
  BitVector outputs;
  // One vector per reactive open point, in circuit order.
  std::vector<BitVector> reactive_values;
};

// Gate-by-gate evaluation in topological order. Throws kMissingInput when an
// owner has no bits and kWidthMismatch when the bit count is wrong.
PlainEvaluation EvaluatePlain(const BooleanCircuit& circuit,
                              const PartyInputs& inputs);
BitVector EvalPlaintext(const BooleanCircuit& circuit,
                        const PartyInputs& inputs);

// Text format:
//   W G I O
//   XOR a b c | AND a b c          (one line per gate, G lines)
//   INPUTS <owners>
//   <owner> <count> <wire>...      (one line per owner)
//   OUTPUTS <count> <wire>...
//   REACTIVE <count>
//   <boundary> <count> <wire>...   (one line per open point)
//   END
void WriteCircuitText(std::ostream& out, const BooleanCircuit& circuit);
BooleanCircuit ReadCircuitText(std::istream& in);

struct StageSummary {
  std::string name;
  std::uint64_t gate_begin = 0;
  std::uint64_t gate_end = 0;
  std::uint64_t wire_begin = 0;
  std::uint64_t wire_end = 0;
  GateCounts counts;
};

// Incremental circuit construction. In kCountOnly mode gates are counted but
// not stored, which is how gate totals for circuits with 10^8+ gates are
// measured; depth tracking stays available in both modes.
class CircuitBuilder {
 public:
  enum class Mode { kMaterialize, kCountOnly };

  explicit CircuitBuilder(Mode mode = Mode::kMaterialize,
                          bool track_depth = true);

  WireId One() const { return BooleanCircuit::kConstantOne; }
  WireId Zero();

  WireId Input(OwnerId owner);
  std::vector<WireId> Inputs(OwnerId owner, std::size_t count);

  WireId Xor(WireId a, WireId b);
  WireId And(WireId a, WireId b);
  WireId Not(WireId a) { return Xor(a, One()); }
  WireId Or(WireId a, WireId b);

  void AddOutput(WireId wire);
  void AddOutputs(const std::vector<WireId>& wires);

  // Registers an open point at the current gate position.
  void MarkReactiveOpen(std::vector<WireId> wires);

  void BeginStage(std::string name);
  const StageSummary& EndStage();
  const std::vector<StageSummary>& stages() const { return stages_; }

  GateCounts counts() const;
  bool materializing() const { return mode_ == Mode::kMaterialize; }

  // Valid only in kMaterialize mode.
  BooleanCircuit Finish() &&;

 private:
  WireId NewWire(std::uint32_t level);
  std::uint32_t Level(WireId w) const;

  Mode mode_;
  bool track_depth_;
  BooleanCircuit circuit_;
  std::uint64_t wire_count_ = 1;
  std::uint64_t gate_count_ = 0;
  std::uint64_t and_count_ = 0;
  std::uint64_t xor_count_ = 0;
  // AND depth per wire, relative to the current reactive segment.
  std::vector<std::uint32_t> level_;
  std::uint64_t finished_segments_depth_ = 0;
  std::uint32_t segment_depth_ = 0;
  std::uint64_t segment_first_wire_ = 1;
  std::optional<WireId> zero_;

  std::vector<StageSummary> stages_;
  std::optional<StageSummary> open_stage_;
  std::uint64_t stage_and_base_ = 0;
  std::uint64_t stage_xor_base_ = 0;
  std::uint64_t stage_depth_base_ = 0;
};

}  // namespace stockpile

#endif  // STOCKPILE_CIRCUIT_H_
