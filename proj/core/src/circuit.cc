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

#include "stockpile/circuit.h"

#include <algorithm>
#include <limits>

#include "stockpile/error.h"

namespace stockpile {

std::size_t BooleanCircuit::input_wire_count() const {
  std::size_t n = 0;
  for (const auto& [owner, wires] : input_map) n += wires.size();
  return n;
}

void BooleanCircuit::Validate() const {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kMalformedCircuit, why);
  };
  if (wire_count == 0 || wire_count > std::numeric_limits<WireId>::max()) {
    fail("wire count out of range");
  }
  std::vector<std::uint8_t> driven(wire_count, 0);
  driven[kConstantOne] = 1;
  for (const auto& [owner, wires] : input_map) {
    for (WireId w : wires) {
      if (w >= wire_count || driven[w]) {
        fail("input wire " + std::to_string(w) + " invalid or driven twice");
      }
      driven[w] = 1;
    }
  }
  std::size_t next_open = 0;
  for (std::size_t g = 0; g < gates.size(); ++g) {
    while (next_open < reactive_opens.size() &&
           reactive_opens[next_open].gate_boundary == g) {
      for (WireId w : reactive_opens[next_open].wires) {
        if (w >= wire_count || !driven[w]) fail("reactive wire undriven");
      }
      ++next_open;
    }
    const Gate& gate = gates[g];
    if (gate.in0 >= wire_count || gate.in1 >= wire_count ||
        gate.out >= wire_count) {
      fail("gate " + std::to_string(g) + " references unknown wire");
    }
    if (!driven[gate.in0] || !driven[gate.in1]) {
      fail("gate " + std::to_string(g) + " reads an undriven wire");
    }
    if (driven[gate.out]) {
      fail("gate " + std::to_string(g) + " drives wire " +
           std::to_string(gate.out) + " twice");
    }
    driven[gate.out] = 1;
  }
  for (; next_open < reactive_opens.size(); ++next_open) {
    if (reactive_opens[next_open].gate_boundary != gates.size()) {
      fail("reactive open boundaries out of order");
    }
    for (WireId w : reactive_opens[next_open].wires) {
      if (w >= wire_count || !driven[w]) fail("reactive wire undriven");
    }
  }
  for (WireId w : output_wires) {
    if (w >= wire_count || !driven[w]) {
      fail("output wire " + std::to_string(w) + " undriven");
    }
  }
}

GateCounts CountGates(const BooleanCircuit& circuit) {
  GateCounts counts;
  std::vector<std::uint32_t> level(circuit.wire_count, 0);
  std::vector<std::uint32_t> segment(circuit.wire_count, 0);
  std::uint32_t current = 0;
  std::uint64_t segment_depth = 0;
  std::size_t next_open = 0;
  auto lvl = [&](WireId w) { return segment[w] == current ? level[w] : 0u; };
  for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
    if (next_open < circuit.reactive_opens.size() &&
        circuit.reactive_opens[next_open].gate_boundary == g) {
      while (next_open < circuit.reactive_opens.size() &&
             circuit.reactive_opens[next_open].gate_boundary == g) {
        ++next_open;
      }
      counts.depth_and += segment_depth;
      segment_depth = 0;
      ++current;
    }
    const Gate& gate = circuit.gates[g];
    std::uint32_t l = std::max(lvl(gate.in0), lvl(gate.in1));
    if (gate.kind == GateKind::kAnd) {
      ++counts.and_count;
      ++l;
    } else {
      ++counts.xor_count;
    }
    level[gate.out] = l;
    segment[gate.out] = current;
    segment_depth = std::max<std::uint64_t>(segment_depth, l);
  }
  counts.depth_and += segment_depth;
  return counts;
}

PlainEvaluation EvaluatePlain(const BooleanCircuit& circuit,
                              const PartyInputs& inputs) {
  BitVector wires(circuit.wire_count, 0);
  wires[BooleanCircuit::kConstantOne] = 1;
  for (const auto& [owner, ids] : circuit.input_map) {
    auto it = inputs.find(owner);
    if (it == inputs.end()) {
      if (ids.empty()) continue;
      throw Error(ErrorCode::kMissingInput,
                  "no input bits for owner " + std::to_string(owner));
    }
    if (it->second.size() != ids.size()) {
      throw Error(ErrorCode::kWidthMismatch,
                  "owner " + std::to_string(owner) + " supplied " +
                      std::to_string(it->second.size()) + " bits, expected " +
                      std::to_string(ids.size()));
    }
    for (std::size_t i = 0; i < ids.size(); ++i) wires[ids[i]] = it->second[i] & 1;
  }
  for (const auto& [owner, bits] : inputs) {
    if (!circuit.input_map.contains(owner)) {
      throw Error(ErrorCode::kWidthMismatch,
                  "owner " + std::to_string(owner) + " has no input wires");
    }
  }
  PlainEvaluation result;
  std::size_t next_open = 0;
  auto open_at = [&](std::size_t g) {
    while (next_open < circuit.reactive_opens.size() &&
           circuit.reactive_opens[next_open].gate_boundary == g) {
      BitVector values;
      for (WireId w : circuit.reactive_opens[next_open].wires) {
        values.push_back(wires[w]);
      }
      result.reactive_values.push_back(std::move(values));
      ++next_open;
    }
  };
  for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
    open_at(g);
    const Gate& gate = circuit.gates[g];
    wires[gate.out] = gate.kind == GateKind::kXor
                          ? wires[gate.in0] ^ wires[gate.in1]
                          : wires[gate.in0] & wires[gate.in1];
  }
  open_at(circuit.gates.size());
  result.outputs.reserve(circuit.output_wires.size());
  for (WireId w : circuit.output_wires) result.outputs.push_back(wires[w]);
  return result;
}

BitVector EvalPlaintext(const BooleanCircuit& circuit,
                        const PartyInputs& inputs) {
  return EvaluatePlain(circuit, inputs).outputs;
}

CircuitBuilder::CircuitBuilder(Mode mode, bool track_depth)
    : mode_(mode), track_depth_(track_depth) {
  if (track_depth_) level_.push_back(0);
}

WireId CircuitBuilder::NewWire(std::uint32_t level) {
  if (wire_count_ >= std::numeric_limits<WireId>::max()) {
    throw Error(ErrorCode::kConfigInvalid, "circuit exceeds 2^32 wires");
  }
  WireId id = static_cast<WireId>(wire_count_++);
  if (track_depth_) level_.push_back(level);
  return id;
}

std::uint32_t CircuitBuilder::Level(WireId w) const {
  if (!track_depth_ || w < segment_first_wire_) return 0;
  return level_[w];
}

WireId CircuitBuilder::Zero() {
  if (!zero_) zero_ = Xor(One(), One());
  return *zero_;
}

WireId CircuitBuilder::Input(OwnerId owner) {
  WireId w = NewWire(0);
  if (materializing()) circuit_.input_map[owner].push_back(w);
  return w;
}

std::vector<WireId> CircuitBuilder::Inputs(OwnerId owner, std::size_t count) {
  std::vector<WireId> out;
  out.reserve(count);
  if (materializing()) circuit_.input_map[owner];  // owners with zero inputs
  for (std::size_t i = 0; i < count; ++i) out.push_back(Input(owner));
  return out;
}

WireId CircuitBuilder::Xor(WireId a, WireId b) {
  std::uint32_t l = track_depth_ ? std::max(Level(a), Level(b)) : 0;
  WireId out = NewWire(l);
  ++xor_count_;
  ++gate_count_;
  if (materializing()) circuit_.gates.push_back({GateKind::kXor, a, b, out});
  return out;
}

WireId CircuitBuilder::And(WireId a, WireId b) {
  std::uint32_t l = track_depth_ ? std::max(Level(a), Level(b)) + 1 : 0;
  WireId out = NewWire(l);
  ++and_count_;
  ++gate_count_;
  segment_depth_ = std::max(segment_depth_, l);
  if (materializing()) circuit_.gates.push_back({GateKind::kAnd, a, b, out});
  return out;
}

WireId CircuitBuilder::Or(WireId a, WireId b) {
  return Xor(Xor(a, b), And(a, b));
}

void CircuitBuilder::AddOutput(WireId wire) {
  if (materializing()) circuit_.output_wires.push_back(wire);
}

void CircuitBuilder::AddOutputs(const std::vector<WireId>& wires) {
  for (WireId w : wires) AddOutput(w);
}

void CircuitBuilder::MarkReactiveOpen(std::vector<WireId> wires) {
  if (materializing()) {
    circuit_.reactive_opens.push_back({gate_count_, std::move(wires)});
  }
  finished_segments_depth_ += segment_depth_;
  segment_depth_ = 0;
  segment_first_wire_ = wire_count_;
  // The cached zero wire belongs to the previous segment; it is still valid
  // (level 0 from here on).
}

void CircuitBuilder::BeginStage(std::string name) {
  if (open_stage_) EndStage();
  StageSummary s;
  s.name = std::move(name);
  s.gate_begin = gate_count_;
  s.wire_begin = wire_count_;
  open_stage_ = std::move(s);
  stage_and_base_ = and_count_;
  stage_xor_base_ = xor_count_;
  stage_depth_base_ = finished_segments_depth_ + segment_depth_;
}

const StageSummary& CircuitBuilder::EndStage() {
  if (!open_stage_) {
    throw Error(ErrorCode::kConfigInvalid, "EndStage without BeginStage");
  }
  StageSummary s = std::move(*open_stage_);
  open_stage_.reset();
  s.gate_end = gate_count_;
  s.wire_end = wire_count_;
  s.counts.and_count = and_count_ - stage_and_base_;
  s.counts.xor_count = xor_count_ - stage_xor_base_;
  s.counts.depth_and =
      finished_segments_depth_ + segment_depth_ - stage_depth_base_;
  stages_.push_back(std::move(s));
  return stages_.back();
}

GateCounts CircuitBuilder::counts() const {
  return {and_count_, xor_count_, finished_segments_depth_ + segment_depth_};
}

BooleanCircuit CircuitBuilder::Finish() && {
  if (!materializing()) {
    throw Error(ErrorCode::kConfigInvalid,
                "Finish() called on a count-only builder");
  }
  if (open_stage_) EndStage();
  circuit_.wire_count = wire_count_;
  return std::move(circuit_);
}

}  // namespace stockpile
