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

#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "stockpile/circuit.h"
#include "stockpile/error.h"

namespace stockpile {
namespace {

void WriteWireList(std::ostream& out, const std::vector<WireId>& wires) {
  out << wires.size();
  for (WireId w : wires) out << ' ' << w;
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string Word() {
    std::string w;
    if (!(in_ >> w)) Fail("unexpected end of input");
    return w;
  }

  void Expect(std::string_view keyword) {
    std::string w = Word();
    if (w != keyword) Fail("expected " + std::string(keyword) + ", got " + w);
  }

  std::uint64_t Number() {
    std::string w = Word();
    std::uint64_t v = 0;
    if (w.empty()) Fail("empty number");
    for (char c : w) {
      if (c < '0' || c > '9') Fail("bad number '" + w + "'");
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
  }

  WireId Wire() {
    std::uint64_t v = Number();
    if (v > std::numeric_limits<WireId>::max()) Fail("wire id overflow");
    return static_cast<WireId>(v);
  }

  std::vector<WireId> WireList() {
    std::uint64_t n = Number();
    std::vector<WireId> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(Wire());
    return out;
  }

  [[noreturn]] void Fail(const std::string& why) {
    throw Error(ErrorCode::kMalformedCircuit, "circuit text: " + why);
  }

 private:
  std::istream& in_;
};

}  // namespace

void WriteCircuitText(std::ostream& out, const BooleanCircuit& circuit) {
  out << circuit.wire_count << ' ' << circuit.gates.size() << ' '
      << circuit.input_wire_count() << ' ' << circuit.output_wires.size()
      << '\n';
  for (const Gate& g : circuit.gates) {
    out << (g.kind == GateKind::kXor ? "XOR " : "AND ") << g.in0 << ' '
        << g.in1 << ' ' << g.out << '\n';
  }
  out << "INPUTS " << circuit.input_map.size() << '\n';
  for (const auto& [owner, wires] : circuit.input_map) {
    out << owner << ' ';
    WriteWireList(out, wires);
    out << '\n';
  }
  out << "OUTPUTS ";
  WriteWireList(out, circuit.output_wires);
  out << '\n';
  out << "REACTIVE " << circuit.reactive_opens.size() << '\n';
  for (const auto& open : circuit.reactive_opens) {
    out << open.gate_boundary << ' ';
    WriteWireList(out, open.wires);
    out << '\n';
  }
  out << "END\n";
}

BooleanCircuit ReadCircuitText(std::istream& in) {
  Reader r(in);
  BooleanCircuit c;
  c.wire_count = r.Number();
  std::uint64_t gate_count = r.Number();
  std::uint64_t input_count = r.Number();
  std::uint64_t output_count = r.Number();
  c.gates.reserve(gate_count);
  for (std::uint64_t i = 0; i < gate_count; ++i) {
    std::string kind = r.Word();
    Gate g{};
    if (kind == "XOR") {
      g.kind = GateKind::kXor;
    } else if (kind == "AND") {
      g.kind = GateKind::kAnd;
    } else {
      r.Fail("unknown gate kind '" + kind + "'");
    }
    g.in0 = r.Wire();
    g.in1 = r.Wire();
    g.out = r.Wire();
    c.gates.push_back(g);
  }
  r.Expect("INPUTS");
  std::uint64_t owners = r.Number();
  for (std::uint64_t i = 0; i < owners; ++i) {
    std::uint64_t owner = r.Number();
    if (c.input_map.contains(static_cast<OwnerId>(owner))) {
      r.Fail("duplicate owner");
    }
    c.input_map[static_cast<OwnerId>(owner)] = r.WireList();
  }
  r.Expect("OUTPUTS");
  c.output_wires = r.WireList();
  r.Expect("REACTIVE");
  std::uint64_t opens = r.Number();
  for (std::uint64_t i = 0; i < opens; ++i) {
    ReactiveOpen open;
    open.gate_boundary = r.Number();
    open.wires = r.WireList();
    c.reactive_opens.push_back(std::move(open));
  }
  r.Expect("END");
  if (c.input_wire_count() != input_count) r.Fail("input count mismatch");
  if (c.output_wires.size() != output_count) r.Fail("output count mismatch");
  c.Validate();
  return c;
}

}  // namespace stockpile
