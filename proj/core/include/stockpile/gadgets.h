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

// Oblivious building blocks over CircuitBuilder: comparators, multiplexers,
// conditional swaps, bitonic merging and Waksman permutation networks.
//
// Bit vectors are big-endian: element 0 is the most significant bit. A
// record is a flat wire vector whose first `key_bits` wires are its sort key;
// conditional swaps always move the whole record.

#ifndef STOCKPILE_GADGETS_H_
#define STOCKPILE_GADGETS_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "stockpile/bits.h"
#include "stockpile/circuit.h"

namespace stockpile {

using Wires = std::vector<WireId>;

// a < b, unsigned. Ripple comparator, exactly |a| AND gates.
WireId LessThan(CircuitBuilder& b, std::span<const WireId> lhs,
                std::span<const WireId> rhs);
// a == b. AND tree over bitwise XNOR, |a| - 1 AND gates.
WireId Equal(CircuitBuilder& b, std::span<const WireId> lhs,
             std::span<const WireId> rhs);
// a == constant; the constant is folded into free NOT gates.
WireId EqualConst(CircuitBuilder& b, std::span<const WireId> lhs,
                  std::span<const std::uint8_t> value);
// out = x0 ^ s & (x0 ^ x1); |x0| AND gates.
Wires Mux(CircuitBuilder& b, WireId select, std::span<const WireId> x0,
          std::span<const WireId> x1);
// Swapped iff control = 1; |a| AND gates.
std::pair<Wires, Wires> CondSwap(CircuitBuilder& b, WireId control,
                                 std::span<const WireId> a,
                                 std::span<const WireId> c);
// Balanced folds. Empty OR is Zero(), empty AND is One().
WireId OrFold(CircuitBuilder& b, std::span<const WireId> bits);
WireId AndFold(CircuitBuilder& b, std::span<const WireId> bits);

// Orders (lo, hi) so that key(lo) <= key(hi). key_bits + |record| ANDs.
void CompareExchange(CircuitBuilder& b, Wires& lo, Wires& hi,
                     std::size_t key_bits);

// Merges two ascending record lists of arbitrary (possibly different)
// lengths with a bitonic merger. Both lists are padded to the next common
// power of two with virtual +inf records; compare-exchanges touching a pad
// are resolved at compile time and emit no gates.
std::vector<Wires> BitonicMerge(CircuitBuilder& b, std::vector<Wires> first,
                                std::vector<Wires> second,
                                std::size_t key_bits);
// Number of gate-emitting compare-exchanges BitonicMerge uses for the sizes.
std::size_t BitonicMergeComparatorCount(std::size_t first_size,
                                        std::size_t second_size);

// Arbitrary-size Waksman network (for powers of two this is the classic
// network with n*log2(n) - n + 1 switches). Controls are consumed in the
// order: input column, upper subnetwork, lower subnetwork, output column.
std::size_t WaksmanSwitchCount(std::size_t n);
std::vector<Wires> WaksmanNetwork(CircuitBuilder& b, std::vector<Wires> records,
                                  std::span<const WireId> controls);

// Plaintext semantics of the same network: returns perm with
// output[j] = input[perm[j]].
std::vector<std::size_t> WaksmanPermutation(
    std::size_t n, std::span<const std::uint8_t> controls);
// Control bits realizing perm (output[j] = input[perm[j]]).
BitVector WaksmanRoute(std::span<const std::size_t> perm);

// Standalone fragments with fixed owner layouts, used for testing each block
// in isolation.
namespace fragments {

// owner 0: a (sigma bits), owner 1: b (sigma bits); output: a < b.
BooleanCircuit LessThan(std::size_t sigma);
// owner 0: a, owner 1: b; output: a == b.
BooleanCircuit Equality(std::size_t sigma);
// owner 0: s, owner 1: x0, owner 2: x1; outputs x_s.
BooleanCircuit Mux(std::size_t width);
// owner 0: c, owner 1: A, owner 2: B; outputs A' then B'.
BooleanCircuit CondSwap(std::size_t width);
// owner 0: n records of key_bits + payload_bits bits (first half, then
// second half, each ascending). Outputs the n merged records. n must be a
// power of two (kNotPowerOfTwo otherwise).
BooleanCircuit BitonicMerger(std::size_t n, std::size_t key_bits,
                             std::size_t payload_bits);
// owner 0: n records of width bits, owner 1: n*log2(n) - n + 1 controls.
// n must be a power of two.
BooleanCircuit Waksman(std::size_t n, std::size_t width);

}  // namespace fragments

}  // namespace stockpile

#endif  // STOCKPILE_GADGETS_H_
