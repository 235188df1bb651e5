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


// Helpers shared by the circuit-level tests: plain records in, keys out.

#ifndef STOCKPILE_TESTS_TEST_UTIL_H_
#define STOCKPILE_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <map>
#include <vector>

#include "stockpile/bits.h"
#include "stockpile/circuit.h"
#include "stockpile/compiler.h"
#include "stockpile/gadgets.h"

namespace stockpile::testing {

struct PlainRecord {
  std::uint64_t v = 0;
  std::uint32_t tag = 0;
  bool valid = true;
  std::uint64_t k0 = 0;
  std::uint64_t k1 = 0;
};

inline BitVector EncodeRecords(const RecordLayout& layout,
                               const std::vector<PlainRecord>& records) {
  BitVector out;
  for (const auto& r : records) {
    BitVector bits = layout.Encode(UintToBits(r.v, layout.v_bits), r.tag,
                                   r.valid, UintToBits(r.k0, layout.key_bits),
                                   UintToBits(r.k1, layout.key_bits));
    out.insert(out.end(), bits.begin(), bits.end());
  }
  return out;
}

inline std::vector<std::uint64_t> SplitWords(const BitVector& bits,
                                             std::size_t width) {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i + width <= bits.size(); i += width) {
    out.push_back(BitsToUint(std::span(bits).subspan(i, width)));
  }
  return out;
}

// Full-circuit inputs: one record list per party and all-zero (identity)
// shuffle controls unless `controls` supplies them.
inline PartyInputs DepletionInputs(
    const CircuitConfig& cfg,
    const std::vector<std::vector<PlainRecord>>& lists,
    const std::map<OwnerId, BitVector>& controls = {}) {
  RecordLayout layout = LayoutFor(cfg);
  PartyInputs in;
  for (std::size_t p = 0; p < lists.size(); ++p) {
    in[static_cast<OwnerId>(p)] = EncodeRecords(layout, lists[p]);
  }
  const std::size_t n = 2 * cfg.RecordCount();
  for (std::size_t l = 0; l < cfg.ShuffleLayers(); ++l) {
    auto owner = static_cast<OwnerId>(cfg.n_parties + l);
    auto it = controls.find(owner);
    in[owner] = it != controls.end()
                    ? it->second
                    : BitVector(WaksmanSwitchCount(n), 0);
  }
  return in;
}

}  // namespace stockpile::testing

#endif  // STOCKPILE_TESTS_TEST_UTIL_H_
