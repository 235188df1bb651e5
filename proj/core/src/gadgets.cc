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

#include <algorithm>
#include <cassert>
#include <deque>
#include <optional>

#include "stockpile/error.h"

namespace stockpile {

WireId LessThan(CircuitBuilder& b, std::span<const WireId> lhs,
                std::span<const WireId> rhs) {
  if (lhs.size() != rhs.size() || lhs.empty()) {
    throw Error(ErrorCode::kWidthMismatch, "LessThan operand widths");
  }
  // Carry c_{i+1} = x_i ^ ((x_i ^ c_i) & (y_i ^ c_i)) computes [x > y] from
  // the least significant bit up; here x = rhs, y = lhs.
  const std::size_t n = lhs.size();
  WireId x = rhs[n - 1];
  WireId y = lhs[n - 1];
  WireId carry = b.Xor(x, b.And(x, y));
  for (std::size_t k = 1; k < n; ++k) {
    x = rhs[n - 1 - k];
    y = lhs[n - 1 - k];
    WireId t = b.And(b.Xor(x, carry), b.Xor(y, carry));
    carry = b.Xor(x, t);
  }
  return carry;
}

WireId Equal(CircuitBuilder& b, std::span<const WireId> lhs,
             std::span<const WireId> rhs) {
  if (lhs.size() != rhs.size() || lhs.empty()) {
    throw Error(ErrorCode::kWidthMismatch, "Equal operand widths");
  }
  Wires same;
  same.reserve(lhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    same.push_back(b.Not(b.Xor(lhs[i], rhs[i])));
  }
  return AndFold(b, same);
}

WireId EqualConst(CircuitBuilder& b, std::span<const WireId> lhs,
                  std::span<const std::uint8_t> value) {
  if (lhs.size() != value.size() || lhs.empty()) {
    throw Error(ErrorCode::kWidthMismatch, "EqualConst operand widths");
  }
  Wires same;
  same.reserve(lhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    same.push_back(value[i] ? lhs[i] : b.Not(lhs[i]));
  }
  return AndFold(b, same);
}

Wires Mux(CircuitBuilder& b, WireId select, std::span<const WireId> x0,
          std::span<const WireId> x1) {
  if (x0.size() != x1.size()) {
    throw Error(ErrorCode::kWidthMismatch, "Mux operand widths");
  }
  Wires out;
  out.reserve(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) {
    out.push_back(b.Xor(x0[i], b.And(select, b.Xor(x0[i], x1[i]))));
  }
  return out;
}

std::pair<Wires, Wires> CondSwap(CircuitBuilder& b, WireId control,
                                 std::span<const WireId> a,
                                 std::span<const WireId> c) {
  if (a.size() != c.size()) {
    throw Error(ErrorCode::kWidthMismatch, "CondSwap operand widths");
  }
  Wires first, second;
  first.reserve(a.size());
  second.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    WireId d = b.And(control, b.Xor(a[i], c[i]));
    first.push_back(b.Xor(a[i], d));
    second.push_back(b.Xor(c[i], d));
  }
  return {std::move(first), std::move(second)};
}

namespace {

template <typename Op>
WireId Fold(std::span<const WireId> bits, WireId empty, Op op) {
  if (bits.empty()) return empty;
  Wires layer(bits.begin(), bits.end());
  while (layer.size() > 1) {
    Wires next;
    next.reserve((layer.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < layer.size(); i += 2) {
      next.push_back(op(layer[i], layer[i + 1]));
    }
    if (layer.size() % 2) next.push_back(layer.back());
    layer = std::move(next);
  }
  return layer[0];
}

}  // namespace

WireId OrFold(CircuitBuilder& b, std::span<const WireId> bits) {
  if (bits.empty()) return b.Zero();
  return Fold(bits, 0, [&](WireId x, WireId y) { return b.Or(x, y); });
}

WireId AndFold(CircuitBuilder& b, std::span<const WireId> bits) {
  return Fold(bits, b.One(), [&](WireId x, WireId y) { return b.And(x, y); });
}

void CompareExchange(CircuitBuilder& b, Wires& lo, Wires& hi,
                     std::size_t key_bits) {
  assert(lo.size() == hi.size() && key_bits <= lo.size());
  std::span<const WireId> lo_key(lo.data(), key_bits);
  std::span<const WireId> hi_key(hi.data(), key_bits);
  WireId swap = LessThan(b, hi_key, lo_key);
  auto [a, c] = CondSwap(b, swap, lo, hi);
  lo = std::move(a);
  hi = std::move(c);
}

namespace {

// Runs the bitonic half-cleaner cascade over slots where nullopt marks a
// virtual +inf pad. `emit` is called for every compare-exchange between two
// real records; pad moves are resolved statically.
template <typename Slot, typename Emit>
void PrunedBitonicCascade(std::vector<std::optional<Slot>>& slots, Emit emit) {
  const std::size_t n = slots.size();
  for (std::size_t stride = n / 2; stride >= 1; stride /= 2) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i & stride) continue;
      std::size_t j = i + stride;
      if (slots[i] && slots[j]) {
        emit(*slots[i], *slots[j]);
      } else if (!slots[i] && slots[j]) {
        std::swap(slots[i], slots[j]);
      }
    }
  }
}

template <typename Slot>
std::vector<std::optional<Slot>> BitonicLayout(std::vector<Slot> first,
                                               std::vector<Slot> second) {
  const std::size_t half =
      NextPowerOfTwo(std::max<std::size_t>({first.size(), second.size(), 1}));
  std::vector<std::optional<Slot>> slots(2 * half);
  for (std::size_t i = 0; i < first.size(); ++i) slots[i] = std::move(first[i]);
  // Second list reversed at the top end: ascending ++ descending is bitonic.
  for (std::size_t i = 0; i < second.size(); ++i) {
    slots[2 * half - 1 - i] = std::move(second[i]);
  }
  return slots;
}

}  // namespace

std::vector<Wires> BitonicMerge(CircuitBuilder& b, std::vector<Wires> first,
                                std::vector<Wires> second,
                                std::size_t key_bits) {
  const std::size_t total = first.size() + second.size();
  if (first.empty()) return second;
  if (second.empty()) return first;
  auto slots = BitonicLayout(std::move(first), std::move(second));
  PrunedBitonicCascade(slots, [&](Wires& lo, Wires& hi) {
    CompareExchange(b, lo, hi, key_bits);
  });
  std::vector<Wires> out;
  out.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    assert(slots[i].has_value());
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

std::size_t BitonicMergeComparatorCount(std::size_t first_size,
                                        std::size_t second_size) {
  if (first_size == 0 || second_size == 0) return 0;
  auto slots = BitonicLayout(std::vector<int>(first_size, 0),
                             std::vector<int>(second_size, 0));
  std::size_t count = 0;
  PrunedBitonicCascade(slots, [&](int&, int&) { ++count; });
  return count;
}

std::size_t WaksmanSwitchCount(std::size_t n) {
  if (n <= 1) return 0;
  const std::size_t half = n / 2;
  const std::size_t out_switches = (n % 2 == 0) ? half - 1 : half;
  return half + out_switches + WaksmanSwitchCount(half) +
         WaksmanSwitchCount(n - half);
}

namespace {

void WaksmanBuild(CircuitBuilder& b, std::vector<Wires>& items,
                  std::span<const WireId> controls, std::size_t& next) {
  const std::size_t n = items.size();
  if (n <= 1) return;
  const std::size_t half = n / 2;
  std::vector<Wires> upper(half), lower(n - half);
  for (std::size_t i = 0; i < half; ++i) {
    auto [x, y] = CondSwap(b, controls[next++], items[2 * i], items[2 * i + 1]);
    upper[i] = std::move(x);
    lower[i] = std::move(y);
  }
  if (n % 2) lower[half] = std::move(items[n - 1]);
  WaksmanBuild(b, upper, controls, next);
  WaksmanBuild(b, lower, controls, next);
  std::size_t first_switch = 0;
  if (n % 2 == 0) {
    items[0] = std::move(upper[0]);
    items[1] = std::move(lower[0]);
    first_switch = 1;
  } else {
    items[n - 1] = std::move(lower[half]);
  }
  for (std::size_t i = first_switch; i < half; ++i) {
    auto [x, y] = CondSwap(b, controls[next++], upper[i], lower[i]);
    items[2 * i] = std::move(x);
    items[2 * i + 1] = std::move(y);
  }
}

}  // namespace

std::vector<Wires> WaksmanNetwork(CircuitBuilder& b, std::vector<Wires> records,
                                  std::span<const WireId> controls) {
  if (controls.size() != WaksmanSwitchCount(records.size())) {
    throw Error(ErrorCode::kWidthMismatch, "Waksman control count");
  }
  std::size_t next = 0;
  WaksmanBuild(b, records, controls, next);
  return records;
}

namespace {

// Plaintext network over element indices, independent of the circuit
// builder above.
void WaksmanApply(std::vector<std::size_t>& items,
                  std::span<const std::uint8_t> controls, std::size_t& next) {
  const std::size_t n = items.size();
  if (n <= 1) return;
  const std::size_t half = n / 2;
  std::vector<std::size_t> upper(half), lower(n - half);
  for (std::size_t i = 0; i < half; ++i) {
    bool swap = controls[next++] & 1;
    upper[i] = items[2 * i + (swap ? 1 : 0)];
    lower[i] = items[2 * i + (swap ? 0 : 1)];
  }
  if (n % 2) lower[half] = items[n - 1];
  WaksmanApply(upper, controls, next);
  WaksmanApply(lower, controls, next);
  std::size_t i = 0;
  if (n % 2 == 0) {
    items[0] = upper[0];
    items[1] = lower[0];
    i = 1;
  } else {
    items[n - 1] = lower[half];
  }
  for (; i < half; ++i) {
    bool swap = controls[next++] & 1;
    items[2 * i] = swap ? lower[i] : upper[i];
    items[2 * i + 1] = swap ? upper[i] : lower[i];
  }
}

// Looping algorithm. Each element is colored upper (0) or lower (1) so the
// two elements of every input switch and of every output switch differ,
// subject to the wiring fixed by the omitted / absent switches.
void WaksmanRouteInto(std::span<const std::size_t> perm, BitVector& controls) {
  const std::size_t n = perm.size();
  if (n <= 1) return;
  const std::size_t half = n / 2;
  const bool odd = n % 2;
  std::vector<std::size_t> dest(n);  // input element -> output position
  for (std::size_t j = 0; j < n; ++j) dest[perm[j]] = j;

  std::vector<int> color(n, -1);
  auto input_partner = [&](std::size_t e) -> std::optional<std::size_t> {
    if (e >= 2 * half) return std::nullopt;
    return e ^ 1;
  };
  auto output_partner = [&](std::size_t e) -> std::optional<std::size_t> {
    std::size_t j = dest[e];
    if (j >= 2 * half) return std::nullopt;
    return perm[j ^ 1];
  };
  auto propagate = [&](std::size_t start, int c) {
    std::deque<std::size_t> queue{start};
    color[start] = c;
    while (!queue.empty()) {
      std::size_t e = queue.front();
      queue.pop_front();
      for (auto p : {input_partner(e), output_partner(e)}) {
        if (!p) continue;
        if (color[*p] == -1) {
          color[*p] = 1 - color[e];
          queue.push_back(*p);
        } else if (color[*p] == color[e]) {
          throw Error(ErrorCode::kConfigInvalid, "Waksman routing conflict");
        }
      }
    }
  };
  if (odd) {
    // Last input enters the lower subnetwork directly; the last output
    // leaves it directly. Both sit on the same path, so one seed suffices.
    propagate(n - 1, 1);
    if (color[perm[n - 1]] == -1) propagate(perm[n - 1], 1);
  } else {
    // Output switch 0 is omitted: output 0 is fed by the upper subnetwork.
    propagate(perm[0], 0);
  }
  for (std::size_t e = 0; e < n; ++e) {
    if (color[e] == -1) propagate(e, 0);
  }

  // Positions inside each subnetwork.
  std::vector<std::size_t> sub_index(n);
  std::vector<std::size_t> upper_in(half), lower_in(n - half);
  for (std::size_t i = 0; i < half; ++i) {
    std::size_t top = color[2 * i] == 0 ? 2 * i : 2 * i + 1;
    std::size_t bottom = top ^ 1;
    controls.push_back(color[2 * i] == 1 ? 1 : 0);
    upper_in[i] = top;
    lower_in[i] = bottom;
    sub_index[top] = i;
    sub_index[bottom] = i;
  }
  if (odd) {
    lower_in[half] = n - 1;
    sub_index[n - 1] = half;
  }
  std::vector<std::size_t> upper_perm(half), lower_perm(n - half);
  BitVector out_controls;
  for (std::size_t k = 0; k < half; ++k) {
    std::size_t a = perm[2 * k];
    std::size_t c = perm[2 * k + 1];
    std::size_t top = color[a] == 0 ? a : c;
    std::size_t bottom = color[a] == 0 ? c : a;
    upper_perm[k] = sub_index[top];
    lower_perm[k] = sub_index[bottom];
    if (odd || k > 0) out_controls.push_back(color[a] == 1 ? 1 : 0);
  }
  if (odd) lower_perm[half] = sub_index[perm[n - 1]];
  WaksmanRouteInto(upper_perm, controls);
  WaksmanRouteInto(lower_perm, controls);
  controls.insert(controls.end(), out_controls.begin(), out_controls.end());
}

}  // namespace

std::vector<std::size_t> WaksmanPermutation(
    std::size_t n, std::span<const std::uint8_t> controls) {
  if (controls.size() != WaksmanSwitchCount(n)) {
    throw Error(ErrorCode::kWidthMismatch, "Waksman control count");
  }
  std::vector<std::size_t> items(n);
  for (std::size_t i = 0; i < n; ++i) items[i] = i;
  std::size_t next = 0;
  WaksmanApply(items, controls, next);
  return items;
}

BitVector WaksmanRoute(std::span<const std::size_t> perm) {
  std::vector<std::uint8_t> seen(perm.size(), 0);
  for (std::size_t p : perm) {
    if (p >= perm.size() || seen[p]) {
      throw Error(ErrorCode::kConfigInvalid, "not a permutation");
    }
    seen[p] = 1;
  }
  BitVector controls;
  controls.reserve(WaksmanSwitchCount(perm.size()));
  WaksmanRouteInto(perm, controls);
  return controls;
}

namespace fragments {

BooleanCircuit LessThan(std::size_t sigma) {
  CircuitBuilder b;
  Wires x = b.Inputs(0, sigma);
  Wires y = b.Inputs(1, sigma);
  b.AddOutput(stockpile::LessThan(b, x, y));
  return std::move(b).Finish();
}

BooleanCircuit Equality(std::size_t sigma) {
  CircuitBuilder b;
  Wires x = b.Inputs(0, sigma);
  Wires y = b.Inputs(1, sigma);
  b.AddOutput(Equal(b, x, y));
  return std::move(b).Finish();
}

BooleanCircuit Mux(std::size_t width) {
  CircuitBuilder b;
  WireId s = b.Input(0);
  Wires x0 = b.Inputs(1, width);
  Wires x1 = b.Inputs(2, width);
  b.AddOutputs(stockpile::Mux(b, s, x0, x1));
  return std::move(b).Finish();
}

BooleanCircuit CondSwap(std::size_t width) {
  CircuitBuilder b;
  WireId c = b.Input(0);
  Wires x = b.Inputs(1, width);
  Wires y = b.Inputs(2, width);
  auto [p, q] = stockpile::CondSwap(b, c, x, y);
  b.AddOutputs(p);
  b.AddOutputs(q);
  return std::move(b).Finish();
}

BooleanCircuit BitonicMerger(std::size_t n, std::size_t key_bits,
                             std::size_t payload_bits) {
  if (!IsPowerOfTwo(n) || n < 2) {
    throw Error(ErrorCode::kNotPowerOfTwo,
                "bitonic merger size " + std::to_string(n));
  }
  CircuitBuilder b;
  std::vector<Wires> first, second;
  for (std::size_t i = 0; i < n; ++i) {
    Wires rec = b.Inputs(0, key_bits + payload_bits);
    (i < n / 2 ? first : second).push_back(std::move(rec));
  }
  for (const auto& rec :
       BitonicMerge(b, std::move(first), std::move(second), key_bits)) {
    b.AddOutputs(rec);
  }
  return std::move(b).Finish();
}

BooleanCircuit Waksman(std::size_t n, std::size_t width) {
  if (!IsPowerOfTwo(n)) {
    throw Error(ErrorCode::kNotPowerOfTwo,
                "Waksman network size " + std::to_string(n));
  }
  CircuitBuilder b;
  std::vector<Wires> records;
  for (std::size_t i = 0; i < n; ++i) records.push_back(b.Inputs(0, width));
  Wires controls = b.Inputs(1, WaksmanSwitchCount(n));
  for (const auto& rec : WaksmanNetwork(b, std::move(records), controls)) {
    b.AddOutputs(rec);
  }
  return std::move(b).Finish();
}

}  // namespace fragments

}  // namespace stockpile
