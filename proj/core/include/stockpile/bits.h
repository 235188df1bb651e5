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

#ifndef STOCKPILE_BITS_H_
#define STOCKPILE_BITS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stockpile {

using Bytes = std::vector<std::uint8_t>;

// One bit per element, values 0 or 1. Wire values and shares use this
// representation throughout.
using BitVector = std::vector<std::uint8_t>;

// First `bit_count` bits of `bytes`, most significant bit of byte 0 first.
BitVector BytesToBits(std::span<const std::uint8_t> bytes,
                      std::size_t bit_count);
// Inverse of BytesToBits; the final byte is zero padded on the right.
Bytes BitsToBytes(std::span<const std::uint8_t> bits);

// Big-endian: element 0 is the most significant bit.
BitVector UintToBits(std::uint64_t value, std::size_t bit_count);
std::uint64_t BitsToUint(std::span<const std::uint8_t> bits);

std::string HexEncode(std::span<const std::uint8_t> bytes);
std::optional<Bytes> HexDecode(std::string_view hex);

// Packs bits eight per byte (LSB-first inside a byte) for transport.
Bytes PackBits(std::span<const std::uint8_t> bits);
BitVector UnpackBits(std::span<const std::uint8_t> packed,
                     std::size_t bit_count);

// Seeded randomness. Every random choice in the library flows through a
// BitRng so runs are reproducible under a seed; an unseeded instance draws
// its seed from std::random_device.
class BitRng {
 public:
  BitRng();
  explicit BitRng(std::uint64_t seed);

  std::uint64_t NextU64() { return engine_(); }
  std::uint8_t NextBit();
  BitVector Bits(std::size_t count);
  Bytes RandomBytes(std::size_t count);
  // Uniform in [0, bound).
  std::uint64_t Uniform(std::uint64_t bound);

  // Independent child stream; deterministic in (parent seed, label).
  BitRng Fork(std::uint64_t label);

  std::uint64_t seed() const noexcept { return seed_; }

  using result_type = std::uint64_t;
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t bit_buffer_ = 0;
  int bits_left_ = 0;
};

constexpr bool IsPowerOfTwo(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

constexpr std::size_t NextPowerOfTwo(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

constexpr std::size_t Log2Exact(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

// ceil(log2(n)) for n >= 1.
constexpr std::size_t CeilLog2(std::size_t n) { return Log2Exact(n); }

}  // namespace stockpile

#endif  // STOCKPILE_BITS_H_
