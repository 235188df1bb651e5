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

#include "stockpile/bits.h"

#include <cassert>

#include "stockpile/error.h"

namespace stockpile {

BitVector BytesToBits(std::span<const std::uint8_t> bytes,
                      std::size_t bit_count) {
  assert(bit_count <= bytes.size() * 8);
  BitVector bits(bit_count);
  for (std::size_t i = 0; i < bit_count; ++i) {
    bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
  }
  return bits;
}

Bytes BitsToBytes(std::span<const std::uint8_t> bits) {
  Bytes bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
  }
  return bytes;
}

BitVector UintToBits(std::uint64_t value, std::size_t bit_count) {
  BitVector bits(bit_count, 0);
  for (std::size_t i = 0; i < bit_count && i < 64; ++i) {
    bits[bit_count - 1 - i] = (value >> i) & 1;
  }
  return bits;
}

std::uint64_t BitsToUint(std::span<const std::uint8_t> bits) {
  std::uint64_t value = 0;
  for (auto b : bits) value = (value << 1) | (b & 1);
  return value;
}

std::string HexEncode(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

namespace {
int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

std::optional<Bytes> HexDecode(std::string_view hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = HexValue(hex[2 * i]);
    int lo = HexValue(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

Bytes PackBits(std::span<const std::uint8_t> bits) {
  Bytes packed((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    packed[i >> 3] |= static_cast<std::uint8_t>((bits[i] & 1) << (i & 7));
  }
  return packed;
}

BitVector UnpackBits(std::span<const std::uint8_t> packed,
                     std::size_t bit_count) {
  if (packed.size() * 8 < bit_count) {
    throw Error(ErrorCode::kWidthMismatch, "packed buffer too short");
  }
  BitVector bits(bit_count);
  for (std::size_t i = 0; i < bit_count; ++i) {
    bits[i] = (packed[i >> 3] >> (i & 7)) & 1;
  }
  return bits;
}

BitRng::BitRng() : BitRng((std::uint64_t{std::random_device{}()} << 32) ^
                          std::random_device{}()) {}

BitRng::BitRng(std::uint64_t seed) : seed_(seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  engine_.seed(seq);
}

std::uint8_t BitRng::NextBit() {
  if (bits_left_ == 0) {
    bit_buffer_ = engine_();
    bits_left_ = 64;
  }
  std::uint8_t bit = bit_buffer_ & 1;
  bit_buffer_ >>= 1;
  --bits_left_;
  return bit;
}

BitVector BitRng::Bits(std::size_t count) {
  BitVector out(count);
  for (auto& b : out) b = NextBit();
  return out;
}

Bytes BitRng::RandomBytes(std::size_t count) {
  Bytes out(count);
  for (std::size_t i = 0; i < count; i += 8) {
    std::uint64_t word = engine_();
    for (std::size_t j = 0; j < 8 && i + j < count; ++j) {
      out[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
    }
  }
  return out;
}

std::uint64_t BitRng::Uniform(std::uint64_t bound) {
  std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
  return dist(engine_);
}

BitRng BitRng::Fork(std::uint64_t label) {
  // splitmix64 finalizer over (seed, label, fresh draw) keeps children apart.
  std::uint64_t z = seed_ ^ (label * 0x9e3779b97f4a7c15ULL) ^ engine_();
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return BitRng(z ^ (z >> 31));
}

}  // namespace stockpile
