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

#ifndef STOCKPILE_CRYPTO_H_
#define STOCKPILE_CRYPTO_H_

#include <array>
#include <cstdint>
#include <span>

namespace stockpile {

using Sha3_512Digest = std::array<std::uint8_t, 64>;
using Sha3_256Digest = std::array<std::uint8_t, 32>;

Sha3_512Digest Sha3_512(std::span<const std::uint8_t> data);
Sha3_256Digest Sha3_256(std::span<const std::uint8_t> data);

// CRC-32 (IEEE 802.3), used for frame and blob integrity, not authenticity.
std::uint32_t Crc32(std::span<const std::uint8_t> data);

}  // namespace stockpile

#endif  // STOCKPILE_CRYPTO_H_
