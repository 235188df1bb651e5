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

// Binary framing for protocol messages and persisted share blobs.
//
// Both start with the same little-endian header:
//
//   u8  version        kWireFormatVersion
//   u8  kind           FrameKind
//   u64 epoch
//   u32 round          message round, or 0 for blobs
//   u32 sender         sending party, or owning party for blobs
//   u32 range_id       wire range the payload refers to
//   u64 bit_count
//   ... payload        ceil(bit_count / 8) bytes, LSB-first bit packing
//   u32 crc32          over every preceding byte

#ifndef STOCKPILE_WIRE_FORMAT_H_
#define STOCKPILE_WIRE_FORMAT_H_

#include <cstdint>
#include <span>

#include "stockpile/bits.h"
#include "stockpile/error.h"

namespace stockpile {

inline constexpr std::uint8_t kWireFormatVersion = 1;

enum class FrameKind : std::uint8_t {
  kInputShares = 1,
  kAndLayer = 2,
  kOpen = 3,
  kShareBlob = 4,
};

struct Frame {
  FrameKind kind = FrameKind::kAndLayer;
  std::uint64_t epoch = 0;
  std::uint32_t round = 0;
  std::uint32_t sender = 0;
  std::uint32_t range_id = 0;
  BitVector payload;

  friend bool operator==(const Frame&, const Frame&) = default;
};

inline constexpr std::size_t kFrameOverheadBytes = 1 + 1 + 8 + 4 + 4 + 4 + 8 + 4;

Bytes EncodeFrame(const Frame& frame);

// Throws `error` (kTransportFailure for messages, kCorruptBlob for blobs) on
// truncation, version mismatch or checksum failure.
Frame DecodeFrame(std::span<const std::uint8_t> bytes, ErrorCode error);

}  // namespace stockpile

#endif  // STOCKPILE_WIRE_FORMAT_H_
