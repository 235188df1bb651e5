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

#include "stockpile/wire_format.h"

#include <string>

#include "stockpile/crypto.h"

namespace stockpile {
namespace {

template <typename T>
void PutLe(Bytes& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
}

class LeReader {
 public:
  LeReader(std::span<const std::uint8_t> bytes, ErrorCode error)
      : bytes_(bytes), error_(error) {}

  template <typename T>
  T Get() {
    Need(sizeof(T));
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      value |= static_cast<T>(static_cast<T>(bytes_[pos_ + i]) << (8 * i));
    }
    pos_ += sizeof(T);
    return value;
  }

  std::span<const std::uint8_t> Take(std::size_t n) {
    Need(n);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t pos() const { return pos_; }

  [[noreturn]] void Fail(const std::string& why) const {
    throw Error(error_, "frame: " + why);
  }

 private:
  void Need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) Fail("truncated");
  }

  std::span<const std::uint8_t> bytes_;
  ErrorCode error_;
  std::size_t pos_ = 0;
};

}  // namespace

Bytes EncodeFrame(const Frame& frame) {
  Bytes out;
  out.reserve(kFrameOverheadBytes + (frame.payload.size() + 7) / 8);
  out.push_back(kWireFormatVersion);
  out.push_back(static_cast<std::uint8_t>(frame.kind));
  PutLe<std::uint64_t>(out, frame.epoch);
  PutLe<std::uint32_t>(out, frame.round);
  PutLe<std::uint32_t>(out, frame.sender);
  PutLe<std::uint32_t>(out, frame.range_id);
  PutLe<std::uint64_t>(out, frame.payload.size());
  Bytes packed = PackBits(frame.payload);
  out.insert(out.end(), packed.begin(), packed.end());
  PutLe<std::uint32_t>(out, Crc32(out));
  return out;
}

Frame DecodeFrame(std::span<const std::uint8_t> bytes, ErrorCode error) {
  LeReader r(bytes, error);
  if (bytes.size() < kFrameOverheadBytes) r.Fail("truncated");
  const std::size_t body = bytes.size() - 4;
  std::uint32_t stored = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    stored |= static_cast<std::uint32_t>(bytes[body + i]) << (8 * i);
  }
  if (Crc32(bytes.first(body)) != stored) r.Fail("checksum mismatch");

  Frame f;
  if (r.Get<std::uint8_t>() != kWireFormatVersion) r.Fail("unknown version");
  const auto kind = r.Get<std::uint8_t>();
  if (kind < 1 || kind > 4) r.Fail("unknown frame kind");
  f.kind = static_cast<FrameKind>(kind);
  f.epoch = r.Get<std::uint64_t>();
  f.round = r.Get<std::uint32_t>();
  f.sender = r.Get<std::uint32_t>();
  f.range_id = r.Get<std::uint32_t>();
  const auto bit_count = r.Get<std::uint64_t>();
  if (bit_count / 8 > body - r.pos()) r.Fail("truncated payload");
  const std::size_t payload_bytes = (bit_count + 7) / 8;
  if (r.pos() + payload_bytes != body) r.Fail("length mismatch");
  f.payload = UnpackBits(r.Take(payload_bytes), bit_count);
  return f;
}

}  // namespace stockpile
