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

#include "stockpile/ledger.h"

#include <algorithm>
#include <chrono>
#include <istream>
#include <iterator>
#include <ostream>
#include <unordered_map>

#include "json.hpp"
#include "stockpile/error.h"

namespace stockpile::ledger {
namespace {

constexpr char kMagic[4] = {'S', 'T', 'K', 'L'};
constexpr std::uint8_t kVersion = 1;

template <typename T>
void PutLe(Bytes& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
}

void PutString(Bytes& out, const std::string& s) {
  PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

class Cursor {
 public:
  explicit Cursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T Get() {
    Need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<T>(bytes_[pos_ + i]) << (8 * i));
    }
    pos_ += sizeof(T);
    return v;
  }

  std::string String() {
    auto n = Get<std::uint32_t>();
    Need(n);
    std::string s(bytes_.begin() + static_cast<long>(pos_),
                  bytes_.begin() + static_cast<long>(pos_ + n));
    pos_ += n;
    return s;
  }

  template <std::size_t N>
  std::array<std::uint8_t, N> Array() {
    Need(N);
    std::array<std::uint8_t, N> a{};
    std::copy_n(bytes_.begin() + static_cast<long>(pos_), N, a.begin());
    pos_ += N;
    return a;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void Need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorCode::kCorruptLedger, "truncated record");
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

Bytes DigestInput(const Block& b) {
  Bytes out;
  PutLe<std::uint64_t>(out, b.index);
  out.insert(out.end(), b.previous.begin(), b.previous.end());
  out.push_back(static_cast<std::uint8_t>(b.kind));
  PutLe<std::uint64_t>(out, b.time);
  PutString(out, b.submitter);
  PutString(out, b.payload);
  return out;
}

Bytes EncodeBlock(const Block& b) {
  Bytes out = DigestInput(b);
  out.insert(out.end(), b.digest.begin(), b.digest.end());
  return out;
}

Block DecodeBlock(std::span<const std::uint8_t> bytes) {
  Cursor c(bytes);
  Block b;
  b.index = c.Get<std::uint64_t>();
  b.previous = c.Array<32>();
  const auto kind = c.Get<std::uint8_t>();
  if (kind > 2) throw Error(ErrorCode::kCorruptLedger, "unknown block kind");
  b.kind = static_cast<PayloadKind>(kind);
  b.time = c.Get<std::uint64_t>();
  b.submitter = c.String();
  b.payload = c.String();
  b.digest = c.Array<32>();
  if (!c.done()) throw Error(ErrorCode::kCorruptLedger, "record length mismatch");
  return b;
}

bool IsDigestHex(const std::string& s) {
  if (s.size() != 128) return false;
  for (char ch : s) {
    if (!((ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'f'))) return false;
  }
  return true;
}

Bytes ReadAll(std::istream& in) {
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

Sha3_256Digest BlockDigest(const Block& block) {
  return Sha3_256(DigestInput(block));
}

Ledger::Ledger(bool role_split) : role_split_(role_split) {
  Block genesis;
  genesis.submitter = "genesis";
  genesis.payload = "stockpile-ledger";
  genesis.digest = BlockDigest(genesis);
  blocks_.push_back(std::move(genesis));
}

Ledger::Ledger(const Ledger& other)
    : role_split_(other.role_split_),
      writers_(other.writers_),
      readers_(other.readers_),
      blocks_(other.blocks_) {}

Ledger& Ledger::operator=(const Ledger& other) {
  if (this != &other) {
    role_split_ = other.role_split_;
    writers_ = other.writers_;
    readers_ = other.readers_;
    blocks_ = other.blocks_;
  }
  return *this;
}

void Ledger::RegisterWriter(const std::string& id) { writers_.insert(id); }
void Ledger::RegisterReader(const std::string& id) { readers_.insert(id); }

const Block& Ledger::Append(PayloadKind kind, const std::string& submitter,
                            std::string payload,
                            std::optional<std::uint64_t> time) {
  std::lock_guard<std::mutex> lock(append_mu_);
  Block b;
  b.index = blocks_.size();
  b.previous = blocks_.back().digest;
  b.kind = kind;
  b.time = time.value_or(b.index);
  b.submitter = submitter;
  b.payload = std::move(payload);
  b.digest = BlockDigest(b);
  blocks_.push_back(std::move(b));
  return blocks_.back();
}

const Block& Ledger::Submit(const std::string& writer,
                            const std::string& hash_hex,
                            std::optional<std::uint64_t> time) {
  const bool allowed =
      writers_.contains(writer) || (!role_split_ && readers_.contains(writer));
  if (!allowed) {
    throw Error(ErrorCode::kUnauthorizedWriter, "'" + writer + "' may not submit");
  }
  if (!IsDigestHex(hash_hex)) {
    throw Error(ErrorCode::kParseError,
                "submissions must be 128 lowercase hex digits of a digest");
  }
  return Append(PayloadKind::kSubmission, writer, hash_hex, time);
}

IntersectionResult Ledger::CheckIntersections(const std::string& reader) {
  const bool allowed =
      readers_.contains(reader) || (!role_split_ && writers_.contains(reader));
  if (!allowed) {
    throw Error(ErrorCode::kUnauthorizedReader, "'" + reader + "' may not check");
  }
  std::map<std::string, std::vector<std::uint64_t>> by_hash;
  std::map<std::string, std::set<std::string>> writers;
  for (const auto& b : blocks_) {
    if (b.kind != PayloadKind::kSubmission) continue;
    by_hash[b.payload].push_back(b.index);
    writers[b.payload].insert(b.submitter);
  }
  IntersectionResult result;
  nlohmann::json matches = nlohmann::json::object();
  for (auto& [hash, indices] : by_hash) {
    if (writers[hash].size() < 2) continue;
    matches[hash] = indices;
    result.matches[hash] = std::move(indices);
  }
  nlohmann::json event = {{"event", "checkIntersections"},
                          {"reader", reader},
                          {"matches", matches}};
  result.event_block =
      Append(PayloadKind::kIntersectionEvent, reader, event.dump(), std::nullopt)
          .index;
  return result;
}

std::optional<std::uint64_t> Ledger::VerifyChain() const {
  Sha3_256Digest previous{};
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Block& b = blocks_[i];
    if (b.index != i || b.previous != previous || BlockDigest(b) != b.digest) {
      return i;
    }
    if (i == 0 && b.kind != PayloadKind::kGenesis) return i;
    previous = b.digest;
  }
  return std::nullopt;
}

void Ledger::Write(std::ostream& out) const {
  Bytes header;
  header.push_back(role_split_ ? 1 : 0);
  PutLe<std::uint32_t>(header, static_cast<std::uint32_t>(writers_.size()));
  for (const auto& w : writers_) PutString(header, w);
  PutLe<std::uint32_t>(header, static_cast<std::uint32_t>(readers_.size()));
  for (const auto& r : readers_) PutString(header, r);

  Bytes file(std::begin(kMagic), std::end(kMagic));
  file.push_back(kVersion);
  PutLe<std::uint32_t>(file, static_cast<std::uint32_t>(header.size()));
  file.insert(file.end(), header.begin(), header.end());
  PutLe<std::uint32_t>(file, Crc32(header));
  PutLe<std::uint64_t>(file, blocks_.size());
  for (const auto& b : blocks_) {
    Bytes rec = EncodeBlock(b);
    PutLe<std::uint32_t>(file, static_cast<std::uint32_t>(rec.size()));
    file.insert(file.end(), rec.begin(), rec.end());
  }
  out.write(reinterpret_cast<const char*>(file.data()),
            static_cast<std::streamsize>(file.size()));
  if (!out) throw Error(ErrorCode::kIoError, "ledger write failed");
}

Ledger Ledger::Read(std::istream& in) {
  const Bytes file = ReadAll(in);
  Cursor c(file);
  auto magic = c.Array<4>();
  if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic))) {
    throw Error(ErrorCode::kCorruptLedger, "bad magic");
  }
  if (c.Get<std::uint8_t>() != kVersion) {
    throw Error(ErrorCode::kCorruptLedger, "unsupported version");
  }
  const auto header_len = c.Get<std::uint32_t>();
  if (header_len > file.size()) {
    throw Error(ErrorCode::kCorruptLedger, "bad header length");
  }
  Bytes header_bytes;
  for (std::uint32_t i = 0; i < header_len; ++i) {
    header_bytes.push_back(c.Get<std::uint8_t>());
  }
  if (c.Get<std::uint32_t>() != Crc32(header_bytes)) {
    throw Error(ErrorCode::kCorruptLedger, "header checksum mismatch");
  }
  Cursor h(header_bytes);
  const auto split = h.Get<std::uint8_t>();
  if (split > 1) throw Error(ErrorCode::kCorruptLedger, "bad role flag");
  Ledger ledger(split == 1);
  ledger.blocks_.clear();
  for (auto n = h.Get<std::uint32_t>(); n > 0; --n) ledger.writers_.insert(h.String());
  for (auto n = h.Get<std::uint32_t>(); n > 0; --n) ledger.readers_.insert(h.String());
  if (!h.done()) throw Error(ErrorCode::kCorruptLedger, "header length mismatch");

  const auto count = c.Get<std::uint64_t>();
  if (count == 0 || count > file.size()) {
    throw Error(ErrorCode::kCorruptLedger, "bad block count");
  }
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto len = c.Get<std::uint32_t>();
    if (len > file.size()) throw Error(ErrorCode::kCorruptLedger, "bad record length");
    Bytes rec;
    rec.reserve(len);
    for (std::uint32_t k = 0; k < len; ++k) rec.push_back(c.Get<std::uint8_t>());
    ledger.blocks_.push_back(DecodeBlock(rec));
  }
  if (!c.done()) throw Error(ErrorCode::kCorruptLedger, "trailing bytes");
  return ledger;
}

ToyIdentifierSpace::ToyIdentifierSpace(std::size_t bits) : bits_(bits) {
  if (bits < 1 || bits > 20) {
    throw Error(ErrorCode::kConfigInvalid, "toy space must have 1..20 bits");
  }
}

VulnIdentifier ToyIdentifierSpace::At(std::uint64_t i) const {
  if (i >= size()) throw Error(ErrorCode::kConfigInvalid, "index out of space");
  // vendor: high bits, product: low 8 bits, cwe and function fixed.
  VulnIdentifier id;
  id.cpe = "cpe:2.3:a:vendor" + std::to_string(i >> 8) + ":product" +
           std::to_string(i & 0xff) + ":1.0:*:*:*:*:*:*:*";
  id.cwe = 787;
  id.function = "parse_packet";
  return id;
}

AttackReport BruteForceAttack(const Ledger& copy,
                              const ToyIdentifierSpace& space) {
  const auto start = std::chrono::steady_clock::now();
  AttackReport report;
  std::unordered_map<std::string, std::vector<const Block*>> submitted;
  const Block* previous = nullptr;
  for (const auto& b : copy.blocks()) {
    if (b.kind != PayloadKind::kSubmission) continue;
    ++report.submissions;
    ++report.per_writer_submissions[b.submitter];
    if (!previous || previous->submitter != b.submitter) {
      ++report.per_writer_bursts[b.submitter];
    }
    previous = &b;
    submitted[b.payload].push_back(&b);
  }
  report.distinct_hashes = submitted.size();

  std::map<std::uint64_t, RecoveredEntry> found;
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    VulnIdentifier id = space.At(i);
    auto it = submitted.find(LedgerHashHex(id));
    ++report.enumerated;
    if (it == submitted.end()) continue;
    ++report.recovered_hashes;
    for (const Block* b : it->second) {
      found[b->index] = {b->index, b->time, b->submitter, b->payload, id};
    }
  }
  for (auto& [index, entry] : found) report.recovered.push_back(std::move(entry));
  report.recovery_rate =
      report.distinct_hashes == 0
          ? 1.0
          : static_cast<double>(report.recovered_hashes) /
                static_cast<double>(report.distinct_hashes);
  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

void WriteAttackReport(std::ostream& out, const AttackReport& report) {
  out << "enumerated " << report.enumerated << '\n'
      << "submissions " << report.submissions << '\n'
      << "distinct_hashes " << report.distinct_hashes << '\n'
      << "recovered_hashes " << report.recovered_hashes << '\n'
      << "recovery_rate " << report.recovery_rate << '\n'
      << "seconds " << report.seconds << '\n';
  for (const auto& [writer, n] : report.per_writer_submissions) {
    out << "writer " << writer << " submissions " << n << " bursts "
        << report.per_writer_bursts.at(writer) << '\n';
  }
  for (const auto& e : report.recovered) {
    out << "recovered block " << e.block << " time " << e.time << " writer "
        << e.writer << " identifier " << Canonicalize(e.identifier) << '\n';
  }
}

}  // namespace stockpile::ledger
