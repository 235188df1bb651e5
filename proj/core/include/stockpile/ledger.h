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

// In-process model of the hash-chain prototype: writers append hashed
// identifiers, readers run checkIntersections, and every holder of a ledger
// copy can brute-force the hashes offline. The attack demonstrator is the
// point of this module.

#ifndef STOCKPILE_LEDGER_H_
#define STOCKPILE_LEDGER_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stockpile/crypto.h"
#include "stockpile/vulnid.h"

namespace stockpile::ledger {

enum class PayloadKind : std::uint8_t {
  kGenesis = 0,
  kSubmission = 1,
  kIntersectionEvent = 2,
};

struct Block {
  std::uint64_t index = 0;
  Sha3_256Digest previous{};
  PayloadKind kind = PayloadKind::kGenesis;
  // Logical submission time, public to every ledger holder.
  std::uint64_t time = 0;
  std::string submitter;
  // Submission: 128 lowercase hex chars of a SHA3-512 digest.
  // Event: compact JSON with the reader and the matches.
  std::string payload;
  Sha3_256Digest digest{};

  friend bool operator==(const Block&, const Block&) = default;
};

// SHA3-256 over index, previous digest, kind, time, submitter and payload.
Sha3_256Digest BlockDigest(const Block& block);

struct IntersectionResult {
  // hash -> indices of the submission blocks carrying it.
  std::map<std::string, std::vector<std::uint64_t>> matches;
  std::uint64_t event_block = 0;
};

class Ledger {
 public:
  // With role_split, writers may only submit and readers may only check;
  // without it every registered participant may do both.
  explicit Ledger(bool role_split = true);

  Ledger(const Ledger& other);
  Ledger& operator=(const Ledger& other);

  void RegisterWriter(const std::string& id);
  void RegisterReader(const std::string& id);

  // Throws kUnauthorizedWriter, or kParseError when hash_hex is not a
  // 512-bit hex digest. `time` defaults to the next logical tick.
  const Block& Submit(const std::string& writer, const std::string& hash_hex,
                      std::optional<std::uint64_t> time = std::nullopt);

  // A match is a hash submitted by at least two distinct writers. The result
  // is appended as an event block. Throws kUnauthorizedReader.
  IntersectionResult CheckIntersections(const std::string& reader);

  // nullopt when intact, otherwise the first block that fails.
  std::optional<std::uint64_t> VerifyChain() const;

  const std::vector<Block>& blocks() const { return blocks_; }
  // For tamper experiments only.
  std::vector<Block>& mutable_blocks() { return blocks_; }
  bool role_split() const { return role_split_; }
  const std::set<std::string>& writers() const { return writers_; }
  const std::set<std::string>& readers() const { return readers_; }

  // File: "STKL", u8 version, header (roles) with CRC-32, u64 block count,
  // then u32 length-prefixed block records. Read throws kCorruptLedger on
  // structural damage; content tampering is left to VerifyChain.
  void Write(std::ostream& out) const;
  static Ledger Read(std::istream& in);

 private:
  const Block& Append(PayloadKind kind, const std::string& submitter,
                      std::string payload, std::optional<std::uint64_t> time);

  bool role_split_;
  std::set<std::string> writers_;
  std::set<std::string> readers_;
  std::vector<Block> blocks_;
  mutable std::mutex append_mu_;
};

// Deterministic enumeration of 2^bits distinct identifiers (bits <= 20).
class ToyIdentifierSpace {
 public:
  explicit ToyIdentifierSpace(std::size_t bits);

  std::uint64_t size() const { return std::uint64_t{1} << bits_; }
  VulnIdentifier At(std::uint64_t i) const;

 private:
  std::size_t bits_;
};

struct RecoveredEntry {
  std::uint64_t block = 0;
  std::uint64_t time = 0;
  std::string writer;
  std::string hash;
  VulnIdentifier identifier;
};

struct AttackReport {
  std::uint64_t enumerated = 0;
  std::uint64_t submissions = 0;
  std::uint64_t distinct_hashes = 0;
  std::uint64_t recovered_hashes = 0;
  double recovery_rate = 0;  // recovered / distinct
  double seconds = 0;
  std::vector<RecoveredEntry> recovered;  // in block order
  std::map<std::string, std::uint64_t> per_writer_submissions;
  // Runs of consecutive blocks from one writer, which tie hashes to a party
  // by timing even without the submitter field.
  std::map<std::string, std::uint64_t> per_writer_bursts;
};

// Hashes every identifier of `space` and looks it up in the ledger copy.
AttackReport BruteForceAttack(const Ledger& copy,
                              const ToyIdentifierSpace& space);

void WriteAttackReport(std::ostream& out, const AttackReport& report);

}  // namespace stockpile::ledger

#endif  // STOCKPILE_LEDGER_H_
