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

// One depletion round end to end: agree on u, prepare padded sorted inputs
// with fresh keys, evaluate the compiled circuit, and let every party read
// its own report off the opened key multiset.
//
// All parties live in one process here; each party's private state is kept
// in its own PartyState / PreparedInput and only crosses party boundaries
// through the mpc layer.

#ifndef STOCKPILE_SESSION_H_
#define STOCKPILE_SESSION_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stockpile/bits.h"
#include "stockpile/compiler.h"
#include "stockpile/mpc.h"
#include "stockpile/vulnid.h"

namespace stockpile {

using PartyId = mpc::PartyId;

struct StockpileEntry {
  std::optional<VulnIdentifier> identifier;
  HashedId id;
};

// A party's vulnerabilities. Duplicates are allowed here and removed during
// preparation.
class Stockpile {
 public:
  Stockpile(PartyId party, std::size_t sigma) : party_(party), sigma_(sigma) {}

  void Add(const HashedId& id);
  void Add(const VulnIdentifier& identifier);

  PartyId party() const { return party_; }
  std::size_t sigma() const { return sigma_; }
  const std::vector<StockpileEntry>& entries() const { return entries_; }
  // Distinct values, ascending.
  std::vector<HashedId> DistinctValues() const;

 private:
  PartyId party_;
  std::size_t sigma_;
  std::vector<StockpileEntry> entries_;
};

struct KeyPair {
  Bytes k0;
  Bytes k1;
};

struct InputRecord {
  HashedId v;
  bool dummy = false;
  KeyPair keys;
};

// One slot of a party's input list. Slots survive across epochs so that
// persisted v-shares stay attached to the same values.
struct Slot {
  HashedId v;
  bool dummy = false;
};

// Private state of one input party across epochs.
struct PartyState {
  PartyId party = 0;
  std::size_t sigma = 0;
  std::uint64_t epoch = 0;
  std::vector<Slot> slots;  // strictly ascending by v
  // Parallel to slots: 1 if the slot's v-shares were persisted in `epoch`.
  std::vector<std::uint8_t> persisted;
};

struct PreparedInput {
  PartyId party = 0;
  std::uint64_t epoch = 0;
  std::vector<InputRecord> records;
  // Real values only.
  std::map<HashedId, KeyPair> table;
  // Record indices whose v-shares come from the previous epoch.
  std::vector<std::uint32_t> persisted_records;
  // Slot list the records were built from (carried into the next epoch).
  PartyState state;
};

// Key width used by sessions: max(sigma, 64) unless set explicitly.
std::size_t SessionKeyBits(std::size_t sigma, std::size_t key_bits = 0);

// Sorts and dedupes the stockpile and pads it to u records with dummies drawn
// uniformly from the nonzero values not in the stockpile, so the list stays
// strictly ascending. Every record gets fresh keys; all 2u keys are distinct.
// Throws kTooManyEntries when there are more than u distinct values (or more
// than 2^sigma - 1 values are needed) and kRandomnessFailure when distinct
// keys cannot be drawn.
PreparedInput PrepareInputs(const Stockpile& stockpile, std::size_t u,
                            std::size_t key_bits, std::uint64_t epoch,
                            BitRng& rng);

// Next-epoch preparation from a persisted slot list: existing slots keep
// their values (and their persisted v-shares), missing slots are filled with
// fresh dummies up to u.
PreparedInput PrepareFromState(const PartyState& state, std::size_t u,
                               std::size_t key_bits, std::uint64_t epoch,
                               BitRng& rng);

// Adds entries to a party's slot list for the next epoch. Entries already
// present are ignored. Non-empty `removals` throw kRemovalAttempted.
PartyState EpochAdvance(const PartyState& state,
                        const std::vector<HashedId>& additions,
                        const std::vector<HashedId>& removals = {});

struct ReportLine {
  HashedId v;
  bool shared = false;
  std::size_t k1_count = 0;
  std::size_t k0_count = 0;

  friend bool operator==(const ReportLine&, const ReportLine&) = default;
};

struct IntersectionReport {
  PartyId party = 0;
  std::vector<ReportLine> lines;  // ascending by v

  std::vector<HashedId> SharedValues() const;
  friend bool operator==(const IntersectionReport&,
                         const IntersectionReport&) = default;
};

// Pure function of the party's own key table and the opened keys. Throws
// kProtocolCorruption when neither key of a real record was opened.
IntersectionReport InterpretOutput(PartyId party,
                                   const std::map<HashedId, KeyPair>& table,
                                   const std::vector<Bytes>& opened_keys);

// One line per vulnerability: "<hex> shared|exclusive".
void WriteReport(std::ostream& out, const IntersectionReport& report);

enum class ExecutionMode { kDirect, kOutsourced };
enum class Backend { kMpc, kPlaintext };

struct SessionConfig {
  std::vector<PartyId> active_parties;
  std::size_t sigma = 256;
  std::size_t key_bits = 0;  // 0 selects max(sigma, 64)
  VariantKind variant = VariantKind::kAtLeastTwo;
  std::size_t m = 2;
  // FixedPlusM: the z fixed parties; they get tags 0..z-1.
  std::vector<PartyId> fixed_parties;
  ExecutionMode mode = ExecutionMode::kDirect;
  std::size_t servers = 0;  // outsourced mode
  std::size_t shuffle_layers = 0;  // 0 selects one per computing party
  std::uint64_t epoch = 0;
  std::uint64_t seed = 0;
  Backend backend = Backend::kMpc;
  bool threaded = false;
  std::map<PartyId, std::string> endpoints;  // informational
  // Hash-per-line stockpile files, read by the command line tool.
  std::map<PartyId, std::string> input_files;

  std::size_t KeyBits() const { return SessionKeyBits(sigma, key_bits); }
  std::size_t ComputingParties() const {
    return mode == ExecutionMode::kDirect ? active_parties.size() : servers;
  }
  Variant MakeVariant() const;
  // Circuit configuration for inputs of u records per party.
  CircuitConfig Circuit(std::size_t u) const;
  // Throws kConfigInvalid.
  void Validate() const;
};

// INI format, see README for the keys.
SessionConfig ReadSessionConfig(std::istream& in);
// Hex SHA3-256 over a canonical rendering; parties compare it before any
// shares move.
std::string ConfigDigest(const SessionConfig& cfg);

// Maximum of the parties' private counts, evaluated as a circuit under MPC.
// Each count must be < 2^count_bits. Returns at least 1.
std::size_t NegotiateU(const std::vector<std::size_t>& counts,
                       std::uint64_t seed, std::size_t count_bits = 20);

// Persisted v-shares, keyed by (computing party, input party).
struct ShareStore {
  std::uint64_t epoch = 0;
  std::map<std::pair<PartyId, PartyId>, Bytes> blobs;
};

struct SessionFaults {
  // Swap two adjacent records of this party's input list before evaluation.
  std::optional<PartyId> unsorted_party;
};

struct RoundResult {
  std::map<PartyId, IntersectionReport> reports;
  std::vector<Bytes> opened_keys;
  GateCounts gates;
  std::uint64_t reactive_opens = 0;
  std::vector<mpc::Transcript> transcripts;  // empty for the plaintext backend
  // Outsourced mode: messages between input parties and servers.
  std::uint64_t input_party_messages = 0;
};

// Compiles (or reuses) the circuit and evaluates it. `persisted` supplies
// previous-epoch v-shares for records listed in persisted_records; when
// `persist_out` is set the v-shares of every input are stored there.
// Throws AbortUnsorted (party ids), kConfigMismatch, kTransportFailure.
RoundResult RunRound(const SessionConfig& cfg,
                     const std::vector<PreparedInput>& inputs,
                     const ShareStore* persisted = nullptr,
                     ShareStore* persist_out = nullptr,
                     const SessionFaults& faults = {});

// Throws kProtocolCorruption unless triples = ANDs, rounds = depth + reactive
// opens + 1 and every AND layer cost N-1 messages per party.
void CheckAccounting(const RoundResult& result, std::size_t computing_parties);

const CompiledCircuit& CompileCached(const CircuitConfig& cfg);

}  // namespace stockpile

#endif  // STOCKPILE_SESSION_H_
