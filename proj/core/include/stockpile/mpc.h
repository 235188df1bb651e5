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

// Semi-honest N-party evaluation of Boolean circuits under XOR secret
// sharing. AND gates consume dealer-generated Beaver triples and are batched
// per AND layer, so one evaluation costs exactly
//
//   rounds = AND depth + reactive open points + 1 (output open)
//
// communication rounds, with every party sending one message to each peer
// per round. Input distribution happens in a separate setup exchange that is
// accounted for on its own.
//
// Each party runs a PartyEvaluator that talks to its peers only through a
// Transport endpoint. The evaluator is a two-phase state machine (SendPhase,
// ReceivePhase) so the same code runs in lockstep on one thread or with one
// thread per party.

#ifndef STOCKPILE_MPC_H_
#define STOCKPILE_MPC_H_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stockpile/bits.h"
#include "stockpile/circuit.h"
#include "stockpile/wire_format.h"

namespace stockpile::mpc {

using PartyId = std::uint32_t;

// One party's XOR shares of a group of wires.
struct ShareVector {
  PartyId party = 0;
  std::uint32_t range_id = 0;
  BitVector bits;

  friend bool operator==(const ShareVector&, const ShareVector&) = default;
};

// Owner `owner` keeps bits ^ (xor of the N-1 random shares it hands out).
std::vector<ShareVector> ShareInput(PartyId owner, std::span<const std::uint8_t> bits,
                                    std::size_t n_parties, BitRng& rng,
                                    std::uint32_t range_id = 0);
// Harness-only: XOR of all shares.
BitVector Reconstruct(std::span<const ShareVector> shares);

// One party's slice of the dealer's triples.
class TriplePool {
 public:
  TriplePool() = default;
  TriplePool(BitVector a, BitVector b, BitVector c);

  std::size_t size() const { return a_.size(); }
  std::size_t remaining() const { return a_.size() - next_; }
  std::size_t consumed() const { return next_; }

  // Index of the first of `count` fresh triples. Throws kTriplePoolExhausted.
  std::size_t Take(std::size_t count);

  const BitVector& a() const { return a_; }
  const BitVector& b() const { return b_; }
  const BitVector& c() const { return c_; }

 private:
  BitVector a_, b_, c_;
  std::size_t next_ = 0;
};

// Trusted dealer, run before the protocol. Deterministic in `seed`.
std::vector<TriplePool> DealTriples(std::size_t n_parties, std::size_t count,
                                    std::uint64_t seed);

struct Transcript {
  std::uint64_t messages_sent = 0;
  std::uint64_t bits_sent = 0;   // payload bits
  std::uint64_t bytes_sent = 0;  // framed bytes
  std::uint64_t rounds = 0;      // evaluation rounds, setup excluded
  std::uint64_t triples_consumed = 0;
  std::uint64_t and_layers = 0;
  std::uint64_t and_layer_messages = 0;
  // Largest and smallest number of messages sent in one AND layer.
  std::uint64_t max_layer_messages = 0;
  std::uint64_t min_layer_messages = 0;
  std::uint64_t reactive_opens = 0;
  std::uint64_t setup_messages = 0;
  std::uint64_t setup_bits = 0;
};

// Point-to-point, FIFO per ordered party pair.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void Send(PartyId to, Bytes frame) = 0;
  // Throws kTransportFailure when nothing arrives in time.
  virtual Bytes Receive(PartyId from) = 0;
};

// In-process queues between n parties. `timeout` of zero makes Receive fail
// immediately on an empty queue, which is what lockstep drivers want.
class LocalNetwork {
 public:
  using Tamper = std::function<void(PartyId from, PartyId to, Bytes& frame)>;

  LocalNetwork(std::size_t n_parties, std::chrono::milliseconds timeout);
  ~LocalNetwork();
  LocalNetwork(const LocalNetwork&) = delete;
  LocalNetwork& operator=(const LocalNetwork&) = delete;

  Transport& endpoint(PartyId party);
  std::size_t size() const { return n_; }
  // Fault injection: called on every frame before it is queued.
  void set_tamper(Tamper tamper) { tamper_ = std::move(tamper); }

 private:
  class Endpoint;
  struct Channel {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<Bytes> queue;
  };
  Channel& channel(PartyId from, PartyId to) { return *channels_[from * n_ + to]; }

  std::size_t n_;
  std::chrono::milliseconds timeout_;
  std::vector<std::unique_ptr<Channel>> channels_;
  std::vector<std::unique_ptr<Endpoint>> endpoints_;
  Tamper tamper_;
};

// Evaluation schedule derived from a circuit: XOR gates run locally between
// communication steps; each step is an AND layer, a reactive open or the
// final output open.
struct EvalPlan {
  enum class StepKind : std::uint8_t { kAndLayer, kReactiveOpen, kOutputOpen };
  struct Step {
    StepKind kind;
    std::vector<std::uint32_t> xor_gates_before;
    std::vector<std::uint32_t> and_gates;
    std::size_t open_index = 0;  // into circuit.reactive_opens
  };
  std::vector<Step> steps;
  std::uint64_t and_count = 0;
  std::uint64_t and_depth = 0;

  std::uint64_t rounds() const { return steps.size(); }
};

EvalPlan BuildEvalPlan(const BooleanCircuit& circuit);

// Payload bits moved by all n parties together when every input bit is
// shared fresh: its holder sends one mask to each of the n-1 peers, and each
// AND (two masked bits) and each opened bit is broadcast by every party.
struct TrafficModel {
  std::uint64_t setup_bits = 0;
  std::uint64_t online_bits = 0;

  std::uint64_t total_bits() const { return setup_bits + online_bits; }
};
TrafficModel ModelTraffic(std::uint64_t input_bits, std::uint64_t and_count,
                          std::uint64_t opened_bits, std::size_t n_parties);

// What to do with the values of reactive open point i: when abort_on_one is
// set and bit j is 1, evaluation stops with AbortUnsorted naming blame[j]
// (or j itself when blame is empty).
struct ReactiveRule {
  bool abort_on_one = true;
  std::vector<std::size_t> blame;
};
using ReactivePlan = std::vector<ReactiveRule>;

// How the bits of one circuit owner enter the computation.
//
// The holder party (if any) secret-shares its plaintext in the setup
// exchange. Positions listed in preset_positions are not re-shared: every
// party uses its own preset share for them instead, which is how persisted
// shares from an earlier epoch and shares produced by external input parties
// (outsourced mode) are fed in. preset_positions is public and identical at
// every party; plaintext is known to the holder only.
struct InputProvision {
  std::optional<PartyId> holder;
  std::optional<BitVector> plaintext;
  std::vector<std::uint32_t> preset_positions;
  BitVector preset_shares;
};
using PartyProvisions = std::map<OwnerId, InputProvision>;

class PartyEvaluator {
 public:
  PartyEvaluator(PartyId self, std::size_t n_parties,
                 const BooleanCircuit& circuit, const EvalPlan& plan,
                 Transport& transport, TriplePool& pool, BitRng rng,
                 std::uint64_t epoch, ReactivePlan reactive = {});

  void Provide(PartyProvisions provisions);

  // Runs local work and sends this step's messages. Returns false once the
  // evaluation is complete.
  bool SendPhase();
  // Receives the peers' messages for the current step and finishes it.
  // Throws AbortUnsorted when a reactive rule fires.
  void ReceivePhase();

  bool done() const { return step_ > plan_.steps.size(); }
  const BitVector& outputs() const { return outputs_; }
  const std::vector<BitVector>& reactive_values() const { return reactive_; }
  const Transcript& transcript() const { return transcript_; }
  PartyId self() const { return self_; }

  // This party's shares of an owner's input bits, available after setup.
  ShareVector InputShares(OwnerId owner) const;
  // Shares of arbitrary wires, for harness reconstruction.
  ShareVector WireShares(std::span<const WireId> wires) const;

  // Extra open of arbitrary wires after evaluation (one more round).
  void OpenSend(std::span<const WireId> wires);
  BitVector OpenReceive();

 private:
  void SendToPeers(FrameKind kind, std::uint32_t range_id,
                   const BitVector& payload);
  std::vector<BitVector> ReceiveFromPeers(FrameKind kind,
                                          std::uint32_t range_id,
                                          std::size_t bits);
  void RunXors(const std::vector<std::uint32_t>& gates);
  void SetupSend();
  void SetupReceive();
  void FinishReactive(const EvalPlan::Step& step, const BitVector& values);

  PartyId self_;
  std::size_t n_;
  const BooleanCircuit& circuit_;
  const EvalPlan& plan_;
  Transport& transport_;
  TriplePool& pool_;
  BitRng rng_;
  std::uint64_t epoch_;
  ReactivePlan reactive_rules_;

  PartyProvisions provisions_;
  BitVector wires_;
  // 0 = setup, 1..steps = plan step index + 1, steps + 1 = done.
  std::size_t step_ = 0;
  std::uint32_t round_ = 0;
  std::size_t triple_base_ = 0;
  BitVector pending_;  // d||e of the current AND layer, or open shares
  std::vector<WireId> extra_open_;
  BitVector outputs_;
  std::vector<BitVector> reactive_;
  Transcript transcript_;
};

struct EvalOptions {
  std::uint64_t epoch = 0;
  std::uint64_t seed = 0;
  bool threaded = false;
  std::chrono::milliseconds timeout{30000};
  ReactivePlan reactive;
  LocalNetwork::Tamper tamper;
};

struct SharedEvaluation {
  BitVector outputs;
  std::vector<BitVector> reactive_values;
  std::vector<Transcript> transcripts;
  // input_shares[party][owner]: kept for persistence.
  std::vector<std::map<OwnerId, ShareVector>> input_shares;
};

// Runs all n parties in-process, in lockstep or one thread per party. All
// parties must open identical outputs; a disagreement is kTransportFailure.
SharedEvaluation EvalShared(const BooleanCircuit& circuit,
                            const EvalPlan& plan, std::size_t n_parties,
                            std::vector<PartyProvisions> provisions,
                            std::vector<TriplePool>& pools,
                            const EvalOptions& options);

// Direct-mode convenience: owner o's plaintext is held by holder(o).
SharedEvaluation EvalShared(const BooleanCircuit& circuit,
                            std::size_t n_parties, const PartyInputs& inputs,
                            const std::function<PartyId(OwnerId)>& holder,
                            const EvalOptions& options);

// Share persistence. The blob carries the frame header and a checksum over
// the whole blob.
Bytes PersistShares(const ShareVector& shares, std::uint64_t epoch);
// Throws kCorruptBlob on damage and kEpochMismatch when the blob belongs to
// another party or epoch.
ShareVector LoadShares(std::span<const std::uint8_t> blob, PartyId party,
                       std::uint64_t epoch);

}  // namespace stockpile::mpc

#endif  // STOCKPILE_MPC_H_
