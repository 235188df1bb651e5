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

#include "stockpile/mpc.h"

#include <algorithm>
#include <exception>
#include <thread>

#include "stockpile/error.h"

namespace stockpile::mpc {

std::vector<ShareVector> ShareInput(PartyId owner,
                                    std::span<const std::uint8_t> bits,
                                    std::size_t n_parties, BitRng& rng,
                                    std::uint32_t range_id) {
  if (owner >= n_parties) {
    throw Error(ErrorCode::kConfigInvalid, "input owner is not a party");
  }
  std::vector<ShareVector> shares(n_parties);
  BitVector correction(bits.begin(), bits.end());
  for (std::size_t p = 0; p < n_parties; ++p) {
    shares[p].party = static_cast<PartyId>(p);
    shares[p].range_id = range_id;
    if (p == owner) continue;
    shares[p].bits = rng.Bits(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      correction[i] ^= shares[p].bits[i];
    }
  }
  shares[owner].bits = std::move(correction);
  return shares;
}

BitVector Reconstruct(std::span<const ShareVector> shares) {
  if (shares.empty()) return {};
  BitVector out(shares[0].bits.size(), 0);
  for (const auto& s : shares) {
    if (s.bits.size() != out.size()) {
      throw Error(ErrorCode::kWidthMismatch, "share vectors differ in length");
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= s.bits[i];
  }
  return out;
}

TriplePool::TriplePool(BitVector a, BitVector b, BitVector c)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  if (a_.size() != b_.size() || a_.size() != c_.size()) {
    throw Error(ErrorCode::kWidthMismatch, "triple pool columns differ");
  }
}

std::size_t TriplePool::Take(std::size_t count) {
  if (count > remaining()) {
    throw Error(ErrorCode::kTriplePoolExhausted,
                "need " + std::to_string(count) + " triples, " +
                    std::to_string(remaining()) + " left");
  }
  std::size_t first = next_;
  next_ += count;
  return first;
}

std::vector<TriplePool> DealTriples(std::size_t n_parties, std::size_t count,
                                    std::uint64_t seed) {
  BitRng rng(seed);
  std::vector<BitVector> a(n_parties), b(n_parties), c(n_parties);
  BitVector sum_a(count, 0), sum_b(count, 0), sum_c(count, 0);
  for (std::size_t p = 0; p < n_parties; ++p) {
    a[p] = rng.Bits(count);
    b[p] = rng.Bits(count);
    for (std::size_t t = 0; t < count; ++t) {
      sum_a[t] ^= a[p][t];
      sum_b[t] ^= b[p][t];
    }
    if (p + 1 < n_parties) {
      c[p] = rng.Bits(count);
      for (std::size_t t = 0; t < count; ++t) sum_c[t] ^= c[p][t];
    }
  }
  if (n_parties > 0) {
    BitVector& last = c[n_parties - 1];
    last.resize(count);
    for (std::size_t t = 0; t < count; ++t) {
      last[t] = (sum_a[t] & sum_b[t]) ^ sum_c[t];
    }
  }
  std::vector<TriplePool> pools;
  pools.reserve(n_parties);
  for (std::size_t p = 0; p < n_parties; ++p) {
    pools.emplace_back(std::move(a[p]), std::move(b[p]), std::move(c[p]));
  }
  return pools;
}

class LocalNetwork::Endpoint : public Transport {
 public:
  Endpoint(LocalNetwork& net, PartyId self) : net_(net), self_(self) {}

  void Send(PartyId to, Bytes frame) override {
    if (to >= net_.n_ || to == self_) {
      throw Error(ErrorCode::kTransportFailure,
                  "bad destination " + std::to_string(to));
    }
    if (net_.tamper_) net_.tamper_(self_, to, frame);
    Channel& ch = net_.channel(self_, to);
    {
      std::lock_guard<std::mutex> lock(ch.mu);
      ch.queue.push_back(std::move(frame));
    }
    ch.cv.notify_one();
  }

  Bytes Receive(PartyId from) override {
    if (from >= net_.n_ || from == self_) {
      throw Error(ErrorCode::kTransportFailure,
                  "bad source " + std::to_string(from));
    }
    Channel& ch = net_.channel(from, self_);
    std::unique_lock<std::mutex> lock(ch.mu);
    if (!ch.cv.wait_for(lock, net_.timeout_,
                        [&] { return !ch.queue.empty(); })) {
      throw Error(ErrorCode::kTransportFailure,
                  "party " + std::to_string(self_) + " timed out waiting for " +
                      std::to_string(from));
    }
    Bytes frame = std::move(ch.queue.front());
    ch.queue.pop_front();
    return frame;
  }

 private:
  LocalNetwork& net_;
  PartyId self_;
};

LocalNetwork::LocalNetwork(std::size_t n_parties,
                           std::chrono::milliseconds timeout)
    : n_(n_parties), timeout_(timeout) {
  channels_.reserve(n_ * n_);
  for (std::size_t i = 0; i < n_ * n_; ++i) {
    channels_.push_back(std::make_unique<Channel>());
  }
  for (std::size_t p = 0; p < n_; ++p) {
    endpoints_.push_back(
        std::make_unique<Endpoint>(*this, static_cast<PartyId>(p)));
  }
}

LocalNetwork::~LocalNetwork() = default;

Transport& LocalNetwork::endpoint(PartyId party) { return *endpoints_.at(party); }

TrafficModel ModelTraffic(std::uint64_t input_bits, std::uint64_t and_count,
                          std::uint64_t opened_bits, std::size_t n_parties) {
  const std::uint64_t n = n_parties;
  TrafficModel m;
  m.setup_bits = input_bits * (n - 1);
  m.online_bits = (2 * and_count + opened_bits) * n * (n - 1);
  return m;
}

EvalPlan BuildEvalPlan(const BooleanCircuit& circuit) {
  EvalPlan plan;
  // Level of a wire relative to the segment it was produced in; wires from
  // earlier segments (or inputs) count as level 0.
  std::vector<std::uint32_t> level(circuit.wire_count, 0);
  std::vector<std::uint32_t> segment(circuit.wire_count, 0);
  std::uint32_t current = 1;

  std::vector<std::uint32_t> carried_xors;
  auto flush_segment = [&](std::size_t begin, std::size_t end) {
    std::vector<std::vector<std::uint32_t>> xors(1), ands(1);
    auto eff = [&](WireId w) {
      return segment[w] == current ? level[w] : 0u;
    };
    for (std::size_t g = begin; g < end; ++g) {
      const Gate& gate = circuit.gates[g];
      std::uint32_t lvl = std::max(eff(gate.in0), eff(gate.in1));
      if (gate.kind == GateKind::kAnd) ++lvl;
      level[gate.out] = lvl;
      segment[gate.out] = current;
      if (lvl >= xors.size()) {
        xors.resize(lvl + 1);
        ands.resize(lvl + 1);
      }
      if (gate.kind == GateKind::kAnd) {
        ands[lvl].push_back(static_cast<std::uint32_t>(g));
        ++plan.and_count;
      } else {
        xors[lvl].push_back(static_cast<std::uint32_t>(g));
      }
    }
    carried_xors.insert(carried_xors.end(), xors[0].begin(), xors[0].end());
    for (std::size_t l = 1; l < ands.size(); ++l) {
      EvalPlan::Step step{EvalPlan::StepKind::kAndLayer, {}, {}, 0};
      step.xor_gates_before = std::move(carried_xors);
      step.and_gates = std::move(ands[l]);
      carried_xors = std::move(xors[l]);
      plan.steps.push_back(std::move(step));
    }
    plan.and_depth += ands.size() - 1;
    ++current;
  };

  std::size_t begin = 0;
  for (std::size_t i = 0; i < circuit.reactive_opens.size(); ++i) {
    const std::size_t boundary = circuit.reactive_opens[i].gate_boundary;
    if (boundary < begin || boundary > circuit.gates.size()) {
      throw Error(ErrorCode::kMalformedCircuit,
                  "reactive open points out of order");
    }
    flush_segment(begin, boundary);
    begin = boundary;
    EvalPlan::Step step{EvalPlan::StepKind::kReactiveOpen, {}, {}, i};
    step.xor_gates_before = std::move(carried_xors);
    carried_xors.clear();
    plan.steps.push_back(std::move(step));
  }
  flush_segment(begin, circuit.gates.size());
  EvalPlan::Step out{EvalPlan::StepKind::kOutputOpen, {}, {}, 0};
  out.xor_gates_before = std::move(carried_xors);
  plan.steps.push_back(std::move(out));
  return plan;
}

PartyEvaluator::PartyEvaluator(PartyId self, std::size_t n_parties,
                               const BooleanCircuit& circuit,
                               const EvalPlan& plan, Transport& transport,
                               TriplePool& pool, BitRng rng,
                               std::uint64_t epoch, ReactivePlan reactive)
    : self_(self),
      n_(n_parties),
      circuit_(circuit),
      plan_(plan),
      transport_(transport),
      pool_(pool),
      rng_(std::move(rng)),
      epoch_(epoch),
      reactive_rules_(std::move(reactive)),
      wires_(circuit.wire_count, 0) {
  // Constant one is held by party 0 only, so shares XOR to 1.
  wires_[BooleanCircuit::kConstantOne] = self_ == 0 ? 1 : 0;
}

void PartyEvaluator::Provide(PartyProvisions provisions) {
  for (const auto& [owner, wires] : circuit_.input_map) {
    auto it = provisions.find(owner);
    if (it == provisions.end()) {
      if (wires.empty()) continue;
      throw Error(ErrorCode::kMissingInput,
                  "no provision for owner " + std::to_string(owner));
    }
    const InputProvision& p = it->second;
    if (p.preset_shares.size() != p.preset_positions.size()) {
      throw Error(ErrorCode::kWidthMismatch, "preset share count");
    }
    for (auto pos : p.preset_positions) {
      if (pos >= wires.size()) {
        throw Error(ErrorCode::kWidthMismatch, "preset position out of range");
      }
    }
    if (p.holder == self_) {
      if (!p.plaintext || p.plaintext->size() != wires.size()) {
        throw Error(ErrorCode::kWidthMismatch,
                    "owner " + std::to_string(owner) + " plaintext width");
      }
    } else if (!p.holder && p.preset_positions.size() != wires.size()) {
      throw Error(ErrorCode::kMissingInput,
                  "owner " + std::to_string(owner) +
                      " has neither a holder nor full preset shares");
    }
  }
  provisions_ = std::move(provisions);
}

namespace {

// Positions of an owner's input that its holder shares in the setup round.
std::vector<std::uint32_t> FreshPositions(const InputProvision& p,
                                          std::size_t width) {
  std::vector<std::uint8_t> preset(width, 0);
  for (auto pos : p.preset_positions) preset[pos] = 1;
  std::vector<std::uint32_t> fresh;
  for (std::size_t i = 0; i < width; ++i) {
    if (!preset[i]) fresh.push_back(static_cast<std::uint32_t>(i));
  }
  return fresh;
}

}  // namespace

void PartyEvaluator::SendToPeers(FrameKind kind, std::uint32_t range_id,
                                 const BitVector& payload) {
  Frame f{kind, epoch_, round_, self_, range_id, payload};
  Bytes bytes = EncodeFrame(f);
  for (PartyId p = 0; p < n_; ++p) {
    if (p == self_) continue;
    transport_.Send(p, bytes);
  }
  const std::uint64_t peers = n_ - 1;
  transcript_.messages_sent += peers;
  transcript_.bits_sent += peers * payload.size();
  transcript_.bytes_sent += peers * bytes.size();
}

std::vector<BitVector> PartyEvaluator::ReceiveFromPeers(
    FrameKind kind, std::uint32_t range_id, std::size_t bits) {
  std::vector<BitVector> out(n_);
  for (PartyId p = 0; p < n_; ++p) {
    if (p == self_) continue;
    Frame f = DecodeFrame(transport_.Receive(p), ErrorCode::kTransportFailure);
    if (f.epoch != epoch_) {
      throw Error(ErrorCode::kEpochMismatch,
                  "message from epoch " + std::to_string(f.epoch));
    }
    if (f.kind != kind || f.round != round_ || f.sender != p ||
        f.range_id != range_id || f.payload.size() != bits) {
      throw Error(ErrorCode::kTransportFailure,
                  "unexpected message from party " + std::to_string(p) +
                      " in round " + std::to_string(round_));
    }
    out[p] = std::move(f.payload);
  }
  return out;
}

void PartyEvaluator::SetupSend() {
  for (auto& [owner, p] : provisions_) {
    const auto& wires = circuit_.input_map.at(owner);
    for (std::size_t i = 0; i < p.preset_positions.size(); ++i) {
      wires_[wires[p.preset_positions[i]]] = p.preset_shares[i] & 1;
    }
  }
  // One message per peer with the fresh shares of every owner this party
  // holds, in owner order.
  std::vector<BitVector> outgoing(n_);
  bool any = false;
  for (auto& [owner, p] : provisions_) {
    if (p.holder != self_) continue;
    const auto& wires = circuit_.input_map.at(owner);
    auto fresh = FreshPositions(p, wires.size());
    if (fresh.empty()) continue;
    any = true;
    BitVector own(fresh.size());
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      own[i] = (*p.plaintext)[fresh[i]] & 1;
    }
    for (PartyId q = 0; q < n_; ++q) {
      if (q == self_) continue;
      BitVector r = rng_.Bits(fresh.size());
      for (std::size_t i = 0; i < fresh.size(); ++i) own[i] ^= r[i];
      outgoing[q].insert(outgoing[q].end(), r.begin(), r.end());
    }
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      wires_[wires[fresh[i]]] = own[i];
    }
  }
  if (!any) return;
  for (PartyId q = 0; q < n_; ++q) {
    if (q == self_) continue;
    Frame f{FrameKind::kInputShares, epoch_, round_, self_, 0, outgoing[q]};
    Bytes bytes = EncodeFrame(f);
    transcript_.setup_messages += 1;
    transcript_.setup_bits += outgoing[q].size();
    transcript_.bytes_sent += bytes.size();
    transport_.Send(q, std::move(bytes));
  }
}

void PartyEvaluator::SetupReceive() {
  for (PartyId q = 0; q < n_; ++q) {
    if (q == self_) continue;
    std::vector<std::pair<OwnerId, std::vector<std::uint32_t>>> expected;
    std::size_t total = 0;
    for (const auto& [owner, p] : provisions_) {
      if (p.holder != q) continue;
      auto fresh = FreshPositions(p, circuit_.input_map.at(owner).size());
      total += fresh.size();
      expected.emplace_back(owner, std::move(fresh));
    }
    if (total == 0) continue;
    Frame f = DecodeFrame(transport_.Receive(q), ErrorCode::kTransportFailure);
    if (f.epoch != epoch_) {
      throw Error(ErrorCode::kEpochMismatch,
                  "input shares from epoch " + std::to_string(f.epoch));
    }
    if (f.kind != FrameKind::kInputShares || f.sender != q ||
        f.round != round_ || f.payload.size() != total) {
      throw Error(ErrorCode::kTransportFailure,
                  "bad input shares from party " + std::to_string(q));
    }
    std::size_t k = 0;
    for (const auto& [owner, fresh] : expected) {
      const auto& wires = circuit_.input_map.at(owner);
      for (auto pos : fresh) wires_[wires[pos]] = f.payload[k++];
    }
  }
}

void PartyEvaluator::RunXors(const std::vector<std::uint32_t>& gates) {
  for (auto g : gates) {
    const Gate& gate = circuit_.gates[g];
    wires_[gate.out] = wires_[gate.in0] ^ wires_[gate.in1];
  }
}

bool PartyEvaluator::SendPhase() {
  if (step_ == 0) {
    SetupSend();
    return true;
  }
  if (step_ > plan_.steps.size()) return false;
  const auto& step = plan_.steps[step_ - 1];
  round_ = static_cast<std::uint32_t>(step_);
  RunXors(step.xor_gates_before);
  const std::uint32_t range_id = static_cast<std::uint32_t>(step_ - 1);
  switch (step.kind) {
    case EvalPlan::StepKind::kAndLayer: {
      const std::size_t k = step.and_gates.size();
      triple_base_ = pool_.Take(k);
      pending_.assign(2 * k, 0);
      for (std::size_t i = 0; i < k; ++i) {
        const Gate& gate = circuit_.gates[step.and_gates[i]];
        pending_[i] = wires_[gate.in0] ^ pool_.a()[triple_base_ + i];
        pending_[k + i] = wires_[gate.in1] ^ pool_.b()[triple_base_ + i];
      }
      SendToPeers(FrameKind::kAndLayer, range_id, pending_);
      const std::uint64_t sent = n_ - 1;
      if (transcript_.and_layers == 0) {
        transcript_.min_layer_messages = sent;
      }
      transcript_.min_layer_messages =
          std::min(transcript_.min_layer_messages, sent);
      transcript_.max_layer_messages =
          std::max(transcript_.max_layer_messages, sent);
      transcript_.and_layer_messages += sent;
      transcript_.and_layers += 1;
      transcript_.triples_consumed += k;
      break;
    }
    case EvalPlan::StepKind::kReactiveOpen:
    case EvalPlan::StepKind::kOutputOpen: {
      const auto& wires = step.kind == EvalPlan::StepKind::kOutputOpen
                              ? circuit_.output_wires
                              : circuit_.reactive_opens[step.open_index].wires;
      pending_.resize(wires.size());
      for (std::size_t i = 0; i < wires.size(); ++i) {
        pending_[i] = wires_[wires[i]];
      }
      SendToPeers(FrameKind::kOpen, range_id, pending_);
      break;
    }
  }
  transcript_.rounds += 1;
  return true;
}

void PartyEvaluator::ReceivePhase() {
  if (step_ == 0) {
    SetupReceive();
    step_ = 1;
    return;
  }
  if (step_ > plan_.steps.size()) return;
  const auto& step = plan_.steps[step_ - 1];
  const std::uint32_t range_id = static_cast<std::uint32_t>(step_ - 1);
  ++step_;
  if (step.kind == EvalPlan::StepKind::kAndLayer) {
    auto peer = ReceiveFromPeers(FrameKind::kAndLayer, range_id, pending_.size());
    BitVector opened = pending_;
    for (PartyId p = 0; p < n_; ++p) {
      if (p == self_) continue;
      for (std::size_t i = 0; i < opened.size(); ++i) opened[i] ^= peer[p][i];
    }
    const std::size_t k = step.and_gates.size();
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint8_t d = opened[i];
      const std::uint8_t e = opened[k + i];
      const std::size_t t = triple_base_ + i;
      std::uint8_t z = pool_.c()[t] ^ (d & pool_.b()[t]) ^ (e & pool_.a()[t]);
      if (self_ == 0) z ^= d & e;
      wires_[circuit_.gates[step.and_gates[i]].out] = z;
    }
    return;
  }
  auto peer = ReceiveFromPeers(FrameKind::kOpen, range_id, pending_.size());
  BitVector values = pending_;
  for (PartyId p = 0; p < n_; ++p) {
    if (p == self_) continue;
    for (std::size_t i = 0; i < values.size(); ++i) values[i] ^= peer[p][i];
  }
  if (step.kind == EvalPlan::StepKind::kOutputOpen) {
    outputs_ = std::move(values);
  } else {
    FinishReactive(step, values);
  }
}

void PartyEvaluator::FinishReactive(const EvalPlan::Step& step,
                                    const BitVector& values) {
  reactive_.push_back(values);
  transcript_.reactive_opens += 1;
  ReactiveRule rule;
  if (step.open_index < reactive_rules_.size()) {
    rule = reactive_rules_[step.open_index];
  }
  if (!rule.abort_on_one) return;
  std::vector<std::size_t> offenders;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!values[j]) continue;
    offenders.push_back(j < rule.blame.size() ? rule.blame[j] : j);
  }
  if (!offenders.empty()) throw AbortUnsorted(std::move(offenders));
}

ShareVector PartyEvaluator::InputShares(OwnerId owner) const {
  ShareVector out;
  out.party = self_;
  out.range_id = owner;
  auto it = circuit_.input_map.find(owner);
  if (it == circuit_.input_map.end()) {
    throw Error(ErrorCode::kMissingInput,
                "no owner " + std::to_string(owner));
  }
  for (WireId w : it->second) out.bits.push_back(wires_[w]);
  return out;
}

ShareVector PartyEvaluator::WireShares(std::span<const WireId> wires) const {
  ShareVector out;
  out.party = self_;
  for (WireId w : wires) out.bits.push_back(wires_.at(w));
  return out;
}

void PartyEvaluator::OpenSend(std::span<const WireId> wires) {
  round_ += 1;
  pending_.resize(wires.size());
  for (std::size_t i = 0; i < wires.size(); ++i) pending_[i] = wires_.at(wires[i]);
  SendToPeers(FrameKind::kOpen, 0xffffffffu, pending_);
  transcript_.rounds += 1;
}

BitVector PartyEvaluator::OpenReceive() {
  auto peer = ReceiveFromPeers(FrameKind::kOpen, 0xffffffffu, pending_.size());
  BitVector values = pending_;
  for (PartyId p = 0; p < n_; ++p) {
    if (p == self_) continue;
    for (std::size_t i = 0; i < values.size(); ++i) values[i] ^= peer[p][i];
  }
  return values;
}

namespace {

void RunLockstep(std::vector<std::unique_ptr<PartyEvaluator>>& parties) {
  while (true) {
    bool active = false;
    for (auto& p : parties) active = p->SendPhase() || active;
    if (!active) return;
    for (auto& p : parties) p->ReceivePhase();
  }
}

void RunThreaded(std::vector<std::unique_ptr<PartyEvaluator>>& parties) {
  std::vector<std::exception_ptr> errors(parties.size());
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < parties.size(); ++i) {
    threads.emplace_back([&, i] {
      try {
        while (parties[i]->SendPhase()) parties[i]->ReceivePhase();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  // Prefer a protocol-level abort over the timeouts it causes at peers.
  std::exception_ptr first;
  for (auto& e : errors) {
    if (!e) continue;
    try {
      std::rethrow_exception(e);
    } catch (const AbortUnsorted&) {
      throw;
    } catch (...) {
      if (!first) first = e;
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace

SharedEvaluation EvalShared(const BooleanCircuit& circuit,
                            const EvalPlan& plan, std::size_t n_parties,
                            std::vector<PartyProvisions> provisions,
                            std::vector<TriplePool>& pools,
                            const EvalOptions& options) {
  if (n_parties < 1 || provisions.size() != n_parties ||
      pools.size() != n_parties) {
    throw Error(ErrorCode::kConfigInvalid, "party count mismatch");
  }
  LocalNetwork net(n_parties, options.threaded
                                  ? options.timeout
                                  : std::chrono::milliseconds(0));
  if (options.tamper) net.set_tamper(options.tamper);
  BitRng root(options.seed);
  std::vector<std::unique_ptr<PartyEvaluator>> parties;
  for (std::size_t p = 0; p < n_parties; ++p) {
    const auto id = static_cast<PartyId>(p);
    parties.push_back(std::make_unique<PartyEvaluator>(
        id, n_parties, circuit, plan, net.endpoint(id), pools[p],
        root.Fork(1000 + p), options.epoch, options.reactive));
    parties.back()->Provide(std::move(provisions[p]));
  }
  if (options.threaded) {
    RunThreaded(parties);
  } else {
    RunLockstep(parties);
  }

  SharedEvaluation result;
  result.outputs = parties[0]->outputs();
  result.reactive_values = parties[0]->reactive_values();
  for (auto& p : parties) {
    if (p->outputs() != result.outputs ||
        p->reactive_values() != result.reactive_values) {
      throw Error(ErrorCode::kTransportFailure, "parties opened different values");
    }
    result.transcripts.push_back(p->transcript());
    std::map<OwnerId, ShareVector> shares;
    for (const auto& [owner, wires] : circuit.input_map) {
      shares[owner] = p->InputShares(owner);
    }
    result.input_shares.push_back(std::move(shares));
  }
  return result;
}

SharedEvaluation EvalShared(const BooleanCircuit& circuit,
                            std::size_t n_parties, const PartyInputs& inputs,
                            const std::function<PartyId(OwnerId)>& holder,
                            const EvalOptions& options) {
  EvalPlan plan = BuildEvalPlan(circuit);
  BitRng root(options.seed);
  auto pools = DealTriples(n_parties, plan.and_count, root.Fork(1).NextU64());
  std::vector<PartyProvisions> provisions(n_parties);
  for (const auto& [owner, wires] : circuit.input_map) {
    const PartyId h = holder(owner);
    if (h >= n_parties) {
      throw Error(ErrorCode::kConfigInvalid,
                  "holder of owner " + std::to_string(owner) + " out of range");
    }
    auto it = inputs.find(owner);
    if (it == inputs.end() && !wires.empty()) {
      throw Error(ErrorCode::kMissingInput,
                  "no input bits for owner " + std::to_string(owner));
    }
    for (std::size_t p = 0; p < n_parties; ++p) {
      InputProvision prov;
      prov.holder = h;
      if (p == h) {
        prov.plaintext.emplace();
        if (it != inputs.end()) *prov.plaintext = it->second;
      }
      provisions[p][owner] = std::move(prov);
    }
  }
  return EvalShared(circuit, plan, n_parties, std::move(provisions), pools,
                    options);
}

Bytes PersistShares(const ShareVector& shares, std::uint64_t epoch) {
  Frame f{FrameKind::kShareBlob, epoch, 0, shares.party, shares.range_id,
          shares.bits};
  return EncodeFrame(f);
}

ShareVector LoadShares(std::span<const std::uint8_t> blob, PartyId party,
                       std::uint64_t epoch) {
  Frame f = DecodeFrame(blob, ErrorCode::kCorruptBlob);
  if (f.kind != FrameKind::kShareBlob) {
    throw Error(ErrorCode::kCorruptBlob, "not a share blob");
  }
  if (f.sender != party) {
    throw Error(ErrorCode::kEpochMismatch,
                "blob belongs to party " + std::to_string(f.sender));
  }
  if (f.epoch != epoch) {
    throw Error(ErrorCode::kEpochMismatch,
                "blob is from epoch " + std::to_string(f.epoch));
  }
  return {f.sender, f.range_id, std::move(f.payload)};
}

}  // namespace stockpile::mpc
