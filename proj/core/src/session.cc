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

#include "stockpile/session.h"

#include <algorithm>
#include <memory>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "stockpile/crypto.h"
#include "stockpile/error.h"
#include "stockpile/gadgets.h"

namespace stockpile {

void Stockpile::Add(const HashedId& id) {
  if (id.sigma() != sigma_) {
    throw Error(ErrorCode::kInvalidSigma,
                "value has " + std::to_string(id.sigma()) + " bits, expected " +
                    std::to_string(sigma_));
  }
  entries_.push_back({std::nullopt, id});
}

void Stockpile::Add(const VulnIdentifier& identifier) {
  entries_.push_back({identifier, HashIdentifier(identifier, sigma_)});
}

std::vector<HashedId> Stockpile::DistinctValues() const {
  std::set<HashedId> values;
  for (const auto& e : entries_) values.insert(e.id);
  return {values.begin(), values.end()};
}

std::size_t SessionKeyBits(std::size_t sigma, std::size_t key_bits) {
  return key_bits ? key_bits : std::max<std::size_t>(sigma, 64);
}

namespace {

// Rejection-sampling budget per requested value.
constexpr std::size_t kMaxDraws = 1 << 16;

HashedId RandomValue(BitRng& rng, std::size_t sigma) {
  return HashedId(rng.RandomBytes(sigma / 8), sigma);
}

}  // namespace

PreparedInput PrepareInputs(const Stockpile& stockpile, std::size_t u,
                            std::size_t key_bits, std::uint64_t epoch,
                            BitRng& rng) {
  PartyState state;
  state.party = stockpile.party();
  state.sigma = stockpile.sigma();
  state.epoch = epoch;
  for (const auto& v : stockpile.DistinctValues()) {
    state.slots.push_back({v, false});
  }
  state.persisted.assign(state.slots.size(), 0);
  return PrepareFromState(state, u, key_bits, epoch, rng);
}

PreparedInput PrepareFromState(const PartyState& state, std::size_t u,
                               std::size_t key_bits, std::uint64_t epoch,
                               BitRng& rng) {
  const std::size_t sigma = state.sigma;
  if (sigma == 0 || sigma % 8 != 0) {
    throw Error(ErrorCode::kInvalidSigma, "sigma must be a multiple of 8");
  }
  if (key_bits == 0 || key_bits % 8 != 0) {
    throw Error(ErrorCode::kConfigInvalid, "key_bits must be a multiple of 8");
  }
  if (state.slots.size() > u) {
    throw Error(ErrorCode::kTooManyEntries,
                std::to_string(state.slots.size()) + " entries exceed u = " +
                    std::to_string(u));
  }
  if (sigma < 64 && u > (std::uint64_t{1} << sigma) - 1) {
    throw Error(ErrorCode::kTooManyEntries,
                "u exceeds the number of nonzero " + std::to_string(sigma) +
                    "-bit values");
  }
  std::set<HashedId> used;
  for (const auto& slot : state.slots) {
    if (slot.v.sigma() != sigma) {
      throw Error(ErrorCode::kInvalidSigma, "slot width mismatch");
    }
    if (slot.v.is_zero()) {
      throw Error(ErrorCode::kSentinelCollision,
                  "the all-zero value is reserved");
    }
    if (!used.insert(slot.v).second) {
      throw Error(ErrorCode::kConfigInvalid, "duplicate slot value");
    }
  }

  // Slots with their persisted flag, plus fresh dummies, sorted by value.
  std::vector<std::pair<Slot, std::uint8_t>> slots;
  for (std::size_t i = 0; i < state.slots.size(); ++i) {
    slots.emplace_back(state.slots[i],
                       i < state.persisted.size() ? state.persisted[i] : 0);
  }
  std::size_t draws = 0;
  while (slots.size() < u) {
    if (++draws > kMaxDraws * u) {
      throw Error(ErrorCode::kRandomnessFailure, "could not draw dummy values");
    }
    HashedId v = RandomValue(rng, sigma);
    if (v.is_zero() || !used.insert(v).second) continue;
    slots.push_back({{v, true}, 0});
  }
  std::sort(slots.begin(), slots.end(),
            [](const auto& a, const auto& b) { return a.first.v < b.first.v; });

  PreparedInput out;
  out.party = state.party;
  out.epoch = epoch;
  out.state.party = state.party;
  out.state.sigma = sigma;
  out.state.epoch = epoch;

  std::set<Bytes> keys;
  auto fresh_key = [&] {
    for (std::size_t attempt = 0; attempt < kMaxDraws; ++attempt) {
      Bytes k = rng.RandomBytes(key_bits / 8);
      if (keys.insert(k).second) return k;
    }
    throw Error(ErrorCode::kRandomnessFailure, "could not draw distinct keys");
  };
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& [slot, persisted] = slots[i];
    InputRecord r;
    r.v = slot.v;
    r.dummy = slot.dummy;
    r.keys.k0 = fresh_key();
    r.keys.k1 = fresh_key();
    if (!r.dummy) out.table[r.v] = r.keys;
    if (persisted) out.persisted_records.push_back(static_cast<std::uint32_t>(i));
    out.records.push_back(std::move(r));
    out.state.slots.push_back(slot);
    out.state.persisted.push_back(persisted);
  }
  return out;
}

PartyState EpochAdvance(const PartyState& state,
                        const std::vector<HashedId>& additions,
                        const std::vector<HashedId>& removals) {
  if (!removals.empty()) {
    throw Error(ErrorCode::kRemovalAttempted,
                "submitted vulnerabilities cannot be revoked (" +
                    std::to_string(removals.size()) + " removal requests)");
  }
  PartyState next = state;
  next.persisted.assign(next.slots.size(), 1);
  for (const auto& v : additions) {
    if (v.sigma() != state.sigma) {
      throw Error(ErrorCode::kInvalidSigma, "addition width mismatch");
    }
    if (v.is_zero()) {
      throw Error(ErrorCode::kSentinelCollision, "the all-zero value is reserved");
    }
    auto it = std::lower_bound(
        next.slots.begin(), next.slots.end(), v,
        [](const Slot& s, const HashedId& x) { return s.v < x; });
    const auto pos = static_cast<std::size_t>(it - next.slots.begin());
    if (it != next.slots.end() && it->v == v) {
      // A former dummy that is now a real entry keeps its persisted share.
      it->dummy = false;
      continue;
    }
    next.slots.insert(it, Slot{v, false});
    next.persisted.insert(next.persisted.begin() + static_cast<long>(pos), 0);
  }
  return next;
}

std::vector<HashedId> IntersectionReport::SharedValues() const {
  std::vector<HashedId> out;
  for (const auto& line : lines) {
    if (line.shared) out.push_back(line.v);
  }
  return out;
}

IntersectionReport InterpretOutput(PartyId party,
                                   const std::map<HashedId, KeyPair>& table,
                                   const std::vector<Bytes>& opened_keys) {
  std::map<Bytes, std::size_t> counts;
  for (const auto& k : opened_keys) ++counts[k];
  auto count = [&](const Bytes& k) {
    auto it = counts.find(k);
    return it == counts.end() ? std::size_t{0} : it->second;
  };
  IntersectionReport report;
  report.party = party;
  for (const auto& [v, keys] : table) {
    ReportLine line;
    line.v = v;
    line.k1_count = count(keys.k1);
    line.k0_count = count(keys.k0);
    if (line.k0_count == 0 && line.k1_count == 0) {
      throw Error(ErrorCode::kProtocolCorruption,
                  "neither key of " + v.hex() + " was opened");
    }
    line.shared = line.k1_count > 0;
    report.lines.push_back(std::move(line));
  }
  return report;
}

void WriteReport(std::ostream& out, const IntersectionReport& report) {
  for (const auto& line : report.lines) {
    out << line.v.hex() << ' ' << (line.shared ? "shared" : "exclusive")
        << '\n';
  }
}

Variant SessionConfig::MakeVariant() const {
  switch (variant) {
    case VariantKind::kAtLeastTwo:
      return Variant::AtLeastTwo();
    case VariantKind::kAtLeastM:
      return Variant::AtLeastM(m);
    case VariantKind::kFixedPlusM: {
      std::vector<std::uint32_t> tags;
      for (std::size_t i = 0; i < fixed_parties.size(); ++i) {
        tags.push_back(static_cast<std::uint32_t>(i));
      }
      return Variant::FixedPlusM(std::move(tags), m);
    }
  }
  return {};
}

CircuitConfig SessionConfig::Circuit(std::size_t u) const {
  CircuitConfig c;
  c.n_parties = active_parties.size();
  c.inputs_per_party = u;
  c.sigma = sigma;
  c.key_bits = KeyBits();
  c.variant = MakeVariant();
  c.shuffle_layers = shuffle_layers ? shuffle_layers : ComputingParties();
  return c;
}

void SessionConfig::Validate() const {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kConfigInvalid, why);
  };
  if (active_parties.size() < 2) fail("need at least two active parties");
  std::set<PartyId> active(active_parties.begin(), active_parties.end());
  if (active.size() != active_parties.size()) fail("duplicate active party");
  if (sigma == 0 || sigma % 8 != 0) fail("sigma must be a multiple of 8");
  if (KeyBits() % 8 != 0) fail("key_bits must be a multiple of 8");
  if (mode == ExecutionMode::kOutsourced &&
      (servers < 1 || servers >= active_parties.size())) {
    fail("outsourced mode needs 1 <= servers < input parties");
  }
  if (variant != VariantKind::kAtLeastTwo && m < 1) fail("m must be >= 1");
  if (variant == VariantKind::kFixedPlusM) {
    if (fixed_parties.empty()) fail("fixed-plus-m needs fixed parties");
    std::set<PartyId> fixed;
    for (auto p : fixed_parties) {
      if (!active.contains(p)) fail("fixed party " + std::to_string(p) + " inactive");
      if (!fixed.insert(p).second) fail("duplicate fixed party");
    }
  }
}

namespace {

std::vector<PartyId> ParseIdList(const std::string& text) {
  std::vector<PartyId> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      unsigned long v = std::stoul(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<PartyId>(v));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kConfigInvalid, "bad party id '" + item + "'");
    }
  }
  return out;
}

}  // namespace

SessionConfig ReadSessionConfig(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::kConfigInvalid, e.what());
  }
  SessionConfig cfg;
  try {
    const auto& s = tree.get_child("session");
    cfg.active_parties = ParseIdList(s.get<std::string>("parties"));
    cfg.sigma = s.get<std::size_t>("sigma", cfg.sigma);
    cfg.key_bits = s.get<std::size_t>("key_bits", 0);
    const std::string variant = s.get<std::string>("variant", "at-least-two");
    cfg.m = s.get<std::size_t>("m", cfg.m);
    cfg.variant = ParseVariant(variant, cfg.m, {0}).kind;
    cfg.fixed_parties = ParseIdList(s.get<std::string>("fixed_parties", ""));
    const std::string mode = s.get<std::string>("mode", "direct");
    if (mode == "direct") {
      cfg.mode = ExecutionMode::kDirect;
    } else if (mode == "outsourced") {
      cfg.mode = ExecutionMode::kOutsourced;
    } else {
      throw Error(ErrorCode::kConfigInvalid, "unknown mode '" + mode + "'");
    }
    cfg.servers = s.get<std::size_t>("servers", 0);
    cfg.shuffle_layers = s.get<std::size_t>("shuffle_layers", 0);
    cfg.epoch = s.get<std::uint64_t>("epoch", 0);
    cfg.seed = s.get<std::uint64_t>("seed", 0);
    const std::string backend = s.get<std::string>("backend", "mpc");
    if (backend == "mpc") {
      cfg.backend = Backend::kMpc;
    } else if (backend == "plaintext") {
      cfg.backend = Backend::kPlaintext;
    } else {
      throw Error(ErrorCode::kConfigInvalid, "unknown backend '" + backend + "'");
    }
    cfg.threaded = s.get<bool>("threaded", false);
    if (auto endpoints = tree.get_child_optional("endpoints")) {
      for (const auto& [key, value] : *endpoints) {
        auto ids = ParseIdList(key);
        if (ids.size() != 1) throw Error(ErrorCode::kConfigInvalid, "endpoint key");
        cfg.endpoints[ids[0]] = value.data();
      }
    }
    if (auto inputs = tree.get_child_optional("inputs")) {
      for (const auto& [key, value] : *inputs) {
        auto ids = ParseIdList(key);
        if (ids.size() != 1) throw Error(ErrorCode::kConfigInvalid, "input key");
        cfg.input_files[ids[0]] = value.data();
      }
    }
  } catch (const pt::ptree_error& e) {
    throw Error(ErrorCode::kConfigInvalid, e.what());
  }
  cfg.Validate();
  return cfg;
}

std::string ConfigDigest(const SessionConfig& cfg) {
  std::ostringstream s;
  s << "parties=";
  for (auto p : cfg.active_parties) s << p << ',';
  s << ";sigma=" << cfg.sigma << ";key_bits=" << cfg.KeyBits()
    << ";variant=" << cfg.MakeVariant().Name() << ";m=" << cfg.m << ";fixed=";
  for (auto p : cfg.fixed_parties) s << p << ',';
  s << ";mode=" << (cfg.mode == ExecutionMode::kDirect ? "direct" : "outsourced")
    << ";servers=" << cfg.servers << ";layers=" << cfg.shuffle_layers
    << ";epoch=" << cfg.epoch;
  const std::string text = s.str();
  auto digest = Sha3_256(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  return HexEncode(digest);
}

std::size_t NegotiateU(const std::vector<std::size_t>& counts,
                       std::uint64_t seed, std::size_t count_bits) {
  if (counts.size() < 2) {
    throw Error(ErrorCode::kConfigInvalid, "need at least two parties");
  }
  PartyInputs inputs;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (count_bits < 64 && counts[i] >> count_bits) {
      throw Error(ErrorCode::kTooManyEntries,
                  "count does not fit in " + std::to_string(count_bits) + " bits");
    }
    inputs[static_cast<OwnerId>(i)] = UintToBits(counts[i], count_bits);
  }
  BooleanCircuit circuit = BuildMaxCircuit(counts.size(), count_bits);
  mpc::EvalOptions options;
  options.seed = seed;
  auto result = mpc::EvalShared(
      circuit, counts.size(), inputs,
      [](OwnerId o) { return static_cast<PartyId>(o); }, options);
  return std::max<std::size_t>(1, BitsToUint(result.outputs));
}

namespace {

struct CacheEntry {
  CompiledCircuit compiled;
  mpc::EvalPlan plan;
};

std::string CacheKey(const CircuitConfig& c) {
  std::ostringstream s;
  s << c.n_parties << '/' << c.inputs_per_party << '/' << c.sigma << '/'
    << c.KeyBits() << '/' << c.variant.Name() << '/' << c.variant.m << '/'
    << c.TagBits() << '/' << c.ShuffleLayers() << '/';
  for (auto t : c.variant.fixed_tags) s << t << ',';
  return s.str();
}

const CacheEntry& Cached(const CircuitConfig& cfg) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<CacheEntry>> cache;
  constexpr std::size_t kMaxEntries = 48;
  const std::string key = CacheKey(cfg);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  if (cache.size() >= kMaxEntries) cache.clear();
  auto entry = std::make_unique<CacheEntry>();
  entry->compiled = BuildDepletionCircuit(cfg);
  entry->plan = mpc::BuildEvalPlan(entry->compiled.circuit);
  return *cache.emplace(key, std::move(entry)).first->second;
}

Bytes SliceBytes(const BitVector& bits, std::size_t begin, std::size_t count) {
  return BitsToBytes(std::span<const std::uint8_t>(bits.data() + begin, count));
}

}  // namespace

const CompiledCircuit& CompileCached(const CircuitConfig& cfg) {
  return Cached(cfg).compiled;
}

RoundResult RunRound(const SessionConfig& cfg,
                     const std::vector<PreparedInput>& inputs,
                     const ShareStore* persisted, ShareStore* persist_out,
                     const SessionFaults& faults) {
  cfg.Validate();
  const std::size_t n_inputs = cfg.active_parties.size();
  if (inputs.size() != n_inputs) {
    throw Error(ErrorCode::kConfigMismatch, "one prepared input per active party");
  }
  const std::size_t u = inputs[0].records.size();
  const std::size_t key_bits = cfg.KeyBits();
  for (std::size_t i = 0; i < n_inputs; ++i) {
    const auto& in = inputs[i];
    if (in.party != cfg.active_parties[i]) {
      throw Error(ErrorCode::kConfigMismatch, "inputs not in active party order");
    }
    if (in.records.size() != u || in.epoch != cfg.epoch) {
      throw Error(ErrorCode::kConfigMismatch,
                  "party " + std::to_string(in.party) +
                      " prepared with a different u or epoch");
    }
    for (const auto& r : in.records) {
      if (r.v.sigma() != cfg.sigma || r.keys.k0.size() * 8 != key_bits ||
          r.keys.k1.size() * 8 != key_bits) {
        throw Error(ErrorCode::kConfigMismatch,
                    "party " + std::to_string(in.party) + " record widths");
      }
    }
  }

  const CircuitConfig cc = cfg.Circuit(u);
  const CacheEntry& entry = Cached(cc);
  const BooleanCircuit& circuit = entry.compiled.circuit;
  const RecordLayout layout = LayoutFor(cc);
  const std::size_t rb = layout.record_bits();

  // Owner i: concatenated records of active party i.
  PartyInputs plain;
  const std::uint32_t other_tag = cc.OtherTag();
  for (std::size_t i = 0; i < n_inputs; ++i) {
    std::uint32_t tag = 0;
    if (cfg.variant == VariantKind::kFixedPlusM) {
      auto it = std::find(cfg.fixed_parties.begin(), cfg.fixed_parties.end(),
                          cfg.active_parties[i]);
      tag = it == cfg.fixed_parties.end()
                ? other_tag
                : static_cast<std::uint32_t>(it - cfg.fixed_parties.begin());
    }
    std::vector<const InputRecord*> order;
    for (const auto& r : inputs[i].records) order.push_back(&r);
    if (faults.unsorted_party == cfg.active_parties[i]) {
      if (u < 2) {
        throw Error(ErrorCode::kConfigInvalid, "unsorted injection needs u >= 2");
      }
      std::swap(order[0], order[1]);
    }
    BitVector bits;
    bits.reserve(u * rb);
    for (const InputRecord* r : order) {
      BitVector enc = layout.Encode(r->v.bits(), tag, !r->dummy,
                                    BytesToBits(r->keys.k0, key_bits),
                                    BytesToBits(r->keys.k1, key_bits));
      bits.insert(bits.end(), enc.begin(), enc.end());
    }
    plain[static_cast<OwnerId>(i)] = std::move(bits);
  }

  // Shuffle layer j is owned by computing party j mod C, which routes a
  // uniformly random permutation of its own choosing.
  const std::size_t computing = cfg.ComputingParties();
  const std::size_t keys_out = 2 * cc.RecordCount();
  BitRng root(cfg.seed);
  for (std::size_t j = 0; j < cc.ShuffleLayers(); ++j) {
    BitRng party_rng = root.Fork(0x5348 + j);
    std::vector<std::size_t> perm(keys_out);
    for (std::size_t k = 0; k < keys_out; ++k) perm[k] = k;
    std::shuffle(perm.begin(), perm.end(), party_rng);
    plain[static_cast<OwnerId>(n_inputs + j)] = WaksmanRoute(perm);
  }

  RoundResult result;
  result.gates = entry.compiled.totals;
  result.reactive_opens = circuit.reactive_opens.size();
  BitVector outputs;
  if (cfg.backend == Backend::kPlaintext) {
    PlainEvaluation eval = EvaluatePlain(circuit, plain);
    std::vector<std::size_t> offenders;
    for (std::size_t i = 0; i < eval.reactive_values.at(0).size(); ++i) {
      if (eval.reactive_values[0][i]) offenders.push_back(cfg.active_parties[i]);
    }
    if (!offenders.empty()) throw AbortUnsorted(std::move(offenders));
    outputs = std::move(eval.outputs);
  } else {
    // Persisted v-shares: the k-th persisted record of party i is record k
    // of party i's previous-epoch list.
    std::vector<std::vector<std::uint32_t>> preset_pos(n_inputs);
    std::vector<std::vector<BitVector>> preset_bits(
        n_inputs, std::vector<BitVector>(computing));
    for (std::size_t i = 0; i < n_inputs; ++i) {
      const auto& rec = inputs[i].persisted_records;
      if (rec.empty()) continue;
      if (!persisted) {
        throw Error(ErrorCode::kEpochMismatch,
                    "party " + std::to_string(inputs[i].party) +
                        " expects persisted shares but none were supplied");
      }
      for (auto r : rec) {
        for (std::size_t b = 0; b < cfg.sigma; ++b) {
          preset_pos[i].push_back(static_cast<std::uint32_t>(r * rb + b));
        }
      }
      for (std::size_t p = 0; p < computing; ++p) {
        auto it = persisted->blobs.find({static_cast<PartyId>(p), inputs[i].party});
        if (it == persisted->blobs.end()) {
          throw Error(ErrorCode::kEpochMismatch,
                      "no persisted shares for party " +
                          std::to_string(inputs[i].party));
        }
        mpc::ShareVector sv = mpc::LoadShares(it->second, static_cast<PartyId>(p),
                                              persisted->epoch);
        if (sv.range_id != inputs[i].party ||
            sv.bits.size() != preset_pos[i].size()) {
          throw Error(ErrorCode::kEpochMismatch, "persisted share layout");
        }
        preset_bits[i][p] = std::move(sv.bits);
      }
    }

    std::vector<mpc::PartyProvisions> provisions(computing);
    for (std::size_t i = 0; i < n_inputs; ++i) {
      const auto owner = static_cast<OwnerId>(i);
      const BitVector& bits = plain[owner];
      if (cfg.mode == ExecutionMode::kDirect) {
        for (std::size_t p = 0; p < computing; ++p) {
          mpc::InputProvision prov;
          prov.holder = static_cast<PartyId>(i);
          if (p == i) prov.plaintext = bits;
          prov.preset_positions = preset_pos[i];
          prov.preset_shares = preset_bits[i][p];
          provisions[p][owner] = std::move(prov);
        }
      } else {
        // The input party shares toward the servers itself.
        BitRng input_rng = root.Fork(0x4950 + inputs[i].party);
        auto shares = mpc::ShareInput(0, bits, computing, input_rng);
        for (std::size_t p = 0; p < computing; ++p) {
          for (std::size_t k = 0; k < preset_pos[i].size(); ++k) {
            shares[p].bits[preset_pos[i][k]] = preset_bits[i][p][k];
          }
          mpc::InputProvision prov;
          for (std::size_t k = 0; k < bits.size(); ++k) {
            prov.preset_positions.push_back(static_cast<std::uint32_t>(k));
          }
          prov.preset_shares = std::move(shares[p].bits);
          provisions[p][owner] = std::move(prov);
        }
        // Shares to every server, opened keys back from every server.
        result.input_party_messages += 2 * computing;
      }
    }
    for (std::size_t j = 0; j < cc.ShuffleLayers(); ++j) {
      const auto owner = static_cast<OwnerId>(n_inputs + j);
      const auto holder = static_cast<PartyId>(j % computing);
      for (std::size_t p = 0; p < computing; ++p) {
        mpc::InputProvision prov;
        prov.holder = holder;
        if (p == holder) prov.plaintext = plain[owner];
        provisions[p][owner] = std::move(prov);
      }
    }

    mpc::EvalOptions options;
    options.epoch = cfg.epoch;
    options.seed = root.Fork(0x4d50).NextU64();
    options.threaded = cfg.threaded;
    options.reactive = {mpc::ReactiveRule{
        true, {cfg.active_parties.begin(), cfg.active_parties.end()}}};
    auto pools = mpc::DealTriples(computing, entry.plan.and_count,
                                  root.Fork(0x4445).NextU64());
    auto eval = mpc::EvalShared(circuit, entry.plan, computing,
                                std::move(provisions), pools, options);
    outputs = std::move(eval.outputs);
    result.transcripts = std::move(eval.transcripts);

    if (persist_out) {
      persist_out->epoch = cfg.epoch;
      persist_out->blobs.clear();
      for (std::size_t p = 0; p < computing; ++p) {
        for (std::size_t i = 0; i < n_inputs; ++i) {
          const auto& all = eval.input_shares[p].at(static_cast<OwnerId>(i));
          mpc::ShareVector sv{static_cast<PartyId>(p), inputs[i].party, {}};
          for (std::size_t r = 0; r < u; ++r) {
            sv.bits.insert(sv.bits.end(), all.bits.begin() + r * rb,
                           all.bits.begin() + r * rb + cfg.sigma);
          }
          persist_out->blobs[{static_cast<PartyId>(p), inputs[i].party}] =
              mpc::PersistShares(sv, cfg.epoch);
        }
      }
    }
  }

  if (outputs.size() != keys_out * key_bits) {
    throw Error(ErrorCode::kProtocolCorruption, "unexpected output width");
  }
  for (std::size_t k = 0; k < keys_out; ++k) {
    result.opened_keys.push_back(SliceBytes(outputs, k * key_bits, key_bits));
  }
  for (const auto& in : inputs) {
    result.reports[in.party] =
        InterpretOutput(in.party, in.table, result.opened_keys);
  }
  return result;
}

void CheckAccounting(const RoundResult& result, std::size_t computing_parties) {
  for (std::size_t p = 0; p < result.transcripts.size(); ++p) {
    const auto& t = result.transcripts[p];
    auto fail = [&](const std::string& what) {
      throw Error(ErrorCode::kProtocolCorruption,
                  "party " + std::to_string(p) + ": " + what);
    };
    if (t.triples_consumed != result.gates.and_count) {
      fail("triples consumed " + std::to_string(t.triples_consumed) +
           " != AND count " + std::to_string(result.gates.and_count));
    }
    if (t.rounds != result.gates.depth_and + result.reactive_opens + 1) {
      fail("rounds " + std::to_string(t.rounds) + " != depth " +
           std::to_string(result.gates.depth_and) + " + opens " +
           std::to_string(result.reactive_opens) + " + 1");
    }
    if (t.and_layers != result.gates.depth_and ||
        t.and_layer_messages != t.and_layers * (computing_parties - 1) ||
        (t.and_layers > 0 &&
         (t.max_layer_messages != computing_parties - 1 ||
          t.min_layer_messages != computing_parties - 1))) {
      fail("AND layer messages differ from N-1 per layer");
    }
  }
}

}  // namespace stockpile
