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


// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. Arguments select a subset: `acceptance 3 6`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "stockpile/bits.h"
#include "stockpile/compiler.h"
#include "stockpile/error.h"
#include "stockpile/gadgets.h"
#include "stockpile/ledger.h"
#include "stockpile/mpc.h"
#include "stockpile/oracle.h"
#include "stockpile/session.h"
#include "stockpile/vulnid.h"

namespace stockpile {
namespace {

using oracle::PlainStockpileSet;
using oracle::SharedSets;
using oracle::Value;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// The seven variant settings exercised by the oracle criteria.
struct VariantSetting {
  VariantKind kind;
  std::size_t m;
  std::size_t z;
};

const std::vector<VariantSetting>& Variants() {
  static const std::vector<VariantSetting> v = {
      {VariantKind::kAtLeastTwo, 2, 0}, {VariantKind::kAtLeastM, 2, 0},
      {VariantKind::kAtLeastM, 3, 0},   {VariantKind::kFixedPlusM, 1, 1},
      {VariantKind::kFixedPlusM, 2, 1}, {VariantKind::kFixedPlusM, 1, 2},
      {VariantKind::kFixedPlusM, 2, 2},
  };
  return v;
}

// Distinct random party ids, ascending.
std::vector<PartyId> RandomParties(BitRng& rng, std::size_t n) {
  std::set<PartyId> ids;
  while (ids.size() < n) ids.insert(static_cast<PartyId>(rng.Uniform(32)));
  return {ids.begin(), ids.end()};
}

SessionConfig RandomConfig(BitRng& rng, const VariantSetting& setting,
                           std::size_t n, std::size_t sigma) {
  SessionConfig cfg;
  cfg.active_parties = RandomParties(rng, n);
  cfg.sigma = sigma;
  cfg.variant = setting.kind;
  cfg.m = setting.m;
  cfg.seed = rng.NextU64();
  if (setting.kind == VariantKind::kFixedPlusM) {
    auto pool = cfg.active_parties;
    std::shuffle(pool.begin(), pool.end(), rng);
    cfg.fixed_parties.assign(pool.begin(), pool.begin() + setting.z);
  }
  return cfg;
}

// Sets of at most u values over a small universe, so overlaps are common.
PlainStockpileSet RandomSets(BitRng& rng, const SessionConfig& cfg,
                             std::size_t u) {
  const std::size_t n = cfg.active_parties.size();
  const std::uint64_t limit = (std::uint64_t{1} << cfg.sigma) - 1;
  const std::uint64_t universe =
      std::min<std::uint64_t>(limit, std::max<std::size_t>(2, n * u / 2 + 1));
  // Occasionally use the full value range to place values next to dummies.
  const std::uint64_t range = rng.Uniform(8) == 0 ? limit : universe;
  PlainStockpileSet sets;
  for (PartyId p : cfg.active_parties) {
    auto& s = sets[p];
    const std::size_t size = rng.Uniform(u + 1);
    while (s.size() < size) {
      const auto v = HashedId::FromUint(1 + rng.Uniform(range), cfg.sigma);
      s.insert(Value(v.bytes().begin(), v.bytes().end()));
    }
  }
  return sets;
}

std::vector<PreparedInput> Prepare(const SessionConfig& cfg,
                                   const PlainStockpileSet& sets, std::size_t u,
                                   BitRng& rng) {
  std::vector<PreparedInput> inputs;
  for (PartyId p : cfg.active_parties) {
    Stockpile s(p, cfg.sigma);
    for (const auto& v : sets.at(p)) {
      s.Add(HashedId(Bytes(v.begin(), v.end()), cfg.sigma));
    }
    inputs.push_back(PrepareInputs(s, u, cfg.KeyBits(), cfg.epoch, rng));
  }
  return inputs;
}

std::string Describe(const SessionConfig& cfg, std::size_t u) {
  std::ostringstream s;
  s << "N=" << cfg.active_parties.size() << " u=" << u
    << " sigma=" << cfg.sigma << " variant=" << cfg.MakeVariant().Name()
    << " m=" << cfg.m << " seed=" << cfg.seed;
  return s.str();
}

// --- 1 -------------------------------------------------------------------

Outcome OracleEquivalence(std::uint64_t seed) {
  BitRng rng(seed);
  const std::vector<std::size_t> ns = {2, 3, 5}, us = {1, 4, 8},
                                 sigmas = {8, 16};
  constexpr std::size_t kPerVariant = 1000;
  std::size_t sessions = 0, mismatches = 0;
  Outcome out;
  for (const auto& setting : Variants()) {
    // Sessions are grouped by grid cell so compiled circuits are reused.
    const std::size_t cells = ns.size() * us.size() * sigmas.size();
    for (std::size_t cell = 0; cell < cells; ++cell) {
      const std::size_t n = ns[cell % 3], u = us[(cell / 3) % 3],
                        sigma = sigmas[cell / 9];
      const std::size_t count =
          kPerVariant / cells + (cell < kPerVariant % cells ? 1 : 0);
      for (std::size_t i = 0; i < count; ++i, ++sessions) {
        SessionConfig cfg = RandomConfig(rng, setting, n, sigma);
        auto sets = RandomSets(rng, cfg, u);
        auto inputs = Prepare(cfg, sets, u, rng);
        auto mpc = RunRound(cfg, inputs);
        CheckAccounting(mpc, cfg.ComputingParties());
        SessionConfig plain = cfg;
        plain.backend = Backend::kPlaintext;
        auto pt = RunRound(plain, inputs);
        const auto want = oracle::BruteForceShared(sets, oracle::RuleFor(cfg));
        if (mpc.reports != pt.reports ||
            oracle::FromReports(mpc.reports) != want) {
          if (++mismatches <= 3) {
            out.detail += " mismatch[" + Describe(cfg, u) + "]";
          }
        }
      }
    }
  }
  out.pass = mismatches == 0 && sessions == kPerVariant * Variants().size();
  out.detail = std::to_string(sessions) + " sessions over " +
               std::to_string(Variants().size()) + " variants, " +
               std::to_string(mismatches) + " mismatches" + out.detail;
  return out;
}

// --- 2 -------------------------------------------------------------------

Outcome SortednessAbort(std::uint64_t seed) {
  BitRng rng(seed);
  std::size_t detected = 0, wrong_blame = 0, false_aborts = 0;
  constexpr int kTrials = 100;
  for (int t = 0; t < kTrials; ++t) {
    const std::size_t n = std::vector<std::size_t>{2, 3, 5}[rng.Uniform(3)];
    const std::size_t u = 2 + rng.Uniform(7);
    const auto& setting = Variants()[rng.Uniform(Variants().size())];
    SessionConfig cfg = RandomConfig(rng, setting, n, 16);
    if (t % 4 == 3) {
      cfg.mode = ExecutionMode::kOutsourced;
      cfg.servers = n - 1;
    }
    auto sets = RandomSets(rng, cfg, u);
    auto inputs = Prepare(cfg, sets, u, rng);
    const PartyId cheater = cfg.active_parties[rng.Uniform(n)];
    SessionFaults faults;
    faults.unsorted_party = cheater;
    try {
      RunRound(cfg, inputs, nullptr, nullptr, faults);
    } catch (const AbortUnsorted& e) {
      if (e.parties() == std::vector<std::size_t>{cheater}) {
        ++detected;
      } else {
        ++wrong_blame;
      }
    }
    try {
      CheckAccounting(RunRound(cfg, inputs), cfg.ComputingParties());
    } catch (const AbortUnsorted&) {
      ++false_aborts;
    }
  }
  Outcome out;
  out.pass = detected == kTrials && wrong_blame == 0 && false_aborts == 0;
  out.detail = std::to_string(detected) + "/" + std::to_string(kTrials) +
               " injections blamed exactly the cheater, " +
               std::to_string(wrong_blame) + " wrong accusations, " +
               std::to_string(false_aborts) + " aborts on " +
               std::to_string(kTrials) + " honest runs";
  return out;
}

// --- 3 -------------------------------------------------------------------

Outcome GateCountBounds() {
  Outcome out;
  std::ostringstream rows;
  for (std::size_t n : {2, 5, 10}) {
    for (std::size_t u : {100, 500}) {
      const double sigma = 256, N = static_cast<double>(n),
                   U = static_cast<double>(u);
      CircuitConfig cfg;
      cfg.n_parties = n;
      cfg.inputs_per_party = u;
      cfg.sigma = 256;
      cfg.key_bits = SessionKeyBits(256);
      const auto compiled = BuildDepletionCircuit(cfg, BuildMode::kCountOnly);
      const double layers = static_cast<double>(cfg.ShuffleLayers());
      const std::map<StageKind, double> bound = {
          {StageKind::kSortCheck, N * (U - 1) * (sigma + 1)},
          {StageKind::kMergeTree, 2 * N * N * U * sigma * std::log2(N * U)},
          {StageKind::kDupSelect, 4 * N * U * sigma},
          {StageKind::kShuffle,
           layers * sigma * 2 * N * U * std::log2(2 * N * U)},
      };
      rows << " (" << n << "," << u << "):";
      for (const auto& [kind, limit] : bound) {
        const auto ands = compiled.Stage(kind).counts.and_count;
        const bool ok = static_cast<double>(ands) <= limit;
        out.pass = out.pass && ok;
        rows << ' ' << StageName(kind) << '=' << ands << (ok ? "<=" : ">")
             << static_cast<std::uint64_t>(limit);
      }
    }
  }
  out.detail = "count-only, sigma=256;" + rows.str();
  return out;
}

// --- 4 -------------------------------------------------------------------

Outcome Accounting(std::uint64_t seed) {
  // Every MPC run of criteria 1, 2, 8 and 9 calls CheckAccounting and any
  // violation aborts those criteria. Here the counters are shown explicitly
  // for a spread of shapes, including outsourced mode.
  BitRng rng(seed);
  Outcome out;
  std::size_t runs = 0;
  for (std::size_t n : {2, 3, 5, 8}) {
    for (bool outsourced : {false, true}) {
      const auto& setting = Variants()[rng.Uniform(Variants().size())];
      SessionConfig cfg = RandomConfig(rng, setting, n, 16);
      if (outsourced) {
        cfg.mode = ExecutionMode::kOutsourced;
        cfg.servers = std::max<std::size_t>(1, n / 2);
      }
      const std::size_t u = 1 + rng.Uniform(6);
      auto inputs = Prepare(cfg, RandomSets(rng, cfg, u), u, rng);
      auto r = RunRound(cfg, inputs);
      ++runs;
      const std::size_t c = cfg.ComputingParties();
      try {
        CheckAccounting(r, c);
      } catch (const Error& e) {
        out.pass = false;
        out.detail += std::string(" ") + e.what();
      }
      const auto& t = r.transcripts.at(0);
      if (t.triples_consumed != r.gates.and_count ||
          t.rounds != r.gates.depth_and + r.reactive_opens + 1 ||
          t.min_layer_messages != c - 1 || t.max_layer_messages != c - 1) {
        out.pass = false;
      }
      if (runs <= 2) {
        out.detail += " [N=" + std::to_string(n) + " C=" + std::to_string(c) +
                      " ands=" + std::to_string(r.gates.and_count) +
                      " triples=" + std::to_string(t.triples_consumed) +
                      " depth=" + std::to_string(r.gates.depth_and) +
                      " opens=" + std::to_string(r.reactive_opens) +
                      " rounds=" + std::to_string(t.rounds) +
                      " msgs/layer/party=" +
                      std::to_string(t.max_layer_messages) + "]";
      }
    }
  }
  out.detail = std::to_string(runs) + " runs" + out.detail;
  return out;
}

// --- 5 -------------------------------------------------------------------

std::string RandomToken(BitRng& rng, std::size_t len) {
  static const std::string kChars = "abcdefghijklmnopqrstuvwxyz0123456789_";
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s += kChars[rng.Uniform(kChars.size())];
  return s;
}

std::string MixCase(BitRng& rng, const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    // Composed e-acute: toggle to its capital form.
    if (s.compare(i, 2, "\xc3\xa9") == 0) {
      out += rng.Uniform(2) ? "\xc3\x89" : "\xc3\xa9";
      ++i;
      continue;
    }
    const char c = s[i];
    out += rng.Uniform(2) ? static_cast<char>(std::toupper(c)) : c;
  }
  return out;
}

std::string JsonString(const std::string& s) { return "\"" + s + "\""; }

Outcome IdentifierDeterminism(std::uint64_t seed) {
  BitRng rng(seed);
  constexpr int kCount = 10000;
  int mismatches = 0;
  for (int i = 0; i < kCount; ++i) {
    static const char* kParts[] = {"a", "o", "h"};
    const std::string cpe = std::string("cpe:2.3:") + kParts[rng.Uniform(3)] +
                            ":" + RandomToken(rng, 3 + rng.Uniform(8)) + ":" +
                            RandomToken(rng, 3 + rng.Uniform(10)) + ":" +
                            std::to_string(rng.Uniform(20)) + "." +
                            std::to_string(rng.Uniform(20)) +
                            ":*:*:*:*:*:*:*";
    const std::int64_t cwe = 1 + static_cast<std::int64_t>(rng.Uniform(1400));
    std::string function = RandomToken(rng, 1 + rng.Uniform(16));
    if (rng.Uniform(10) == 0) function += "_caf\xc3\xa9";

    const std::string sorted = "{\"cpe\":" + JsonString(cpe) +
                               ",\"cwe\":" + std::to_string(cwe) +
                               ",\"function\":" + JsonString(function) + "}";
    std::vector<std::string> fields = {
        "\"cpe\": " + JsonString(MixCase(rng, cpe)),
        "\"cwe\": " + (rng.Uniform(2) ? std::to_string(cwe)
                                      : JsonString("CWE-" + std::to_string(cwe))),
        "\"function\": " + JsonString(MixCase(rng, function))};
    std::shuffle(fields.begin(), fields.end(), rng);
    const std::string shuffled =
        "{ " + fields[0] + ", " + fields[1] + ", " + fields[2] + " }";

    const auto a = ParseIdentifierJson(sorted);
    const auto b = ParseIdentifierJson(shuffled);
    const std::string ca = Canonicalize(a), cb = Canonicalize(b);
    if (ca != sorted || cb != ca || HashIdentifier(a, 256) != HashIdentifier(b, 256) ||
        LedgerHashHex(a) != LedgerHashHex(b)) {
      if (++mismatches == 1) std::cerr << "mismatch: " << shuffled << '\n';
    }
  }
  Outcome out;
  out.pass = mismatches == 0;
  out.detail = std::to_string(kCount) + " identifiers, " +
               std::to_string(mismatches) + " mismatches";
  return out;
}

// --- 6 -------------------------------------------------------------------

struct ShuffleStats {
  double max_deviation = 0;
  double chi2 = 0;
  double p_value = 0;
};

// n = 8 keys through one Waksman layer per computing party, evaluated under
// MPC. `honest` parties route a uniform permutation, the rest route a fixed
// one.
ShuffleStats ShuffleFrequencies(std::uint64_t seed, std::size_t parties,
                                std::size_t honest, int runs) {
  CircuitConfig cfg;
  cfg.n_parties = parties;
  cfg.inputs_per_party = 8 / (2 * parties);
  cfg.sigma = 8;
  cfg.key_bits = 8;
  const std::size_t n = 2 * cfg.RecordCount();
  const auto circuit = BuildStageCircuit(StageKind::kShuffle, cfg).circuit;
  BitVector keys;
  for (std::uint64_t k = 0; k < n; ++k) {
    auto b = UintToBits(k, 8);
    keys.insert(keys.end(), b.begin(), b.end());
  }
  std::vector<std::size_t> fixed(n);
  for (std::size_t i = 0; i < n; ++i) fixed[i] = (i + 3) % n;

  BitRng rng(seed);
  std::vector<std::vector<double>> counts(n, std::vector<double>(n, 0));
  for (int r = 0; r < runs; ++r) {
    PartyInputs in = {{0, keys}};
    for (std::size_t l = 0; l < parties; ++l) {
      std::vector<std::size_t> perm = fixed;
      if (l < honest) std::shuffle(perm.begin(), perm.end(), rng);
      in[static_cast<OwnerId>(parties + l)] = WaksmanRoute(perm);
    }
    mpc::EvalOptions options;
    options.seed = rng.NextU64();
    auto eval = mpc::EvalShared(
        circuit, parties, in,
        [&](OwnerId o) {
          return static_cast<PartyId>(o < parties ? 0 : o - parties);
        },
        options);
    for (std::size_t pos = 0; pos < n; ++pos) {
      const auto key = BitsToUint(std::span<const std::uint8_t>(
          eval.outputs.data() + pos * 8, 8));
      counts[pos][key] += 1;
    }
  }
  ShuffleStats stats;
  const double expected = static_cast<double>(runs) / static_cast<double>(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    for (std::size_t key = 0; key < n; ++key) {
      const double f = counts[pos][key] / runs;
      stats.max_deviation =
          std::max(stats.max_deviation, std::abs(f - 1.0 / static_cast<double>(n)));
      stats.chi2 += (counts[pos][key] - expected) *
                    (counts[pos][key] - expected) / expected;
    }
  }
  // Each row sums to `runs`: n (n - 1) degrees of freedom.
  boost::math::chi_squared dist(static_cast<double>(n * (n - 1)));
  stats.p_value = boost::math::cdf(boost::math::complement(dist, stats.chi2));
  return stats;
}

Outcome ShuffleUnlinkability(std::uint64_t seed) {
  constexpr int kRuns = 10000;
  Outcome out;
  // Four parties, all honest; then only one honest party among four.
  for (std::size_t honest : {4, 1}) {
    auto s = ShuffleFrequencies(seed + honest, 4, honest, kRuns);
    const bool ok = s.max_deviation <= 0.02 && s.p_value > 0.01;
    out.pass = out.pass && ok;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%s%zu/4 honest layers: max |f - 1/8| = %.4f, chi2 = %.1f, "
                  "p = %.3f",
                  out.detail.empty() ? "" : "; ", honest, s.max_deviation,
                  s.chi2, s.p_value);
    out.detail += buf;
  }
  return out;
}

// --- 7 -------------------------------------------------------------------

Outcome LedgerAttack(std::uint64_t seed) {
  BitRng rng(seed);
  ledger::ToyIdentifierSpace space(16);
  ledger::Ledger chain;
  const std::vector<std::string> writers = {"agency-a", "agency-b", "agency-c"};
  for (const auto& w : writers) chain.RegisterWriter(w);
  chain.RegisterReader("auditor");
  std::map<std::string, std::uint64_t> submitted;
  for (int i = 0; i < 200; ++i) {
    // Writers submit in bursts, as a party uploading its stockpile would.
    const auto& w = writers[(i / 25) % writers.size()];
    chain.Submit(w, LedgerHashHex(space.At(rng.Uniform(space.size()))));
    ++submitted[w];
  }
  chain.CheckIntersections("auditor");

  const ledger::Ledger copy = chain;
  const auto report = ledger::BruteForceAttack(copy, space);
  bool identifiers_ok = report.recovered.size() == 200;
  for (const auto& e : report.recovered) {
    identifiers_ok = identifiers_ok && LedgerHashHex(e.identifier) == e.hash &&
                     copy.blocks().at(e.block).payload == e.hash;
  }
  const bool leak_ok = report.per_writer_submissions ==
                       std::map<std::string, std::uint64_t>(submitted.begin(),
                                                            submitted.end());

  // Single-bit mutations of the serialized ledger.
  std::stringstream file;
  chain.Write(file);
  const std::string bytes = file.str();
  int detected = 0;
  constexpr int kMutations = 100;
  for (int i = 0; i < kMutations; ++i) {
    std::string mutated = bytes;
    const std::size_t bit = rng.Uniform(mutated.size() * 8);
    mutated[bit / 8] = static_cast<char>(mutated[bit / 8] ^ (1 << (bit % 8)));
    try {
      std::stringstream in(mutated);
      if (ledger::Ledger::Read(in).VerifyChain().has_value()) ++detected;
    } catch (const Error&) {
      ++detected;
    }
  }

  Outcome out;
  out.pass = report.recovery_rate == 1.0 && identifiers_ok && leak_ok &&
             report.seconds < 60 && detected == kMutations;
  std::ostringstream d;
  d << "2^16 space, " << report.submissions << " submissions, "
    << report.recovered_hashes << "/" << report.distinct_hashes
    << " hashes recovered in " << report.seconds << " s; per-writer:";
  for (const auto& [w, n] : report.per_writer_submissions) {
    d << ' ' << w << '=' << n << " (" << report.per_writer_bursts.at(w)
      << " bursts)";
  }
  d << "; " << detected << "/" << kMutations << " bit flips detected";
  out.detail = d.str();
  return out;
}

// --- 8 -------------------------------------------------------------------

struct SoundnessTally {
  std::size_t sessions = 0;
  std::size_t dummies = 0;
  std::size_t dummy_k1_opened = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

void CheckSoundness(const SessionConfig& cfg, const PlainStockpileSet& sets,
                    const std::vector<PreparedInput>& inputs,
                    const RoundResult& r, SoundnessTally& tally) {
  ++tally.sessions;
  const std::multiset<Bytes> opened(r.opened_keys.begin(), r.opened_keys.end());
  for (const auto& in : inputs) {
    for (const auto& rec : in.records) {
      if (!rec.dummy) continue;
      ++tally.dummies;
      if (opened.count(rec.keys.k1)) ++tally.dummy_k1_opened;
    }
  }
  const auto want = oracle::BruteForceShared(sets, oracle::RuleFor(cfg));
  const auto got = oracle::FromReports(r.reports);
  for (const auto& [party, values] : got) {
    const auto& expected = want.at(party);
    for (const auto& v : values) tally.false_positives += !expected.count(v);
    for (const auto& v : expected) tally.false_negatives += !values.count(v);
  }
}

Outcome DummySoundness(std::uint64_t seed) {
  BitRng rng(seed);
  SoundnessTally plain, mpc;
  constexpr std::size_t kSessions = 100000, kMpcSessions = 1000;
  constexpr std::size_t kBlock = 100;
  for (std::size_t block = 0; block < kSessions / kBlock; ++block) {
    // One shape per block keeps the circuit cache warm.
    const auto& setting = Variants()[rng.Uniform(Variants().size())];
    const std::size_t n = 2 + rng.Uniform(5);
    const std::size_t u = 1 + rng.Uniform(8);
    const std::size_t sigma = rng.Uniform(2) ? 8 : 16;
    const bool run_mpc = block < kMpcSessions / kBlock;
    for (std::size_t i = 0; i < kBlock; ++i) {
      SessionConfig cfg = RandomConfig(rng, setting, n, sigma);
      auto sets = RandomSets(rng, cfg, u);
      auto inputs = Prepare(cfg, sets, u, rng);
      SessionConfig pcfg = cfg;
      pcfg.backend = Backend::kPlaintext;
      CheckSoundness(pcfg, sets, inputs, RunRound(pcfg, inputs), plain);
      if (run_mpc) {
        auto r = RunRound(cfg, inputs);
        CheckAccounting(r, cfg.ComputingParties());
        CheckSoundness(cfg, sets, inputs, r, mpc);
      }
    }
  }
  Outcome out;
  out.pass = plain.sessions == kSessions && mpc.sessions == kMpcSessions;
  for (const auto* t : {&plain, &mpc}) {
    out.pass = out.pass && t->dummy_k1_opened == 0 &&
               t->false_positives == 0 && t->false_negatives == 0;
  }
  out.detail = std::to_string(plain.sessions) + " plaintext sessions (" +
               std::to_string(plain.dummies) + " dummies, " +
               std::to_string(plain.dummy_k1_opened) + " dummy 1-keys opened, " +
               std::to_string(plain.false_positives) + " false positives, " +
               std::to_string(plain.false_negatives) + " misses); " +
               std::to_string(mpc.sessions) + " MPC sessions (" +
               std::to_string(mpc.dummy_k1_opened) + " dummy 1-keys, " +
               std::to_string(mpc.false_positives) + " false positives, " +
               std::to_string(mpc.false_negatives) + " misses)";
  return out;
}

// --- 9 -------------------------------------------------------------------

Outcome EpochPersistence(std::uint64_t seed) {
  BitRng rng(seed);
  constexpr int kTrials = 100;
  int identical = 0;
  for (int t = 0; t < kTrials; ++t) {
    const std::size_t n = 2 + rng.Uniform(4);
    const auto& setting = Variants()[rng.Uniform(Variants().size())];
    SessionConfig cfg = RandomConfig(rng, setting, n, 16);
    if (t % 5 == 4) {
      cfg.mode = ExecutionMode::kOutsourced;
      cfg.servers = n - 1;
    }
    const std::size_t u0 = 1 + rng.Uniform(4);
    auto first = RandomSets(rng, cfg, u0);
    auto inputs = Prepare(cfg, first, u0, rng);
    ShareStore store;
    CheckAccounting(RunRound(cfg, inputs, nullptr, &store),
                    cfg.ComputingParties());

    // Epoch 1: each party adds a few values (some may already be held).
    SessionConfig next = cfg;
    next.epoch = 1;
    next.seed = rng.NextU64();
    auto additions = RandomSets(rng, cfg, 3);
    PlainStockpileSet unions = first;
    std::vector<PartyState> states;
    std::size_t u1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const PartyId p = cfg.active_parties[i];
      std::vector<HashedId> add;
      for (const auto& v : additions[p]) {
        add.emplace_back(Bytes(v.begin(), v.end()), cfg.sigma);
        unions[p].insert(v);
      }
      states.push_back(EpochAdvance(inputs[i].state, add));
      u1 = std::max(u1, states.back().slots.size());
    }
    std::vector<PreparedInput> epoch1;
    for (const auto& s : states) {
      epoch1.push_back(PrepareFromState(s, u1, next.KeyBits(), 1, rng));
    }
    auto two_epoch = RunRound(next, epoch1, &store);
    CheckAccounting(two_epoch, next.ComputingParties());

    auto one_shot = RunRound(next, Prepare(next, unions, u1, rng));
    const auto a = oracle::FromReports(two_epoch.reports);
    const auto b = oracle::FromReports(one_shot.reports);
    std::map<PartyId, std::vector<HashedId>> lines_a, lines_b;
    for (const auto& [p, r] : two_epoch.reports) {
      for (const auto& l : r.lines) lines_a[p].push_back(l.v);
    }
    for (const auto& [p, r] : one_shot.reports) {
      for (const auto& l : r.lines) lines_b[p].push_back(l.v);
    }
    if (a == b && lines_a == lines_b &&
        a == oracle::BruteForceShared(unions, oracle::RuleFor(next))) {
      ++identical;
    }
  }
  Outcome out;
  out.pass = identical == kTrials;
  out.detail = std::to_string(identical) + "/" + std::to_string(kTrials) +
               " two-epoch runs identical to one-shot runs on the union";
  return out;
}

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace stockpile

int main(int argc, char** argv) {
  using namespace stockpile;
  const std::uint64_t seed = 20260101;
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence", [&] { return OracleEquivalence(seed + 1); }},
      {2, "sortedness abort", [&] { return SortednessAbort(seed + 2); }},
      {3, "gate-count bounds", [] { return GateCountBounds(); }},
      {4, "communication accounting", [&] { return Accounting(seed + 4); }},
      {5, "identifier determinism",
       [&] { return IdentifierDeterminism(seed + 5); }},
      {6, "shuffle unlinkability",
       [&] { return ShuffleUnlinkability(seed + 6); }},
      {7, "ledger attack", [&] { return LedgerAttack(seed + 7); }},
      {8, "dummy soundness", [&] { return DummySoundness(seed + 8); }},
      {9, "epoch persistence", [&] { return EpochPersistence(seed + 9); }},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  bool all = true;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    all = all && o.pass;
    std::printf("%s %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
