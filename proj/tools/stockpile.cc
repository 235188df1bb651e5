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


// stockpile: operator entry points.
//
//   stockpile idgen    --in ids.jsonl --sigma 256 --out hashes.txt
//   stockpile compile  --parties 3 --u 4 --sigma 16 --report manifest.tsv
//   stockpile simulate --config session.cfg --out-dir reports/
//   stockpile oracle   --config session.cfg --out-dir expected/
//   stockpile ledger   attack --bits 16 --submissions 200
//   stockpile ledger   verify --file chain.stkl
//   stockpile ledger   tamper --file chain.stkl --bit 1000 --out bad.stkl
//   stockpile bench    --parties-list 2,5 --u-list 100,500
//
// Failures print one line "stockpile: error code=<Code> ..." on stderr and
// exit non-zero: 1 for library errors, 2 for usage errors, 3 when a round
// aborts on an unsorted input list.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "stockpile/bits.h"
#include "stockpile/circuit.h"
#include "stockpile/compiler.h"
#include "stockpile/error.h"
#include "stockpile/gadgets.h"
#include "stockpile/ledger.h"
#include "stockpile/mpc.h"
#include "stockpile/oracle.h"
#include "stockpile/session.h"
#include "stockpile/vulnid.h"

namespace fs = std::filesystem;

namespace stockpile {
namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAbort = 3;

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

void ErrorLine(std::string_view code, const std::string& message,
               const std::string& extra = "") {
  std::cerr << "stockpile: error code=" << code;
  if (!extra.empty()) std::cerr << ' ' << extra;
  std::cerr << " message=" << Quote(message) << std::endl;
}

void InitLogging() {
  auto logger = spdlog::stderr_logger_mt("stockpile");
  logger->set_pattern("stockpile: %l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("STOCKPILE_LOG_LEVEL")) {
    const auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string(env) != "off") {
      spdlog::warn("unknown STOCKPILE_LOG_LEVEL '{}', using warn", env);
    } else {
      spdlog::set_level(level);
    }
  }
}

// --seed wins; otherwise system entropy. The chosen seed is logged so any
// run can be repeated.
std::uint64_t ResolveSeed(const std::optional<std::uint64_t>& flag,
                          std::uint64_t fallback = 0) {
  std::uint64_t seed = 0;
  if (flag) {
    seed = *flag;
  } else if (fallback != 0) {
    seed = fallback;
  } else {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  spdlog::info("seed {}", seed);
  return seed;
}

std::ifstream OpenIn(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return in;
}

std::ofstream OpenOut(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return out;
}

// Writes to `path`, or to stdout for "-".
template <typename Fn>
void WriteTo(const std::string& path, Fn&& fn) {
  if (path == "-") {
    fn(std::cout);
    return;
  }
  auto out = OpenOut(path);
  fn(out);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path);
}

// --- idgen ---------------------------------------------------------------

struct IdgenOptions {
  std::string in;
  std::string out = "-";
  std::size_t sigma = kDefaultSigma;
};

int RunIdgen(const IdgenOptions& o) {
  auto in = OpenIn(o.in);
  const auto lines = ReadIdentifierFile(in);
  std::vector<HashedId> hashes;
  std::map<std::string, std::size_t> seen_canonical;
  std::map<HashedId, std::size_t> seen_hash;
  for (const auto& line : lines) {
    std::string canonical;
    HashedId h;
    try {
      canonical = Canonicalize(line.id);
      h = HashCanonicalBytes(canonical, o.sigma);
    } catch (const Error& e) {
      throw Error(e.code(),
                  "line " + std::to_string(line.line_number) + ": " + e.what());
    }
    if (auto it = seen_canonical.find(canonical); it != seen_canonical.end()) {
      spdlog::warn("line {}: duplicate of line {}, skipped", line.line_number,
                   it->second);
      continue;
    }
    seen_canonical.emplace(canonical, line.line_number);
    if (auto it = seen_hash.find(h); it != seen_hash.end()) {
      spdlog::warn("line {}: {}-bit value collides with line {}, skipped",
                   line.line_number, o.sigma, it->second);
      continue;
    }
    seen_hash.emplace(h, line.line_number);
    hashes.push_back(h);
  }
  WriteTo(o.out, [&](std::ostream& out) { WriteHashFile(out, hashes); });
  spdlog::info("{} identifiers, {} hashes", lines.size(), hashes.size());
  return 0;
}

// --- compile -------------------------------------------------------------

struct CircuitOptions {
  std::size_t parties = 2;
  std::size_t u = 1;
  std::size_t sigma = kDefaultSigma;
  std::size_t key_bits = 0;
  std::string variant = "at-least-two";
  std::size_t m = 2;
  std::size_t z = 1;
  std::size_t layers = 0;
};

void AddCircuitFlags(CLI::App* cmd, CircuitOptions& o) {
  cmd->add_option("--sigma", o.sigma, "comparison bits")->capture_default_str();
  cmd->add_option("--key-bits", o.key_bits, "key width; 0 selects sigma");
  cmd->add_option("--variant", o.variant,
                  "at-least-two | at-least-m | fixed-plus-m")
      ->capture_default_str();
  cmd->add_option("--m", o.m, "threshold m")->capture_default_str();
  cmd->add_option("--z", o.z, "fixed parties (fixed-plus-m)")
      ->capture_default_str();
  cmd->add_option("--layers", o.layers, "shuffle layers; 0 selects N");
}

CircuitConfig MakeCircuitConfig(const CircuitOptions& o, std::size_t parties,
                                std::size_t u) {
  std::vector<std::uint32_t> tags;
  if (o.variant == "fixed-plus-m") {
    for (std::uint32_t t = 0; t < o.z; ++t) tags.push_back(t);
  }
  CircuitConfig cfg;
  cfg.n_parties = parties;
  cfg.inputs_per_party = u;
  cfg.sigma = o.sigma;
  cfg.key_bits = o.key_bits;
  cfg.variant = ParseVariant(o.variant, o.m, tags);
  cfg.shuffle_layers = o.layers;
  if (cfg.variant.kind != VariantKind::kAtLeastTwo && o.m > parties * u) {
    throw Error(ErrorCode::kConfigInvalid,
                "m = " + std::to_string(o.m) + " exceeds N*u = " +
                    std::to_string(parties * u));
  }
  cfg.Validate();
  return cfg;
}

struct CompileOptions {
  CircuitOptions circuit;
  std::string out;
  std::string report = "-";
  bool count_only = false;
};

int RunCompile(const CompileOptions& o) {
  const auto cfg = MakeCircuitConfig(o.circuit, o.circuit.parties, o.circuit.u);
  const bool materialize = !o.count_only && !o.out.empty();
  const auto compiled = BuildDepletionCircuit(
      cfg, materialize ? BuildMode::kMaterialize : BuildMode::kCountWithDepth);
  if (materialize) {
    WriteTo(o.out, [&](std::ostream& out) {
      WriteCircuitText(out, compiled.circuit);
    });
  }
  WriteTo(o.report,
          [&](std::ostream& out) { WriteStageManifest(out, compiled); });
  spdlog::info("and={} xor={} depth={}", compiled.totals.and_count,
               compiled.totals.xor_count, compiled.totals.depth_and);
  return 0;
}

// --- simulate / oracle ---------------------------------------------------

struct SessionFiles {
  SessionConfig cfg;
  std::map<PartyId, std::vector<HashedId>> stockpiles;
};

SessionFiles LoadSession(const std::string& config_path) {
  SessionFiles s;
  auto in = OpenIn(config_path);
  s.cfg = ReadSessionConfig(in);
  const fs::path base = fs::path(config_path).parent_path();
  for (PartyId p : s.cfg.active_parties) {
    auto it = s.cfg.input_files.find(p);
    if (it == s.cfg.input_files.end()) {
      throw Error(ErrorCode::kConfigInvalid,
                  "no [inputs] entry for party " + std::to_string(p));
    }
    fs::path path = it->second;
    if (path.is_relative()) path = base / path;
    auto hashes_in = OpenIn(path);
    s.stockpiles[p] = ReadHashFile(hashes_in, s.cfg.sigma);
  }
  return s;
}

struct SimulateOptions {
  std::string config;
  std::string out_dir = ".";
  std::optional<PartyId> inject_unsorted;
  std::optional<std::uint64_t> seed;
  std::string backend;
  bool lockstep = false;
};

int RunSimulate(const SimulateOptions& o) {
  SessionFiles files = LoadSession(o.config);
  SessionConfig& cfg = files.cfg;
  cfg.seed = ResolveSeed(o.seed, cfg.seed);
  if (o.backend == "plaintext") cfg.backend = Backend::kPlaintext;
  if (o.backend == "mpc") cfg.backend = Backend::kMpc;
  cfg.threaded = !o.lockstep;
  const std::string digest = ConfigDigest(cfg);
  spdlog::info("config digest {}", digest);

  BitRng root(cfg.seed);
  std::vector<Stockpile> piles;
  std::vector<std::size_t> counts;
  for (PartyId p : cfg.active_parties) {
    Stockpile s(p, cfg.sigma);
    for (const auto& h : files.stockpiles[p]) s.Add(h);
    counts.push_back(s.DistinctValues().size());
    piles.push_back(std::move(s));
  }
  const std::size_t u = NegotiateU(counts, root.Fork(1).NextU64());
  spdlog::info("negotiated u = {}", u);

  std::vector<PreparedInput> inputs;
  for (const auto& s : piles) {
    // Each party draws dummies and keys from its own stream.
    BitRng party_rng = root.Fork(0x100 + s.party());
    inputs.push_back(
        PrepareInputs(s, u, cfg.KeyBits(), cfg.epoch, party_rng));
  }
  SessionFaults faults;
  faults.unsorted_party = o.inject_unsorted;
  const auto start = std::chrono::steady_clock::now();
  const RoundResult result = RunRound(cfg, inputs, nullptr, nullptr, faults);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (cfg.backend == Backend::kMpc) {
    CheckAccounting(result, cfg.ComputingParties());
  }

  const fs::path dir = o.out_dir;
  for (const auto& [party, report] : result.reports) {
    auto out = OpenOut(dir / ("report-" + std::to_string(party) + ".txt"));
    WriteReport(out, report);
  }
  std::ostringstream t;
  t << "config " << digest << '\n'
    << "seed " << cfg.seed << '\n'
    << "u " << u << '\n'
    << "and " << result.gates.and_count << " xor " << result.gates.xor_count
    << " depth " << result.gates.depth_and << " reactive_opens "
    << result.reactive_opens << '\n';
  for (std::size_t p = 0; p < result.transcripts.size(); ++p) {
    const auto& tr = result.transcripts[p];
    t << "computing_party " << p << " messages "
      << tr.messages_sent + tr.setup_messages << " payload_bits "
      << tr.bits_sent + tr.setup_bits << " bytes " << tr.bytes_sent
      << " rounds " << tr.rounds << " triples " << tr.triples_consumed
      << " and_layers " << tr.and_layers << '\n';
  }
  if (cfg.mode == ExecutionMode::kOutsourced) {
    t << "input_party_messages " << result.input_party_messages << '\n';
  }
  for (const auto& [party, report] : result.reports) {
    const auto shared = report.SharedValues().size();
    t << "party " << party << " shared " << shared << " exclusive "
      << report.lines.size() - shared << '\n';
  }
  t << "seconds " << seconds << '\n';
  auto out = OpenOut(dir / "transcript.txt");
  out << t.str();
  std::cout << t.str();
  return 0;
}

struct OracleOptions {
  std::string config;
  std::string out_dir = ".";
};

int RunOracle(const OracleOptions& o) {
  const SessionFiles files = LoadSession(o.config);
  oracle::PlainStockpileSet sets;
  for (const auto& [party, hashes] : files.stockpiles) {
    auto& s = sets[party];
    for (const auto& h : hashes) s.emplace(h.bytes().begin(), h.bytes().end());
  }
  const auto shared =
      oracle::BruteForceShared(sets, oracle::RuleFor(files.cfg));
  for (const auto& [party, values] : sets) {
    IntersectionReport report;
    report.party = party;
    for (const auto& v : values) {
      ReportLine line;
      line.v = HashedId(Bytes(v.begin(), v.end()), files.cfg.sigma);
      line.shared = shared.at(party).count(v) > 0;
      report.lines.push_back(line);
    }
    auto out =
        OpenOut(fs::path(o.out_dir) / ("expected-" + std::to_string(party) + ".txt"));
    WriteReport(out, report);
    std::cout << "party " << party << " shared " << shared.at(party).size()
              << " exclusive " << values.size() - shared.at(party).size()
              << '\n';
  }
  return 0;
}

// --- ledger --------------------------------------------------------------

struct LedgerAttackOptions {
  std::size_t bits = 16;
  std::size_t submissions = 200;
  std::size_t writers = 3;
  std::size_t burst = 25;
  std::optional<std::uint64_t> seed;
  std::string file;
  std::string save;
};

int RunLedgerAttack(const LedgerAttackOptions& o) {
  const ledger::ToyIdentifierSpace space(o.bits);
  ledger::Ledger chain;
  if (!o.file.empty()) {
    auto in = OpenIn(o.file);
    chain = ledger::Ledger::Read(in);
  } else {
    if (o.writers == 0 || o.burst == 0) {
      throw Error(ErrorCode::kConfigInvalid, "need writers and burst >= 1");
    }
    BitRng rng(ResolveSeed(o.seed));
    std::vector<std::string> writers;
    for (std::size_t w = 0; w < o.writers; ++w) {
      writers.push_back("writer-" + std::to_string(w));
      chain.RegisterWriter(writers.back());
    }
    chain.RegisterReader("reader");
    for (std::size_t i = 0; i < o.submissions; ++i) {
      chain.Submit(writers[(i / o.burst) % writers.size()],
                   LedgerHashHex(space.At(rng.Uniform(space.size()))));
    }
    chain.CheckIntersections("reader");
  }
  if (!o.save.empty()) {
    auto out = OpenOut(o.save);
    chain.Write(out);
  }
  ledger::WriteAttackReport(std::cout, ledger::BruteForceAttack(chain, space));
  return 0;
}

int RunLedgerVerify(const std::string& file) {
  auto in = OpenIn(file);
  const auto chain = ledger::Ledger::Read(in);
  if (auto bad = chain.VerifyChain()) {
    ErrorLine(ErrorCodeName(ErrorCode::kCorruptLedger),
              "hash chain broken", "block=" + std::to_string(*bad));
    return kExitError;
  }
  std::cout << "ok blocks " << chain.blocks().size() << '\n';
  return 0;
}

// Flips one bit of a ledger file, for tamper-detection demos.
int RunLedgerTamper(const std::string& file, std::uint64_t bit,
                    const std::string& out_path) {
  auto in = OpenIn(file);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (bit >= bytes.size() * 8) {
    throw Error(ErrorCode::kConfigInvalid,
                "bit " + std::to_string(bit) + " is past the end of the file");
  }
  bytes[bit / 8] = static_cast<char>(bytes[bit / 8] ^ (1 << (7 - bit % 8)));
  auto out = OpenOut(out_path);
  out << bytes;
  return 0;
}

// --- bench ---------------------------------------------------------------

struct BenchOptions {
  CircuitOptions circuit;
  std::vector<std::size_t> parties_list = {2, 5};
  std::vector<std::size_t> u_list = {100, 500};
  std::string mode = "count";
  std::optional<std::uint64_t> seed;
};

int RunBench(const BenchOptions& o) {
  std::cout << "# in-process GMW simulation; not comparable to published "
               "runtimes of other MPC stacks\n";
  if (o.mode == "count") {
    std::cout << "# count mode: wall_s is circuit construction time, "
                 "payload_bytes comes from the traffic model\n";
  } else {
    std::cout << "# run mode: one MPC round on random stockpiles, "
                 "payload_bytes measured\n";
  }
  std::cout << "N\tu\tsigma\tand\txor\tdepth\trounds\tpayload_bytes\twall_s"
               "\tmode\n";
  BitRng rng(o.mode == "run" ? ResolveSeed(o.seed) : 0);
  for (std::size_t n : o.parties_list) {
    for (std::size_t u : o.u_list) {
      const CircuitConfig cc = MakeCircuitConfig(o.circuit, n, u);
      const auto start = std::chrono::steady_clock::now();
      GateCounts gates;
      std::uint64_t rounds = 0, payload_bits = 0;
      if (o.mode == "count") {
        const auto compiled =
            BuildDepletionCircuit(cc, BuildMode::kCountWithDepth);
        gates = compiled.totals;
        const RecordLayout layout = LayoutFor(cc);
        const std::uint64_t records = cc.RecordCount();
        const std::uint64_t input_bits =
            records * layout.record_bits() +
            cc.ShuffleLayers() * WaksmanSwitchCount(2 * records);
        const std::uint64_t opened = 2 * records * cc.KeyBits() + n;
        // One reactive open (the sortedness flags) plus the output open.
        rounds = gates.depth_and + 2;
        payload_bits =
            mpc::ModelTraffic(input_bits, gates.and_count, opened, n)
                .total_bits();
      } else {
        SessionConfig cfg;
        for (PartyId p = 0; p < n; ++p) cfg.active_parties.push_back(p);
        cfg.sigma = cc.sigma;
        cfg.key_bits = cc.KeyBits();
        cfg.variant = cc.variant.kind;
        cfg.m = cc.variant.m;
        for (std::size_t i = 0; i < cc.variant.z(); ++i) {
          cfg.fixed_parties.push_back(static_cast<PartyId>(i));
        }
        cfg.shuffle_layers = o.circuit.layers;
        cfg.seed = rng.NextU64();
        std::vector<PreparedInput> inputs;
        for (PartyId p = 0; p < n; ++p) {
          Stockpile s(p, cfg.sigma);
          // Half the entries come from a small shared pool.
          for (std::size_t i = 0; i < u; ++i) {
            HashedId v;
            if (i % 2 == 0) {
              v = HashedId::FromUint(1 + rng.Uniform(200), cfg.sigma);
            } else {
              do {
                v = HashedId(rng.RandomBytes(cfg.sigma / 8), cfg.sigma);
              } while (v.is_zero());
            }
            if (s.DistinctValues().size() < u) s.Add(v);
          }
          inputs.push_back(PrepareInputs(s, u, cfg.KeyBits(), 0, rng));
        }
        const auto result = RunRound(cfg, inputs);
        CheckAccounting(result, n);
        gates = result.gates;
        rounds = result.transcripts.at(0).rounds;
        for (const auto& t : result.transcripts) {
          payload_bits += t.bits_sent + t.setup_bits;
        }
      }
      const double seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
      std::cout << n << '\t' << u << '\t' << cc.sigma << '\t'
                << gates.and_count << '\t' << gates.xor_count << '\t'
                << gates.depth_and << '\t' << rounds << '\t'
                << payload_bits / 8 << '\t' << seconds << '\t' << o.mode
                << std::endl;
    }
  }
  return 0;
}

}  // namespace
}  // namespace stockpile

int main(int argc, char** argv) {
  using namespace stockpile;
  InitLogging();

  CLI::App app{"Stockpile PSI: multi-party vulnerability stockpile depletion"};
  app.require_subcommand(1);
  std::function<int()> action;

  IdgenOptions idgen;
  auto* idgen_cmd =
      app.add_subcommand("idgen", "hash vulnerability identifiers");
  idgen_cmd->add_option("--in", idgen.in, "identifier file, one JSON object per line")
      ->required();
  idgen_cmd->add_option("--sigma", idgen.sigma, "hash bits")->capture_default_str();
  idgen_cmd->add_option("--out", idgen.out, "hash file, - for stdout")
      ->capture_default_str();
  idgen_cmd->callback([&] { action = [&] { return RunIdgen(idgen); }; });

  CompileOptions compile;
  auto* compile_cmd =
      app.add_subcommand("compile", "build the depletion circuit");
  compile_cmd->add_option("--parties", compile.circuit.parties, "N")->required();
  compile_cmd->add_option("--u", compile.circuit.u, "records per party")->required();
  AddCircuitFlags(compile_cmd, compile.circuit);
  compile_cmd->add_option("--out", compile.out, "circuit file");
  compile_cmd->add_option("--report", compile.report,
                          "stage manifest, - for stdout")
      ->capture_default_str();
  compile_cmd->add_flag("--count-only", compile.count_only,
                        "count gates without materializing");
  compile_cmd->callback([&] { action = [&] { return RunCompile(compile); }; });

  SimulateOptions simulate;
  auto* simulate_cmd =
      app.add_subcommand("simulate", "run one round with in-process parties");
  simulate_cmd->add_option("--config", simulate.config, "session INI file")
      ->required();
  simulate_cmd->add_option("--out-dir", simulate.out_dir, "report directory")
      ->capture_default_str();
  simulate_cmd->add_option("--inject-unsorted", simulate.inject_unsorted,
                           "swap two records of this party's list");
  simulate_cmd->add_option("--seed", simulate.seed, "randomness seed");
  simulate_cmd->add_option("--backend", simulate.backend, "mpc | plaintext")
      ->check(CLI::IsMember({"mpc", "plaintext"}));
  simulate_cmd->add_flag("--lockstep", simulate.lockstep,
                         "run parties in one thread");
  simulate_cmd->callback([&] { action = [&] { return RunSimulate(simulate); }; });

  OracleOptions oracle_opts;
  auto* oracle_cmd =
      app.add_subcommand("oracle", "expected reports by brute force");
  oracle_cmd->add_option("--config", oracle_opts.config, "session INI file")
      ->required();
  oracle_cmd->add_option("--out-dir", oracle_opts.out_dir, "output directory")
      ->capture_default_str();
  oracle_cmd->callback([&] { action = [&] { return RunOracle(oracle_opts); }; });

  auto* ledger_cmd = app.add_subcommand("ledger", "hash-chain ledger model");
  ledger_cmd->require_subcommand(1);
  LedgerAttackOptions attack;
  auto* attack_cmd = ledger_cmd->add_subcommand(
      "attack", "brute-force a ledger copy over a toy identifier space");
  attack_cmd->add_option("--bits", attack.bits, "toy space size, log2")
      ->capture_default_str();
  attack_cmd->add_option("--submissions", attack.submissions)
      ->capture_default_str();
  attack_cmd->add_option("--writers", attack.writers)->capture_default_str();
  attack_cmd->add_option("--burst", attack.burst,
                         "consecutive submissions per writer")
      ->capture_default_str();
  attack_cmd->add_option("--seed", attack.seed, "randomness seed");
  attack_cmd->add_option("--file", attack.file, "attack this ledger file");
  attack_cmd->add_option("--save", attack.save, "write the ledger here");
  attack_cmd->callback([&] { action = [&] { return RunLedgerAttack(attack); }; });
  std::string verify_file;
  auto* verify_cmd =
      ledger_cmd->add_subcommand("verify", "check a ledger file's hash chain");
  verify_cmd->add_option("--file", verify_file)->required();
  verify_cmd->callback(
      [&] { action = [&] { return RunLedgerVerify(verify_file); }; });

  std::string tamper_file, tamper_out;
  std::uint64_t tamper_bit = 0;
  auto* tamper_cmd =
      ledger_cmd->add_subcommand("tamper", "flip one bit of a ledger file");
  tamper_cmd->add_option("--file", tamper_file)->required();
  tamper_cmd->add_option("--bit", tamper_bit, "bit index, MSB first")
      ->required();
  tamper_cmd->add_option("--out", tamper_out)->required();
  tamper_cmd->callback([&] {
    action = [&] { return RunLedgerTamper(tamper_file, tamper_bit, tamper_out); };
  });

  BenchOptions bench;
  bench.circuit.sigma = 256;
  auto* bench_cmd =
      app.add_subcommand("bench", "gate counts, rounds and traffic per (N, u)");
  bench_cmd->add_option("--parties-list", bench.parties_list)
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--u-list", bench.u_list)
      ->delimiter(',')
      ->capture_default_str();
  AddCircuitFlags(bench_cmd, bench.circuit);
  bench_cmd->add_option("--mode", bench.mode, "count | run")
      ->check(CLI::IsMember({"count", "run"}))
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "randomness seed (run mode)");
  bench_cmd->callback([&] { action = [&] { return RunBench(bench); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    ErrorLine("Usage", e.what());
    return kExitUsage;
  }

  try {
    return action();
  } catch (const AbortUnsorted& e) {
    std::string parties;
    for (auto p : e.parties()) {
      parties += (parties.empty() ? "" : ",") + std::to_string(p);
    }
    ErrorLine(ErrorCodeName(e.code()), e.what(), "parties=" + parties);
    return kExitAbort;
  } catch (const Error& e) {
    ErrorLine(ErrorCodeName(e.code()), e.what());
    return kExitError;
  } catch (const std::exception& e) {
    ErrorLine("Internal", e.what());
    return kExitError;
  }
}
