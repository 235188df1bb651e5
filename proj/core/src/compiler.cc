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

#include "stockpile/compiler.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "stockpile/error.h"
#include "stockpile/gadgets.h"

namespace stockpile {

std::string Variant::Name() const {
  switch (kind) {
    case VariantKind::kAtLeastTwo: return "at-least-two";
    case VariantKind::kAtLeastM: return "at-least-m";
    case VariantKind::kFixedPlusM: return "fixed-plus-m";
  }
  return "unknown";
}

Variant ParseVariant(const std::string& name, std::size_t m,
                     std::vector<std::uint32_t> fixed_tags) {
  if (name == "at-least-two") return Variant::AtLeastTwo();
  if (name == "at-least-m") return Variant::AtLeastM(m);
  if (name == "fixed-plus-m") {
    return Variant::FixedPlusM(std::move(fixed_tags), m);
  }
  throw Error(ErrorCode::kConfigInvalid, "unknown variant '" + name + "'");
}

std::size_t CircuitConfig::TagBits() const {
  if (variant.kind != VariantKind::kFixedPlusM) return 0;
  if (tag_bits) return tag_bits;
  return std::max<std::size_t>(1, CeilLog2(variant.z() + 1));
}

std::uint32_t CircuitConfig::OtherTag() const {
  if (variant.kind != VariantKind::kFixedPlusM || variant.fixed_tags.empty()) {
    return 0;
  }
  const std::uint64_t limit = std::uint64_t{1} << TagBits();
  auto [lo, hi] = std::minmax_element(variant.fixed_tags.begin(),
                                      variant.fixed_tags.end());
  if (limit - 1 > *hi) return static_cast<std::uint32_t>(limit - 1);
  if (*lo > 0) return 0;
  throw Error(ErrorCode::kConfigInvalid,
              "no tag value outside the fixed tag range fits in " +
                  std::to_string(TagBits()) + " bits");
}

std::size_t CircuitConfig::WindowSize() const {
  switch (variant.kind) {
    case VariantKind::kAtLeastTwo: return 2;
    case VariantKind::kAtLeastM: return variant.m;
    case VariantKind::kFixedPlusM: return variant.m + variant.z();
  }
  return 0;
}

void CircuitConfig::Validate() const {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kConfigInvalid, why);
  };
  if (n_parties < 2) fail("need at least two parties");
  if (inputs_per_party < 1) fail("inputs_per_party must be >= 1");
  if (sigma < 1) fail("sigma must be >= 1");
  if (shuffle_layers == 0 && n_parties == 0) fail("no shuffle layers");
  switch (variant.kind) {
    case VariantKind::kAtLeastTwo:
      break;
    case VariantKind::kAtLeastM:
      if (variant.m < 1) fail("m must be >= 1");
      break;
    case VariantKind::kFixedPlusM: {
      if (variant.m < 1) fail("m must be >= 1");
      if (variant.fixed_tags.empty()) fail("fixed-plus-m needs fixed tags");
      if (TagBits() > 31) fail("tag_bits too large");
      std::set<std::uint32_t> seen;
      for (auto t : variant.fixed_tags) {
        if (t >> TagBits()) fail("fixed tag does not fit in tag_bits");
        if (!seen.insert(t).second) fail("fixed tags must be distinct");
      }
      OtherTag();
      break;
    }
  }
}

BitVector RecordLayout::Encode(std::span<const std::uint8_t> v_value,
                               std::uint32_t tag, bool valid,
                               std::span<const std::uint8_t> k0,
                               std::span<const std::uint8_t> k1) const {
  if (v_value.size() != v_bits || k0.size() != key_bits ||
      k1.size() != key_bits) {
    throw Error(ErrorCode::kWidthMismatch, "record field widths");
  }
  BitVector out;
  out.reserve(record_bits());
  out.insert(out.end(), v_value.begin(), v_value.end());
  out.push_back(valid ? 0 : 1);
  BitVector t = UintToBits(tag, tag_bits);
  out.insert(out.end(), t.begin(), t.end());
  out.insert(out.end(), k0.begin(), k0.end());
  out.insert(out.end(), k1.begin(), k1.end());
  return out;
}

RecordLayout LayoutFor(const CircuitConfig& cfg) {
  return {cfg.sigma, cfg.TagBits(), cfg.KeyBits()};
}

std::string StageName(StageKind kind) {
  switch (kind) {
    case StageKind::kSortCheck: return "SortCheck";
    case StageKind::kMergeTree: return "MergeTree";
    case StageKind::kDupSelect: return "DupSelect";
    case StageKind::kShuffle: return "Shuffle";
  }
  return "Unknown";
}

double StageBounds::For(StageKind kind) const {
  switch (kind) {
    case StageKind::kSortCheck: return sort_check;
    case StageKind::kMergeTree: return merge_tree;
    case StageKind::kDupSelect: return dup_select;
    case StageKind::kShuffle: return shuffle;
  }
  return 0;
}

StageBounds AnalyticBounds(const CircuitConfig& cfg) {
  const double n = static_cast<double>(cfg.n_parties);
  const double u = static_cast<double>(cfg.inputs_per_party);
  const double sigma = static_cast<double>(cfg.sigma);
  const double layers = static_cast<double>(cfg.ShuffleLayers());
  StageBounds b;
  b.sort_check = n * (u - 1) * (sigma + 1);
  b.merge_tree = 2 * n * n * u * sigma * std::log2(n * u);
  b.dup_select = 4 * n * u * sigma;
  b.shuffle = layers * sigma * 2 * n * u * std::log2(2 * n * u);
  return b;
}

const StageSummary& CompiledCircuit::Stage(StageKind kind) const {
  const std::string name = StageName(kind);
  for (const auto& s : stages) {
    if (s.name == name) return s;
  }
  throw Error(ErrorCode::kConfigInvalid, "no stage " + name);
}

namespace {

std::span<const WireId> Field(const Wires& rec, std::size_t offset,
                              std::size_t width) {
  return std::span<const WireId>(rec.data() + offset, width);
}

struct Emitter {
  CircuitBuilder& b;
  const CircuitConfig& cfg;
  RecordLayout layout;

  std::span<const WireId> V(const Wires& r) const {
    return Field(r, 0, layout.v_bits);
  }
  std::span<const WireId> Tag(const Wires& r) const {
    return Field(r, layout.tag_offset(), layout.tag_bits);
  }
  WireId Valid(const Wires& r) { return b.Not(r[layout.dummy_offset()]); }
  std::span<const WireId> K0(const Wires& r) const {
    return Field(r, layout.k0_offset(), layout.key_bits);
  }
  std::span<const WireId> K1(const Wires& r) const {
    return Field(r, layout.k1_offset(), layout.key_bits);
  }

  // l_i = 1 iff some consecutive pair of party i violates v_j < v_{j+1}.
  Wires SortCheck(const std::vector<std::vector<Wires>>& lists) {
    Wires flags;
    for (const auto& list : lists) {
      Wires violations;
      for (std::size_t j = 0; j + 1 < list.size(); ++j) {
        violations.push_back(b.Not(LessThan(b, V(list[j]), V(list[j + 1]))));
      }
      flags.push_back(OrFold(b, violations));
    }
    return flags;
  }

  // Binary tree of mergers, level by level; an unpaired list moves up as is.
  std::vector<Wires> MergeTree(std::vector<std::vector<Wires>> lists) {
    const std::size_t key_bits = layout.sort_key_bits();
    while (lists.size() > 1) {
      std::vector<std::vector<Wires>> next;
      for (std::size_t i = 0; i < lists.size(); i += 2) {
        if (i + 1 == lists.size()) {
          next.push_back(std::move(lists[i]));
        } else {
          next.push_back(BitonicMerge(b, std::move(lists[i]),
                                      std::move(lists[i + 1]), key_bits));
        }
      }
      lists = std::move(next);
    }
    return std::move(lists[0]);
  }

  // eq[i] = (v_i == v_{i+1}) & valid_i & valid_{i+1}.
  Wires AdjacentEqual(const std::vector<Wires>& recs) {
    Wires valid;
    for (const auto& r : recs) valid.push_back(Valid(r));
    Wires eq;
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
      WireId same = Equal(b, V(recs[i]), V(recs[i + 1]));
      eq.push_back(b.And(same, b.And(valid[i], valid[i + 1])));
    }
    return eq;
  }

  std::vector<Wires> DupSelect(const std::vector<Wires>& recs) {
    if (cfg.variant.kind == VariantKind::kAtLeastTwo) return PairSelect(recs);
    return WindowSelect(recs);
  }

  // Every adjacent pair, including the two pairs with the 0^sigma sentinel,
  // emits one key per member: the 1-keys if the pair is equal, else 0-keys.
  std::vector<Wires> PairSelect(const std::vector<Wires>& recs) {
    const BitVector zero(layout.v_bits, 0);
    std::vector<Wires> keys;
    keys.reserve(2 * recs.size());
    WireId left = EqualConst(b, V(recs.front()), zero);
    keys.push_back(Mux(b, left, K0(recs.front()), K1(recs.front())));
    Wires eq = AdjacentEqual(recs);
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
      keys.push_back(Mux(b, eq[i], K0(recs[i]), K1(recs[i])));
      keys.push_back(Mux(b, eq[i], K0(recs[i + 1]), K1(recs[i + 1])));
    }
    WireId right = EqualConst(b, V(recs.back()), zero);
    keys.push_back(Mux(b, right, K0(recs.back()), K1(recs.back())));
    return keys;
  }

  // z-Filter: AND over fixed tags T_i of (OR over the window of t_j == T_i).
  WireId TagFilter(const std::vector<Wires>& recs, std::size_t start,
                   std::size_t width) {
    Wires present;
    for (std::uint32_t tag : cfg.variant.fixed_tags) {
      BitVector tag_bits = UintToBits(tag, layout.tag_bits);
      Wires hits;
      for (std::size_t j = start; j < start + width; ++j) {
        hits.push_back(EqualConst(b, Tag(recs[j]), tag_bits));
      }
      present.push_back(OrFold(b, hits));
    }
    return AndFold(b, present);
  }

  // Sliding windows of `width` consecutive records; a record is flagged if
  // any qualifying window contains it. FixedPlusM additionally requires the
  // z-Filter and spreads a qualifying window's flag over its whole equal-v
  // run.
  std::vector<Wires> WindowSelect(const std::vector<Wires>& recs) {
    const std::size_t count = recs.size();
    const bool fixed = cfg.variant.kind == VariantKind::kFixedPlusM;
    const std::size_t width =
        cfg.variant.m + (fixed ? cfg.variant.z() : 0);
    Wires eq = AdjacentEqual(recs);

    Wires window_ok;
    if (width == 1) {
      for (const auto& r : recs) window_ok.push_back(Valid(r));
    } else if (count >= width) {
      for (std::size_t s = 0; s + width <= count; ++s) {
        WireId ok = AndFold(
            b, std::span<const WireId>(eq.data() + s, width - 1));
        if (fixed) ok = b.And(ok, TagFilter(recs, s, width));
        window_ok.push_back(ok);
      }
    }

    Wires flag(count);
    for (std::size_t i = 0; i < count; ++i) {
      Wires covering;
      if (!window_ok.empty()) {
        std::size_t first = i + 1 >= width ? i + 1 - width : 0;
        std::size_t last = std::min(i, window_ok.size() - 1);
        for (std::size_t s = first; s <= last; ++s) {
          covering.push_back(window_ok[s]);
        }
      }
      flag[i] = OrFold(b, covering);
    }

    if (fixed && count > 1) {
      for (std::size_t i = 1; i < count; ++i) {
        flag[i] = b.Or(flag[i], b.And(eq[i - 1], flag[i - 1]));
      }
      for (std::size_t i = count - 1; i-- > 0;) {
        flag[i] = b.Or(flag[i], b.And(eq[i], flag[i + 1]));
      }
    }

    std::vector<Wires> keys;
    keys.reserve(2 * count);
    for (std::size_t i = 0; i < count; ++i) {
      Wires key = Mux(b, flag[i], K0(recs[i]), K1(recs[i]));
      keys.push_back(key);
      keys.push_back(std::move(key));
    }
    return keys;
  }

  std::vector<Wires> Shuffle(std::vector<Wires> keys) {
    const std::size_t switches = WaksmanSwitchCount(keys.size());
    for (std::size_t layer = 0; layer < cfg.ShuffleLayers(); ++layer) {
      Wires controls = b.Inputs(
          static_cast<OwnerId>(cfg.n_parties + layer), switches);
      keys = WaksmanNetwork(b, std::move(keys), controls);
    }
    return keys;
  }
};

std::vector<std::vector<Wires>> RecordInputs(CircuitBuilder& b,
                                             const CircuitConfig& cfg,
                                             const RecordLayout& layout) {
  std::vector<std::vector<Wires>> lists(cfg.n_parties);
  for (std::size_t p = 0; p < cfg.n_parties; ++p) {
    for (std::size_t j = 0; j < cfg.inputs_per_party; ++j) {
      lists[p].push_back(
          b.Inputs(static_cast<OwnerId>(p), layout.record_bits()));
    }
  }
  return lists;
}

}  // namespace

CompiledCircuit BuildDepletionCircuit(const CircuitConfig& cfg,
                                      BuildMode mode) {
  cfg.Validate();
  CircuitBuilder b(mode == BuildMode::kMaterialize
                       ? CircuitBuilder::Mode::kMaterialize
                       : CircuitBuilder::Mode::kCountOnly,
                   mode != BuildMode::kCountOnly);
  Emitter e{b, cfg, LayoutFor(cfg)};
  auto lists = RecordInputs(b, cfg, e.layout);

  b.BeginStage(StageName(StageKind::kSortCheck));
  Wires flags = e.SortCheck(lists);
  b.EndStage();
  b.MarkReactiveOpen(flags);

  b.BeginStage(StageName(StageKind::kMergeTree));
  std::vector<Wires> merged = e.MergeTree(std::move(lists));
  b.EndStage();

  b.BeginStage(StageName(StageKind::kDupSelect));
  std::vector<Wires> keys = e.DupSelect(merged);
  b.EndStage();

  b.BeginStage(StageName(StageKind::kShuffle));
  keys = e.Shuffle(std::move(keys));
  b.EndStage();
  for (const auto& k : keys) b.AddOutputs(k);

  CompiledCircuit out;
  out.config = cfg;
  out.stages = b.stages();
  out.totals = b.counts();
  if (mode == BuildMode::kMaterialize) out.circuit = std::move(b).Finish();
  return out;
}

StageCircuit BuildStageCircuit(StageKind kind, const CircuitConfig& cfg) {
  cfg.Validate();
  CircuitBuilder b;
  Emitter e{b, cfg, LayoutFor(cfg)};
  const std::size_t records = cfg.RecordCount();
  switch (kind) {
    case StageKind::kSortCheck: {
      auto lists = RecordInputs(b, cfg, e.layout);
      b.BeginStage(StageName(kind));
      b.AddOutputs(e.SortCheck(lists));
      break;
    }
    case StageKind::kMergeTree: {
      auto lists = RecordInputs(b, cfg, e.layout);
      b.BeginStage(StageName(kind));
      for (const auto& r : e.MergeTree(std::move(lists))) b.AddOutputs(r);
      break;
    }
    case StageKind::kDupSelect: {
      std::vector<Wires> merged;
      for (std::size_t i = 0; i < records; ++i) {
        merged.push_back(b.Inputs(0, e.layout.record_bits()));
      }
      b.BeginStage(StageName(kind));
      for (const auto& k : e.DupSelect(merged)) b.AddOutputs(k);
      break;
    }
    case StageKind::kShuffle: {
      std::vector<Wires> keys;
      for (std::size_t i = 0; i < 2 * records; ++i) {
        keys.push_back(b.Inputs(0, e.layout.key_bits));
      }
      b.BeginStage(StageName(kind));
      for (const auto& k : e.Shuffle(std::move(keys))) b.AddOutputs(k);
      break;
    }
  }
  StageSummary summary = b.EndStage();
  return {std::move(b).Finish(), std::move(summary)};
}

BooleanCircuit BuildMaxCircuit(std::size_t n_parties, std::size_t count_bits) {
  if (n_parties < 1 || count_bits < 1) {
    throw Error(ErrorCode::kConfigInvalid, "max circuit needs inputs");
  }
  CircuitBuilder b;
  std::vector<Wires> values;
  for (std::size_t i = 0; i < n_parties; ++i) {
    values.push_back(b.Inputs(static_cast<OwnerId>(i), count_bits));
  }
  while (values.size() > 1) {
    std::vector<Wires> next;
    for (std::size_t i = 0; i + 1 < values.size(); i += 2) {
      WireId smaller = LessThan(b, values[i], values[i + 1]);
      next.push_back(Mux(b, smaller, values[i], values[i + 1]));
    }
    if (values.size() % 2) next.push_back(std::move(values.back()));
    values = std::move(next);
  }
  b.AddOutputs(values[0]);
  return std::move(b).Finish();
}

void WriteStageManifest(std::ostream& out, const CompiledCircuit& compiled) {
  const CircuitConfig& cfg = compiled.config;
  StageBounds bounds = AnalyticBounds(cfg);
  out << "# parties=" << cfg.n_parties << " u=" << cfg.inputs_per_party
      << " sigma=" << cfg.sigma << " key_bits=" << cfg.KeyBits()
      << " variant=" << cfg.variant.Name() << " m=" << cfg.variant.m
      << " z=" << cfg.variant.z() << " layers=" << cfg.ShuffleLayers() << '\n';
  out << "stage\tgate_begin\tgate_end\twire_begin\twire_end\tand\txor\tdepth"
         "\tand_bound\n";
  for (const auto& s : compiled.stages) {
    double bound = 0;
    for (auto kind : {StageKind::kSortCheck, StageKind::kMergeTree,
                      StageKind::kDupSelect, StageKind::kShuffle}) {
      if (StageName(kind) == s.name) bound = bounds.For(kind);
    }
    out << s.name << '\t' << s.gate_begin << '\t' << s.gate_end << '\t'
        << s.wire_begin << '\t' << s.wire_end << '\t' << s.counts.and_count
        << '\t' << s.counts.xor_count << '\t' << s.counts.depth_and << '\t'
        << static_cast<std::uint64_t>(std::floor(bound)) << '\n';
  }
  out << "total\t0\t" << compiled.totals.and_count + compiled.totals.xor_count
      << "\t0\t0\t" << compiled.totals.and_count << '\t'
      << compiled.totals.xor_count << '\t' << compiled.totals.depth_and
      << "\t-\n";
}

}  // namespace stockpile
