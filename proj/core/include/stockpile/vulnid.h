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

// Machine-readable vulnerability identifiers.
//
// An identifier is the triple (CPE 2.3 platform, CWE weakness class,
// vulnerable function). Two parties describing the same vulnerability must
// produce byte-identical canonical encodings, so canonicalization fixes key
// order, whitespace, letter case and Unicode normalization. The hash of the
// canonical bytes (SHA3-512, truncated to sigma bits) is what enters the
// intersection circuit or the ledger; plaintext identifiers never leave the
// owning party.

#ifndef STOCKPILE_VULNID_H_
#define STOCKPILE_VULNID_H_

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "stockpile/bits.h"

namespace stockpile {

inline constexpr std::size_t kCpeComponentCount = 11;
inline constexpr std::size_t kDefaultSigma = 256;

struct VulnIdentifier {
  std::string cpe;
  std::int64_t cwe = 0;
  std::string function;

  friend bool operator==(const VulnIdentifier&, const VulnIdentifier&) = default;
};

// The eleven attribute values of a CPE 2.3 formatted string, in binding
// order: part, vendor, product, version, update, edition, language,
// sw_edition, target_sw, target_hw, other.
using CpeComponents = std::array<std::string, kCpeComponentCount>;

// Splits on unescaped colons and validates each attribute. The identifier
// must name exactly one platform: part is one of a/o/h and vendor and product
// are concrete values. Throws Error(kInvalidCpe).
CpeComponents ParseCpe(std::string_view cpe);

// Lowercase, validated CPE string.
std::string NormalizeCpe(std::string_view cpe);

// NFC-normalized, lowercased function name. Throws Error(kEmptyFunction).
std::string NormalizeFunctionName(std::string_view name);

// Canonical object-notation bytes:
//   {"cpe":"<lowercase cpe>","cwe":<int>,"function":"<nfc lowercase>"}
// Throws InvalidCpe / InvalidCwe / EmptyFunction.
std::string Canonicalize(const VulnIdentifier& id);

// Parses one JSON object with keys cpe, cwe, function (any order). cwe may be
// an integer or a "CWE-<n>" string. Values are taken verbatim; validation
// happens in Canonicalize.
VulnIdentifier ParseIdentifierJson(std::string_view json);

// A sigma-bit comparison key, stored big-endian in ceil(sigma/8) bytes.
class HashedId {
 public:
  HashedId() = default;
  // Throws kInvalidSigma if the byte count does not match sigma or sigma is
  // not a multiple of 8.
  HashedId(Bytes bytes, std::size_t sigma);

  static HashedId FromHex(std::string_view hex, std::size_t sigma);
  static HashedId FromUint(std::uint64_t value, std::size_t sigma);

  const Bytes& bytes() const noexcept { return bytes_; }
  std::size_t sigma() const noexcept { return sigma_; }
  std::string hex() const { return HexEncode(bytes_); }
  BitVector bits() const { return BytesToBits(bytes_, sigma_); }
  bool is_zero() const noexcept;

  friend bool operator==(const HashedId&, const HashedId&) = default;
  friend std::strong_ordering operator<=>(const HashedId& a,
                                          const HashedId& b) {
    if (auto c = a.sigma_ <=> b.sigma_; c != 0) return c;
    return a.bytes_ <=> b.bytes_;
  }

 private:
  Bytes bytes_;
  std::size_t sigma_ = 0;
};

bool IsSupportedHashSigma(std::size_t sigma);

// First sigma bits of SHA3-512(Canonicalize(id)). sigma must be one of
// 16, 32, 64, 128, 256. An all-zero truncation is reserved for the circuit's
// boundary sentinel and raises kSentinelCollision.
HashedId HashIdentifier(const VulnIdentifier& id,
                        std::size_t sigma = kDefaultSigma);
HashedId HashCanonicalBytes(std::string_view canonical, std::size_t sigma);

// Full 512-bit digest of the canonical bytes, as used by the ledger.
std::string LedgerHashHex(const VulnIdentifier& id);

// log2(|CPE| * |CWE| * |FN|). All counts must be >= 1.
double ApproxIdSpace(double cpe_count, double cwe_count, double fn_count);

// Identifier files hold one JSON object per line; blank lines and lines
// starting with '#' are skipped.
struct IdentifierLine {
  std::size_t line_number = 0;
  VulnIdentifier id;
};
// Throws Error(kParseError) naming the offending line.
std::vector<IdentifierLine> ReadIdentifierFile(std::istream& in);

// Hash files hold one lowercase hex value per line.
void WriteHashFile(std::ostream& out, const std::vector<HashedId>& hashes);
std::vector<HashedId> ReadHashFile(std::istream& in, std::size_t sigma);

}  // namespace stockpile

#endif  // STOCKPILE_VULNID_H_
