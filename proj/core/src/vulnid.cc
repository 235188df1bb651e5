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

#include "stockpile/vulnid.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "stockpile/crypto.h"
#include "stockpile/error.h"

namespace stockpile {
namespace {

using nlohmann::json;

constexpr std::string_view kCpePrefix = "cpe:2.3:";

char AsciiLower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool IsUnreserved(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
}

bool IsQuotable(char c) {
  return c >= 0x21 && c <= 0x7e && !(c >= 'a' && c <= 'z') &&
         !(c >= 'A' && c <= 'Z') && !(c >= '0' && c <= '9') && c != '_';
}

// Attribute value grammar of the formatted-string binding: "*" (ANY),
// "-" (NA), or a non-empty run of unreserved / backslash-quoted characters
// with optional leading or trailing wildcard runs.
void ValidateAttribute(std::string_view value, std::size_t index) {
  auto fail = [&](std::string_view why) {
    throw Error(ErrorCode::kInvalidCpe, "attribute " + std::to_string(index) +
                                            " '" + std::string(value) +
                                            "': " + std::string(why));
  };
  if (value.empty()) fail("empty");
  if (value == "*" || value == "-") return;
  std::size_t i = 0;
  while (i < value.size() && (value[i] == '*' || value[i] == '?')) ++i;
  std::size_t body_start = i;
  std::size_t body_end = value.size();
  while (body_end > body_start &&
         (value[body_end - 1] == '*' || value[body_end - 1] == '?') &&
         !(body_end >= 2 && value[body_end - 2] == '\\')) {
    --body_end;
  }
  if (body_start == body_end) fail("wildcards only");
  for (i = body_start; i < body_end; ++i) {
    char c = value[i];
    if (c == '\\') {
      if (i + 1 >= body_end || !IsQuotable(value[i + 1])) fail("bad escape");
      ++i;
    } else if (!IsUnreserved(c)) {
      fail("illegal character");
    }
  }
}

}  // namespace

CpeComponents ParseCpe(std::string_view cpe) {
  if (cpe.size() < kCpePrefix.size()) {
    throw Error(ErrorCode::kInvalidCpe, "too short: '" + std::string(cpe) + "'");
  }
  for (std::size_t i = 0; i < kCpePrefix.size(); ++i) {
    if (AsciiLower(cpe[i]) != kCpePrefix[i]) {
      throw Error(ErrorCode::kInvalidCpe,
                  "missing cpe:2.3 prefix: '" + std::string(cpe) + "'");
    }
  }
  CpeComponents components;
  std::size_t count = 0;
  std::string current;
  std::string_view body = cpe.substr(kCpePrefix.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (static_cast<unsigned char>(c) >= 0x80) {
      throw Error(ErrorCode::kInvalidCpe, "non-ASCII character in CPE");
    }
    if (c == '\\' && i + 1 < body.size()) {
      current.push_back(c);
      current.push_back(body[++i]);
      continue;
    }
    if (c == ':') {
      if (count >= kCpeComponentCount) break;
      components[count++] = std::move(current);
      current.clear();
      continue;
    }
    current.push_back(c);
  }
  if (count != kCpeComponentCount - 1) {
    throw Error(ErrorCode::kInvalidCpe,
                "expected 11 attributes after cpe:2.3: '" + std::string(cpe) +
                    "'");
  }
  components[count] = std::move(current);
  for (std::size_t i = 0; i < kCpeComponentCount; ++i) {
    ValidateAttribute(components[i], i);
  }
  std::string part = components[0];
  std::transform(part.begin(), part.end(), part.begin(), AsciiLower);
  if (part != "a" && part != "o" && part != "h") {
    throw Error(ErrorCode::kInvalidCpe, "part must be a, o or h");
  }
  // One platform per identifier.
  for (std::size_t i : {1u, 2u}) {
    if (components[i] == "*" || components[i] == "-") {
      throw Error(ErrorCode::kInvalidCpe,
                  "vendor and product must be concrete values");
    }
  }
  return components;
}

std::string NormalizeCpe(std::string_view cpe) {
  ParseCpe(cpe);
  std::string out(cpe);
  std::transform(out.begin(), out.end(), out.begin(), AsciiLower);
  return out;
}

std::string NormalizeFunctionName(std::string_view name) {
  UErrorCode status = U_ZERO_ERROR;
  // Reject malformed UTF-8 instead of silently substituting U+FFFD.
  {
    std::int32_t i = 0;
    const auto* s = reinterpret_cast<const std::uint8_t*>(name.data());
    auto len = static_cast<std::int32_t>(name.size());
    while (i < len) {
      UChar32 c;
      U8_NEXT(s, i, len, c);
      if (c < 0) {
        throw Error(ErrorCode::kEmptyFunction,
                    "function name is not valid UTF-8");
      }
    }
  }
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kIoError, "ICU NFC normalizer unavailable");
  }
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(name.data(), static_cast<std::int32_t>(name.size())));
  icu::UnicodeString folded = nfc->normalize(text, status);
  folded.toLower(icu::Locale::getRoot());
  icu::UnicodeString normalized = nfc->normalize(folded, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kEmptyFunction, "normalization failed");
  }
  std::string out;
  normalized.toUTF8String(out);
  if (out.empty()) {
    throw Error(ErrorCode::kEmptyFunction, "function name is empty");
  }
  return out;
}

std::string Canonicalize(const VulnIdentifier& id) {
  std::string cpe = NormalizeCpe(id.cpe);
  if (id.cwe <= 0) {
    throw Error(ErrorCode::kInvalidCwe,
                "cwe must be positive, got " + std::to_string(id.cwe));
  }
  std::string function = NormalizeFunctionName(id.function);
  // nlohmann::json objects are std::map backed, so keys serialize in byte
  // order; dump() without indent emits no whitespace.
  json j;
  j["cpe"] = std::move(cpe);
  j["cwe"] = id.cwe;
  j["function"] = std::move(function);
  return j.dump(-1, ' ', false, json::error_handler_t::strict);
}

namespace {

std::int64_t ParseCweValue(const json& value) {
  if (value.is_number_integer()) return value.get<std::int64_t>();
  if (value.is_string()) {
    std::string s = value.get<std::string>();
    std::string_view digits = s;
    if (digits.size() > 4 && AsciiLower(digits[0]) == 'c' &&
        AsciiLower(digits[1]) == 'w' && AsciiLower(digits[2]) == 'e' &&
        digits[3] == '-') {
      digits.remove_prefix(4);
    }
    std::int64_t out = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), out);
    if (ec == std::errc() && ptr == digits.data() + digits.size() &&
        !digits.empty()) {
      return out;
    }
  }
  throw Error(ErrorCode::kInvalidCwe, "cwe must be an integer or CWE-<n>");
}

}  // namespace

VulnIdentifier ParseIdentifierJson(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (!j.is_object()) {
    throw Error(ErrorCode::kParseError, "identifier must be a JSON object");
  }
  VulnIdentifier id;
  bool has_cpe = false, has_cwe = false, has_function = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "cpe") {
      if (!value.is_string()) {
        throw Error(ErrorCode::kInvalidCpe, "cpe must be a string");
      }
      id.cpe = value.get<std::string>();
      has_cpe = true;
    } else if (key == "cwe") {
      id.cwe = ParseCweValue(value);
      has_cwe = true;
    } else if (key == "function") {
      if (!value.is_string()) {
        throw Error(ErrorCode::kEmptyFunction, "function must be a string");
      }
      id.function = value.get<std::string>();
      has_function = true;
    } else {
      throw Error(ErrorCode::kParseError, "unexpected key '" + key + "'");
    }
  }
  if (!has_cpe || !has_cwe || !has_function) {
    throw Error(ErrorCode::kParseError,
                "identifier needs cpe, cwe and function");
  }
  return id;
}

HashedId::HashedId(Bytes bytes, std::size_t sigma)
    : bytes_(std::move(bytes)), sigma_(sigma) {
  if (sigma_ == 0 || sigma_ % 8 != 0 || bytes_.size() != sigma_ / 8) {
    throw Error(ErrorCode::kInvalidSigma,
                "HashedId of " + std::to_string(bytes_.size()) +
                    " bytes does not match sigma " + std::to_string(sigma_));
  }
}

HashedId HashedId::FromHex(std::string_view hex, std::size_t sigma) {
  auto bytes = HexDecode(hex);
  if (!bytes) {
    throw Error(ErrorCode::kParseError, "bad hex '" + std::string(hex) + "'");
  }
  return HashedId(std::move(*bytes), sigma);
}

HashedId HashedId::FromUint(std::uint64_t value, std::size_t sigma) {
  return HashedId(BitsToBytes(UintToBits(value, sigma)), sigma);
}

bool HashedId::is_zero() const noexcept {
  return std::all_of(bytes_.begin(), bytes_.end(),
                     [](std::uint8_t b) { return b == 0; });
}

bool IsSupportedHashSigma(std::size_t sigma) {
  return sigma == 16 || sigma == 32 || sigma == 64 || sigma == 128 ||
         sigma == 256;
}

HashedId HashCanonicalBytes(std::string_view canonical, std::size_t sigma) {
  if (!IsSupportedHashSigma(sigma)) {
    throw Error(ErrorCode::kInvalidSigma,
                "sigma must be 16, 32, 64, 128 or 256, got " +
                    std::to_string(sigma));
  }
  auto digest = Sha3_512(std::span(
      reinterpret_cast<const std::uint8_t*>(canonical.data()),
      canonical.size()));
  HashedId id(Bytes(digest.begin(), digest.begin() + sigma / 8), sigma);
  if (id.is_zero()) {
    throw Error(ErrorCode::kSentinelCollision,
                "digest truncates to the reserved all-zero value");
  }
  return id;
}

HashedId HashIdentifier(const VulnIdentifier& id, std::size_t sigma) {
  return HashCanonicalBytes(Canonicalize(id), sigma);
}

std::string LedgerHashHex(const VulnIdentifier& id) {
  std::string canonical = Canonicalize(id);
  auto digest = Sha3_512(std::span(
      reinterpret_cast<const std::uint8_t*>(canonical.data()),
      canonical.size()));
  return HexEncode(digest);
}

double ApproxIdSpace(double cpe_count, double cwe_count, double fn_count) {
  if (cpe_count < 1 || cwe_count < 1 || fn_count < 1) {
    throw Error(ErrorCode::kConfigInvalid, "counts must be >= 1");
  }
  return std::log2(cpe_count) + std::log2(cwe_count) + std::log2(fn_count);
}

std::vector<IdentifierLine> ReadIdentifierFile(std::istream& in) {
  std::vector<IdentifierLine> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back({number, ParseIdentifierJson(line)});
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

void WriteHashFile(std::ostream& out, const std::vector<HashedId>& hashes) {
  for (const auto& h : hashes) out << h.hex() << '\n';
}

std::vector<HashedId> ReadHashFile(std::istream& in, std::size_t sigma) {
  std::vector<HashedId> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (line.empty() || line[0] == '#') continue;
    if (line.size() != sigma / 4) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(number) + ": expected " +
                      std::to_string(sigma / 4) + " hex digits");
    }
    HashedId h = HashedId::FromHex(line, sigma);
    if (h.is_zero()) {
      throw Error(ErrorCode::kSentinelCollision,
                  "line " + std::to_string(number) + ": all-zero hash");
    }
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace stockpile
