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

#include "stockpile/error.h"

#include <sstream>

namespace stockpile {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidCpe: return "InvalidCpe";
    case ErrorCode::kInvalidCwe: return "InvalidCwe";
    case ErrorCode::kEmptyFunction: return "EmptyFunction";
    case ErrorCode::kInvalidSigma: return "InvalidSigma";
    case ErrorCode::kSentinelCollision: return "SentinelCollision";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingInput: return "MissingInput";
    case ErrorCode::kWidthMismatch: return "WidthMismatch";
    case ErrorCode::kNotPowerOfTwo: return "NotPowerOfTwo";
    case ErrorCode::kMalformedCircuit: return "MalformedCircuit";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kAbortUnsorted: return "AbortUnsorted";
    case ErrorCode::kTriplePoolExhausted: return "TriplePoolExhausted";
    case ErrorCode::kTransportFailure: return "TransportFailure";
    case ErrorCode::kEpochMismatch: return "EpochMismatch";
    case ErrorCode::kCorruptBlob: return "CorruptBlob";
    case ErrorCode::kTooManyEntries: return "TooManyEntries";
    case ErrorCode::kRandomnessFailure: return "RandomnessFailure";
    case ErrorCode::kConfigMismatch: return "ConfigMismatch";
    case ErrorCode::kProtocolCorruption: return "ProtocolCorruption";
    case ErrorCode::kRemovalAttempted: return "RemovalAttempted";
    case ErrorCode::kUnauthorizedWriter: return "UnauthorizedWriter";
    case ErrorCode::kUnauthorizedReader: return "UnauthorizedReader";
    case ErrorCode::kCorruptLedger: return "CorruptLedger";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace {
std::string DescribeParties(const std::vector<std::size_t>& parties) {
  std::ostringstream out;
  out << "unsorted input from part" << (parties.size() == 1 ? "y" : "ies");
  for (auto p : parties) out << ' ' << p;
  return out.str();
}
}  // namespace

AbortUnsorted::AbortUnsorted(std::vector<std::size_t> parties)
    : Error(ErrorCode::kAbortUnsorted, DescribeParties(parties)),
      parties_(std::move(parties)) {}

}  // namespace stockpile
