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

#ifndef STOCKPILE_ERROR_H_
#define STOCKPILE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stockpile {

enum class ErrorCode {
  // vulnid
  kInvalidCpe,
  kInvalidCwe,
  kEmptyFunction,
  kInvalidSigma,
  kSentinelCollision,
  kParseError,
  // circuit
  kMissingInput,
  kWidthMismatch,
  kNotPowerOfTwo,
  kMalformedCircuit,
  // compiler
  kConfigInvalid,
  // mpc
  kAbortUnsorted,
  kTriplePoolExhausted,
  kTransportFailure,
  kEpochMismatch,
  kCorruptBlob,
  // session
  kTooManyEntries,
  kRandomnessFailure,
  kConfigMismatch,
  kProtocolCorruption,
  kRemovalAttempted,
  // ledger
  kUnauthorizedWriter,
  kUnauthorizedReader,
  kCorruptLedger,
  // io
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures surface as Error. The code is stable and machine
// readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when opened sortedness flags show that one or more parties
// submitted an unsorted input list.
class AbortUnsorted : public Error {
 public:
  explicit AbortUnsorted(std::vector<std::size_t> parties);

  const std::vector<std::size_t>& parties() const noexcept { return parties_; }

 private:
  std::vector<std::size_t> parties_;
};

}  // namespace stockpile

#endif  // STOCKPILE_ERROR_H_
