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

#include "stockpile/crypto.h"

#include <openssl/evp.h>

#include <boost/crc.hpp>
#include <memory>

#include "stockpile/error.h"

namespace stockpile {
namespace {

template <std::size_t N>
std::array<std::uint8_t, N> EvpDigest(const EVP_MD* md,
                                      std::span<const std::uint8_t> data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                               EVP_MD_CTX_free);
  std::array<std::uint8_t, N> out{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), md, nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != N) {
    throw Error(ErrorCode::kIoError, "OpenSSL digest failed");
  }
  return out;
}

}  // namespace

Sha3_512Digest Sha3_512(std::span<const std::uint8_t> data) {
  return EvpDigest<64>(EVP_sha3_512(), data);
}

Sha3_256Digest Sha3_256(std::span<const std::uint8_t> data) {
  return EvpDigest<32>(EVP_sha3_256(), data);
}

std::uint32_t Crc32(std::span<const std::uint8_t> data) {
  boost::crc_32_type crc;
  crc.process_bytes(data.data(), data.size());
  return crc.checksum();
}

}  // namespace stockpile
