// Copyright 2026 The Wattest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WATTEST_LEDGER_HPP_
#define WATTEST_LEDGER_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "wattest/crypto.hpp"
#include "wattest/model.hpp"

// Minimal deterministic ledger: no blocks, no forks, no mempool.
// Confirmation order is submission order, immediate and final.
namespace wattest::ledger {

struct LedgerTx {
  Digest32 tx_digest{};  // SHA-256 of payload
  PublicKey signer_public_key{};
  Bytes payload;
  Signature signature{};  // over payload, under signer_public_key
};

void to_json(Json& j, const LedgerTx& tx);
void from_json(const Json& j, LedgerTx& tx);

LedgerTx make_tx(const KeyPair& signer, ByteView payload);

class ConfirmedLedger {
 public:
  /// Appends a valid transaction and returns its position. kBadSignature
  /// on a bad signature, kMalformedTx on a digest/payload mismatch,
  /// kDuplicateTx on a repeated digest.
  std::size_t submit(LedgerTx tx);

  /// All confirmed transactions signed by the key, in confirmation order.
  std::vector<std::pair<std::size_t, Digest32>> query_by_key(
      const PublicKey& key) const;

  std::optional<std::size_t> position_of(const Digest32& tx_digest) const;
  std::size_t size() const { return confirmed_.size(); }
  const LedgerTx& at(std::size_t position) const { return confirmed_.at(position); }

  // ledger.log: append-only file of canonical-encoded transactions.
  static ConfirmedLedger load(const std::filesystem::path& path);
  static void append_log(const std::filesystem::path& path, const LedgerTx& tx);

 private:
  std::vector<LedgerTx> confirmed_;
  std::map<std::string, std::size_t> positions_;  // b64url digest -> index
};

}  // namespace wattest::ledger

#endif  // WATTEST_LEDGER_HPP_
