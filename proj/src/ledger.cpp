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

#include "wattest/ledger.hpp"

#include <fstream>

namespace wattest::ledger {

void to_json(Json& j, const LedgerTx& tx) {
  j = Json{{"payload", b64url_encode(tx.payload)},
           {"sig", b64url_encode(view(tx.signature))},
           {"signer_public_key", b64url_encode(view(tx.signer_public_key))},
           {"tx_digest", b64url_encode(view(tx.tx_digest))}};
}

void from_json(const Json& j, LedgerTx& tx) {
  tx.payload = require_b64(j, "payload");
  tx.signature = require_b64_fixed<kSignatureSize>(j, "sig");
  tx.signer_public_key = require_b64_fixed<kPublicKeySize>(j, "signer_public_key");
  tx.tx_digest = require_b64_fixed<32>(j, "tx_digest");
}

LedgerTx make_tx(const KeyPair& signer, ByteView payload) {
  LedgerTx tx;
  tx.payload = Bytes(payload.begin(), payload.end());
  tx.tx_digest = sha256(payload);
  tx.signer_public_key = signer.public_key;
  tx.signature = signer.sign(payload);
  return tx;
}

std::size_t ConfirmedLedger::submit(LedgerTx tx) {
  if (tx.tx_digest != sha256(tx.payload)) {
    throw Error(ErrorCode::kMalformedTx, "tx_digest does not match payload");
  }
  if (!verify_signature(tx.payload, tx.signature, tx.signer_public_key)) {
    throw Error(ErrorCode::kBadSignature, "transaction signature invalid");
  }
  std::string key = b64url_encode(view(tx.tx_digest));
  if (positions_.contains(key)) {
    throw Error(ErrorCode::kDuplicateTx, "digest already confirmed");
  }
  std::size_t position = confirmed_.size();
  positions_.emplace(std::move(key), position);
  confirmed_.push_back(std::move(tx));
  return position;
}

std::vector<std::pair<std::size_t, Digest32>> ConfirmedLedger::query_by_key(
    const PublicKey& key) const {
  std::vector<std::pair<std::size_t, Digest32>> out;
  for (std::size_t i = 0; i < confirmed_.size(); ++i) {
    if (confirmed_[i].signer_public_key == key) {
      out.emplace_back(i, confirmed_[i].tx_digest);
    }
  }
  return out;
}

std::optional<std::size_t> ConfirmedLedger::position_of(
    const Digest32& tx_digest) const {
  auto it = positions_.find(b64url_encode(view(tx_digest)));
  if (it == positions_.end()) return std::nullopt;
  return it->second;
}

ConfirmedLedger ConfirmedLedger::load(const std::filesystem::path& path) {
  ConfirmedLedger ledger;
  if (!std::filesystem::exists(path)) return ledger;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open: " + path.string());
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ledger.submit(parse_json(line).get<LedgerTx>());
  }
  return ledger;
}

void ConfirmedLedger::append_log(const std::filesystem::path& path,
                                 const LedgerTx& tx) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) {
    throw Error(ErrorCode::kIoFailure, "cannot append: " + path.string());
  }
  out << canonical_dump(Json(tx)) << '\n';
}

}  // namespace wattest::ledger
