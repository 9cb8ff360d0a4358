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

#include "wattest/endorse.hpp"

#include <algorithm>
#include <fstream>

namespace wattest::endorse {

void to_json(Json& j, const TrustAnchor& a) {
  j = Json{{"endorser_id", a.endorser_id},
           {"public_key", b64url_encode(view(a.public_key))}};
}

void from_json(const Json& j, TrustAnchor& a) {
  a.endorser_id = require_string(j, "endorser_id");
  a.public_key = require_b64_fixed<kPublicKeySize>(j, "public_key");
}

void TrustAnchors::add(const std::string& endorser_id, const PublicKey& key) {
  for (TrustAnchor& a : anchors_) {
    if (a.endorser_id == endorser_id) {
      a.public_key = key;
      return;
    }
  }
  anchors_.push_back(TrustAnchor{endorser_id, key});
}

std::optional<PublicKey> TrustAnchors::find(const std::string& endorser_id) const {
  for (const TrustAnchor& a : anchors_) {
    if (a.endorser_id == endorser_id) return a.public_key;
  }
  return std::nullopt;
}

TrustAnchors TrustAnchors::load(const std::filesystem::path& path) {
  TrustAnchors anchors;
  anchors.anchors_ =
      canonical_decode<std::vector<TrustAnchor>>(read_file(path));
  return anchors;
}

void TrustAnchors::save(const std::filesystem::path& path) const {
  save_canonical(path, anchors_);
}

model::Endorsement issue_endorsement(const KeyPair& endorser_key,
                                     const std::string& endorser_id,
                                     const hw::ProvisioningRecord& record,
                                     std::int64_t issued_at) {
  if (record.manifest.empty()) {
    throw Error(ErrorCode::kEmptyManifest,
                "provisioning record carries no component measurements");
  }
  model::Endorsement e;
  e.endorser_id = endorser_id;
  e.device_id = record.device_id;
  e.reference_values = record.manifest;
  e.ek_public = record.ek_public;
  e.ak_public = record.ak_public;
  e.issued_at = issued_at;
  e.signature = endorser_key.sign(canonical_bytes(e.body_json()));
  return e;
}

std::vector<model::Endorsement>& EndorsementStore::bucket(const DeviceId& id) {
  return by_device_[b64url_encode(view(id))];
}

void EndorsementStore::store(const model::Endorsement& e) {
  std::optional<PublicKey> key = anchors_.find(e.endorser_id);
  if (!key || !e.verify(*key)) {
    throw Error(ErrorCode::kUnverifiedEndorsement,
                "endorsement from '" + e.endorser_id +
                    "' does not verify against a registered anchor");
  }
  std::lock_guard lock(mutex_);
  std::vector<model::Endorsement>& list = bucket(e.device_id);
  // Newest wins on duplicate (endorser_id, device_id, issued_at).
  for (model::Endorsement& existing : list) {
    if (existing.endorser_id == e.endorser_id &&
        existing.issued_at == e.issued_at) {
      existing = e;
      return;
    }
  }
  list.push_back(e);
}

std::vector<model::Endorsement> EndorsementStore::lookup(
    const DeviceId& device_id) const {
  std::lock_guard lock(mutex_);
  auto it = by_device_.find(b64url_encode(view(device_id)));
  if (it == by_device_.end()) return {};
  std::vector<model::Endorsement> out = it->second;
  std::stable_sort(out.begin(), out.end(),
                   [](const model::Endorsement& a, const model::Endorsement& b) {
                     if (a.issued_at != b.issued_at) {
                       return a.issued_at > b.issued_at;  // newest first
                     }
                     return canonical_encode(a) < canonical_encode(b);
                   });
  return out;
}

std::size_t EndorsementStore::size() const {
  std::lock_guard lock(mutex_);
  std::size_t n = 0;
  for (const auto& [_, list] : by_device_) n += list.size();
  return n;
}

void EndorsementStore::append_log(const std::filesystem::path& path,
                                  const model::Endorsement& e) const {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) {
    throw Error(ErrorCode::kIoFailure, "cannot append: " + path.string());
  }
  out << canonical_dump(Json(e)) << '\n';
}

void EndorsementStore::load_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open: " + path.string());
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    store(parse_json(line).get<model::Endorsement>());
  }
}

}  // namespace wattest::endorse
