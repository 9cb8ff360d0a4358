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

#ifndef WATTEST_ENDORSE_HPP_
#define WATTEST_ENDORSE_HPP_

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "wattest/device.hpp"
#include "wattest/model.hpp"

// Endorser (wallet manufacturer) role and the verifier-side endorsement
// store. Endorser keys are registered out of band through a trust-anchor
// file; the store admits only endorsements that verify against an anchor.
namespace wattest::endorse {

struct TrustAnchor {
  std::string endorser_id;
  PublicKey public_key{};
};

void to_json(Json& j, const TrustAnchor& a);
void from_json(const Json& j, TrustAnchor& a);

class TrustAnchors {
 public:
  TrustAnchors() = default;

  void add(const std::string& endorser_id, const PublicKey& key);
  std::optional<PublicKey> find(const std::string& endorser_id) const;
  const std::vector<TrustAnchor>& entries() const { return anchors_; }

  // anchors.json: canonical-encoded list of endorser records.
  static TrustAnchors load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<TrustAnchor> anchors_;
};

/// Signs reference values and identity material for a provisioned device.
/// kEmptyManifest if the provisioning record carries no measurements.
model::Endorsement issue_endorsement(const KeyPair& endorser_key,
                                     const std::string& endorser_id,
                                     const hw::ProvisioningRecord& record,
                                     std::int64_t issued_at);

/// Verifier-side store. Concurrent readers, single writer; writes are
/// atomic at record granularity.
class EndorsementStore {
 public:
  explicit EndorsementStore(TrustAnchors anchors)
      : anchors_(std::move(anchors)) {}

  /// Admits an endorsement only if its signature verifies under the
  /// registered key of its endorser (kUnverifiedEndorsement). Duplicate
  /// (endorser_id, device_id, issued_at) records are replaced, newest wins.
  void store(const model::Endorsement& e);

  /// All endorsements for a device, newest first by issued_at; ties broken
  /// by canonical-encoding byte order. Unknown devices yield an empty list.
  std::vector<model::Endorsement> lookup(const DeviceId& device_id) const;

  const TrustAnchors& anchors() const { return anchors_; }
  std::size_t size() const;

  // endorsements.log: append-only file of canonical-encoded records.
  void append_log(const std::filesystem::path& path,
                  const model::Endorsement& e) const;
  void load_log(const std::filesystem::path& path);

 private:
  std::vector<model::Endorsement>& bucket(const DeviceId& id);

  TrustAnchors anchors_;
  mutable std::mutex mutex_;
  std::map<std::string, std::vector<model::Endorsement>> by_device_;  // b64url key
};

}  // namespace wattest::endorse

#endif  // WATTEST_ENDORSE_HPP_
