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

#ifndef WATTEST_DEVICE_HPP_
#define WATTEST_DEVICE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wattest/bytes.hpp"
#include "wattest/crypto.hpp"
#include "wattest/model.hpp"

// Emulated trusted-hardware wallet: shielded key storage with
// non-migrateable keys, hash-extend PCR registers, a monotonic counter,
// and signed quote/evidence generation.
//
// A device instance is a serialized command processor: one command at a
// time, strict ordering, no internal parallelism. Callers from multiple
// threads must funnel through a single submission point.
namespace wattest::hw {

inline constexpr unsigned kPcrCount = 24;
inline constexpr unsigned kUsagePcrIndex = 16;  // reserved for the key-usage log

/// Hash-extend register bank. Registers start at 32 zero bytes and change
/// only through extend; there is no direct write path.
class PcrBank {
 public:
  PcrBank();

  const Digest32& at(unsigned index) const;  // kIndexOutOfRange
  Digest32 extend(unsigned index, const Digest32& digest);

  /// SHA-256 over the selected register values concatenated in ascending
  /// index order. The selection must be non-empty and in range.
  Digest32 composite(const std::vector<unsigned>& selection) const;

  /// Composite over all registers, used as the key-creation PCR snapshot.
  Digest32 snapshot() const;

  const std::array<Digest32, kPcrCount>& registers() const { return registers_; }
  void restore(const std::array<Digest32, kPcrCount>& regs) { registers_ = regs; }

 private:
  std::array<Digest32, kPcrCount> registers_;
};

/// Strictly non-decreasing counter; each increment raises the value by 1.
class MonotonicCounter {
 public:
  std::uint64_t value() const { return value_; }
  std::uint64_t increment() { return ++value_; }
  void restore(std::uint64_t v) { value_ = v; }

 private:
  std::uint64_t value_ = 0;
};

struct KeyRecord {
  KeyHandle handle{};
  PublicKey public_part{};
  SecretKey private_part{};  // never serialized outward for fixed keys
  model::KeyAttributes attributes;
  std::optional<KeyHandle> parent;
  Digest32 pcr_at_creation{};   // PCR snapshot composite when created
  Digest32 creation_digest{};   // binds device, handle, attributes, snapshot
};

struct SignOutcome {
  Signature signature{};
  model::UsageLogEntry entry;
};

/// Public provisioning facts handed to the endorser: identity keys, the
/// component manifest, and the AK certification chain started by the EK.
struct ProvisioningRecord {
  DeviceId device_id{};
  PublicKey ek_public{};
  PublicKey ak_public{};
  model::KeyCertification ak_certification;
  std::vector<model::ComponentMeasurement> manifest;
};

void to_json(Json& j, const ProvisioningRecord& r);
void from_json(const Json& j, ProvisioningRecord& r);

class Device {
 public:
  /// Provisions a fresh device: generates EK and AK (both fixed to the
  /// device, AK certified by the EK), measures the component manifest and
  /// zeroes all registers. kInvalidGeolocation / kEmptyManifest.
  static Device provision(const std::string& manufacturer_id,
                          const model::GeoPosition& geolocation,
                          const std::vector<model::ComponentMeasurement>& manifest,
                          Rng& rng);

  /// Generates a key pair inside the shielded store. created_inside is
  /// always true for generated keys; requesting fixed_to_device with
  /// created_inside forced false is kInvalidAttributes. If a parent is
  /// given it must exist and be fixed to the device.
  KeyHandle create_key(const model::KeyAttributes& attrs,
                       std::optional<KeyHandle> parent, Rng& rng);

  /// Loads caller-supplied key material into the store as a software key.
  /// Imported keys can never be fixed to the device (kInvalidAttributes).
  KeyHandle import_key(const KeyPair& material, bool sign_only, Rng& rng);

  /// Returns the private material of a non-fixed key. Fixed keys are
  /// non-migrateable: kExportDenied, always.
  SecretKey export_key(const KeyHandle& handle) const;

  Digest32 extend_pcr(unsigned index, const Digest32& digest);

  /// Signs a payload, extends the usage PCR with SHA-256(payload),
  /// increments the monotonic counter and appends a usage-log entry.
  SignOutcome sign_transaction(const KeyHandle& handle, ByteView payload);

  /// Signed snapshot of the selected registers plus counter, nonce,
  /// config digest and geolocation. kBadNonce / kIndexOutOfRange.
  model::Quote quote(ByteView nonce, std::vector<unsigned> pcr_selection) const;

  /// AK statement over a stored key's public part, attributes and
  /// creation digest.
  model::KeyCertification certify_key(const KeyHandle& subject) const;

  /// Plain proof-of-possession signature over a challenge. Deliberately
  /// conveys nothing about where the key lives.
  Signature respond_challenge(const KeyHandle& handle, ByteView challenge) const;

  const DeviceId& device_id() const { return device_id_; }
  const PcrBank& pcrs() const { return pcrs_; }
  std::uint64_t counter() const { return counter_.value(); }
  const std::vector<model::UsageLogEntry>& usage_log() const { return usage_log_; }
  const model::GeoPosition& geolocation() const { return geolocation_; }
  const std::vector<model::ComponentMeasurement>& manifest() const { return manifest_; }
  const Digest32& config_digest() const { return config_digest_; }
  const std::string& manufacturer_id() const { return manufacturer_id_; }

  KeyHandle ek_handle() const { return ek_handle_; }
  KeyHandle ak_handle() const { return ak_handle_; }
  const PublicKey& ek_public() const;
  const PublicKey& ak_public() const;
  const model::KeyCertification& ak_certification() const { return ak_certification_; }

  bool has_key(const KeyHandle& handle) const;
  const KeyRecord& key(const KeyHandle& handle) const;  // kUnknownHandle
  std::vector<KeyHandle> key_handles() const;           // creation order

  /// Most recently created application key (everything except EK/AK).
  std::optional<KeyHandle> newest_app_key() const;

  /// Recomputes a key's creation digest from its recorded creation context.
  bool audit_creation_digest(const KeyHandle& handle) const;

  ProvisioningRecord provisioning_record() const;

  // State persists as one canonical-encoded file; private key material is
  // sealed with a file-scoped secret kept beside it (mode 0600).
  void save(const std::filesystem::path& state_path, Rng& rng) const;
  static Device load(const std::filesystem::path& state_path);

 private:
  Device() = default;

  KeyHandle fresh_handle(Rng& rng);
  KeyHandle store_key(KeyRecord record);
  model::KeyCertification certify_with(const KeyRecord& signer,
                                       const KeyRecord& subject) const;

  std::string manufacturer_id_;
  DeviceId device_id_{};
  PcrBank pcrs_;
  MonotonicCounter counter_;
  std::map<KeyHandle, KeyRecord> key_store_;
  std::vector<KeyHandle> creation_order_;
  KeyHandle ek_handle_{};
  KeyHandle ak_handle_{};
  model::KeyCertification ak_certification_;
  model::GeoPosition geolocation_;
  std::vector<model::ComponentMeasurement> manifest_;
  Digest32 config_digest_{};
  std::vector<model::UsageLogEntry> usage_log_;
};

/// Replays a digest sequence through the hash-extend rule from a starting
/// register value. The reconciliation and chain-audit primitive.
Digest32 replay_extend_chain(const Digest32& start,
                             const std::vector<Digest32>& digests);

}  // namespace wattest::hw

#endif  // WATTEST_DEVICE_HPP_
