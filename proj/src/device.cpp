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

#include "wattest/device.hpp"

#include <sys/stat.h>

#include <algorithm>

#include "wattest/canonical.hpp"
#include "wattest/errors.hpp"

namespace wattest::hw {

// --- PcrBank ---

PcrBank::PcrBank() {
  for (Digest32& r : registers_) r.fill(0);
}

const Digest32& PcrBank::at(unsigned index) const {
  if (index >= kPcrCount) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "pcr index " + std::to_string(index));
  }
  return registers_[index];
}

Digest32 PcrBank::extend(unsigned index, const Digest32& digest) {
  if (index >= kPcrCount) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "pcr index " + std::to_string(index));
  }
  registers_[index] = sha256(view(registers_[index]), view(digest));
  return registers_[index];
}

Digest32 PcrBank::composite(const std::vector<unsigned>& selection) const {
  if (selection.empty()) {
    throw Error(ErrorCode::kIndexOutOfRange, "empty pcr selection");
  }
  std::vector<unsigned> sorted = selection;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Bytes concat_regs;
  concat_regs.reserve(sorted.size() * 32);
  for (unsigned index : sorted) {
    const Digest32& r = at(index);
    concat_regs.insert(concat_regs.end(), r.begin(), r.end());
  }
  return sha256(concat_regs);
}

Digest32 PcrBank::snapshot() const {
  std::vector<unsigned> all(kPcrCount);
  for (unsigned i = 0; i < kPcrCount; ++i) all[i] = i;
  return composite(all);
}

// --- Device ---

namespace {
Digest32 creation_digest_for(const DeviceId& device_id, const KeyHandle& handle,
                             const model::KeyAttributes& attrs,
                             const Digest32& pcr_snapshot) {
  Json j{{"attributes", attrs},
         {"device_id", b64url_encode(view(device_id))},
         {"handle", b64url_encode(view(handle.id))},
         {"pcr_snapshot", b64url_encode(view(pcr_snapshot))}};
  return sha256(canonical_bytes(j));
}
}  // namespace

Device Device::provision(const std::string& manufacturer_id,
                         const model::GeoPosition& geolocation,
                         const std::vector<model::ComponentMeasurement>& manifest,
                         Rng& rng) {
  if (manifest.empty()) {
    throw Error(ErrorCode::kEmptyManifest, "component manifest is empty");
  }
  if (!geolocation.in_range()) {
    throw Error(ErrorCode::kInvalidGeolocation, "coordinates out of range");
  }
  Device d;
  d.manufacturer_id_ = manufacturer_id;
  d.device_id_ = rng.array<16>();
  d.geolocation_ = geolocation;
  d.manifest_ = manifest;
  d.config_digest_ = model::manifest_digest(manifest);

  model::KeyAttributes identity_attrs{.fixed_to_device = true,
                                      .sign_only = true,
                                      .created_inside = true};
  d.ek_handle_ = d.create_key(identity_attrs, std::nullopt, rng);
  d.ak_handle_ = d.create_key(identity_attrs, d.ek_handle_, rng);
  d.ak_certification_ =
      d.certify_with(d.key_store_.at(d.ek_handle_), d.key_store_.at(d.ak_handle_));
  return d;
}

KeyHandle Device::fresh_handle(Rng& rng) {
  KeyHandle h;
  do {
    rng.fill(h.id);
  } while (key_store_.contains(h));
  return h;
}

KeyHandle Device::store_key(KeyRecord record) {
  KeyHandle h = record.handle;
  key_store_.emplace(h, std::move(record));
  creation_order_.push_back(h);
  return h;
}

KeyHandle Device::create_key(const model::KeyAttributes& attrs,
                             std::optional<KeyHandle> parent, Rng& rng) {
  if (attrs.fixed_to_device && !attrs.created_inside) {
    throw Error(ErrorCode::kInvalidAttributes,
                "fixed_to_device keys must be created inside the device");
  }
  if (parent) {
    auto it = key_store_.find(*parent);
    if (it == key_store_.end()) {
      throw Error(ErrorCode::kUnknownParent,
                  b64url_encode(view(parent->id)));
    }
    if (!it->second.attributes.fixed_to_device) {
      throw Error(ErrorCode::kInvalidAttributes,
                  "parent key is not fixed to the device");
    }
  }
  KeyRecord record;
  record.handle = fresh_handle(rng);
  KeyPair pair = KeyPair::generate(rng);
  record.public_part = pair.public_key;
  record.private_part = pair.secret_key;
  record.attributes = attrs;
  record.attributes.created_inside = true;  // generated in the shielded store
  record.parent = parent;
  record.pcr_at_creation = pcrs_.snapshot();
  record.creation_digest = creation_digest_for(
      device_id_, record.handle, record.attributes, record.pcr_at_creation);
  return store_key(std::move(record));
}

KeyHandle Device::import_key(const KeyPair& material, bool sign_only, Rng& rng) {
  KeyRecord record;
  record.handle = fresh_handle(rng);
  record.public_part = material.public_key;
  record.private_part = material.secret_key;
  record.attributes = model::KeyAttributes{.fixed_to_device = false,
                                           .sign_only = sign_only,
                                           .created_inside = false};
  record.pcr_at_creation = pcrs_.snapshot();
  record.creation_digest = creation_digest_for(
      device_id_, record.handle, record.attributes, record.pcr_at_creation);
  return store_key(std::move(record));
}

const KeyRecord& Device::key(const KeyHandle& handle) const {
  auto it = key_store_.find(handle);
  if (it == key_store_.end()) {
    throw Error(ErrorCode::kUnknownHandle, b64url_encode(view(handle.id)));
  }
  return it->second;
}

bool Device::has_key(const KeyHandle& handle) const {
  return key_store_.contains(handle);
}

std::vector<KeyHandle> Device::key_handles() const {
  return creation_order_;
}

std::optional<KeyHandle> Device::newest_app_key() const {
  for (auto it = creation_order_.rbegin(); it != creation_order_.rend(); ++it) {
    if (*it != ek_handle_ && *it != ak_handle_) return *it;
  }
  return std::nullopt;
}

SecretKey Device::export_key(const KeyHandle& handle) const {
  const KeyRecord& record = key(handle);
  if (record.attributes.fixed_to_device) {
    throw Error(ErrorCode::kExportDenied,
                "key is fixed to the device and non-migrateable");
  }
  return record.private_part;
}

Digest32 Device::extend_pcr(unsigned index, const Digest32& digest) {
  return pcrs_.extend(index, digest);
}

SignOutcome Device::sign_transaction(const KeyHandle& handle, ByteView payload) {
  const KeyRecord& record = key(handle);
  SignOutcome out;
  KeyPair signer{record.public_part, record.private_part};
  out.signature = signer.sign(payload);

  Digest32 tx_digest = sha256(payload);
  pcrs_.extend(kUsagePcrIndex, tx_digest);
  std::uint64_t counter_after = counter_.increment();
  out.entry = model::UsageLogEntry{.seq = usage_log_.size(),
                                   .tx_digest = tx_digest,
                                   .counter_after = counter_after};
  usage_log_.push_back(out.entry);
  return out;
}

model::Quote Device::quote(ByteView nonce,
                           std::vector<unsigned> pcr_selection) const {
  if (nonce.size() != 32) {
    throw Error(ErrorCode::kBadNonce,
                "nonce must be 32 bytes, got " + std::to_string(nonce.size()));
  }
  std::sort(pcr_selection.begin(), pcr_selection.end());
  pcr_selection.erase(
      std::unique(pcr_selection.begin(), pcr_selection.end()),
      pcr_selection.end());
  model::Quote q;
  q.device_id = device_id_;
  q.pcr_selection = pcr_selection;
  q.composite_digest = pcrs_.composite(pcr_selection);  // kIndexOutOfRange
  q.counter = counter_.value();
  q.nonce = fixed<32>(nonce);
  q.config_digest = config_digest_;
  q.geolocation = geolocation_;
  const KeyRecord& ak = key_store_.at(ak_handle_);
  KeyPair signer{ak.public_part, ak.private_part};
  q.signature = signer.sign(canonical_bytes(q.body_json()));
  return q;
}

model::KeyCertification Device::certify_with(const KeyRecord& signer,
                                             const KeyRecord& subject) const {
  model::KeyCertification cert;
  cert.subject_public = subject.public_part;
  cert.attributes = subject.attributes;
  cert.creation_digest = subject.creation_digest;
  cert.device_id = device_id_;
  KeyPair pair{signer.public_part, signer.private_part};
  cert.signature = pair.sign(canonical_bytes(cert.body_json()));
  return cert;
}

model::KeyCertification Device::certify_key(const KeyHandle& subject) const {
  return certify_with(key_store_.at(ak_handle_), key(subject));
}

Signature Device::respond_challenge(const KeyHandle& handle,
                                    ByteView challenge) const {
  const KeyRecord& record = key(handle);
  KeyPair pair{record.public_part, record.private_part};
  return pair.sign(challenge);
}

const PublicKey& Device::ek_public() const {
  return key_store_.at(ek_handle_).public_part;
}

const PublicKey& Device::ak_public() const {
  return key_store_.at(ak_handle_).public_part;
}

bool Device::audit_creation_digest(const KeyHandle& handle) const {
  const KeyRecord& record = key(handle);
  return creation_digest_for(device_id_, record.handle, record.attributes,
                             record.pcr_at_creation) == record.creation_digest;
}

ProvisioningRecord Device::provisioning_record() const {
  return ProvisioningRecord{.device_id = device_id_,
                            .ek_public = ek_public(),
                            .ak_public = ak_public(),
                            .ak_certification = ak_certification_,
                            .manifest = manifest_};
}

void to_json(Json& j, const ProvisioningRecord& r) {
  j = Json{{"ak_certification", r.ak_certification},
           {"ak_public", b64url_encode(view(r.ak_public))},
           {"device_id", b64url_encode(view(r.device_id))},
           {"ek_public", b64url_encode(view(r.ek_public))},
           {"manifest", r.manifest}};
}

void from_json(const Json& j, ProvisioningRecord& r) {
  r.ak_certification =
      require_member(j, "ak_certification").get<model::KeyCertification>();
  r.ak_public = require_b64_fixed<kPublicKeySize>(j, "ak_public");
  r.device_id = require_b64_fixed<16>(j, "device_id");
  r.ek_public = require_b64_fixed<kPublicKeySize>(j, "ek_public");
  r.manifest = require_member(j, "manifest")
                   .get<std::vector<model::ComponentMeasurement>>();
}

// --- Persistence ---
//
// One canonical-encoded state file; each private part sealed with a
// file-scoped secret stored beside the state file with owner-only access.

namespace {
Json key_record_json(const KeyRecord& r, const FileSecret& secret, Rng& rng) {
  SealedBox box = seal(view(r.private_part), secret, rng);
  Json j{{"attributes", r.attributes},
         {"creation_digest", b64url_encode(view(r.creation_digest))},
         {"handle", b64url_encode(view(r.handle.id))},
         {"pcr_at_creation", b64url_encode(view(r.pcr_at_creation))},
         {"private_sealed",
          Json{{"ct", b64url_encode(box.ciphertext)},
               {"nonce", b64url_encode(view(box.nonce))}}},
         {"public_part", b64url_encode(view(r.public_part))}};
  if (r.parent) j["parent"] = b64url_encode(view(r.parent->id));
  return j;
}

KeyRecord key_record_from_json(const Json& j, const FileSecret& secret) {
  KeyRecord r;
  r.attributes = require_member(j, "attributes").get<model::KeyAttributes>();
  r.creation_digest = require_b64_fixed<32>(j, "creation_digest");
  r.handle.id = require_b64_fixed<8>(j, "handle");
  r.pcr_at_creation = require_b64_fixed<32>(j, "pcr_at_creation");
  r.public_part = require_b64_fixed<kPublicKeySize>(j, "public_part");
  if (j.contains("parent")) {
    KeyHandle parent;
    parent.id = require_b64_fixed<8>(j, "parent");
    r.parent = parent;
  }
  const Json& sealed = require_member(j, "private_sealed");
  SealedBox box;
  box.nonce = require_b64_fixed<24>(sealed, "nonce");
  box.ciphertext = require_b64(sealed, "ct");
  Bytes priv = unseal(box, secret);
  if (priv.size() != kSecretKeySize) {
    throw Error(ErrorCode::kDecodeFailed, "sealed key has wrong size");
  }
  std::copy(priv.begin(), priv.end(), r.private_part.begin());
  return r;
}

std::filesystem::path secret_path_for(const std::filesystem::path& state_path) {
  std::filesystem::path p = state_path;
  p += ".secret";
  return p;
}
}  // namespace

void Device::save(const std::filesystem::path& state_path, Rng& rng) const {
  const std::filesystem::path secret_path = secret_path_for(state_path);
  FileSecret secret{};
  if (std::filesystem::exists(secret_path)) {
    Bytes raw = read_file(secret_path);
    secret = fixed<32>(raw);
  } else {
    SystemRng{}.fill(secret);
    write_file(secret_path, view(secret));
    ::chmod(secret_path.c_str(), 0600);
  }

  Json keys = Json::array();
  for (const KeyHandle& h : creation_order_) {
    keys.push_back(key_record_json(key_store_.at(h), secret, rng));
  }
  Json pcr = Json::array();
  for (const Digest32& r : pcrs_.registers()) {
    pcr.push_back(b64url_encode(view(r)));
  }
  Json j{{"ak_certification", ak_certification_},
         {"ak_handle", b64url_encode(view(ak_handle_.id))},
         {"counter", counter_.value()},
         {"device_id", b64url_encode(view(device_id_))},
         {"ek_handle", b64url_encode(view(ek_handle_.id))},
         {"geolocation", geolocation_},
         {"keys", std::move(keys)},
         {"manifest", manifest_},
         {"manufacturer_id", manufacturer_id_},
         {"pcr", std::move(pcr)},
         {"usage_log", usage_log_}};
  write_file(state_path, canonical_bytes(j));
}

Device Device::load(const std::filesystem::path& state_path) {
  FileSecret secret = fixed<32>(read_file(secret_path_for(state_path)));
  Json j = parse_json(read_file(state_path));

  Device d;
  d.ak_certification_ =
      require_member(j, "ak_certification").get<model::KeyCertification>();
  d.ak_handle_.id = require_b64_fixed<8>(j, "ak_handle");
  d.counter_.restore(require_uint(j, "counter"));
  d.device_id_ = require_b64_fixed<16>(j, "device_id");
  d.ek_handle_.id = require_b64_fixed<8>(j, "ek_handle");
  d.geolocation_ = require_member(j, "geolocation").get<model::GeoPosition>();
  d.manifest_ = require_member(j, "manifest")
                    .get<std::vector<model::ComponentMeasurement>>();
  d.manufacturer_id_ = require_string(j, "manufacturer_id");
  d.config_digest_ = model::manifest_digest(d.manifest_);

  const Json& pcr = require_member(j, "pcr");
  if (!pcr.is_array() || pcr.size() != kPcrCount) {
    throw Error(ErrorCode::kDecodeFailed, "pcr: expected 24 registers");
  }
  std::array<Digest32, kPcrCount> regs;
  for (unsigned i = 0; i < kPcrCount; ++i) {
    Bytes raw = b64url_decode(pcr[i].get<std::string>());
    regs[i] = fixed<32>(raw);
  }
  d.pcrs_.restore(regs);

  for (const Json& kj : require_member(j, "keys")) {
    KeyRecord r = key_record_from_json(kj, secret);
    d.creation_order_.push_back(r.handle);
    d.key_store_.emplace(r.handle, std::move(r));
  }
  d.usage_log_ =
      require_member(j, "usage_log").get<std::vector<model::UsageLogEntry>>();
  if (!d.key_store_.contains(d.ek_handle_) || !d.key_store_.contains(d.ak_handle_)) {
    throw Error(ErrorCode::kDecodeFailed, "identity keys missing from state");
  }
  return d;
}

Digest32 replay_extend_chain(const Digest32& start,
                             const std::vector<Digest32>& digests) {
  Digest32 r = start;
  for (const Digest32& d : digests) {
    r = sha256(view(r), view(d));
  }
  return r;
}

}  // namespace wattest::hw
