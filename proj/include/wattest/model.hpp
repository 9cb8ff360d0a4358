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

#ifndef WATTEST_MODEL_HPP_
#define WATTEST_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "wattest/bytes.hpp"
#include "wattest/canonical.hpp"
#include "wattest/crypto.hpp"

// Signable structures exchanged among attester, endorser, verifier and
// relying party. Every type has a canonical JSON form; signed types sign
// the canonical encoding of all fields except the signature itself.
// All types are immutable value types; encoding and verification are pure.
namespace wattest::model {

struct GeoPosition {
  double latitude = 0.0;   // degrees, -90..90
  double longitude = 0.0;  // degrees, -180..180
  double altitude = 0.0;   // meters

  bool in_range() const;
  friend bool operator==(const GeoPosition&, const GeoPosition&) = default;
};

void to_json(Json& j, const GeoPosition& g);
void from_json(const Json& j, GeoPosition& g);

struct KeyAttributes {
  bool fixed_to_device = false;
  bool sign_only = false;
  bool created_inside = false;  // true iff generated inside the device

  friend bool operator==(const KeyAttributes&, const KeyAttributes&) = default;
};

void to_json(Json& j, const KeyAttributes& a);
void from_json(const Json& j, KeyAttributes& a);

struct ComponentMeasurement {
  std::string name;
  Digest32 digest{};

  friend bool operator==(const ComponentMeasurement&,
                         const ComponentMeasurement&) = default;
};

void to_json(Json& j, const ComponentMeasurement& c);
void from_json(const Json& j, ComponentMeasurement& c);

/// Digest binding a component manifest into quotes and endorsements:
/// SHA-256 of the canonical encoding of the measurement list.
Digest32 manifest_digest(const std::vector<ComponentMeasurement>& manifest);

/// Signed snapshot of selected PCR values, counter and nonce, produced by
/// the device's attestation key.
struct Quote {
  DeviceId device_id{};
  std::vector<unsigned> pcr_selection;  // ascending, no duplicates
  Digest32 composite_digest{};          // SHA-256 over the selected registers
  std::uint64_t counter = 0;
  Nonce32 nonce{};
  Digest32 config_digest{};
  GeoPosition geolocation;
  Signature signature{};

  Json body_json() const;
  bool verify(const PublicKey& attestation_key) const;
};

void to_json(Json& j, const Quote& q);
void from_json(const Json& j, Quote& q);

/// Attestation-key statement about a stored key: who holds it, its
/// attributes, and the creation digest binding it to its creation context.
struct KeyCertification {
  PublicKey subject_public{};
  KeyAttributes attributes;
  Digest32 creation_digest{};
  DeviceId device_id{};
  Signature signature{};

  Json body_json() const;
  bool verify(const PublicKey& attestation_key) const;
};

void to_json(Json& j, const KeyCertification& c);
void from_json(const Json& j, KeyCertification& c);

enum class ClaimKind {
  kKeyProvenance,
  kGeolocation,
  kKeyUsageSequence,
  kSystemConfig,
};

std::string_view claim_kind_name(ClaimKind kind);
ClaimKind claim_kind_from_name(std::string_view name);  // kUnknownClaimKind

struct UsageLogEntry {
  std::uint64_t seq = 0;
  Digest32 tx_digest{};
  std::uint64_t counter_after = 0;

  friend bool operator==(const UsageLogEntry&, const UsageLogEntry&) = default;
};

void to_json(Json& j, const UsageLogEntry& e);
void from_json(const Json& j, UsageLogEntry& e);

struct UsageExcerpt {
  std::uint64_t seq_start = 0;
  std::uint64_t seq_end = 0;  // exclusive
  std::vector<UsageLogEntry> entries;
  Digest32 end_register{};  // usage PCR value after the last entry
};

void to_json(Json& j, const UsageExcerpt& u);
void from_json(const Json& j, UsageExcerpt& u);

struct SystemConfig {
  std::vector<ComponentMeasurement> components;
};

void to_json(Json& j, const SystemConfig& s);
void from_json(const Json& j, SystemConfig& s);

/// One attested statement; the body shape is fixed by the kind and unknown
/// kinds are rejected at decode.
struct Claim {
  ClaimKind kind = ClaimKind::kGeolocation;
  std::variant<KeyCertification, GeoPosition, UsageExcerpt, SystemConfig> body;

  const KeyCertification& key_provenance() const;
  const GeoPosition& geolocation() const;
  const UsageExcerpt& usage() const;
  const SystemConfig& system_config() const;
};

void to_json(Json& j, const Claim& c);
void from_json(const Json& j, Claim& c);

/// Signed, nonce-bound bundle of claims from an attester.
struct Evidence {
  Quote quote;
  std::vector<Claim> claims;
  std::vector<KeyCertification> key_certifications;
  std::int64_t produced_at = 0;
  Signature signature{};

  Json body_json() const;
  bool verify(const PublicKey& attestation_key) const;
};

void to_json(Json& j, const Evidence& e);
void from_json(const Json& j, Evidence& e);

/// Manufacturer-signed reference values and device identity material.
struct Endorsement {
  std::string endorser_id;
  DeviceId device_id{};
  std::vector<ComponentMeasurement> reference_values;
  PublicKey ek_public{};
  PublicKey ak_public{};
  std::int64_t issued_at = 0;
  Signature signature{};

  Json body_json() const;
  bool verify(const PublicKey& endorser_key) const;
};

void to_json(Json& j, const Endorsement& e);
void from_json(const Json& j, Endorsement& e);

enum class Verdict { kAffirming, kWarning, kContraindicated };

std::string_view verdict_name(Verdict v);
Verdict verdict_from_name(std::string_view name);

enum class Severity { kMandatory, kAdvisory };

std::string_view severity_name(Severity s);
Severity severity_from_name(std::string_view name);

struct Finding {
  std::string rule_id;
  std::string kind;  // rule kind, or the built-in check name
  Severity severity = Severity::kMandatory;
  bool passed = false;
  std::string detail;

  friend bool operator==(const Finding&, const Finding&) = default;
};

void to_json(Json& j, const Finding& f);
void from_json(const Json& j, Finding& f);

/// The verdict a finding list implies: any mandatory failure is
/// contraindicating, advisory-only failures warn, otherwise affirming.
Verdict verdict_for(const std::vector<Finding>& findings);

/// Verifier-signed appraisal verdict with per-rule findings.
struct AttestationResult {
  std::string verifier_id;
  DeviceId device_id{};
  Verdict verdict = Verdict::kContraindicated;
  std::vector<Finding> findings;
  Nonce32 nonce{};
  std::int64_t issued_at = 0;
  Signature signature{};

  Json body_json() const;
};

void to_json(Json& j, const AttestationResult& r);
void from_json(const Json& j, AttestationResult& r);

/// Simplified certificate: enough structure for chains up to a VASP root,
/// none of the X.509/DER weight.
struct SimpleCertificate {
  PublicKey subject_public_key{};
  std::string subject_name;
  std::string issuer_name;
  PublicKey issuer_public_key{};
  std::int64_t not_before = 0;
  std::int64_t not_after = 0;
  Signature signature{};

  Json body_json() const;
  bool self_signed() const;
};

void to_json(Json& j, const SimpleCertificate& c);
void from_json(const Json& j, SimpleCertificate& c);

SimpleCertificate make_certificate(const KeyPair& issuer_key,
                                   const std::string& issuer_name,
                                   const PublicKey& subject_key,
                                   const std::string& subject_name,
                                   std::int64_t not_before,
                                   std::int64_t not_after);

/// A chain [leaf, ..., root] verifies iff every link's signature verifies
/// under its issuer's key, validity windows nest within issuer windows, and
/// the last element is self-signed.
bool verify_chain(const std::vector<SimpleCertificate>& chain,
                  std::int64_t at_time);

// Plain signing primitives over canonical bodies.
Signature sign_body(ByteView body, const KeyPair& key);
bool verify_body(ByteView body, const Signature& sig, const PublicKey& pub);

}  // namespace wattest::model

#endif  // WATTEST_MODEL_HPP_
