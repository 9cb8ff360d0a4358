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

#include "wattest/model.hpp"

#include <algorithm>

namespace wattest::model {

namespace {
template <std::size_t N>
std::string b64(const std::array<std::uint8_t, N>& a) {
  return b64url_encode(view(a));
}

Signature sig_field(const Json& j) {
  return require_b64_fixed<kSignatureSize>(j, "sig");
}
}  // namespace

// --- GeoPosition ---

bool GeoPosition::in_range() const {
  return latitude >= -90.0 && latitude <= 90.0 && longitude >= -180.0 &&
         longitude <= 180.0;
}

void to_json(Json& j, const GeoPosition& g) {
  j = Json{{"alt", g.altitude}, {"lat", g.latitude}, {"lon", g.longitude}};
}

void from_json(const Json& j, GeoPosition& g) {
  g.altitude = require_double(j, "alt");
  g.latitude = require_double(j, "lat");
  g.longitude = require_double(j, "lon");
  if (!g.in_range()) {
    throw Error(ErrorCode::kDecodeFailed, "geolocation out of range");
  }
}

// --- KeyAttributes ---

void to_json(Json& j, const KeyAttributes& a) {
  j = Json{{"created_inside", a.created_inside},
           {"fixed_to_device", a.fixed_to_device},
           {"sign_only", a.sign_only}};
}

void from_json(const Json& j, KeyAttributes& a) {
  a.created_inside = require_bool(j, "created_inside");
  a.fixed_to_device = require_bool(j, "fixed_to_device");
  a.sign_only = require_bool(j, "sign_only");
  if (a.fixed_to_device && !a.created_inside) {
    throw Error(ErrorCode::kDecodeFailed,
                "fixed_to_device implies created_inside");
  }
}

// --- ComponentMeasurement ---

void to_json(Json& j, const ComponentMeasurement& c) {
  j = Json{{"digest", b64(c.digest)}, {"name", c.name}};
}

void from_json(const Json& j, ComponentMeasurement& c) {
  c.digest = require_b64_fixed<32>(j, "digest");
  c.name = require_string(j, "name");
}

Digest32 manifest_digest(const std::vector<ComponentMeasurement>& manifest) {
  return sha256(canonical_encode(manifest));
}

// --- Quote ---

Json Quote::body_json() const {
  return Json{{"composite_digest", b64(composite_digest)},
              {"config_digest", b64(config_digest)},
              {"counter", counter},
              {"device_id", b64(device_id)},
              {"geolocation", geolocation},
              {"nonce", b64(nonce)},
              {"pcr_selection", pcr_selection}};
}

bool Quote::verify(const PublicKey& attestation_key) const {
  return verify_body(canonical_bytes(body_json()), signature, attestation_key);
}

void to_json(Json& j, const Quote& q) {
  j = q.body_json();
  j["sig"] = b64(q.signature);
}

void from_json(const Json& j, Quote& q) {
  q.composite_digest = require_b64_fixed<32>(j, "composite_digest");
  q.config_digest = require_b64_fixed<32>(j, "config_digest");
  q.counter = require_uint(j, "counter");
  q.device_id = require_b64_fixed<16>(j, "device_id");
  q.geolocation = require_member(j, "geolocation").get<GeoPosition>();
  q.nonce = require_b64_fixed<32>(j, "nonce");
  const Json& sel = require_member(j, "pcr_selection");
  if (!sel.is_array() || sel.empty()) {
    throw Error(ErrorCode::kDecodeFailed, "pcr_selection: non-empty array required");
  }
  q.pcr_selection.clear();
  for (const Json& v : sel) {
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() >= 24) {
      throw Error(ErrorCode::kDecodeFailed, "pcr_selection: index out of range");
    }
    q.pcr_selection.push_back(v.get<unsigned>());
  }
  if (!std::is_sorted(q.pcr_selection.begin(), q.pcr_selection.end()) ||
      std::adjacent_find(q.pcr_selection.begin(), q.pcr_selection.end()) !=
          q.pcr_selection.end()) {
    throw Error(ErrorCode::kDecodeFailed,
                "pcr_selection: strictly ascending order required");
  }
  q.signature = sig_field(j);
}

// --- KeyCertification ---

Json KeyCertification::body_json() const {
  return Json{{"attributes", attributes},
              {"creation_digest", b64(creation_digest)},
              {"device_id", b64(device_id)},
              {"subject_public", b64(subject_public)}};
}

bool KeyCertification::verify(const PublicKey& attestation_key) const {
  return verify_body(canonical_bytes(body_json()), signature, attestation_key);
}

void to_json(Json& j, const KeyCertification& c) {
  j = c.body_json();
  j["sig"] = b64(c.signature);
}

void from_json(const Json& j, KeyCertification& c) {
  c.attributes = require_member(j, "attributes").get<KeyAttributes>();
  c.creation_digest = require_b64_fixed<32>(j, "creation_digest");
  c.device_id = require_b64_fixed<16>(j, "device_id");
  c.subject_public = require_b64_fixed<kPublicKeySize>(j, "subject_public");
  c.signature = sig_field(j);
}

// --- Claims ---

std::string_view claim_kind_name(ClaimKind kind) {
  switch (kind) {
    case ClaimKind::kKeyProvenance: return "key_provenance";
    case ClaimKind::kGeolocation: return "geolocation";
    case ClaimKind::kKeyUsageSequence: return "key_usage_sequence";
    case ClaimKind::kSystemConfig: return "system_config";
  }
  return "unknown";
}

ClaimKind claim_kind_from_name(std::string_view name) {
  if (name == "key_provenance") return ClaimKind::kKeyProvenance;
  if (name == "geolocation") return ClaimKind::kGeolocation;
  if (name == "key_usage_sequence") return ClaimKind::kKeyUsageSequence;
  if (name == "system_config") return ClaimKind::kSystemConfig;
  throw Error(ErrorCode::kUnknownClaimKind, std::string(name));
}

void to_json(Json& j, const UsageLogEntry& e) {
  j = Json{{"counter_after", e.counter_after},
           {"seq", e.seq},
           {"tx_digest", b64(e.tx_digest)}};
}

void from_json(const Json& j, UsageLogEntry& e) {
  e.counter_after = require_uint(j, "counter_after");
  e.seq = require_uint(j, "seq");
  e.tx_digest = require_b64_fixed<32>(j, "tx_digest");
}

void to_json(Json& j, const UsageExcerpt& u) {
  j = Json{{"end_register", b64(u.end_register)},
           {"entries", u.entries},
           {"seq_end", u.seq_end},
           {"seq_start", u.seq_start}};
}

void from_json(const Json& j, UsageExcerpt& u) {
  u.end_register = require_b64_fixed<32>(j, "end_register");
  u.entries = require_member(j, "entries").get<std::vector<UsageLogEntry>>();
  u.seq_end = require_uint(j, "seq_end");
  u.seq_start = require_uint(j, "seq_start");
}

void to_json(Json& j, const SystemConfig& s) {
  j = Json{{"components", s.components}};
}

void from_json(const Json& j, SystemConfig& s) {
  s.components =
      require_member(j, "components").get<std::vector<ComponentMeasurement>>();
}

const KeyCertification& Claim::key_provenance() const {
  return std::get<KeyCertification>(body);
}
const GeoPosition& Claim::geolocation() const {
  return std::get<GeoPosition>(body);
}
const UsageExcerpt& Claim::usage() const { return std::get<UsageExcerpt>(body); }
const SystemConfig& Claim::system_config() const {
  return std::get<SystemConfig>(body);
}

void to_json(Json& j, const Claim& c) {
  Json body;
  std::visit([&body](const auto& v) { body = v; }, c.body);
  j = Json{{"body", std::move(body)},
           {"kind", std::string(claim_kind_name(c.kind))}};
}

void from_json(const Json& j, Claim& c) {
  // Unknown kinds are rejected here; the body shape must match the kind.
  c.kind = claim_kind_from_name(require_string(j, "kind"));
  const Json& body = require_member(j, "body");
  switch (c.kind) {
    case ClaimKind::kKeyProvenance:
      c.body = body.get<KeyCertification>();
      break;
    case ClaimKind::kGeolocation:
      c.body = body.get<GeoPosition>();
      break;
    case ClaimKind::kKeyUsageSequence:
      c.body = body.get<UsageExcerpt>();
      break;
    case ClaimKind::kSystemConfig:
      c.body = body.get<SystemConfig>();
      break;
  }
}

// --- Evidence ---

Json Evidence::body_json() const {
  return Json{{"claims", claims},
              {"key_certifications", key_certifications},
              {"produced_at", produced_at},
              {"quote", quote}};
}

bool Evidence::verify(const PublicKey& attestation_key) const {
  return verify_body(canonical_bytes(body_json()), signature, attestation_key) &&
         quote.verify(attestation_key);
}

void to_json(Json& j, const Evidence& e) {
  j = e.body_json();
  j["sig"] = b64(e.signature);
}

void from_json(const Json& j, Evidence& e) {
  e.claims = require_member(j, "claims").get<std::vector<Claim>>();
  e.key_certifications = require_member(j, "key_certifications")
                             .get<std::vector<KeyCertification>>();
  e.produced_at = require_int(j, "produced_at");
  e.quote = require_member(j, "quote").get<Quote>();
  e.signature = sig_field(j);
}

// --- Endorsement ---

Json Endorsement::body_json() const {
  return Json{{"ak_public", b64(ak_public)},
              {"device_id", b64(device_id)},
              {"ek_public", b64(ek_public)},
              {"endorser_id", endorser_id},
              {"issued_at", issued_at},
              {"reference_values", reference_values}};
}

bool Endorsement::verify(const PublicKey& endorser_key) const {
  return verify_body(canonical_bytes(body_json()), signature, endorser_key);
}

void to_json(Json& j, const Endorsement& e) {
  j = e.body_json();
  j["sig"] = b64(e.signature);
}

void from_json(const Json& j, Endorsement& e) {
  e.ak_public = require_b64_fixed<kPublicKeySize>(j, "ak_public");
  e.device_id = require_b64_fixed<16>(j, "device_id");
  e.ek_public = require_b64_fixed<kPublicKeySize>(j, "ek_public");
  e.endorser_id = require_string(j, "endorser_id");
  e.issued_at = require_int(j, "issued_at");
  e.reference_values = require_member(j, "reference_values")
                           .get<std::vector<ComponentMeasurement>>();
  if (e.reference_values.empty()) {
    throw Error(ErrorCode::kDecodeFailed, "reference_values: non-empty required");
  }
  e.signature = sig_field(j);
}

// --- Verdict / findings / result ---

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kAffirming: return "affirming";
    case Verdict::kWarning: return "warning";
    case Verdict::kContraindicated: return "contraindicated";
  }
  return "contraindicated";
}

Verdict verdict_from_name(std::string_view name) {
  if (name == "affirming") return Verdict::kAffirming;
  if (name == "warning") return Verdict::kWarning;
  if (name == "contraindicated") return Verdict::kContraindicated;
  throw Error(ErrorCode::kDecodeFailed, "unknown verdict: " + std::string(name));
}

std::string_view severity_name(Severity s) {
  return s == Severity::kMandatory ? "mandatory" : "advisory";
}

Severity severity_from_name(std::string_view name) {
  if (name == "mandatory") return Severity::kMandatory;
  if (name == "advisory") return Severity::kAdvisory;
  throw Error(ErrorCode::kDecodeFailed, "unknown severity: " + std::string(name));
}

void to_json(Json& j, const Finding& f) {
  j = Json{{"detail", f.detail},
           {"kind", f.kind},
           {"passed", f.passed},
           {"rule_id", f.rule_id},
           {"severity", std::string(severity_name(f.severity))}};
}

void from_json(const Json& j, Finding& f) {
  f.detail = require_string(j, "detail");
  f.kind = require_string(j, "kind");
  f.passed = require_bool(j, "passed");
  f.rule_id = require_string(j, "rule_id");
  f.severity = severity_from_name(require_string(j, "severity"));
}

Verdict verdict_for(const std::vector<Finding>& findings) {
  bool advisory_failed = false;
  for (const Finding& f : findings) {
    if (f.passed) continue;
    if (f.severity == Severity::kMandatory) return Verdict::kContraindicated;
    advisory_failed = true;
  }
  return advisory_failed ? Verdict::kWarning : Verdict::kAffirming;
}

Json AttestationResult::body_json() const {
  return Json{{"device_id", b64(device_id)},
              {"findings", findings},
              {"issued_at", issued_at},
              {"nonce", b64(nonce)},
              {"verdict", std::string(verdict_name(verdict))},
              {"verifier_id", verifier_id}};
}

void to_json(Json& j, const AttestationResult& r) {
  j = r.body_json();
  j["sig"] = b64(r.signature);
}

void from_json(const Json& j, AttestationResult& r) {
  r.device_id = require_b64_fixed<16>(j, "device_id");
  r.findings = require_member(j, "findings").get<std::vector<Finding>>();
  r.issued_at = require_int(j, "issued_at");
  r.nonce = require_b64_fixed<32>(j, "nonce");
  r.verdict = verdict_from_name(require_string(j, "verdict"));
  r.verifier_id = require_string(j, "verifier_id");
  r.signature = sig_field(j);
}

// --- SimpleCertificate ---

Json SimpleCertificate::body_json() const {
  return Json{{"issuer_name", issuer_name},
              {"issuer_public_key", b64(issuer_public_key)},
              {"not_after", not_after},
              {"not_before", not_before},
              {"subject_name", subject_name},
              {"subject_public_key", b64(subject_public_key)}};
}

bool SimpleCertificate::self_signed() const {
  return issuer_name == subject_name &&
         issuer_public_key == subject_public_key;
}

void to_json(Json& j, const SimpleCertificate& c) {
  j = c.body_json();
  j["sig"] = b64(c.signature);
}

void from_json(const Json& j, SimpleCertificate& c) {
  c.issuer_name = require_string(j, "issuer_name");
  c.issuer_public_key = require_b64_fixed<kPublicKeySize>(j, "issuer_public_key");
  c.not_after = require_int(j, "not_after");
  c.not_before = require_int(j, "not_before");
  c.subject_name = require_string(j, "subject_name");
  c.subject_public_key =
      require_b64_fixed<kPublicKeySize>(j, "subject_public_key");
  c.signature = sig_field(j);
}

SimpleCertificate make_certificate(const KeyPair& issuer_key,
                                   const std::string& issuer_name,
                                   const PublicKey& subject_key,
                                   const std::string& subject_name,
                                   std::int64_t not_before,
                                   std::int64_t not_after) {
  SimpleCertificate cert;
  cert.subject_public_key = subject_key;
  cert.subject_name = subject_name;
  cert.issuer_name = issuer_name;
  cert.issuer_public_key = issuer_key.public_key;
  cert.not_before = not_before;
  cert.not_after = not_after;
  cert.signature = sign_body(canonical_bytes(cert.body_json()), issuer_key);
  return cert;
}

bool verify_chain(const std::vector<SimpleCertificate>& chain,
                  std::int64_t at_time) {
  if (chain.empty()) return false;
  const SimpleCertificate& leaf = chain.front();
  if (at_time < leaf.not_before || at_time > leaf.not_after) return false;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const SimpleCertificate& cert = chain[i];
    const SimpleCertificate& issuer = (i + 1 < chain.size()) ? chain[i + 1] : cert;
    if (i + 1 == chain.size() && !cert.self_signed()) return false;
    if (cert.not_before > cert.not_after) return false;
    if (cert.issuer_name != issuer.subject_name ||
        cert.issuer_public_key != issuer.subject_public_key) {
      return false;
    }
    // Validity windows nest within issuer windows.
    if (cert.not_before < issuer.not_before || cert.not_after > issuer.not_after) {
      return false;
    }
    if (!verify_body(canonical_bytes(cert.body_json()), cert.signature,
                     cert.issuer_public_key)) {
      return false;
    }
  }
  return true;
}

Signature sign_body(ByteView body, const KeyPair& key) {
  return key.sign(body);
}

bool verify_body(ByteView body, const Signature& sig, const PublicKey& pub) {
  return verify_signature(body, sig, pub);
}

}  // namespace wattest::model
