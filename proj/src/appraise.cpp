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

#include "wattest/appraise.hpp"

#include <algorithm>
#include <set>

namespace wattest::appraise {

std::string_view rule_kind_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::kReferenceMatch: return "reference_match";
    case RuleKind::kKeyHardwareBound: return "key_hardware_bound";
    case RuleKind::kGeofence: return "geofence";
    case RuleKind::kCounterMin: return "counter_min";
    case RuleKind::kConfigKnown: return "config_known";
    case RuleKind::kNeutrality: return "neutrality";
  }
  return "unknown";
}

RuleKind rule_kind_from_name(std::string_view name) {
  if (name == "reference_match") return RuleKind::kReferenceMatch;
  if (name == "key_hardware_bound") return RuleKind::kKeyHardwareBound;
  if (name == "geofence") return RuleKind::kGeofence;
  if (name == "counter_min") return RuleKind::kCounterMin;
  if (name == "config_known") return RuleKind::kConfigKnown;
  if (name == "neutrality") return RuleKind::kNeutrality;
  throw Error(ErrorCode::kUnknownRuleKind, std::string(name));
}

bool GeofenceBox::contains(const model::GeoPosition& p) const {
  return p.latitude >= lat_min && p.latitude <= lat_max &&
         p.longitude >= lon_min && p.longitude <= lon_max;
}

void to_json(Json& j, const GeofenceBox& b) {
  j = Json{{"lat_max", b.lat_max},
           {"lat_min", b.lat_min},
           {"lon_max", b.lon_max},
           {"lon_min", b.lon_min}};
}

void from_json(const Json& j, GeofenceBox& b) {
  b.lat_max = require_double(j, "lat_max");
  b.lat_min = require_double(j, "lat_min");
  b.lon_max = require_double(j, "lon_max");
  b.lon_min = require_double(j, "lon_min");
}

bool Rule::match_all_components() const {
  if (!parameters.is_object() || !parameters.contains("components")) return true;
  const Json& c = parameters.at("components");
  return c.is_string() && c.get<std::string>() == "all";
}

std::vector<std::string> Rule::component_subset() const {
  const Json& c = parameters.at("components");
  return c.get<std::vector<std::string>>();
}

GeofenceBox Rule::geofence() const {
  return parameters.get<GeofenceBox>();
}

std::uint64_t Rule::counter_min() const {
  return require_uint(parameters, "min");
}

void to_json(Json& j, const Rule& r) {
  j = Json{{"kind", std::string(rule_kind_name(r.kind))},
           {"parameters", r.parameters.is_null() ? Json::object() : r.parameters},
           {"rule_id", r.rule_id},
           {"severity", std::string(model::severity_name(r.severity))}};
}

void from_json(const Json& j, Rule& r) {
  r.kind = rule_kind_from_name(require_string(j, "kind"));
  r.parameters = j.contains("parameters") ? j.at("parameters") : Json::object();
  r.rule_id = require_string(j, "rule_id");
  r.severity = model::severity_from_name(require_string(j, "severity"));
}

void AppraisalPolicy::validate() const {
  if (freshness_window <= 0) {
    throw Error(ErrorCode::kInvalidPolicy, "freshness_window must be positive");
  }
  std::set<std::string> ids;
  for (const Rule& r : rules) {
    if (!ids.insert(r.rule_id).second) {
      throw Error(ErrorCode::kInvalidPolicy, "duplicate rule_id: " + r.rule_id);
    }
  }
}

void to_json(Json& j, const AppraisalPolicy& p) {
  j = Json{{"freshness_window", p.freshness_window},
           {"rules", p.rules},
           {"verifier_id", p.verifier_id}};
}

void from_json(const Json& j, AppraisalPolicy& p) {
  p.freshness_window = require_int(j, "freshness_window");
  p.rules = require_member(j, "rules").get<std::vector<Rule>>();
  p.verifier_id = require_string(j, "verifier_id");
  p.validate();
}

AppraisalPolicy AppraisalPolicy::load(const std::filesystem::path& path) {
  return canonical_decode<AppraisalPolicy>(read_file(path));
}

void AppraisalPolicy::save(const std::filesystem::path& path) const {
  save_canonical(path, *this);
}

AppraisalPolicy default_policy(const std::string& verifier_id) {
  AppraisalPolicy p;
  p.verifier_id = verifier_id;
  p.freshness_window = 300;
  p.rules = {
      Rule{.rule_id = "config-reference",
           .severity = model::Severity::kMandatory,
           .kind = RuleKind::kReferenceMatch,
           .parameters = Json{{"components", "all"}}},
      Rule{.rule_id = "hw-bound-key",
           .severity = model::Severity::kMandatory,
           .kind = RuleKind::kKeyHardwareBound,
           .parameters = Json::object()},
  };
  return p;
}

namespace {
const model::Claim* find_claim(const model::Evidence& evidence,
                               model::ClaimKind kind) {
  for (const model::Claim& c : evidence.claims) {
    if (c.kind == kind) return &c;
  }
  return nullptr;
}

model::Finding finding(const Rule& rule, bool passed, std::string detail) {
  return model::Finding{.rule_id = rule.rule_id,
                        .kind = std::string(rule_kind_name(rule.kind)),
                        .severity = rule.severity,
                        .passed = passed,
                        .detail = std::move(detail)};
}

std::optional<Digest32> component_digest(
    const std::vector<model::ComponentMeasurement>& list,
    const std::string& name) {
  for (const model::ComponentMeasurement& c : list) {
    if (c.name == name) return c.digest;
  }
  return std::nullopt;
}
}  // namespace

model::Finding evaluate_rule(const Rule& rule, const model::Evidence& evidence,
                             const std::vector<model::Endorsement>& endorsements) {
  switch (rule.kind) {
    case RuleKind::kReferenceMatch: {
      if (endorsements.empty()) {
        return finding(rule, false, "no endorsement to compare against");
      }
      const model::Endorsement& ref = endorsements.front();
      if (rule.match_all_components()) {
        bool ok = evidence.quote.config_digest ==
                  model::manifest_digest(ref.reference_values);
        return finding(rule, ok,
                       ok ? "config digest equals endorsed reference manifest"
                          : "config digest differs from endorsed reference manifest");
      }
      const model::Claim* config = find_claim(evidence, model::ClaimKind::kSystemConfig);
      if (config == nullptr) {
        return finding(rule, false, "system_config claim absent");
      }
      for (const std::string& name : rule.component_subset()) {
        std::optional<Digest32> measured =
            component_digest(config->system_config().components, name);
        std::optional<Digest32> endorsed =
            component_digest(ref.reference_values, name);
        if (!measured || !endorsed || *measured != *endorsed) {
          return finding(rule, false, "component mismatch: " + name);
        }
      }
      return finding(rule, true, "selected components match reference values");
    }
    case RuleKind::kKeyHardwareBound: {
      const model::Claim* prov = find_claim(evidence, model::ClaimKind::kKeyProvenance);
      if (prov == nullptr) {
        return finding(rule, false, "key_provenance claim absent");
      }
      const model::KeyCertification& cert = prov->key_provenance();
      if (endorsements.empty() || !cert.verify(endorsements.front().ak_public)) {
        return finding(rule, false,
                       "certification does not verify under endorsed AK");
      }
      if (cert.device_id != evidence.quote.device_id) {
        return finding(rule, false, "certification names a different device");
      }
      if (!cert.attributes.fixed_to_device || !cert.attributes.created_inside) {
        return finding(rule, false,
                       "key is not hardware-bound (fixed_to_device=" +
                           std::string(cert.attributes.fixed_to_device ? "true" : "false") +
                           ", created_inside=" +
                           std::string(cert.attributes.created_inside ? "true" : "false") +
                           ")");
      }
      return finding(rule, true, "key created inside and fixed to the device");
    }
    case RuleKind::kGeofence: {
      const model::Claim* geo = find_claim(evidence, model::ClaimKind::kGeolocation);
      const model::GeoPosition& pos =
          geo != nullptr ? geo->geolocation() : evidence.quote.geolocation;
      bool ok = rule.geofence().contains(pos);
      return finding(rule, ok,
                     ok ? "position inside permitted box"
                        : "position outside permitted box");
    }
    case RuleKind::kCounterMin: {
      std::uint64_t floor = rule.counter_min();
      bool ok = evidence.quote.counter >= floor;
      return finding(rule, ok,
                     "counter " + std::to_string(evidence.quote.counter) +
                         (ok ? " >= " : " < ") + std::to_string(floor));
    }
    case RuleKind::kConfigKnown: {
      for (const model::Endorsement& e : endorsements) {
        if (model::manifest_digest(e.reference_values) ==
            evidence.quote.config_digest) {
          return finding(rule, true, "configuration endorsed by " + e.endorser_id);
        }
      }
      return finding(rule, false, "no endorsement covers this configuration");
    }
    case RuleKind::kNeutrality: {
      std::string verifier_id;
      if (rule.parameters.is_object() && rule.parameters.contains("verifier_id")) {
        verifier_id = rule.parameters.at("verifier_id").get<std::string>();
      }
      for (const model::Endorsement& e : endorsements) {
        if (e.endorser_id == verifier_id) {
          return finding(rule, false,
                         "verifier '" + verifier_id + "' endorses its own product");
        }
      }
      return finding(rule, true, "verifier is independent of all endorsers");
    }
  }
  throw Error(ErrorCode::kUnknownRuleKind, "unhandled rule kind");
}

model::AttestationResult appraise(const model::Evidence& evidence,
                                  const AppraisalContext& ctx,
                                  const AppraisalPolicy& policy,
                                  const KeyPair& verifier_key) {
  std::vector<model::Endorsement> endorsements;
  for (const model::Endorsement& e : ctx.endorsements) {
    if (e.device_id == evidence.quote.device_id) endorsements.push_back(e);
  }
  if (endorsements.empty()) {
    throw Error(ErrorCode::kNoEndorsement,
                "no endorsement for device " +
                    b64url_encode(view(evidence.quote.device_id)));
  }

  std::vector<model::Finding> findings;

  // Fixed check order: signature, freshness, neutrality, then policy rules,
  // so findings lists are reproducible.
  const model::Endorsement& primary = endorsements.front();
  bool sig_ok = evidence.verify(primary.ak_public);
  findings.push_back(model::Finding{
      .rule_id = "evidence_signature",
      .kind = "evidence_signature",
      .severity = model::Severity::kMandatory,
      .passed = sig_ok,
      .detail = sig_ok ? "evidence and quote verify under endorsed AK"
                       : "evidence does not verify under endorsed AK"});

  bool nonce_ok = evidence.quote.nonce == ctx.nonce;
  bool fresh_ok = ctx.now - ctx.nonce_issued_at <= policy.freshness_window;
  findings.push_back(model::Finding{
      .rule_id = "freshness",
      .kind = "freshness",
      .severity = model::Severity::kMandatory,
      .passed = nonce_ok && fresh_ok,
      .detail = !nonce_ok ? "quote nonce does not match the challenge"
               : fresh_ok ? "nonce fresh within window"
                          : "evidence older than freshness window"});

  bool neutral = true;
  std::string offending;
  for (const model::Endorsement& e : endorsements) {
    if (e.endorser_id == policy.verifier_id) {
      neutral = false;
      offending = e.endorser_id;
    }
  }
  findings.push_back(model::Finding{
      .rule_id = "neutrality",
      .kind = std::string(rule_kind_name(RuleKind::kNeutrality)),
      .severity = model::Severity::kMandatory,
      .passed = neutral,
      .detail = neutral ? "verifier is not an endorser of this device"
                        : "verifier '" + offending + "' endorses its own product"});

  for (const Rule& rule : policy.rules) {
    Rule effective = rule;
    if (rule.kind == RuleKind::kNeutrality &&
        (!effective.parameters.is_object() ||
         !effective.parameters.contains("verifier_id"))) {
      if (!effective.parameters.is_object()) effective.parameters = Json::object();
      effective.parameters["verifier_id"] = policy.verifier_id;
    }
    findings.push_back(evaluate_rule(effective, evidence, endorsements));
  }

  model::AttestationResult result;
  result.verifier_id = policy.verifier_id;
  result.device_id = evidence.quote.device_id;
  result.findings = std::move(findings);
  result.verdict = model::verdict_for(result.findings);
  result.nonce = evidence.quote.nonce;
  result.issued_at = ctx.now;
  result.signature = verifier_key.sign(canonical_bytes(result.body_json()));
  return result;
}

bool verify_result(const model::AttestationResult& result,
                   const PublicKey& verifier_public_key) {
  if (!model::verify_body(canonical_bytes(result.body_json()), result.signature,
                          verifier_public_key)) {
    return false;
  }
  return result.verdict == model::verdict_for(result.findings);
}

NonceTable::Issued NonceTable::issue(Rng& rng, std::int64_t now) {
  Issued issued;
  rng.fill(issued.nonce);
  issued.issued_at = now;
  std::lock_guard lock(mutex_);
  issued_.emplace(b64url_encode(view(issued.nonce)), now);
  return issued;
}

std::int64_t NonceTable::consume(const Nonce32& nonce) {
  std::lock_guard lock(mutex_);
  auto it = issued_.find(b64url_encode(view(nonce)));
  if (it == issued_.end()) {
    throw Error(ErrorCode::kStaleNonce, "nonce unknown or already consumed");
  }
  std::int64_t at = it->second;
  issued_.erase(it);
  return at;
}

std::size_t NonceTable::pending() const {
  std::lock_guard lock(mutex_);
  return issued_.size();
}

model::AttestationResult Verifier::submit(const model::Evidence& evidence,
                                          std::int64_t now) {
  std::int64_t issued_at = nonces_.consume(evidence.quote.nonce);
  AppraisalContext ctx;
  ctx.nonce_issued_at = issued_at;
  ctx.nonce = evidence.quote.nonce;
  ctx.endorsements = store_.lookup(evidence.quote.device_id);
  ctx.now = now;
  return appraise(evidence, ctx, policy_, key_);
}

}  // namespace wattest::appraise
