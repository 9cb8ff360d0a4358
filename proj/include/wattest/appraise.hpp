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

#ifndef WATTEST_APPRAISE_HPP_
#define WATTEST_APPRAISE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "wattest/endorse.hpp"
#include "wattest/model.hpp"

// The neutral verifier: appraises evidence against endorsements under a
// declarative policy and emits signed attestation results.
namespace wattest::appraise {

enum class RuleKind {
  kReferenceMatch,    // component digests equal endorsed reference values
  kKeyHardwareBound,  // provenance claim certifies fixed + created inside
  kGeofence,          // claimed position inside an inclusive lat/lon box
  kCounterMin,        // quote counter at least the configured floor
  kConfigKnown,       // config digest matches some endorsement for the device
  kNeutrality,        // verifier is not the endorser of any used endorsement
};

std::string_view rule_kind_name(RuleKind kind);
RuleKind rule_kind_from_name(std::string_view name);  // kUnknownRuleKind

struct GeofenceBox {
  double lat_min = -90.0;
  double lat_max = 90.0;
  double lon_min = -180.0;
  double lon_max = 180.0;

  bool contains(const model::GeoPosition& p) const;  // inclusive bounds
};

void to_json(Json& j, const GeofenceBox& b);
void from_json(const Json& j, GeofenceBox& b);

struct Rule {
  std::string rule_id;
  model::Severity severity = model::Severity::kMandatory;
  RuleKind kind = RuleKind::kReferenceMatch;
  Json parameters;  // kind-specific; see the typed getters

  // reference_match: {"components": "all"} or {"components": ["name", ...]}
  bool match_all_components() const;
  std::vector<std::string> component_subset() const;
  // geofence: {"lat_max","lat_min","lon_max","lon_min"}
  GeofenceBox geofence() const;
  // counter_min: {"min": n}
  std::uint64_t counter_min() const;
};

void to_json(Json& j, const Rule& r);
void from_json(const Json& j, Rule& r);

struct AppraisalPolicy {
  std::string verifier_id;
  std::int64_t freshness_window = 300;  // seconds
  std::vector<Rule> rules;

  /// kInvalidPolicy on duplicate rule ids or a non-positive window.
  void validate() const;

  static AppraisalPolicy load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

void to_json(Json& j, const AppraisalPolicy& p);
void from_json(const Json& j, AppraisalPolicy& p);

/// Policy used when none is configured: mandatory reference match and
/// hardware-bound key provenance.
AppraisalPolicy default_policy(const std::string& verifier_id);

struct AppraisalContext {
  std::int64_t nonce_issued_at = 0;
  Nonce32 nonce{};
  std::vector<model::Endorsement> endorsements;  // newest first
  std::int64_t now = 0;
};

/// Evaluates one policy rule against evidence and endorsements.
model::Finding evaluate_rule(const Rule& rule, const model::Evidence& evidence,
                             const std::vector<model::Endorsement>& endorsements);

/// Appraises evidence in fixed order: evidence signature against the
/// endorsed AK, nonce match and freshness, verifier neutrality, then each
/// policy rule. Pure function of its inputs; the result body is
/// byte-identical for identical inputs. kNoEndorsement if the context
/// carries no endorsement; kMalformedEvidence on structural defects.
model::AttestationResult appraise(const model::Evidence& evidence,
                                  const AppraisalContext& ctx,
                                  const AppraisalPolicy& policy,
                                  const KeyPair& verifier_key);

/// True iff the signature verifies and the verdict is consistent with the
/// findings under the verdict rule.
bool verify_result(const model::AttestationResult& result,
                   const PublicKey& verifier_public_key);

/// Single-use challenge nonces with atomic consume semantics.
class NonceTable {
 public:
  struct Issued {
    Nonce32 nonce{};
    std::int64_t issued_at = 0;
  };

  Issued issue(Rng& rng, std::int64_t now);

  /// Removes the nonce and returns its issue time; a consumed or unknown
  /// nonce is kStaleNonce.
  std::int64_t consume(const Nonce32& nonce);

  std::size_t pending() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::int64_t> issued_;  // b64url nonce -> issued_at
};

/// Verifier engine: nonce table + policy + signing key over an endorsement
/// store. Appraisal itself is stateless; the table is the only shared state.
class Verifier {
 public:
  Verifier(AppraisalPolicy policy, KeyPair key,
           const endorse::EndorsementStore& store)
      : policy_(std::move(policy)), key_(std::move(key)), store_(store) {
    policy_.validate();
  }

  NonceTable::Issued issue_nonce(Rng& rng, std::int64_t now) {
    return nonces_.issue(rng, now);
  }

  /// Consumes the evidence nonce, gathers endorsements for the quoted
  /// device and appraises. kStaleNonce / kNoEndorsement propagate.
  model::AttestationResult submit(const model::Evidence& evidence,
                                  std::int64_t now);

  const AppraisalPolicy& policy() const { return policy_; }
  const PublicKey& public_key() const { return key_.public_key; }

 private:
  AppraisalPolicy policy_;
  KeyPair key_;
  const endorse::EndorsementStore& store_;
  NonceTable nonces_;
};

}  // namespace wattest::appraise

#endif  // WATTEST_APPRAISE_HPP_
