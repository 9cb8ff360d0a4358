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

#include "wattest/evidence.hpp"

#include "wattest/errors.hpp"

namespace wattest::model {

Evidence build_evidence(const hw::Device& device, ByteView nonce,
                        const std::vector<ClaimKind>& requested_claims,
                        std::int64_t produced_at,
                        std::optional<KeyHandle> provenance_subject) {
  Evidence evidence;
  evidence.quote = device.quote(nonce, {0, hw::kUsagePcrIndex});
  evidence.produced_at = produced_at;

  for (ClaimKind kind : requested_claims) {
    Claim claim;
    claim.kind = kind;
    switch (kind) {
      case ClaimKind::kKeyProvenance: {
        std::optional<KeyHandle> subject =
            provenance_subject ? provenance_subject : device.newest_app_key();
        if (!subject) {
          throw Error(ErrorCode::kNoSubjectKey,
                      "no application key to certify for key_provenance");
        }
        KeyCertification cert = device.certify_key(*subject);
        claim.body = cert;
        evidence.key_certifications.push_back(std::move(cert));
        break;
      }
      case ClaimKind::kGeolocation:
        claim.body = device.geolocation();
        break;
      case ClaimKind::kKeyUsageSequence: {
        UsageExcerpt excerpt;
        excerpt.seq_start = 0;
        excerpt.seq_end = device.usage_log().size();
        excerpt.entries = device.usage_log();
        excerpt.end_register = device.pcrs().at(hw::kUsagePcrIndex);
        claim.body = std::move(excerpt);
        break;
      }
      case ClaimKind::kSystemConfig:
        claim.body = SystemConfig{device.manifest()};
        break;
    }
    evidence.claims.push_back(std::move(claim));
  }

  const hw::KeyRecord& ak = device.key(device.ak_handle());
  KeyPair signer{ak.public_part, ak.private_part};
  evidence.signature = signer.sign(canonical_bytes(evidence.body_json()));
  return evidence;
}

Evidence build_evidence(const hw::Device& device, ByteView nonce,
                        const std::vector<std::string>& requested_claims,
                        std::int64_t produced_at,
                        std::optional<KeyHandle> provenance_subject) {
  std::vector<ClaimKind> kinds;
  kinds.reserve(requested_claims.size());
  for (const std::string& name : requested_claims) {
    kinds.push_back(claim_kind_from_name(name));  // kUnknownClaimKind
  }
  return build_evidence(device, nonce, kinds, produced_at, provenance_subject);
}

}  // namespace wattest::model
