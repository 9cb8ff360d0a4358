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

#ifndef WATTEST_EVIDENCE_HPP_
#define WATTEST_EVIDENCE_HPP_

#include <optional>
#include <vector>

#include "wattest/device.hpp"
#include "wattest/model.hpp"

namespace wattest::model {

/// Assembles nonce-bound evidence: a quote over PCRs [0, 16] plus one claim
/// per requested kind, all signed by the attestation key.
///
/// The key_provenance claim certifies provenance_subject when given,
/// otherwise the device's newest application key (kNoSubjectKey if none
/// exists). An empty kind list yields a bare quote, which is valid minimal
/// evidence.
Evidence build_evidence(const hw::Device& device, ByteView nonce,
                        const std::vector<ClaimKind>& requested_claims,
                        std::int64_t produced_at,
                        std::optional<KeyHandle> provenance_subject = std::nullopt);

/// String-kind convenience used by the protocol layer; unknown kind names
/// are kUnknownClaimKind.
Evidence build_evidence(const hw::Device& device, ByteView nonce,
                        const std::vector<std::string>& requested_claims,
                        std::int64_t produced_at,
                        std::optional<KeyHandle> provenance_subject = std::nullopt);

}  // namespace wattest::model

#endif  // WATTEST_EVIDENCE_HPP_
