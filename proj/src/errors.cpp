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

#include "wattest/errors.hpp"

namespace wattest {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidGeolocation: return "InvalidGeolocation";
    case ErrorCode::kEmptyManifest: return "EmptyManifest";
    case ErrorCode::kUnknownParent: return "UnknownParent";
    case ErrorCode::kInvalidAttributes: return "InvalidAttributes";
    case ErrorCode::kExportDenied: return "ExportDenied";
    case ErrorCode::kUnknownHandle: return "UnknownHandle";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kBadNonce: return "BadNonce";
    case ErrorCode::kUnknownClaimKind: return "UnknownClaimKind";
    case ErrorCode::kNoSubjectKey: return "NoSubjectKey";
    case ErrorCode::kMalformedKey: return "MalformedKey";
    case ErrorCode::kDecodeFailed: return "DecodeFailed";
    case ErrorCode::kUnverifiedEndorsement: return "UnverifiedEndorsement";
    case ErrorCode::kNoEndorsement: return "NoEndorsement";
    case ErrorCode::kMalformedEvidence: return "MalformedEvidence";
    case ErrorCode::kStaleNonce: return "StaleNonce";
    case ErrorCode::kUnknownRuleKind: return "UnknownRuleKind";
    case ErrorCode::kInvalidPolicy: return "InvalidPolicy";
    case ErrorCode::kValidationFailed: return "ValidationFailed";
    case ErrorCode::kDuplicateKey: return "DuplicateKey";
    case ErrorCode::kUnregisteredKey: return "UnregisteredKey";
    case ErrorCode::kInvalidValidity: return "InvalidValidity";
    case ErrorCode::kGappedLog: return "GappedLog";
    case ErrorCode::kBadSignature: return "BadSignature";
    case ErrorCode::kDuplicateTx: return "DuplicateTx";
    case ErrorCode::kMalformedTx: return "MalformedTx";
    case ErrorCode::kUninsurable: return "Uninsurable";
    case ErrorCode::kUnverifiedResult: return "UnverifiedResult";
    case ErrorCode::kTransportFailure: return "TransportFailure";
    case ErrorCode::kBadRequest: return "BadRequest";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kIoFailure: return "IoFailure";
  }
  return "UnknownError";
}

}  // namespace wattest
