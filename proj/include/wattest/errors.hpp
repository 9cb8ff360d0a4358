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

#ifndef WATTEST_ERRORS_HPP_
#define WATTEST_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace wattest {

enum class ErrorCode {
  // hw emulator
  kInvalidGeolocation,
  kEmptyManifest,
  kUnknownParent,
  kInvalidAttributes,
  kExportDenied,
  kUnknownHandle,
  kIndexOutOfRange,
  kBadNonce,
  // evidence model
  kUnknownClaimKind,
  kNoSubjectKey,
  kMalformedKey,
  kDecodeFailed,
  // endorsement store / appraisal
  kUnverifiedEndorsement,
  kNoEndorsement,
  kMalformedEvidence,
  kStaleNonce,
  kUnknownRuleKind,
  kInvalidPolicy,
  // vasp compliance
  kValidationFailed,
  kDuplicateKey,
  kUnregisteredKey,
  kInvalidValidity,
  kGappedLog,
  // ledger
  kBadSignature,
  kDuplicateTx,
  kMalformedTx,
  // relying party / protocol
  kUninsurable,
  kUnverifiedResult,
  kTransportFailure,
  kBadRequest,
  kNotFound,
  kIoFailure,
};

/// Machine-readable code string, used verbatim in protocol error envelopes.
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wattest

#endif  // WATTEST_ERRORS_HPP_
