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

#ifndef WATTEST_PROTOCOL_HPP_
#define WATTEST_PROTOCOL_HPP_

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "wattest/appraise.hpp"
#include "wattest/device.hpp"
#include "wattest/endorse.hpp"
#include "wattest/evidence.hpp"
#include "wattest/model.hpp"

// Wire protocol binding the attester, verifier, endorser and relying-party
// roles. Transport is newline-delimited canonical JSON over a reliable
// byte stream; every well-formed request receives exactly one response
// with the same correlation id.
namespace wattest::proto {

inline constexpr int kProtocolVersion = 1;

// Message type names.
inline constexpr const char* kAttestRequest = "attest_request";
inline constexpr const char* kNonceIssue = "nonce_issue";
inline constexpr const char* kEvidenceSubmit = "evidence_submit";
inline constexpr const char* kAttestationResultMsg = "attestation_result";
inline constexpr const char* kEndorsementPublish = "endorsement_publish";
inline constexpr const char* kEndorsementAck = "endorsement_ack";
inline constexpr const char* kResultFetch = "result_fetch";
inline constexpr const char* kErrorMsg = "error";

struct Envelope {
  int v = kProtocolVersion;
  std::string type;
  Json body;
  CorrelationId correlation_id{};

  /// One line of canonical JSON, newline-terminated.
  std::string encode_line() const;

  /// kBadRequest on malformed JSON, unknown version, or missing fields.
  static Envelope decode_line(std::string_view line);
};

void to_json(Json& j, const Envelope& e);
void from_json(const Json& j, Envelope& e);

Envelope make_error(const CorrelationId& correlation_id, ErrorCode code,
                    const std::string& detail);

/// Loopback verifier service handling the Fig.-1 message flows. Independent
/// connections are served concurrently; per-connection handling is
/// sequential. Shared state: the nonce table, the endorsement store, and
/// the result cache for relying-party fetches.
class VerifierService {
 public:
  VerifierService(std::string bind_address, std::uint16_t port,
                  endorse::EndorsementStore& store,
                  appraise::AppraisalPolicy policy, KeyPair verifier_key,
                  const Clock& clock, Rng& rng);
  ~VerifierService();

  VerifierService(const VerifierService&) = delete;
  VerifierService& operator=(const VerifierService&) = delete;

  /// Binds and starts the accept loop; returns the bound port (useful with
  /// port 0). kTransportFailure on bind errors.
  std::uint16_t start();
  void stop();

  std::uint16_t port() const { return port_; }
  const PublicKey& verifier_public() const { return verifier_.public_key(); }

  /// Handles one request envelope; the transport loop and tests call this
  /// directly. Never throws: failures become error envelopes.
  Envelope handle(const Envelope& request);

 private:
  void accept_loop();
  void serve_connection(int fd);

  std::string bind_address_;
  std::uint16_t port_;
  endorse::EndorsementStore& store_;
  appraise::Verifier verifier_;
  const Clock& clock_;
  Rng& rng_;
  std::mutex rng_mutex_;

  std::mutex results_mutex_;
  std::map<std::string, model::AttestationResult> results_;  // b64url correlation id

  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::thread accept_thread_;
  std::mutex workers_mutex_;
  std::vector<std::thread> workers_;
};

/// Line-oriented client connection to a verifier service.
class Connection {
 public:
  /// kTransportFailure on connect errors.
  Connection(const std::string& host, std::uint16_t port);
  ~Connection();

  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  /// Sends one envelope and reads the correlated response. Error envelopes
  /// come back as-is; transport failures throw.
  Envelope round_trip(const Envelope& request);

 private:
  int fd_ = -1;
  std::string pending_;
};

struct NonceGrant {
  Nonce32 nonce{};
  std::int64_t issued_at = 0;
  std::string verifier_id;
  PublicKey verifier_public{};
};

struct AttestationOutcome {
  model::AttestationResult result;
  PublicKey verifier_public{};
  CorrelationId correlation_id{};  // handle for relying-party result_fetch
};

/// The three-step attestation flow against a verifier endpoint: fetch a
/// nonce, build evidence over the requested claims, submit, and verify the
/// returned result (kUnverifiedResult if it fails verification). Verifier
/// errors propagate with their protocol codes; connection problems are
/// kTransportFailure.
AttestationOutcome run_attestation(
    const std::string& host, std::uint16_t port, const hw::Device& device,
    const std::vector<model::ClaimKind>& requested_claims, Rng& rng,
    std::optional<KeyHandle> provenance_subject = std::nullopt);

/// Step (a)/(b) push path: publish an endorsement to the verifier's store.
void publish_endorsement(const std::string& host, std::uint16_t port,
                         const model::Endorsement& endorsement, Rng& rng);

/// Relying-party retrieval of a cached result by correlation id.
model::AttestationResult fetch_result(const std::string& host,
                                      std::uint16_t port,
                                      const CorrelationId& correlation_id,
                                      Rng& rng);

}  // namespace wattest::proto

#endif  // WATTEST_PROTOCOL_HPP_
