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

#include "wattest/protocol.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

namespace wattest::proto {

// --- Envelope ---

void to_json(Json& j, const Envelope& e) {
  j = Json{{"body", e.body},
           {"correlation_id", b64url_encode(view(e.correlation_id))},
           {"type", e.type},
           {"v", e.v}};
}

void from_json(const Json& j, Envelope& e) {
  e.v = static_cast<int>(require_int(j, "v"));
  e.type = require_string(j, "type");
  e.body = require_member(j, "body");
  e.correlation_id = require_b64_fixed<16>(j, "correlation_id");
}

std::string Envelope::encode_line() const {
  return canonical_dump(Json(*this)) + "\n";
}

Envelope Envelope::decode_line(std::string_view line) {
  Envelope e;
  try {
    e = parse_json(line).get<Envelope>();
  } catch (const Error& err) {
    throw Error(ErrorCode::kBadRequest, err.what());
  }
  if (e.v != kProtocolVersion) {
    throw Error(ErrorCode::kBadRequest,
                "unsupported protocol version " + std::to_string(e.v));
  }
  return e;
}

Envelope make_error(const CorrelationId& correlation_id, ErrorCode code,
                    const std::string& detail) {
  Envelope e;
  e.type = kErrorMsg;
  e.correlation_id = correlation_id;
  e.body = Json{{"code", std::string(error_code_name(code))}, {"detail", detail}};
  return e;
}

// --- VerifierService ---

VerifierService::VerifierService(std::string bind_address, std::uint16_t port,
                                 endorse::EndorsementStore& store,
                                 appraise::AppraisalPolicy policy,
                                 KeyPair verifier_key, const Clock& clock,
                                 Rng& rng)
    : bind_address_(std::move(bind_address)),
      port_(port),
      store_(store),
      verifier_(std::move(policy), std::move(verifier_key), store),
      clock_(clock),
      rng_(rng) {}

VerifierService::~VerifierService() { stop(); }

std::uint16_t VerifierService::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) {
    throw Error(ErrorCode::kTransportFailure, "socket() failed");
  }
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port_);
  if (::inet_pton(AF_INET, bind_address_.c_str(), &addr.sin_addr) != 1) {
    throw Error(ErrorCode::kTransportFailure, "bad bind address: " + bind_address_);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
      ::listen(listen_fd_, 16) != 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw Error(ErrorCode::kTransportFailure,
                "cannot bind " + bind_address_ + ":" + std::to_string(port_));
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);

  running_ = true;
  accept_thread_ = std::thread([this] { accept_loop(); });
  return port_;
}

void VerifierService::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  listen_fd_ = -1;
  if (accept_thread_.joinable()) accept_thread_.join();
  std::lock_guard lock(workers_mutex_);
  for (std::thread& t : workers_) {
    if (t.joinable()) t.join();
  }
  workers_.clear();
}

void VerifierService::accept_loop() {
  while (running_) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (!running_) break;
      continue;
    }
    std::lock_guard lock(workers_mutex_);
    workers_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void VerifierService::serve_connection(int fd) {
  std::string buffer;
  char chunk[4096];
  while (running_) {
    ssize_t n = ::read(fd, chunk, sizeof chunk);
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t pos;
    while ((pos = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      if (line.empty()) continue;

      Envelope response;
      try {
        response = handle(Envelope::decode_line(line));
      } catch (const Error& err) {
        response = make_error(CorrelationId{}, err.code(), err.what());
      }
      std::string out = response.encode_line();
      std::size_t written = 0;
      while (written < out.size()) {
        ssize_t w = ::write(fd, out.data() + written, out.size() - written);
        if (w <= 0) {
          ::close(fd);
          return;
        }
        written += static_cast<std::size_t>(w);
      }
    }
  }
  ::close(fd);
}

Envelope VerifierService::handle(const Envelope& request) {
  Envelope response;
  response.correlation_id = request.correlation_id;
  try {
    if (request.type == kAttestRequest) {
      appraise::NonceTable::Issued issued;
      {
        std::lock_guard lock(rng_mutex_);
        issued = verifier_.issue_nonce(rng_, clock_.now());
      }
      response.type = kNonceIssue;
      response.body = Json{
          {"issued_at", issued.issued_at},
          {"nonce", b64url_encode(view(issued.nonce))},
          {"verifier_id", verifier_.policy().verifier_id},
          {"verifier_public", b64url_encode(view(verifier_.public_key()))}};
      return response;
    }
    if (request.type == kEvidenceSubmit) {
      model::Evidence evidence;
      try {
        evidence = require_member(request.body, "evidence").get<model::Evidence>();
      } catch (const Error& err) {
        throw Error(ErrorCode::kMalformedEvidence, err.what());
      }
      model::AttestationResult result = verifier_.submit(evidence, clock_.now());
      {
        std::lock_guard lock(results_mutex_);
        results_[b64url_encode(view(request.correlation_id))] = result;
      }
      response.type = kAttestationResultMsg;
      response.body = Json{
          {"result", result},
          {"verifier_public", b64url_encode(view(verifier_.public_key()))}};
      return response;
    }
    if (request.type == kEndorsementPublish) {
      model::Endorsement endorsement;
      try {
        endorsement =
            require_member(request.body, "endorsement").get<model::Endorsement>();
      } catch (const Error& err) {
        throw Error(ErrorCode::kBadRequest, err.what());
      }
      store_.store(endorsement);  // kUnverifiedEndorsement
      response.type = kEndorsementAck;
      response.body = Json{{"device_id", b64url_encode(view(endorsement.device_id))}};
      return response;
    }
    if (request.type == kResultFetch) {
      std::string ref = require_string(request.body, "ref");
      std::lock_guard lock(results_mutex_);
      auto it = results_.find(ref);
      if (it == results_.end()) {
        throw Error(ErrorCode::kNotFound, "no result for correlation id " + ref);
      }
      response.type = kAttestationResultMsg;
      response.body = Json{
          {"result", it->second},
          {"verifier_public", b64url_encode(view(verifier_.public_key()))}};
      return response;
    }
    throw Error(ErrorCode::kBadRequest, "unknown message type: " + request.type);
  } catch (const Error& err) {
    return make_error(request.correlation_id, err.code(), err.what());
  } catch (const std::exception& ex) {
    return make_error(request.correlation_id, ErrorCode::kBadRequest, ex.what());
  }
}

// --- Connection ---

Connection::Connection(const std::string& host, std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) {
    throw Error(ErrorCode::kTransportFailure, "socket() failed");
  }
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd_);
    throw Error(ErrorCode::kTransportFailure, "bad host: " + host);
  }
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(fd_);
    throw Error(ErrorCode::kTransportFailure,
                "connect to " + host + ":" + std::to_string(port) + " failed");
  }
}

Connection::~Connection() {
  if (fd_ >= 0) ::close(fd_);
}

Envelope Connection::round_trip(const Envelope& request) {
  std::string out = request.encode_line();
  std::size_t written = 0;
  while (written < out.size()) {
    ssize_t w = ::write(fd_, out.data() + written, out.size() - written);
    if (w <= 0) {
      throw Error(ErrorCode::kTransportFailure, "write failed");
    }
    written += static_cast<std::size_t>(w);
  }
  char chunk[4096];
  while (true) {
    std::size_t pos = pending_.find('\n');
    if (pos != std::string::npos) {
      std::string line = pending_.substr(0, pos);
      pending_.erase(0, pos + 1);
      return Envelope::decode_line(line);
    }
    ssize_t n = ::read(fd_, chunk, sizeof chunk);
    if (n <= 0) {
      throw Error(ErrorCode::kTransportFailure, "connection closed mid-response");
    }
    pending_.append(chunk, static_cast<std::size_t>(n));
  }
}

// --- Client flows ---

namespace {
CorrelationId fresh_correlation(Rng& rng) {
  CorrelationId id{};
  rng.fill(id);
  return id;
}

[[noreturn]] void raise_protocol_error(const Envelope& e) {
  std::string code = require_string(e.body, "code");
  std::string detail = require_string(e.body, "detail");
  // Map the wire code back to the matching local error code.
  for (int c = 0; c <= static_cast<int>(ErrorCode::kIoFailure); ++c) {
    if (error_code_name(static_cast<ErrorCode>(c)) == code) {
      throw Error(static_cast<ErrorCode>(c), detail);
    }
  }
  throw Error(ErrorCode::kBadRequest, code + ": " + detail);
}
}  // namespace

AttestationOutcome run_attestation(
    const std::string& host, std::uint16_t port, const hw::Device& device,
    const std::vector<model::ClaimKind>& requested_claims, Rng& rng,
    std::optional<KeyHandle> provenance_subject) {
  Connection conn(host, port);

  Envelope request;
  request.type = kAttestRequest;
  request.correlation_id = fresh_correlation(rng);
  request.body = Json::object();
  Envelope nonce_env = conn.round_trip(request);
  if (nonce_env.type == kErrorMsg) raise_protocol_error(nonce_env);
  if (nonce_env.type != kNonceIssue ||
      nonce_env.correlation_id != request.correlation_id) {
    throw Error(ErrorCode::kTransportFailure, "unexpected nonce response");
  }
  NonceGrant grant;
  grant.nonce = require_b64_fixed<32>(nonce_env.body, "nonce");
  grant.issued_at = require_int(nonce_env.body, "issued_at");
  grant.verifier_id = require_string(nonce_env.body, "verifier_id");
  grant.verifier_public =
      require_b64_fixed<kPublicKeySize>(nonce_env.body, "verifier_public");

  model::Evidence evidence =
      model::build_evidence(device, view(grant.nonce), requested_claims,
                            grant.issued_at, provenance_subject);

  Envelope submit;
  submit.type = kEvidenceSubmit;
  submit.correlation_id = fresh_correlation(rng);
  submit.body = Json{{"evidence", evidence}};
  Envelope result_env = conn.round_trip(submit);
  if (result_env.type == kErrorMsg) raise_protocol_error(result_env);
  if (result_env.type != kAttestationResultMsg ||
      result_env.correlation_id != submit.correlation_id) {
    throw Error(ErrorCode::kTransportFailure, "unexpected submit response");
  }

  AttestationOutcome outcome;
  outcome.result =
      require_member(result_env.body, "result").get<model::AttestationResult>();
  outcome.verifier_public =
      require_b64_fixed<kPublicKeySize>(result_env.body, "verifier_public");
  outcome.correlation_id = submit.correlation_id;
  if (outcome.verifier_public != grant.verifier_public ||
      !appraise::verify_result(outcome.result, outcome.verifier_public)) {
    throw Error(ErrorCode::kUnverifiedResult,
                "attestation result fails verification");
  }
  return outcome;
}

void publish_endorsement(const std::string& host, std::uint16_t port,
                         const model::Endorsement& endorsement, Rng& rng) {
  Connection conn(host, port);
  Envelope request;
  request.type = kEndorsementPublish;
  request.correlation_id = fresh_correlation(rng);
  request.body = Json{{"endorsement", endorsement}};
  Envelope response = conn.round_trip(request);
  if (response.type == kErrorMsg) raise_protocol_error(response);
  if (response.type != kEndorsementAck) {
    throw Error(ErrorCode::kTransportFailure, "unexpected publish response");
  }
}

model::AttestationResult fetch_result(const std::string& host,
                                      std::uint16_t port,
                                      const CorrelationId& correlation_id,
                                      Rng& rng) {
  Connection conn(host, port);
  Envelope request;
  request.type = kResultFetch;
  request.correlation_id = fresh_correlation(rng);
  request.body = Json{{"ref", b64url_encode(view(correlation_id))}};
  Envelope response = conn.round_trip(request);
  if (response.type == kErrorMsg) raise_protocol_error(response);
  return require_member(response.body, "result").get<model::AttestationResult>();
}

}  // namespace wattest::proto
