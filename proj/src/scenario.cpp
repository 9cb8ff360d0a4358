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

#include "wattest/scenario.hpp"

#include "wattest/appraise.hpp"
#include "wattest/endorse.hpp"
#include "wattest/evidence.hpp"
#include "wattest/ledger.hpp"
#include "wattest/protocol.hpp"
#include "wattest/risk.hpp"
#include "wattest/vasp.hpp"

namespace wattest::scenario {

namespace {

constexpr std::int64_t kEpoch = 1750000000;
constexpr const char* kManufacturer = "acme-wallets";
constexpr const char* kVaspId = "vasp-one";

std::vector<model::ComponentMeasurement> reference_manifest() {
  return {{"board", sha256(to_bytes("board-v1"))},
          {"firmware", sha256(to_bytes("fw-7.4.2"))},
          {"wallet-app", sha256(to_bytes("app-2.1.0"))}};
}

vasp::TravelRuleParty sample_customer() {
  return vasp::TravelRuleParty{.name = "Alice Example",
                               .account = "alice-main",
                               .address = "1 Main St, Boston MA",
                               .institution_name = "First VASP",
                               .institution_address = "99 Broad St, Boston MA",
                               .institution_id = "021000021"};
}

void print_findings(std::ostream& out, const model::AttestationResult& result) {
  out << "verdict: " << model::verdict_name(result.verdict) << "\n";
  for (const model::Finding& f : result.findings) {
    out << "  [" << (f.passed ? "pass" : "FAIL") << "] " << f.rule_id << " ("
        << model::severity_name(f.severity) << "): " << f.detail << "\n";
  }
}

struct VerifierFixture {
  endorse::TrustAnchors anchors;
  std::unique_ptr<endorse::EndorsementStore> store;
  std::unique_ptr<proto::VerifierService> service;

  VerifierFixture(const KeyPair& endorser_key, const KeyPair& verifier_key,
                  const Clock& clock, Rng& rng,
                  appraise::AppraisalPolicy policy) {
    anchors.add(kManufacturer, endorser_key.public_key);
    store = std::make_unique<endorse::EndorsementStore>(anchors);
    service = std::make_unique<proto::VerifierService>(
        "127.0.0.1", 0, *store, std::move(policy), verifier_key, clock, rng);
    service->start();
  }
};

bool run_happy_path(std::uint64_t seed, std::ostream& out) {
  DeterministicRng rng(seed);
  ManualClock clock(kEpoch);

  hw::Device device = hw::Device::provision(
      kManufacturer, {42.36, -71.09, 10.0}, reference_manifest(), rng);
  KeyHandle app_key = device.create_key(
      {.fixed_to_device = true, .sign_only = true, .created_inside = true},
      device.ak_handle(), rng);
  out << "device: " << b64url_encode(view(device.device_id())) << "\n";

  KeyPair endorser_key = KeyPair::generate(rng);
  KeyPair verifier_key = KeyPair::generate(rng);
  VerifierFixture verifier(endorser_key, verifier_key, clock, rng,
                           appraise::default_policy(kVaspId));

  model::Endorsement endorsement = endorse::issue_endorsement(
      endorser_key, kManufacturer, device.provisioning_record(), clock.now());
  proto::publish_endorsement("127.0.0.1", verifier.service->port(), endorsement,
                             rng);
  out << "endorsement published by " << kManufacturer << "\n";

  vasp::AccountStore accounts;
  const vasp::CustomerAccount& account = accounts.register_account(
      sample_customer(), device.key(app_key).public_part, device.device_id(),
      clock.now());
  out << "registered account " << account.account_id << "\n";

  clock.advance(5);
  proto::AttestationOutcome outcome = proto::run_attestation(
      "127.0.0.1", verifier.service->port(), device,
      {model::ClaimKind::kKeyProvenance, model::ClaimKind::kGeolocation,
       model::ClaimKind::kKeyUsageSequence, model::ClaimKind::kSystemConfig},
      rng, app_key);
  print_findings(out, outcome.result);

  bool result_verifies =
      appraise::verify_result(outcome.result, outcome.verifier_public);
  out << "result signature: " << (result_verifies ? "verifies" : "INVALID")
      << "\n";

  model::AttestationResult fetched = proto::fetch_result(
      "127.0.0.1", verifier.service->port(), outcome.correlation_id, rng);
  risk::RiskAssessment assessment = risk::assess_risk(
      fetched, outcome.verifier_public,
      {.hardware_type = "discrete_tpm",
       .host_system_class = "laptop",
       .asset_value = "2500",
       .weakness_history = 0},
      risk::RiskWeights::defaults());
  out << "risk score: " << assessment.score << "\n";

  bool met = outcome.result.verdict == model::Verdict::kAffirming &&
             result_verifies;
  out << "expectation (affirming, verifiable): " << (met ? "met" : "NOT met")
      << "\n";
  return met;
}

bool run_pop_insufficiency(std::uint64_t seed, std::ostream& out) {
  DeterministicRng rng(seed);
  ManualClock clock(kEpoch);

  hw::Device device = hw::Device::provision(
      kManufacturer, {42.36, -71.09, 10.0}, reference_manifest(), rng);

  // The dishonest user's key pair lives in ordinary software, generated on
  // any PC; the wallet merely holds a copy.
  KeyPair pc_key = KeyPair::generate(rng);
  KeyHandle software_key = device.import_key(pc_key, /*sign_only=*/true, rng);

  auto challenge_block = rng.array<32>();
  Bytes challenge(challenge_block.begin(), challenge_block.end());
  Signature pop = device.respond_challenge(software_key, challenge);
  bool pop_ok = verify_signature(challenge, pop, pc_key.public_key);
  out << "challenge-response (PoP): " << (pop_ok ? "ok" : "failed") << "\n";

  KeyPair endorser_key = KeyPair::generate(rng);
  KeyPair verifier_key = KeyPair::generate(rng);
  VerifierFixture verifier(endorser_key, verifier_key, clock, rng,
                           appraise::default_policy(kVaspId));
  proto::publish_endorsement(
      "127.0.0.1", verifier.service->port(),
      endorse::issue_endorsement(endorser_key, kManufacturer,
                                 device.provisioning_record(), clock.now()),
      rng);

  clock.advance(5);
  proto::AttestationOutcome outcome = proto::run_attestation(
      "127.0.0.1", verifier.service->port(), device,
      {model::ClaimKind::kKeyProvenance}, rng, software_key);
  print_findings(out, outcome.result);

  bool met = pop_ok &&
             outcome.result.verdict == model::Verdict::kContraindicated;
  if (met) out << "PoP ok, attestation contraindicated\n";
  out << "expectation (possession proven, hardware binding refuted): "
      << (met ? "met" : "NOT met") << "\n";
  return met;
}

bool run_tamper(std::uint64_t seed, std::ostream& out) {
  DeterministicRng rng(seed);
  ManualClock clock(kEpoch);

  // The device boots an altered firmware image; the endorsement still
  // vouches for the original manifest.
  std::vector<model::ComponentMeasurement> altered = reference_manifest();
  altered[1].digest = sha256(to_bytes("fw-7.4.2-unofficial"));
  hw::Device device =
      hw::Device::provision(kManufacturer, {42.36, -71.09, 10.0}, altered, rng);
  hw::ProvisioningRecord as_endorsed = device.provisioning_record();
  as_endorsed.manifest = reference_manifest();

  KeyHandle app_key = device.create_key(
      {.fixed_to_device = true, .sign_only = true, .created_inside = true},
      device.ak_handle(), rng);

  KeyPair endorser_key = KeyPair::generate(rng);
  KeyPair verifier_key = KeyPair::generate(rng);
  VerifierFixture verifier(endorser_key, verifier_key, clock, rng,
                           appraise::default_policy(kVaspId));
  proto::publish_endorsement(
      "127.0.0.1", verifier.service->port(),
      endorse::issue_endorsement(endorser_key, kManufacturer, as_endorsed,
                                 clock.now()),
      rng);
  out << "endorsed firmware digest differs from running image\n";

  clock.advance(5);
  proto::AttestationOutcome outcome = proto::run_attestation(
      "127.0.0.1", verifier.service->port(), device,
      {model::ClaimKind::kKeyProvenance, model::ClaimKind::kSystemConfig}, rng,
      app_key);
  print_findings(out, outcome.result);

  bool reference_failed = false;
  for (const model::Finding& f : outcome.result.findings) {
    if (f.kind == "reference_match" && !f.passed) reference_failed = true;
  }
  bool met = reference_failed &&
             outcome.result.verdict == model::Verdict::kContraindicated;
  out << "expectation (reference mismatch contraindicates): "
      << (met ? "met" : "NOT met") << "\n";
  return met;
}

bool run_reconcile_mismatch(std::uint64_t seed, std::ostream& out) {
  DeterministicRng rng(seed);
  ManualClock clock(kEpoch);

  hw::Device device = hw::Device::provision(
      kManufacturer, {42.36, -71.09, 10.0}, reference_manifest(), rng);
  KeyHandle app_key = device.create_key(
      {.fixed_to_device = true, .sign_only = true, .created_inside = true},
      device.ak_handle(), rng);
  const PublicKey& signer = device.key(app_key).public_part;

  // Wallet signs four transactions in order; the ledger confirms the middle
  // two in the opposite order.
  std::vector<ledger::LedgerTx> txs;
  for (int i = 0; i < 4; ++i) {
    Bytes payload = to_bytes("transfer-" + std::to_string(i));
    hw::SignOutcome signed_tx = device.sign_transaction(app_key, payload);
    txs.push_back(ledger::LedgerTx{.tx_digest = signed_tx.entry.tx_digest,
                                   .signer_public_key = signer,
                                   .payload = payload,
                                   .signature = signed_tx.signature});
  }
  ledger::ConfirmedLedger chain;
  chain.submit(txs[0]);
  chain.submit(txs[2]);  // confirmed before its predecessor
  chain.submit(txs[1]);
  chain.submit(txs[3]);
  out << "signed order: 0 1 2 3; confirmed order: 0 2 1 3\n";

  // The VASP reads the usage excerpt from attested evidence.
  Nonce32 nonce = rng.array<32>();
  model::Evidence evidence = model::build_evidence(
      device, view(nonce), {model::ClaimKind::kKeyUsageSequence}, clock.now(),
      app_key);
  const model::UsageExcerpt& excerpt = evidence.claims.front().usage();

  vasp::ReconciliationReport report =
      vasp::reconcile(device.device_id(), excerpt.entries, excerpt.end_register,
                      chain, signer);
  out << vasp::format_report(report);

  bool met = report.chain_ok && report.matched.size() == 4 &&
             report.order_mismatches ==
                 std::vector<vasp::OrderMismatch>{{1, 2}} &&
             report.missing_on_ledger.empty() &&
             report.unknown_on_ledger.empty();
  out << "expectation (chain ok, one inversion): " << (met ? "met" : "NOT met")
      << "\n";
  return met;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"happy-path", "pop-insufficiency", "tamper", "reconcile-mismatch"};
}

bool run_scenario(const std::string& name, std::uint64_t seed,
                  std::ostream& out) {
  out << "scenario: " << name << "\n";
  if (name == "happy-path") return run_happy_path(seed, out);
  if (name == "pop-insufficiency") return run_pop_insufficiency(seed, out);
  if (name == "tamper") return run_tamper(seed, out);
  if (name == "reconcile-mismatch") return run_reconcile_mismatch(seed, out);
  throw Error(ErrorCode::kNotFound, "unknown scenario: " + name);
}

}  // namespace wattest::scenario
