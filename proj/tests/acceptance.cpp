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

// End-to-end acceptance suite. Each criterion prints one pass/fail line;
// the process exits non-zero if any criterion fails.

#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "reference.hpp"
#include "wattest/appraise.hpp"
#include "wattest/evidence.hpp"
#include "wattest/ledger.hpp"
#include "wattest/risk.hpp"
#include "wattest/scenario.hpp"
#include "wattest/vasp.hpp"

using namespace wattest;
namespace ts = wattest::testsupport;

namespace {

struct CheckFailure {
  std::string message;
};

void expect(bool condition, const std::string& message) {
  if (!condition) throw CheckFailure{message};
}

int run_cli(const std::string& args, std::string* output = nullptr) {
  std::string command = std::string(WATTEST_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  expect(pipe != nullptr, "popen failed");
  std::string captured;
  char buffer[512];
  while (fgets(buffer, sizeof buffer, pipe) != nullptr) captured += buffer;
  int status = pclose(pipe);
  if (output != nullptr) *output = captured;
  return WEXITSTATUS(status);
}

std::vector<model::ComponentMeasurement> sample_manifest() {
  return {{"board", sha256(to_bytes("d1"))}, {"fw", sha256(to_bytes("d2"))}};
}

hw::Device fresh_device(Rng& rng) {
  return hw::Device::provision("acme", {42.36, -71.09, 10.0}, sample_manifest(),
                               rng);
}

model::KeyAttributes fixed_signing() {
  return {.fixed_to_device = true, .sign_only = true, .created_inside = true};
}

// --- criterion bodies ---

void criterion_happy_path() {
  std::string output;
  int code = run_cli("scenario run happy-path --seed 11", &output);
  expect(code == 0, "scenario exit code " + std::to_string(code));
  expect(output.find("verdict: affirming") != std::string::npos,
         "verdict line missing: " + output);
  expect(output.find("result signature: verifies") != std::string::npos,
         "result verification line missing");
}

void criterion_pop_insufficiency() {
  std::string output;
  int code = run_cli("scenario run pop-insufficiency --seed 11", &output);
  expect(code == 0, "scenario exit code " + std::to_string(code));
  expect(output.find("challenge-response (PoP): ok") != std::string::npos,
         "PoP round missing");
  expect(output.find("PoP ok, attestation contraindicated") != std::string::npos,
         "PoP/attestation divergence line missing");
}

void criterion_non_migrateable() {
  SystemRng rng;
  ts::TestRand trand(101);

  // 100 randomized creations of fixed keys: export always denied
  hw::Device device = fresh_device(rng);
  for (int i = 0; i < 100; ++i) {
    model::KeyAttributes attrs{.fixed_to_device = true,
                               .sign_only = trand() % 2 == 0,
                               .created_inside = true};
    std::optional<KeyHandle> parent;
    if (trand() % 2 == 0) parent = device.ak_handle();
    KeyHandle handle = device.create_key(attrs, parent, rng);
    bool denied = false;
    try {
      device.export_key(handle);
    } catch (const Error& e) {
      denied = e.code() == ErrorCode::kExportDenied;
    }
    expect(denied, "export of fixed key " + std::to_string(i) + " not denied");
  }

  // randomized 500-operation run: no output contains fixed private bytes
  hw::Device runner = fresh_device(rng);
  KeyHandle work_key = runner.create_key(fixed_signing(), runner.ak_handle(), rng);
  Bytes outputs;
  auto absorb = [&outputs](ByteView b) {
    outputs.insert(outputs.end(), b.begin(), b.end());
  };
  Nonce32 nonce{};
  std::vector<KeyHandle> fixed_keys{runner.ek_handle(), runner.ak_handle(),
                                    work_key};
  for (int i = 0; i < 500; ++i) {
    switch (trand() % 6) {
      case 0: {
        hw::SignOutcome s =
            runner.sign_transaction(work_key, ts::random_bytes(trand, 20));
        absorb(view(s.signature));
        absorb(canonical_encode(s.entry));
        break;
      }
      case 1: {
        for (auto& b : nonce) b = static_cast<std::uint8_t>(trand());
        model::Quote q = runner.quote(view(nonce), {0, hw::kUsagePcrIndex});
        absorb(canonical_encode(q));
        break;
      }
      case 2: {
        absorb(canonical_encode(runner.certify_key(work_key)));
        break;
      }
      case 3: {
        absorb(view(runner.respond_challenge(work_key,
                                             ts::random_bytes(trand, 16))));
        break;
      }
      case 4: {
        absorb(view(runner.extend_pcr(static_cast<unsigned>(trand() % 16),
                                      ts::random_digest(trand))));
        break;
      }
      default: {
        KeyHandle h = runner.create_key(fixed_signing(), runner.ak_handle(), rng);
        fixed_keys.push_back(h);
        absorb(view(h.id));
        absorb(view(runner.key(h).public_part));
        break;
      }
    }
  }
  auto contains = [&outputs](ByteView needle) {
    return std::search(outputs.begin(), outputs.end(), needle.begin(),
                       needle.end()) != outputs.end();
  };
  for (const KeyHandle& h : fixed_keys) {
    const SecretKey& secret = runner.key(h).private_part;
    expect(!contains(ByteView(secret.data(), 32)),
           "private seed bytes leaked into an operation output");
    expect(!contains(view(secret)), "full private key leaked into an output");
  }
}

void criterion_extend_chain() {
  SystemRng rng;
  ts::TestRand trand(102);
  for (int trial = 0; trial < 100; ++trial) {
    hw::Device device = fresh_device(rng);
    std::size_t len = 2 + trand() % 31;  // [2, 32]
    std::vector<Digest32> digests;
    for (std::size_t i = 0; i < len; ++i) {
      digests.push_back(ts::random_digest(trand));
      device.extend_pcr(0, digests.back());
    }
    Digest32 expected = ts::ref_extend_chain(Digest32{}, digests);
    expect(device.pcrs().at(0) == expected,
           "device register diverges from the reference chain");

    // swapping one adjacent pair must change the final value
    std::size_t i = trand() % (len - 1);
    std::vector<Digest32> swapped = digests;
    std::swap(swapped[i], swapped[i + 1]);
    expect(ts::ref_extend_chain(Digest32{}, swapped) != expected,
           "adjacent swap left the chain value unchanged");
  }
}

void criterion_appraisal_soundness() {
  SystemRng rng;
  hw::Device device = fresh_device(rng);
  KeyHandle app_key = device.create_key(fixed_signing(), device.ak_handle(), rng);
  KeyPair endorser_key = KeyPair::generate(rng);
  KeyPair verifier_key = KeyPair::generate(rng);
  const std::int64_t t0 = 1700000000;
  model::Endorsement endorsement = endorse::issue_endorsement(
      endorser_key, "acme", device.provisioning_record(), t0);

  int neutrality_cases = 0;
  for (int combo = 0; combo < 64; ++combo) {
    bool sig_ok = combo & 1;
    bool fresh = combo & 2;
    bool neutral = combo & 4;
    bool r1_pass = combo & 8;   // mandatory
    bool r2_pass = combo & 16;  // advisory
    bool r3_pass = combo & 32;  // advisory

    appraise::AppraisalPolicy policy;
    policy.verifier_id = neutral ? "vasp-one" : "acme";
    policy.freshness_window = 300;
    policy.rules = {
        appraise::Rule{.rule_id = "r1",
                       .severity = model::Severity::kMandatory,
                       .kind = appraise::RuleKind::kCounterMin,
                       .parameters = Json{{"min", r1_pass ? 0 : 999}}},
        appraise::Rule{.rule_id = "r2",
                       .severity = model::Severity::kAdvisory,
                       .kind = appraise::RuleKind::kCounterMin,
                       .parameters = Json{{"min", r2_pass ? 0 : 999}}},
        appraise::Rule{.rule_id = "r3",
                       .severity = model::Severity::kAdvisory,
                       .kind = appraise::RuleKind::kGeofence,
                       .parameters = r3_pass
                           ? Json{{"lat_max", 45.0}, {"lat_min", 40.0},
                                  {"lon_max", -70.0}, {"lon_min", -75.0}}
                           : Json{{"lat_max", -40.0}, {"lat_min", -45.0},
                                  {"lon_max", 75.0}, {"lon_min", 70.0}}},
    };

    Nonce32 nonce{};
    nonce[0] = static_cast<std::uint8_t>(combo);
    model::Evidence evidence = model::build_evidence(
        device, view(nonce),
        std::vector<model::ClaimKind>{model::ClaimKind::kKeyProvenance}, t0 + 1,
        app_key);
    if (!sig_ok) evidence.signature[0] ^= 0x01;

    appraise::AppraisalContext ctx{
        .nonce_issued_at = t0,
        .nonce = nonce,
        .endorsements = {endorsement},
        .now = fresh ? t0 + 10 : t0 + 301};

    model::AttestationResult result =
        appraise::appraise(evidence, ctx, policy, verifier_key);

    // independent expectation: mandatory failures contraindicate, advisory
    // failures warn
    bool mandatory_fail = !sig_ok || !fresh || !neutral || !r1_pass;
    bool advisory_fail = !r2_pass || !r3_pass;
    model::Verdict expected = mandatory_fail
                                  ? model::Verdict::kContraindicated
                                  : (advisory_fail ? model::Verdict::kWarning
                                                   : model::Verdict::kAffirming);
    expect(result.verdict == expected,
           "combo " + std::to_string(combo) + ": verdict mismatch");

    // per-finding cross-check
    for (const model::Finding& f : result.findings) {
      if (f.rule_id == "evidence_signature") {
        expect(f.passed == sig_ok, "signature finding mismatch");
      } else if (f.rule_id == "freshness") {
        expect(f.passed == fresh, "freshness finding mismatch");
      } else if (f.rule_id == "neutrality") {
        expect(f.passed == neutral, "neutrality finding mismatch");
      } else if (f.rule_id == "r1") {
        expect(f.passed == r1_pass, "r1 finding mismatch");
      } else if (f.rule_id == "r2") {
        expect(f.passed == r2_pass, "r2 finding mismatch");
      } else if (f.rule_id == "r3") {
        expect(f.passed == r3_pass, "r3 finding mismatch");
      }
    }
    expect(appraise::verify_result(result, verifier_key.public_key),
           "result does not verify");
    if (!neutral) {
      ++neutrality_cases;
      expect(result.verdict == model::Verdict::kContraindicated,
             "self-endorsed appraisal not contraindicated");
    }
  }
  expect(neutrality_cases == 32, "neutrality cases not enumerated");
}

void criterion_neutrality() {
  // scenario-level check on top of the exhaustive suite above
  SystemRng rng;
  hw::Device device = fresh_device(rng);
  KeyHandle app_key = device.create_key(fixed_signing(), device.ak_handle(), rng);
  KeyPair endorser_key = KeyPair::generate(rng);
  KeyPair verifier_key = KeyPair::generate(rng);
  const std::int64_t t0 = 1700000000;
  model::Endorsement endorsement = endorse::issue_endorsement(
      endorser_key, "acme", device.provisioning_record(), t0);

  Nonce32 nonce{};
  nonce.fill(0x66);
  model::Evidence evidence = model::build_evidence(
      device, view(nonce),
      std::vector<model::ClaimKind>{model::ClaimKind::kKeyProvenance}, t0 + 1,
      app_key);
  appraise::AppraisalContext ctx{.nonce_issued_at = t0,
                                 .nonce = nonce,
                                 .endorsements = {endorsement},
                                 .now = t0 + 5};
  model::AttestationResult result = appraise::appraise(
      evidence, ctx, appraise::default_policy("acme"), verifier_key);
  expect(result.verdict == model::Verdict::kContraindicated,
         "verifier acting as endorser was not contraindicated");
  bool neutrality_finding = false;
  for (const model::Finding& f : result.findings) {
    if (f.rule_id == "neutrality" && !f.passed) neutrality_finding = true;
  }
  expect(neutrality_finding, "no failed neutrality finding");
}

void criterion_reconciliation() {
  SystemRng rng;
  ts::TestRand trand(103);
  KeyPair signer = KeyPair::generate(rng);

  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 1 + trand() % 20;  // length <= 20
    std::vector<model::UsageLogEntry> log;
    std::vector<ledger::LedgerTx> txs;
    Digest32 reg{};
    for (std::size_t i = 0; i < n; ++i) {
      Bytes payload = to_bytes("t" + std::to_string(trial) + "-" +
                               std::to_string(i));
      Digest32 digest = sha256(payload);
      reg = sha256(view(reg), view(digest));
      log.push_back({i, digest, i + 1});
      txs.push_back(ledger::make_tx(signer, payload));
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), trand);
    ledger::ConfirmedLedger chain;
    for (std::size_t i : order) chain.submit(txs[i]);

    vasp::ReconciliationReport report =
        vasp::reconcile(DeviceId{}, log, reg, chain, signer.public_key);
    expect(report.chain_ok, "chain replay failed on clean log");
    expect(report.matched.size() == n, "not all entries matched");

    auto expected = ts::ref_inversions(report.matched);
    auto cmp = [](const vasp::OrderMismatch& a, const vasp::OrderMismatch& b) {
      return std::tie(a.seq_a, a.seq_b) < std::tie(b.seq_a, b.seq_b);
    };
    auto actual = report.order_mismatches;
    std::sort(expected.begin(), expected.end(), cmp);
    std::sort(actual.begin(), actual.end(), cmp);
    expect(actual.size() == expected.size() &&
               std::equal(actual.begin(), actual.end(), expected.begin(),
                          [](const auto& a, const auto& b) {
                            return a.seq_a == b.seq_a && a.seq_b == b.seq_b;
                          }),
           "inversion set differs from brute force");
  }

  // 50 mutation trials: any single-digest change breaks the chain
  std::vector<model::UsageLogEntry> log;
  Digest32 reg{};
  ledger::ConfirmedLedger chain;
  for (std::size_t i = 0; i < 10; ++i) {
    Bytes payload = to_bytes("mut-" + std::to_string(i));
    Digest32 digest = sha256(payload);
    reg = sha256(view(reg), view(digest));
    log.push_back({i, digest, i + 1});
    chain.submit(ledger::make_tx(signer, payload));
  }
  for (int trial = 0; trial < 50; ++trial) {
    auto mutated = log;
    mutated[trand() % mutated.size()].tx_digest[trand() % 32] ^=
        static_cast<std::uint8_t>(1 + trand() % 255);
    vasp::ReconciliationReport report =
        vasp::reconcile(DeviceId{}, mutated, reg, chain, signer.public_key);
    expect(!report.chain_ok, "mutated digest left chain_ok true");
  }
}

void criterion_travel_rule() {
  vasp::TravelRuleRecord valid{
      .originator_name = "Alice Example",
      .originator_account = "alice-main",
      .originator_address = "1 Main St",
      .amount = "1.5 BTC-equivalent",
      .execution_date = 1700000000,
      .beneficiary_institution = "Second VASP",
      .beneficiary_name = "Bob",
      .beneficiary_address = "2 Side St",
      .beneficiary_account = "bob-1",
      .originator_institution = {.name = "First VASP",
                                 .address = "99 Broad St",
                                 .numerical_id = "021000021"}};
  expect(vasp::validate_record(valid).empty(), "valid record rejected");

  struct Mutant {
    const char* field;
    std::function<void(vasp::TravelRuleRecord&)> clear;
  };
  const std::vector<Mutant> mutants = {
      {"originator_name", [](auto& r) { r.originator_name.clear(); }},
      {"originator_account", [](auto& r) { r.originator_account.clear(); }},
      {"originator_address", [](auto& r) { r.originator_address.clear(); }},
      {"amount", [](auto& r) { r.amount.clear(); }},
      {"execution_date", [](auto& r) { r.execution_date = 0; }},
      {"beneficiary_institution",
       [](auto& r) { r.beneficiary_institution.clear(); }},
      {"beneficiary_name", [](auto& r) { r.beneficiary_name.clear(); }},
      {"beneficiary_address", [](auto& r) { r.beneficiary_address.clear(); }},
      {"beneficiary_account", [](auto& r) { r.beneficiary_account.clear(); }},
      {"originator_institution",
       [](auto& r) { r.originator_institution = {}; }},
  };
  expect(mutants.size() == 10, "mutant table incomplete");
  for (const Mutant& m : mutants) {
    vasp::TravelRuleRecord record = valid;
    m.clear(record);
    auto violations = vasp::validate_record(record);
    expect(violations.size() == 1,
           std::string(m.field) + ": expected exactly one violation, got " +
               std::to_string(violations.size()));
    expect(violations[0].find(m.field) == 0,
           std::string(m.field) + ": violation does not name the field: " +
               violations[0]);
  }
}

void criterion_canonical() {
  ts::TestRand trand(104);
  auto stable = [](const auto& value) {
    using T = std::decay_t<decltype(value)>;
    Bytes first = canonical_encode(value);
    Bytes second = canonical_encode(canonical_decode<T>(first));
    return first == second;
  };
  for (int i = 0; i < 1000; ++i) {
    expect(stable(ts::gen_quote(trand)), "quote round trip unstable");
    expect(stable(ts::gen_certification(trand)), "certification unstable");
    expect(stable(ts::gen_claim(trand)), "claim unstable");
    expect(stable(ts::gen_evidence(trand)), "evidence unstable");
    expect(stable(ts::gen_endorsement(trand)), "endorsement unstable");
    expect(stable(ts::gen_result(trand)), "result unstable");
    expect(stable(ts::gen_certificate(trand)), "certificate unstable");
  }

  // 100 bit-flip trials on a really-signed structure
  SystemRng rng;
  hw::Device device = fresh_device(rng);
  Nonce32 nonce{};
  model::Evidence evidence = model::build_evidence(
      device, view(nonce),
      std::vector<model::ClaimKind>{model::ClaimKind::kGeolocation}, 1700000000);
  Bytes body = canonical_bytes(evidence.body_json());
  for (int i = 0; i < 100; ++i) {
    Bytes mutated = body;
    std::size_t byte = trand() % mutated.size();
    std::uint8_t bit = static_cast<std::uint8_t>(1u << (trand() % 8));
    mutated[byte] ^= bit;
    expect(!model::verify_body(mutated, evidence.signature, device.ak_public()),
           "tampered body still verifies");
  }
}

void criterion_risk() {
  SystemRng rng;
  KeyPair verifier = KeyPair::generate(rng);

  auto make_result = [&verifier](bool hw_pass, model::Severity severity) {
    model::AttestationResult r;
    r.verifier_id = "vasp-one";
    r.device_id.fill(0x44);
    r.findings = {model::Finding{.rule_id = "hw-bound-key",
                                 .kind = "key_hardware_bound",
                                 .severity = severity,
                                 .passed = hw_pass,
                                 .detail = "x"}};
    r.verdict = model::verdict_for(r.findings);
    r.nonce.fill(0x45);
    r.issued_at = 1700000000;
    r.signature = verifier.sign(canonical_bytes(r.body_json()));
    return r;
  };

  risk::RiskInputs zero{.hardware_type = "hsm",
                        .host_system_class = "server",
                        .asset_value = "0",
                        .weakness_history = 0};
  risk::RiskAssessment z =
      risk::assess_risk(make_result(true, model::Severity::kMandatory),
                        verifier.public_key, zero, risk::RiskWeights::defaults());
  expect(z.score == 0, "zero factors scored " + std::to_string(z.score));

  bool uninsurable = false;
  try {
    risk::assess_risk(make_result(false, model::Severity::kMandatory),
                      verifier.public_key, zero, risk::RiskWeights::defaults());
  } catch (const Error& e) {
    uninsurable = e.code() == ErrorCode::kUninsurable;
  }
  expect(uninsurable, "contraindicated input was not Uninsurable");

  // monotonicity over 1000 random weight/factor draws
  ts::TestRand trand(105);
  const char* hw_types[] = {"hsm", "secure_element", "discrete_tpm",
                            "tee", "virtual_tpm", "software_emulated"};
  const char* hosts[] = {"server", "desktop", "laptop", "embedded", "mobile"};
  for (int i = 0; i < 1000; ++i) {
    risk::RiskWeights weights = risk::RiskWeights::defaults();
    for (auto& [k, w] : weights.weights) w = 1 + trand() % 9;
    model::AttestationResult result =
        make_result(trand() % 2 == 0, model::Severity::kAdvisory);
    if (result.verdict == model::Verdict::kContraindicated) continue;

    risk::RiskInputs inputs{
        .hardware_type = hw_types[trand() % 6],
        .host_system_class = hosts[trand() % 5],
        .asset_value = std::to_string(trand() % 20000000),
        .weakness_history = trand() % 6};
    risk::RiskAssessment base =
        risk::assess_risk(result, verifier.public_key, inputs, weights);

    risk::RiskInputs raised = inputs;
    raised.weakness_history += 1 + trand() % 4;
    risk::RiskAssessment bumped =
        risk::assess_risk(result, verifier.public_key, raised, weights);
    expect(bumped.factor_scores.at(risk::kFactorWeaknessHistory) >=
               base.factor_scores.at(risk::kFactorWeaknessHistory),
           "weakness factor decreased");
    expect(bumped.score >= base.score, "score decreased on factor increase");
    expect(base.score <= 100 && bumped.score <= 100, "score out of range");
  }
}

struct Criterion {
  int id;
  const char* name;
  std::function<void()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "happy path: provision/endorse/register/attest affirms", criterion_happy_path},
      {2, "PoP insufficiency: possession ok, appraisal contraindicated", criterion_pop_insufficiency},
      {3, "non-migrateable keys: export denied, no private bytes in outputs", criterion_non_migrateable},
      {4, "extend chains replay against the reference hash", criterion_extend_chain},
      {5, "appraisal soundness over the exhaustive check lattice", criterion_appraisal_soundness},
      {6, "neutrality: self-endorsed verifiers contraindicate", criterion_neutrality},
      {7, "reconciliation inversions match brute force; chain tamper detected", criterion_reconciliation},
      {8, "travel rule: ten single-field mutants, one named violation each", criterion_travel_rule},
      {9, "canonical encoding: round-trip stability and tamper rejection", criterion_canonical},
      {10, "risk scoring: zero case, monotonicity, uninsurable gate", criterion_risk},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    try {
      c.body();
      std::printf("[PASS] criterion %2d: %s\n", c.id, c.name);
    } catch (const CheckFailure& f) {
      ++failures;
      std::printf("[FAIL] criterion %2d: %s\n        %s\n", c.id, c.name,
                  f.message.c_str());
    } catch (const std::exception& e) {
      ++failures;
      std::printf("[FAIL] criterion %2d: %s\n        unexpected: %s\n", c.id,
                  c.name, e.what());
    }
  }
  if (failures == 0) {
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
