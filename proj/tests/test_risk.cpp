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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "reference.hpp"
#include "wattest/risk.hpp"

using namespace wattest;
namespace ts = wattest::testsupport;

namespace {

// Builds a verifier-signed result with a chosen hardware-bound outcome.
model::AttestationResult signed_result(const KeyPair& verifier_key,
                                       bool hw_bound_passed,
                                       model::Severity hw_severity,
                                       std::int64_t issued_at = 1700000000) {
  model::AttestationResult r;
  r.verifier_id = "vasp-one";
  r.device_id.fill(0x21);
  r.findings = {
      model::Finding{.rule_id = "evidence_signature",
                     .kind = "evidence_signature",
                     .severity = model::Severity::kMandatory,
                     .passed = true,
                     .detail = "ok"},
      model::Finding{.rule_id = "hw-bound-key",
                     .kind = "key_hardware_bound",
                     .severity = hw_severity,
                     .passed = hw_bound_passed,
                     .detail = hw_bound_passed ? "bound" : "not bound"},
  };
  r.verdict = model::verdict_for(r.findings);
  r.nonce.fill(0x22);
  r.issued_at = issued_at;
  r.signature = verifier_key.sign(canonical_bytes(r.body_json()));
  return r;
}

risk::RiskInputs zero_inputs() {
  return {.hardware_type = "hsm",
          .host_system_class = "server",
          .asset_value = "0",
          .weakness_history = 0};
}

}  // namespace

TEST_CASE("all factors zero scores zero") {
  SystemRng rng;
  KeyPair verifier = KeyPair::generate(rng);
  model::AttestationResult result =
      signed_result(verifier, true, model::Severity::kMandatory);
  risk::RiskAssessment a = risk::assess_risk(result, verifier.public_key,
                                             zero_inputs(),
                                             risk::RiskWeights::defaults());
  CHECK(a.score == 0);
  for (const auto& [factor, score] : a.factor_scores) {
    INFO(factor);
    CHECK(score == 0);
  }
}

TEST_CASE("equal weights over factors {0,60,0,0,0} score 12") {
  SystemRng rng;
  KeyPair verifier = KeyPair::generate(rng);
  // advisory hardware-bound failure: genuineness 60, everything else 0
  model::AttestationResult result =
      signed_result(verifier, false, model::Severity::kAdvisory);
  REQUIRE(result.verdict == model::Verdict::kWarning);

  risk::RiskAssessment a = risk::assess_risk(result, verifier.public_key,
                                             zero_inputs(),
                                             risk::RiskWeights::defaults());
  CHECK(a.factor_scores[risk::kFactorHardwareGenuineness] == 60);
  CHECK(a.score == 12);  // (0+60+0+0+0)/5
}

TEST_CASE("contraindicated results are uninsurable") {
  SystemRng rng;
  KeyPair verifier = KeyPair::generate(rng);
  model::AttestationResult result =
      signed_result(verifier, false, model::Severity::kMandatory);
  REQUIRE(result.verdict == model::Verdict::kContraindicated);
  CHECK_THROWS_AS(risk::assess_risk(result, verifier.public_key, zero_inputs(),
                                    risk::RiskWeights::defaults()),
                  Error);
  try {
    risk::assess_risk(result, verifier.public_key, zero_inputs(),
                      risk::RiskWeights::defaults());
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUninsurable);
  }
}

TEST_CASE("unverifiable results are rejected") {
  SystemRng rng;
  KeyPair verifier = KeyPair::generate(rng);
  model::AttestationResult result =
      signed_result(verifier, true, model::Severity::kMandatory);

  SUBCASE("wrong verifier key") {
    KeyPair other = KeyPair::generate(rng);
    CHECK_THROWS_AS(risk::assess_risk(result, other.public_key, zero_inputs(),
                                      risk::RiskWeights::defaults()),
                    Error);
  }
  SUBCASE("tampered verdict") {
    model::AttestationResult forged = result;
    forged.findings[1].passed = false;
    forged.findings[1].severity = model::Severity::kMandatory;
    // keep the old signature: body changed, verification must fail
    CHECK_THROWS_AS(risk::assess_risk(forged, verifier.public_key, zero_inputs(),
                                      risk::RiskWeights::defaults()),
                    Error);
  }
}

TEST_CASE("factor tables drive the scores") {
  SystemRng rng;
  KeyPair verifier = KeyPair::generate(rng);
  model::AttestationResult result =
      signed_result(verifier, true, model::Severity::kMandatory);
  risk::RiskWeights weights = risk::RiskWeights::defaults();

  risk::RiskInputs inputs{.hardware_type = "software_emulated",
                          .host_system_class = "mobile",
                          .asset_value = "50000",
                          .weakness_history = 3};
  risk::RiskAssessment a =
      risk::assess_risk(result, verifier.public_key, inputs, weights);
  CHECK(a.factor_scores[risk::kFactorHardwareType] == 90);
  CHECK(a.factor_scores[risk::kFactorHostSystemClass] == 40);
  CHECK(a.factor_scores[risk::kFactorAssetValue] == 40);  // 1e4 <= v < 1e5
  CHECK(a.factor_scores[risk::kFactorWeaknessHistory] == 60);
  CHECK(a.factor_scores[risk::kFactorHardwareGenuineness] == 0);
  CHECK(a.score == 46);  // (90+40+40+60+0)/5

  SUBCASE("weakness history caps") {
    inputs.weakness_history = 50;
    risk::RiskAssessment capped =
        risk::assess_risk(result, verifier.public_key, inputs, weights);
    CHECK(capped.factor_scores[risk::kFactorWeaknessHistory] == 100);
  }
  SUBCASE("unknown table keys fall back conservatively") {
    inputs.hardware_type = "quantum-vault";
    risk::RiskAssessment fallback =
        risk::assess_risk(result, verifier.public_key, inputs, weights);
    CHECK(fallback.factor_scores[risk::kFactorHardwareType] == 90);
  }
}

TEST_CASE("score is monotone in each factor under random weights") {
  SystemRng rng;
  KeyPair verifier = KeyPair::generate(rng);
  ts::TestRand trand(71);

  for (int round = 0; round < 1000; ++round) {
    risk::RiskWeights weights = risk::RiskWeights::defaults();
    for (auto& [k, w] : weights.weights) w = 1 + trand() % 9;

    bool hw_pass = trand() % 2 == 0;
    model::AttestationResult result =
        signed_result(verifier, hw_pass,
                      hw_pass ? model::Severity::kMandatory
                              : model::Severity::kAdvisory);

    const char* hw_types[] = {"hsm", "secure_element", "discrete_tpm",
                              "tee", "virtual_tpm", "software_emulated"};
    const char* hosts[] = {"server", "desktop", "laptop", "embedded", "mobile"};
    risk::RiskInputs inputs{.hardware_type = hw_types[trand() % 6],
                            .host_system_class = hosts[trand() % 5],
                            .asset_value = std::to_string(trand() % 20000000),
                            .weakness_history = trand() % 8};
    risk::RiskAssessment base =
        risk::assess_risk(result, verifier.public_key, inputs, weights);

    // raise exactly one factor and re-score
    risk::RiskInputs raised = inputs;
    switch (trand() % 3) {
      case 0: raised.weakness_history += 1 + trand() % 3; break;
      case 1: raised.asset_value = std::to_string(30000000 + trand() % 1000); break;
      default: raised.hardware_type = "software_emulated"; break;
    }
    risk::RiskAssessment bumped =
        risk::assess_risk(result, verifier.public_key, raised, weights);

    bool factor_decreased = false;
    for (const auto& [factor, score] : bumped.factor_scores) {
      if (score < base.factor_scores.at(factor)) factor_decreased = true;
    }
    if (!factor_decreased) {
      CHECK(bumped.score >= base.score);
    }
    CHECK(base.score <= 100);
  }
}

TEST_CASE("weights round trip through weights.json") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "wattest_weights_test.json";
  risk::RiskWeights weights = risk::RiskWeights::defaults();
  weights.weights[risk::kFactorAssetValue] = 7;
  weights.save(path);
  risk::RiskWeights loaded = risk::RiskWeights::load(path);
  CHECK(loaded.weights.at(risk::kFactorAssetValue) == 7);
  CHECK(loaded.hardware_type_scores == weights.hardware_type_scores);
  CHECK(loaded.asset_value_steps == weights.asset_value_steps);
  fs::remove(path);
}

TEST_CASE("a missing hardware-bound finding leaves genuineness unproven") {
  SystemRng rng;
  KeyPair verifier = KeyPair::generate(rng);
  model::AttestationResult r;
  r.verifier_id = "vasp-one";
  r.device_id.fill(5);
  r.findings = {model::Finding{.rule_id = "evidence_signature",
                               .kind = "evidence_signature",
                               .severity = model::Severity::kMandatory,
                               .passed = true,
                               .detail = "ok"}};
  r.verdict = model::verdict_for(r.findings);
  r.nonce.fill(6);
  r.issued_at = 1700000000;
  r.signature = verifier.sign(canonical_bytes(r.body_json()));

  risk::RiskAssessment a = risk::assess_risk(r, verifier.public_key,
                                             zero_inputs(),
                                             risk::RiskWeights::defaults());
  CHECK(a.factor_scores[risk::kFactorHardwareGenuineness] == 60);
}
