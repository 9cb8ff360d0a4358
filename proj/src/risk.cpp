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

#include "wattest/risk.hpp"

#include <cmath>

#include "wattest/appraise.hpp"

namespace wattest::risk {

RiskWeights RiskWeights::defaults() {
  RiskWeights w;
  w.weights = {{kFactorHardwareType, 1},
               {kFactorHardwareGenuineness, 1},
               {kFactorHostSystemClass, 1},
               {kFactorWeaknessHistory, 1},
               {kFactorAssetValue, 1}};
  w.hardware_type_scores = {{"hsm", 0},          {"secure_element", 10},
                            {"discrete_tpm", 20}, {"tee", 30},
                            {"virtual_tpm", 70},  {"software_emulated", 90}};
  w.host_class_scores = {{"server", 0},
                         {"desktop", 20},
                         {"laptop", 30},
                         {"embedded", 30},
                         {"mobile", 40}};
  w.asset_value_steps = {{0.0, 0},      {1e3, 20},  {1e4, 40},
                         {1e5, 60},     {1e6, 80},  {1e7, 100}};
  w.weakness_per_incident = 20;
  w.weakness_cap = 100;
  return w;
}

void to_json(Json& j, const RiskWeights& w) {
  Json steps = Json::array();
  for (const auto& [threshold, score] : w.asset_value_steps) {
    steps.push_back(Json{{"score", score}, {"threshold", threshold}});
  }
  j = Json{{"asset_value_steps", std::move(steps)},
           {"hardware_type_scores", w.hardware_type_scores},
           {"host_class_scores", w.host_class_scores},
           {"weakness_cap", w.weakness_cap},
           {"weakness_per_incident", w.weakness_per_incident},
           {"weights", w.weights}};
}

void from_json(const Json& j, RiskWeights& w) {
  w.asset_value_steps.clear();
  for (const Json& s : require_member(j, "asset_value_steps")) {
    w.asset_value_steps.emplace_back(
        require_double(s, "threshold"),
        static_cast<std::uint32_t>(require_uint(s, "score")));
  }
  w.hardware_type_scores = require_member(j, "hardware_type_scores")
                               .get<std::map<std::string, std::uint32_t>>();
  w.host_class_scores = require_member(j, "host_class_scores")
                            .get<std::map<std::string, std::uint32_t>>();
  w.weakness_cap = static_cast<std::uint32_t>(require_uint(j, "weakness_cap"));
  w.weakness_per_incident =
      static_cast<std::uint32_t>(require_uint(j, "weakness_per_incident"));
  w.weights =
      require_member(j, "weights").get<std::map<std::string, std::uint32_t>>();
}

RiskWeights RiskWeights::load(const std::filesystem::path& path) {
  return canonical_decode<RiskWeights>(read_file(path));
}

void RiskWeights::save(const std::filesystem::path& path) const {
  save_canonical(path, *this);
}

void to_json(Json& j, const RiskAssessment& a) {
  j = Json{{"device_id", b64url_encode(view(a.device_id))},
           {"factor_scores", a.factor_scores},
           {"inputs_digest", b64url_encode(view(a.inputs_digest))},
           {"score", a.score}};
}

void from_json(const Json& j, RiskAssessment& a) {
  a.device_id = require_b64_fixed<16>(j, "device_id");
  a.factor_scores = require_member(j, "factor_scores")
                        .get<std::map<std::string, std::uint32_t>>();
  a.inputs_digest = require_b64_fixed<32>(j, "inputs_digest");
  a.score = static_cast<std::uint32_t>(require_uint(j, "score"));
}

namespace {
std::uint32_t clamp100(std::uint64_t v) {
  return v > 100 ? 100u : static_cast<std::uint32_t>(v);
}

std::uint32_t table_score(const std::map<std::string, std::uint32_t>& table,
                          const std::string& key, std::uint32_t fallback) {
  auto it = table.find(key);
  return it == table.end() ? fallback : clamp100(it->second);
}

std::uint32_t asset_score(const RiskWeights& weights, const std::string& value) {
  double v = 0.0;
  try {
    v = std::stod(value);
  } catch (const std::exception&) {
    v = 0.0;
  }
  std::uint32_t score = 0;
  for (const auto& [threshold, s] : weights.asset_value_steps) {
    if (v >= threshold) score = clamp100(s);
  }
  return score;
}
}  // namespace

RiskAssessment assess_risk(const model::AttestationResult& result,
                           const PublicKey& verifier_public,
                           const RiskInputs& inputs,
                           const RiskWeights& weights) {
  if (!appraise::verify_result(result, verifier_public)) {
    throw Error(ErrorCode::kUnverifiedResult,
                "attestation result fails verification");
  }
  if (result.verdict == model::Verdict::kContraindicated) {
    throw Error(ErrorCode::kUninsurable, "device verdict is contraindicated");
  }

  RiskAssessment a;
  a.device_id = result.device_id;

  // Genuineness derives from the hardware-binding finding: a pass means the
  // key demonstrably lives in real trusted hardware. An advisory failure or
  // a policy without the rule leaves genuineness unproven.
  std::uint32_t genuineness = 60;
  for (const model::Finding& f : result.findings) {
    if (f.kind == "key_hardware_bound") {
      genuineness = f.passed ? 0 : 60;
      break;
    }
  }
  a.factor_scores[kFactorHardwareGenuineness] = genuineness;
  a.factor_scores[kFactorHardwareType] =
      table_score(weights.hardware_type_scores, inputs.hardware_type, 90);
  a.factor_scores[kFactorHostSystemClass] =
      table_score(weights.host_class_scores, inputs.host_system_class, 40);
  a.factor_scores[kFactorWeaknessHistory] = clamp100(
      std::min<std::uint64_t>(inputs.weakness_history * weights.weakness_per_incident,
                              weights.weakness_cap));
  a.factor_scores[kFactorAssetValue] = asset_score(weights, inputs.asset_value);

  std::uint64_t weighted = 0;
  std::uint64_t total_weight = 0;
  for (const auto& [factor, score] : a.factor_scores) {
    auto it = weights.weights.find(factor);
    std::uint64_t w = it == weights.weights.end() ? 1 : it->second;
    weighted += w * score;
    total_weight += w;
  }
  a.score = total_weight == 0
                ? 0
                : clamp100(static_cast<std::uint64_t>(std::llround(
                      static_cast<double>(weighted) /
                      static_cast<double>(total_weight))));

  Json inputs_json{{"asset_value", inputs.asset_value},
                   {"hardware_type", inputs.hardware_type},
                   {"host_system_class", inputs.host_system_class},
                   {"result", result},
                   {"weakness_history", inputs.weakness_history},
                   {"weights", weights}};
  a.inputs_digest = sha256(canonical_bytes(inputs_json));
  return a;
}

}  // namespace wattest::risk
