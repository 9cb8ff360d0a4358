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

#ifndef WATTEST_RISK_HPP_
#define WATTEST_RISK_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "wattest/model.hpp"

// Relying-party (asset insurance provider) risk assessment over verified
// attestation results. Five factors, each scored 0-100, combined as a
// weighted mean; higher means riskier.
namespace wattest::risk {

inline constexpr const char* kFactorHardwareType = "hardware_type";
inline constexpr const char* kFactorHardwareGenuineness = "hardware_genuineness";
inline constexpr const char* kFactorHostSystemClass = "host_system_class";
inline constexpr const char* kFactorWeaknessHistory = "known_weakness_history";
inline constexpr const char* kFactorAssetValue = "asset_value";

/// Weight table plus the factor-score configuration. Defaults weight the
/// five factors equally.
struct RiskWeights {
  std::map<std::string, std::uint32_t> weights;  // factor -> weight
  std::map<std::string, std::uint32_t> hardware_type_scores;
  std::map<std::string, std::uint32_t> host_class_scores;
  // Ascending (threshold, score) steps; the score of the last threshold
  // not exceeding the asset value applies.
  std::vector<std::pair<double, std::uint32_t>> asset_value_steps;
  std::uint32_t weakness_per_incident = 20;
  std::uint32_t weakness_cap = 100;

  static RiskWeights defaults();
  static RiskWeights load(const std::filesystem::path& path);  // weights.json
  void save(const std::filesystem::path& path) const;
};

void to_json(Json& j, const RiskWeights& w);
void from_json(const Json& j, RiskWeights& w);

struct RiskInputs {
  std::string hardware_type;       // key into hardware_type_scores
  std::string host_system_class;   // key into host_class_scores
  std::string asset_value = "0";   // decimal string
  std::uint64_t weakness_history = 0;
};

struct RiskAssessment {
  DeviceId device_id{};
  std::uint32_t score = 0;  // 0-100, higher = riskier
  std::map<std::string, std::uint32_t> factor_scores;
  Digest32 inputs_digest{};
};

void to_json(Json& j, const RiskAssessment& a);
void from_json(const Json& j, RiskAssessment& a);

/// Scores a verified, non-contraindicated result. Contraindicated devices
/// are uninsurable (kUninsurable); results that fail verification are
/// kUnverifiedResult. hardware_genuineness derives from the
/// key_hardware_bound finding: pass scores 0, an advisory failure (or a
/// missing finding) scores 60.
RiskAssessment assess_risk(const model::AttestationResult& result,
                           const PublicKey& verifier_public,
                           const RiskInputs& inputs,
                           const RiskWeights& weights);

}  // namespace wattest::risk

#endif  // WATTEST_RISK_HPP_
