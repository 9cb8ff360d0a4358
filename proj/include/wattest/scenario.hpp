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

#ifndef WATTEST_SCENARIO_HPP_
#define WATTEST_SCENARIO_HPP_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace wattest::scenario {

// Built-in end-to-end demonstrations. Each runs the full stack (device,
// endorser, verifier service on loopback, relying party) with a seeded
// RNG and a manual clock, so a fixed seed reproduces byte-identical
// report output.
//
//   happy-path          provision, endorse, register, attest -> affirming
//   pop-insufficiency   software key wins the challenge-response round but
//                       the same session's appraisal contraindicates
//   tamper              component manifest altered after endorsement
//   reconcile-mismatch  out-of-order ledger confirmations show up as
//                       inversions in the reconciliation report

std::vector<std::string> scenario_names();

/// Runs one scenario; returns true iff the scenario's expectation holds.
/// Unknown names are kNotFound.
bool run_scenario(const std::string& name, std::uint64_t seed, std::ostream& out);

}  // namespace wattest::scenario

#endif  // WATTEST_SCENARIO_HPP_
