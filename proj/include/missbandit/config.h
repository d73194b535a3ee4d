// Copyright 2026 The missbandit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MISSBANDIT_CONFIG_H_
#define MISSBANDIT_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "missbandit/env.h"
#include "missbandit/policies.h"

namespace missbandit {

enum class ArmKind { kGaussian, kCounterexampleDependent, kCounterexampleIndependent };

struct ArmSpec {
  ArmKind kind = ArmKind::kGaussian;
  double theta = 0.0;
  double q = 1.0;
  double sigma_r = 1.0;
  double sigma_c = 1.4142135623730951;
  std::vector<double> beta;  // empty means zero loading of length `dim`
};

// A policy as configured. sigma_bar and q_low left unset are filled in from
// the bandit: the marginal reward scale for the UCB kinds, the conditional
// scale for the doubly-robust kinds, and min_a q_a.
struct PolicyEntry {
  PolicySpec spec;
  std::optional<double> sigma_bar;
  std::optional<double> q_low;
};

struct ScenarioConfig {
  std::string name;
  std::vector<ArmSpec> arms;
  std::size_t dim = 1;
  // When set, a loading with this Corr(R, C) on arm `calibration_arm` is
  // solved for and shared by every Gaussian arm.
  std::optional<double> correlation_target;
  std::size_t calibration_arm = 0;
  std::vector<PolicyEntry> policies;
  std::size_t horizon = 5000;
  std::size_t replications = 200;
  std::uint64_t base_seed = 1;
  std::size_t threads = 0;  // 0: hardware concurrency
  std::string output_dir = "out";
  // Rounds 1..dense_rounds are all logged, then every log_stride-th round,
  // and always the last one.
  std::size_t dense_rounds = 100;
  std::size_t log_stride = 10;
  // Keep per-round index traces (needed by coverage checks).
  bool record_trace = false;

  // Throws ConfigError on inconsistent fields.
  void validate() const;
};

std::vector<std::string> preset_names();

// Throws ConfigError listing the known presets when the name is unknown.
ScenarioConfig preset(std::string_view name);

// Parses the JSON document. An optional "preset" key seeds the config and
// every other key overrides it; "arms" and "policies" replace the preset's
// lists as a whole. Unknown keys are rejected by name.
ScenarioConfig parse_config(std::string_view json_text);

// Reads and parses a file. Throws IoError naming the path when it cannot be
// read.
ScenarioConfig load_config(const std::string& path);

// The loading shared by the Gaussian arms after calibration (empty when no
// calibration target is set).
std::vector<double> calibrated_beta(const ScenarioConfig& config);

std::shared_ptr<const BanditInstance> build_bandit(const ScenarioConfig& config);

// Policy specs with sigma_bar, q_low, horizon and arm count resolved.
std::vector<PolicySpec> resolve_policies(const ScenarioConfig& config,
                                         const BanditInstance& bandit);

}  // namespace missbandit

#endif  // MISSBANDIT_CONFIG_H_
