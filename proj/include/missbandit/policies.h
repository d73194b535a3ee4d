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

#ifndef MISSBANDIT_POLICIES_H_
#define MISSBANDIT_POLICIES_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "missbandit/env.h"
#include "missbandit/estimators.h"
#include "missbandit/random.h"

namespace missbandit {

enum class PolicyKind {
  kUcb,        // regularized mean of observed rewards
  kOdrUcb,     // doubly-robust mean with the true nuisances
  kDrUcb,      // doubly-robust mean with fitted nuisances
  kOracleUcb,  // observed-reward mean, known-variance Gaussian bonus
  kOracleDr,   // true-nuisance doubly-robust mean, known-variance bonus
};

std::string_view policy_name(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(std::string_view name);

enum class SplitMode { kDifferentBatch, kLeaveOneOut };

struct PolicySpec {
  PolicyKind kind = PolicyKind::kUcb;
  PolicyParams params;
  // Used by kDrUcb only.
  SplitMode split = SplitMode::kDifferentBatch;
  std::size_t auxiliary_size = 10000;  // records per arm for kDifferentBatch
};

struct EpisodeConfig {
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  PolicySpec policy;
  std::shared_ptr<const BanditInstance> bandit;
  bool record_trace = false;
};

// Row-major (round, arm) tables of the estimate and bonus that made up
// each optimistic index.
struct IndexTrace {
  std::size_t num_arms = 0;
  std::vector<double> means;
  std::vector<double> bonuses;

  double mean(std::size_t round, std::size_t arm) const { return means[round * num_arms + arm]; }
  double bonus(std::size_t round, std::size_t arm) const {
    return bonuses[round * num_arms + arm];
  }
};

// Initialization pulls are kept apart from the T loop rounds; all loop
// vectors have length T. rewards holds the latent reward whether or not it
// was observed.
struct RunResult {
  std::vector<std::size_t> init_actions;
  std::vector<bool> init_observed;
  std::vector<std::size_t> actions;
  std::vector<double> rewards;
  std::vector<bool> observed_flags;
  std::optional<IndexTrace> trace;
  // min over arms and rounds of (N_a + lambda) / (P_a + lambda).
  double q_lambda_inf = 1.0;
};

// Index-based agent. compute_indices may only use what observe() has been
// shown.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual void compute_indices(std::span<double> means, std::span<double> bonuses) const = 0;
  virtual void observe(std::size_t arm, const CensoredObservation& obs) = 0;
  virtual const ArmState& state(std::size_t arm) const = 0;
};

// Builds the agent for a bandit. aux_rng feeds the auxiliary batch of a
// DifferentBatch DR-UCB and is otherwise unused. spec.params must already
// carry the horizon and arm count.
std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const BanditInstance& bandit,
                                    RandomStream aux_rng);

// Largest entry; exact ties are broken uniformly at random. NaN entries are
// skipped. Throws ContractViolation when no entry is a number.
std::size_t select_argmax(std::span<const double> indices, RandomStream& rng);

// Throws ConfigError for a missing bandit, T < A or an invalid parameter.
void validate_episode(const EpisodeConfig& config);

// Pulls each arm once, then runs T rounds. The episode's params take their
// horizon and arm count from config, overriding whatever the spec holds.
RunResult run_episode(const EpisodeConfig& config);

}  // namespace missbandit

#endif  // MISSBANDIT_POLICIES_H_
