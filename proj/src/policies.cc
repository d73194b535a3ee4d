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

#include "missbandit/policies.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "missbandit/errors.h"
#include "missbandit/normal.h"
#include "missbandit/nuisance.h"

namespace missbandit {
namespace {

constexpr std::array<std::pair<PolicyKind, std::string_view>, 5> kPolicyNames{{
    {PolicyKind::kUcb, "ucb"},
    {PolicyKind::kOdrUcb, "odr-ucb"},
    {PolicyKind::kDrUcb, "dr-ucb"},
    {PolicyKind::kOracleUcb, "oracle-ucb"},
    {PolicyKind::kOracleDr, "oracle-dr"},
}};

constexpr std::uint64_t kEnvStream = 1;
constexpr std::uint64_t kTieStream = 2;
constexpr std::uint64_t kAuxStream = 3;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

class IndexPolicy : public Policy {
 public:
  IndexPolicy(const PolicySpec& spec, const BanditInstance& bandit)
      : params_(spec.params),
        bandit_(bandit),
        states_(bandit.num_arms(), ArmState(spec.params.lambda)),
        z_(normal_quantile(1.0 - spec.params.delta)) {}

  const ArmState& state(std::size_t arm) const override { return states_.at(arm); }

 protected:
  PolicyParams params_;
  const BanditInstance& bandit_;
  std::vector<ArmState> states_;
  double z_;
};

class UcbPolicy final : public IndexPolicy {
 public:
  UcbPolicy(const PolicySpec& spec, const BanditInstance& bandit, bool oracle_bonus)
      : IndexPolicy(spec, bandit), oracle_bonus_(oracle_bonus) {}

  void compute_indices(std::span<double> means, std::span<double> bonuses) const override {
    for (std::size_t a = 0; a < states_.size(); ++a) {
      const ArmState& s = states_[a];
      means[a] = ucb_mean(s, params_.lambda);
      if (oracle_bonus_) {
        bonuses[a] = z_ * noise_sd(bandit_.arm(a)) /
                     std::sqrt(static_cast<double>(s.observed()) + params_.lambda);
      } else {
        bonuses[a] = ucb_bonus(s, params_);
      }
    }
  }

  void observe(std::size_t arm, const CensoredObservation& obs) override {
    states_.at(arm).update(obs);
  }

 private:
  bool oracle_bonus_;
};

// Shared machinery of the three doubly-robust agents. Every record is scored
// once, when it arrives, with the nuisance pair in force at that moment.
class DrFamilyPolicy final : public IndexPolicy {
 public:
  DrFamilyPolicy(const PolicySpec& spec, const BanditInstance& bandit, RandomStream aux_rng)
      : IndexPolicy(spec, bandit), kind_(spec.kind), split_(spec.split) {
    const std::size_t num_arms = bandit.num_arms();
    accumulators_.reserve(num_arms);
    for (std::size_t a = 0; a < num_arms; ++a) {
      const ArmModel& arm = bandit.arm(a);
      const double floor = params_.q_low;
      CovariateFn true_theta = [&arm](std::span<const double> x) {
        return conditional_mean(arm, x);
      };
      CovariateFn truncated_q = [&arm, floor](std::span<const double> x) {
        return std::clamp(observation_probability(arm, x), floor, 1.0);
      };
      if (kind_ != PolicyKind::kDrUcb) {
        accumulators_.emplace_back(true_theta, truncated_q, floor);
        continue;
      }
      accumulators_.emplace_back(CovariateFn{}, CovariateFn{}, floor, true_theta, truncated_q);
      if (split_ == SplitMode::kDifferentBatch) {
        RandomStream arm_rng = aux_rng.derive(a);
        DifferentBatch batch;
        batch.auxiliary.reserve(spec.auxiliary_size);
        for (std::size_t i = 0; i < spec.auxiliary_size; ++i) {
          const CensoredObservation c = censor(sample(arm, arm_rng));
          batch.auxiliary.push_back({c.covariates, c.observed, c.reward});
        }
        const SplitPlan plan = std::move(batch);
        install(a, fit_nuisances(training_view(plan, {}, 1), covariate_dim(arm), floor));
      } else {
        install(a, fit_nuisances({}, covariate_dim(arm), floor));
      }
    }
  }

  void compute_indices(std::span<double> means, std::span<double> bonuses) const override {
    for (std::size_t a = 0; a < states_.size(); ++a) {
      const ArmState& s = states_[a];
      const DrAccumulator& acc = accumulators_[a];
      means[a] = acc.mean();
      switch (kind_) {
        case PolicyKind::kOdrUcb:
          bonuses[a] = odr_bonus(s.pulls(), params_);
          break;
        case PolicyKind::kDrUcb:
          bonuses[a] = dr_bonus(s, acc.err_q(), acc.err_theta(), params_);
          break;
        default: {
          const ArmModel& arm = bandit_.arm(a);
          const double sd = noise_sd(arm);
          const double load = loading_norm(arm);
          bonuses[a] = z_ * std::sqrt((sd * sd + load * load) / static_cast<double>(s.pulls()));
        }
      }
    }
  }

  void observe(std::size_t arm, const CensoredObservation& obs) override {
    ArmState& s = states_.at(arm);
    s.update(obs);
    const std::span<const ArmRecord> history = s.records();
    const std::size_t i = history.size();
    if (kind_ == PolicyKind::kDrUcb && split_ == SplitMode::kLeaveOneOut && i >= 3 &&
        is_power_of_two(i - 2)) {
      const std::span<const ArmRecord> view =
          training_view(LeaveOneOut{}, history.first(i - 1), i);
      install(arm, fit_nuisances(view, covariate_dim(bandit_.arm(arm)), params_.q_low));
    }
    accumulators_[arm].add(history.back());
  }

 private:
  void install(std::size_t arm, NuisanceModels models) {
    auto shared = std::make_shared<const NuisanceModels>(std::move(models));
    accumulators_[arm].set_nuisances(
        [shared](std::span<const double> x) { return shared->theta.predict(x); },
        [shared](std::span<const double> x) { return shared->q.predict(x); });
  }

  PolicyKind kind_;
  SplitMode split_;
  std::vector<DrAccumulator> accumulators_;
};

}  // namespace

std::string_view policy_name(PolicyKind kind) {
  for (const auto& [k, name] : kPolicyNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  for (const auto& [k, n] : kPolicyNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const BanditInstance& bandit,
                                    RandomStream aux_rng) {
  switch (spec.kind) {
    case PolicyKind::kUcb:
      return std::make_unique<UcbPolicy>(spec, bandit, false);
    case PolicyKind::kOracleUcb:
      return std::make_unique<UcbPolicy>(spec, bandit, true);
    case PolicyKind::kOdrUcb:
    case PolicyKind::kDrUcb:
    case PolicyKind::kOracleDr:
      return std::make_unique<DrFamilyPolicy>(spec, bandit, std::move(aux_rng));
  }
  throw ConfigError("make_policy: unknown policy kind");
}

std::size_t select_argmax(std::span<const double> indices, RandomStream& rng) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t ties = 0;
  std::size_t chosen = indices.size();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const double v = indices[i];
    if (std::isnan(v)) continue;
    if (chosen == indices.size() || v > best) {
      best = v;
      chosen = i;
      ties = 1;
    } else if (v == best) {
      // Reservoir sampling over the tied set keeps the choice uniform.
      ++ties;
      if (rng.index(ties) == 0) chosen = i;
    }
  }
  if (chosen == indices.size()) {
    throw ContractViolation("select_argmax: every index is NaN");
  }
  return chosen;
}

void validate_episode(const EpisodeConfig& config) {
  if (!config.bandit) throw ConfigError("episode: no bandit instance");
  const std::size_t num_arms = config.bandit->num_arms();
  if (config.horizon < num_arms) {
    throw ConfigError("episode: horizon " + std::to_string(config.horizon) +
                      " is smaller than the number of arms " + std::to_string(num_arms));
  }
  PolicyParams params = config.policy.params;
  params.horizon = config.horizon;
  params.num_arms = num_arms;
  try {
    params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  const PolicyKind kind = config.policy.kind;
  if (kind == PolicyKind::kUcb) {
    for (std::size_t a = 0; a < num_arms; ++a) {
      if (std::abs(config.bandit->theta(a)) > params.k_bar) {
        throw ConfigError("episode: k_bar " + std::to_string(params.k_bar) +
                          " is below |theta| of arm " + std::to_string(a));
      }
    }
  }
  if (kind == PolicyKind::kDrUcb && config.policy.split == SplitMode::kDifferentBatch &&
      config.policy.auxiliary_size == 0) {
    throw ConfigError("episode: DifferentBatch split needs auxiliary_size > 0");
  }
}

RunResult run_episode(const EpisodeConfig& config) {
  validate_episode(config);
  const BanditInstance& bandit = *config.bandit;
  const std::size_t num_arms = bandit.num_arms();
  const std::size_t horizon = config.horizon;

  PolicySpec spec = config.policy;
  spec.params.horizon = horizon;
  spec.params.num_arms = num_arms;

  const RandomStream root(config.seed);
  RandomStream env_rng = root.derive(kEnvStream);
  RandomStream tie_rng = root.derive(kTieStream);
  std::unique_ptr<Policy> policy = make_policy(spec, bandit, root.derive(kAuxStream));

  RunResult result;
  double q_lambda_inf = 1.0;
  auto pull = [&](std::size_t a) {
    Observation obs = sample(bandit.arm(a), env_rng);
    policy->observe(a, censor(obs));
    q_lambda_inf = std::min(q_lambda_inf, policy->state(a).running_q_lambda());
    return obs;
  };

  for (std::size_t a = 0; a < num_arms; ++a) {
    const Observation obs = pull(a);
    result.init_actions.push_back(a);
    result.init_observed.push_back(obs.observed);
  }

  result.actions.reserve(horizon);
  result.rewards.reserve(horizon);
  result.observed_flags.reserve(horizon);
  if (config.record_trace) {
    result.trace.emplace();
    result.trace->num_arms = num_arms;
    result.trace->means.reserve(horizon * num_arms);
    result.trace->bonuses.reserve(horizon * num_arms);
  }

  std::vector<double> means(num_arms), bonuses(num_arms), indices(num_arms);
  for (std::size_t t = 0; t < horizon; ++t) {
    policy->compute_indices(means, bonuses);
    for (std::size_t a = 0; a < num_arms; ++a) indices[a] = means[a] + bonuses[a];
    if (result.trace) {
      result.trace->means.insert(result.trace->means.end(), means.begin(), means.end());
      result.trace->bonuses.insert(result.trace->bonuses.end(), bonuses.begin(), bonuses.end());
    }
    const std::size_t a = select_argmax(indices, tie_rng);
    const Observation obs = pull(a);
    result.actions.push_back(a);
    result.rewards.push_back(obs.reward);
    result.observed_flags.push_back(obs.observed);
  }
  result.q_lambda_inf = q_lambda_inf;
  return result;
}

}  // namespace missbandit
