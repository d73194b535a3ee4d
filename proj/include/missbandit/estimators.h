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

#ifndef MISSBANDIT_ESTIMATORS_H_
#define MISSBANDIT_ESTIMATORS_H_

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "missbandit/env.h"

namespace missbandit {

// What a policy is allowed to see of an Observation: the reward is a quiet
// NaN whenever the observed flag is false, so a hidden reward that leaks
// into any estimator poisons it visibly.
struct CensoredObservation {
  double reward = 0.0;
  bool observed = false;
  std::vector<double> covariates;
};

CensoredObservation censor(const Observation& obs);

struct ArmRecord {
  std::vector<double> covariates;
  bool observed = false;
  double reward = 0.0;  // NaN when !observed
};

// Per-arm sufficient statistics plus the full record history.
class ArmState {
 public:
  explicit ArmState(double lambda = 1.0);

  // Appends one pull. Throws ContractViolation if an observed reward is not
  // finite.
  void update(CensoredObservation obs);

  std::size_t pulls() const { return pulls_; }
  std::size_t observed() const { return observed_; }
  double sum_observed_reward() const { return sum_observed_reward_; }
  double lambda() const { return lambda_; }
  // Minimum of (N + lambda) / (P + lambda) over the history, current round
  // included. Non-increasing, in (0, 1].
  double running_q_lambda() const { return running_q_lambda_; }
  // (N + lambda) / (P + lambda) now; 1 before the first pull.
  double current_q_lambda() const;
  std::span<const ArmRecord> records() const { return records_; }

 private:
  double lambda_;
  std::size_t pulls_ = 0;
  std::size_t observed_ = 0;
  double sum_observed_reward_ = 0.0;
  double running_q_lambda_ = 1.0;
  std::vector<ArmRecord> records_;
};

// Bonus mode of the feasible doubly-robust bonus.
//   OracleErr: the caller supplies the l2 nuisance errors measured against
//              the probability limits of the nuisance estimators.
//   RateBound: the errors are replaced by the envelopes c * P^(-alpha).
struct OracleErr {};
struct RateBound {
  double c_q = 1.0;
  double alpha_q = 0.5;
  double c_theta = 1.0;
  double alpha_theta = 0.5;
  double c_cross = 1.0;
  double alpha = 1.0;  // must exceed 1/2
};
using BonusMode = std::variant<OracleErr, RateBound>;

// Which q-lambda the UCB bonus divides by.
//   kCurrentRatio: (N_a + lambda) / (P_a + lambda) at the current round.
//   kRunningMin:   the running minimum of that ratio (ArmState).
enum class QLambdaMode { kCurrentRatio, kRunningMin };

struct PolicyParams {
  double delta = 0.1;
  double lambda = 1.0;
  double k_bar = 2.0;
  double sigma_bar = 1.0;
  double q_low = 0.05;
  std::size_t horizon = 0;
  std::size_t num_arms = 0;
  BonusMode bonus_mode = OracleErr{};
  QLambdaMode q_lambda_mode = QLambdaMode::kCurrentRatio;

  // ln(2 A T / delta).
  double log_term() const;
  // Throws DomainError on out-of-range fields.
  void validate() const;
};

using CovariateFn = std::function<double(std::span<const double>)>;

// Regularized mean of observed rewards, sum / (N + lambda).
double ucb_mean(const ArmState& state, double lambda);

// (sigma_bar / q_lambda) sqrt(2 L / (P + lambda)) + lambda K_bar / (N + lambda).
double ucb_bonus(const ArmState& state, const PolicyParams& params);

// Doubly-robust mean (1/P) sum [C (R - theta_hat(X)) / q_hat(X) + theta_hat(X)].
// Hidden rewards are never read. Throws UndefinedEstimatorError when
// P == 0 and ContractViolation when q_hat leaves [q_floor, 1].
double dr_mean(const ArmState& state, const CovariateFn& theta_hat,
               const CovariateFn& q_hat, double q_floor);

// Root-mean-square gap between two covariate functions over the records.
double err_l2(const ArmState& state, const CovariateFn& fitted,
              const CovariateFn& reference);

// K_ODR sqrt(2 L / P) with K_ODR = sigma_bar / q_low + sigma_bar.
double odr_bonus(std::size_t pulls, const PolicyParams& params);

// odr_bonus plus the three nuisance-error terms. In RateBound mode err_q
// and err_theta are ignored in favour of the envelopes.
double dr_bonus(const ArmState& state, double err_q, double err_theta,
                const PolicyParams& params);

// Running sums behind dr_mean and err_l2 for one arm under a fixed pair of
// nuisance functions, so policies do not rescan the history every round.
// rebuild() rescans after the nuisances change.
class DrAccumulator {
 public:
  DrAccumulator() = default;
  DrAccumulator(CovariateFn theta_hat, CovariateFn q_hat, double q_floor,
                CovariateFn theta_ref = {}, CovariateFn q_ref = {});

  void add(const ArmRecord& record);
  void rebuild(std::span<const ArmRecord> records);
  // Swaps the nuisance pair used for records added from now on; terms
  // already accumulated keep the functions they were scored with.
  void set_nuisances(CovariateFn theta_hat, CovariateFn q_hat);

  std::size_t count() const { return count_; }
  double mean() const;
  double err_theta() const;
  double err_q() const;

 private:
  CovariateFn theta_hat_;
  CovariateFn q_hat_;
  double q_floor_ = 0.0;
  CovariateFn theta_ref_;
  CovariateFn q_ref_;
  std::size_t count_ = 0;
  double sum_terms_ = 0.0;
  double sum_sq_theta_ = 0.0;
  double sum_sq_q_ = 0.0;
};

// One doubly-robust score term; shared by dr_mean and DrAccumulator.
double dr_term(const ArmRecord& record, double theta_x, double q_x, double q_floor);

}  // namespace missbandit

#endif  // MISSBANDIT_ESTIMATORS_H_
