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

#ifndef MISSBANDIT_ENV_H_
#define MISSBANDIT_ENV_H_

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "missbandit/random.h"

namespace missbandit {

// Arm with a standard-normal covariate vector X, an affine reward
//   R = theta + X'beta + u_R,          u_R ~ N(0, sigma_r^2)
// and observation indicator
//   C = 1[X'beta + u_C > tau],         u_C ~ N(0, sigma_c^2)
// where tau is set so that P[C = 1] = q. With beta = 0 the missingness is
// independent of the reward; otherwise it is ignorable only given X.
struct GaussianLinearArm {
  double theta = 0.0;
  std::vector<double> beta;
  double sigma_r = 1.0;
  double sigma_c = 1.0;
  double q = 1.0;
  double tau = 0.0;  // derived; -inf when q == 1

  // Validates the parameters and derives tau. Throws DomainError.
  static GaussianLinearArm Make(double theta, std::vector<double> beta,
                                double sigma_r, double sigma_c, double q);

  std::size_t dim() const { return beta.size(); }
  double loading_norm() const;
};

// The two arms of the two-armed instance on which naive UCB locks onto the
// wrong arm. Both have C ~ Be(1/2).
//   kDependentArm1:   R | C=1 ~ U[0, 1/2], R | C=0 ~ U[1/2, 1]; theta = 1/2.
//                     The single covariate is X = C, which is the only
//                     covariate under which C and R are conditionally
//                     independent (C is a function of R).
//   kIndependentArm2: R ~ U[0, 3/4] independent of C; theta = 3/8. The
//                     covariate is an uninformative N(0, 1) draw.
enum class CounterexampleVariant { kDependentArm1, kIndependentArm2 };

struct UniformCounterexampleArm {
  CounterexampleVariant variant = CounterexampleVariant::kDependentArm1;
};

using ArmModel = std::variant<GaussianLinearArm, UniformCounterexampleArm>;

// One interaction record. The reward is always populated; whoever hands an
// Observation to a policy must censor it first (see CensoredObservation).
struct Observation {
  double reward = 0.0;
  bool observed = false;
  std::vector<double> covariates;
};

// Threshold tau with P[V > tau] = q for V ~ N(0, var_v). Returns -inf for
// q == 1. Throws DomainError unless 0 < q <= 1 and var_v > 0.
double tau_threshold(double q, double var_v);

// Corr(R, C) of a Gaussian-linear arm. Requires 0 < q < 1.
double corr_reward_missing(std::span<const double> beta, double sigma_r,
                           double sigma_c, double q);

// Least upper bound of corr_reward_missing over all loadings, approached as
// |beta| grows: phi(tau~) / sqrt(q (1 - q)).
double corr_supremum(double q);

// Loading along (1, ..., 1) / sqrt(dim) whose correlation equals target
// (within 1e-10), found by bisection on |beta|. Throws CalibrationError
// carrying the supremum when the target cannot be reached.
std::vector<double> solve_beta_for_corr(double target, double sigma_r,
                                        double sigma_c, double q,
                                        std::size_t dim = 1);

// Probability limit E[R | C = 1] of the mean of observed rewards.
double observed_mean_limit(const GaussianLinearArm& arm);

Observation sample(const ArmModel& arm, RandomStream& rng);

double mean_reward(const ArmModel& arm);
std::size_t covariate_dim(const ArmModel& arm);
// theta(x) = E[R | X = x].
double conditional_mean(const ArmModel& arm, std::span<const double> x);
// q(x) = P[C = 1 | X = x].
double observation_probability(const ArmModel& arm, std::span<const double> x);
// Marginal P[C = 1].
double observation_rate(const ArmModel& arm);
// Standard deviation of R, which is also its sub-Gaussian variance proxy
// for every arm type here.
double reward_sd(const ArmModel& arm);
// max(sd of R given X, sub-Gaussian scale of theta(X)); the scale that
// bounds both pieces of the doubly-robust score.
double conditional_reward_scale(const ArmModel& arm);
// Standard deviation of the additive reward noise given X (sigma_R).
double noise_sd(const ArmModel& arm);
// Standard deviation of theta(X); |beta| for Gaussian-linear arms.
double loading_norm(const ArmModel& arm);

class BanditInstance {
 public:
  explicit BanditInstance(std::vector<ArmModel> arms);

  const std::vector<ArmModel>& arms() const { return arms_; }
  const ArmModel& arm(std::size_t a) const { return arms_[a]; }
  std::size_t num_arms() const { return arms_.size(); }
  std::size_t optimal_arm() const { return optimal_arm_; }
  double theta_bar() const { return theta_bar_; }
  const std::vector<double>& gaps() const { return gaps_; }
  double theta(std::size_t a) const { return thetas_[a]; }

  // max_a reward_sd: the sigma-bar of the reward-independent analysis.
  double sigma_bar_marginal() const;
  // max_a conditional_reward_scale: the sigma-bar of the doubly-robust
  // analysis.
  double sigma_bar_conditional() const;
  // min_a P[C_a = 1].
  double q_min() const;
  // sum_a 1 / q_a.
  double a_cen() const;

 private:
  std::vector<ArmModel> arms_;
  std::vector<double> thetas_;
  std::vector<double> gaps_;
  std::size_t optimal_arm_ = 0;
  double theta_bar_ = 0.0;
};

}  // namespace missbandit

#endif  // MISSBANDIT_ENV_H_
