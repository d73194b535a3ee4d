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

#include "missbandit/estimators.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "missbandit/errors.h"

namespace missbandit {
namespace {

constexpr double kQTolerance = 1e-12;

}  // namespace

CensoredObservation censor(const Observation& obs) {
  CensoredObservation out;
  out.observed = obs.observed;
  out.reward = obs.observed ? obs.reward : std::numeric_limits<double>::quiet_NaN();
  out.covariates = obs.covariates;
  return out;
}

ArmState::ArmState(double lambda) : lambda_(lambda) {
  if (!(lambda >= 0.0)) throw DomainError("ArmState: lambda must be >= 0");
}

void ArmState::update(CensoredObservation obs) {
  if (obs.observed && !std::isfinite(obs.reward)) {
    throw ContractViolation("ArmState::update: observed reward is not finite");
  }
  ++pulls_;
  if (obs.observed) {
    ++observed_;
    sum_observed_reward_ += obs.reward;
  } else {
    obs.reward = std::numeric_limits<double>::quiet_NaN();
  }
  running_q_lambda_ = std::min(running_q_lambda_, current_q_lambda());
  records_.push_back(ArmRecord{std::move(obs.covariates), obs.observed, obs.reward});
}

double ArmState::current_q_lambda() const {
  const double den = static_cast<double>(pulls_) + lambda_;
  if (den == 0.0) return 1.0;
  return (static_cast<double>(observed_) + lambda_) / den;
}

double PolicyParams::log_term() const {
  return std::log(2.0 * static_cast<double>(num_arms) * static_cast<double>(horizon) /
                  delta);
}

void PolicyParams::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (!(lambda >= 0.0)) throw DomainError("lambda must be >= 0");
  if (!(sigma_bar > 0.0)) throw DomainError("sigma_bar must be > 0");
  if (!(q_low > 0.0 && q_low <= 1.0)) throw DomainError("q_low must lie in (0, 1]");
  if (!std::isfinite(k_bar)) throw DomainError("k_bar must be finite");
  if (horizon == 0) throw DomainError("horizon must be >= 1");
  if (num_arms == 0) throw DomainError("num_arms must be >= 1");
  if (const auto* rb = std::get_if<RateBound>(&bonus_mode)) {
    if (!(rb->alpha > 0.5)) throw DomainError("rate bound alpha must exceed 1/2");
    if (!(rb->alpha_q > 0.0 && rb->alpha_theta > 0.0)) {
      throw DomainError("rate bound exponents must be > 0");
    }
    if (rb->c_q < 0.0 || rb->c_theta < 0.0 || rb->c_cross < 0.0) {
      throw DomainError("rate bound constants must be >= 0");
    }
  }
}

double ucb_mean(const ArmState& state, double lambda) {
  const double den = static_cast<double>(state.observed()) + lambda;
  if (den <= 0.0) {
    throw UndefinedEstimatorError("ucb_mean: no observed rewards and lambda = 0");
  }
  return state.sum_observed_reward() / den;
}

double ucb_bonus(const ArmState& state, const PolicyParams& params) {
  const double p = static_cast<double>(state.pulls()) + params.lambda;
  const double n = static_cast<double>(state.observed()) + params.lambda;
  if (p <= 0.0 || n <= 0.0) {
    throw UndefinedEstimatorError("ucb_bonus: undefined with lambda = 0 and N = 0");
  }
  const double q_lambda = params.q_lambda_mode == QLambdaMode::kRunningMin
                              ? state.running_q_lambda()
                              : n / p;
  return params.sigma_bar / q_lambda * std::sqrt(2.0 * params.log_term() / p) +
         params.lambda * params.k_bar / n;
}

double dr_term(const ArmRecord& record, double theta_x, double q_x, double q_floor) {
  if (!(q_x >= q_floor - kQTolerance && q_x <= 1.0 + kQTolerance)) {
    throw ContractViolation("q_hat = " + std::to_string(q_x) + " outside [" +
                            std::to_string(q_floor) + ", 1]");
  }
  if (!record.observed) return theta_x;
  return (record.reward - theta_x) / q_x + theta_x;
}

double dr_mean(const ArmState& state, const CovariateFn& theta_hat,
               const CovariateFn& q_hat, double q_floor) {
  if (state.pulls() == 0) throw UndefinedEstimatorError("dr_mean: arm never pulled");
  double sum = 0.0;
  for (const ArmRecord& r : state.records()) {
    sum += dr_term(r, theta_hat(r.covariates), q_hat(r.covariates), q_floor);
  }
  return sum / static_cast<double>(state.pulls());
}

double err_l2(const ArmState& state, const CovariateFn& fitted,
              const CovariateFn& reference) {
  if (state.pulls() == 0) throw UndefinedEstimatorError("err_l2: arm never pulled");
  double sum = 0.0;
  for (const ArmRecord& r : state.records()) {
    const double gap = fitted(r.covariates) - reference(r.covariates);
    sum += gap * gap;
  }
  return std::sqrt(sum / static_cast<double>(state.pulls()));
}

double odr_bonus(std::size_t pulls, const PolicyParams& params) {
  if (pulls == 0) throw UndefinedEstimatorError("odr_bonus: arm never pulled");
  const double k_odr = params.sigma_bar / params.q_low + params.sigma_bar;
  return k_odr * std::sqrt(2.0 * params.log_term() / static_cast<double>(pulls));
}

double dr_bonus(const ArmState& state, double err_q, double err_theta,
                const PolicyParams& params) {
  const std::size_t pulls = state.pulls();
  const double base = odr_bonus(pulls, params);
  const double root = std::sqrt(2.0 * params.log_term() / static_cast<double>(pulls));
  double cross = err_q * err_theta;
  if (const auto* rb = std::get_if<RateBound>(&params.bonus_mode)) {
    const double p = static_cast<double>(pulls);
    err_q = rb->c_q * std::pow(p, -rb->alpha_q);
    err_theta = rb->c_theta * std::pow(p, -rb->alpha_theta);
    cross = rb->c_cross * std::pow(p, -rb->alpha);
  }
  const double q = params.q_low;
  return base + params.sigma_bar / (q * q) * root * err_q + root * err_theta / q + cross;
}

DrAccumulator::DrAccumulator(CovariateFn theta_hat, CovariateFn q_hat, double q_floor,
                             CovariateFn theta_ref, CovariateFn q_ref)
    : theta_hat_(std::move(theta_hat)),
      q_hat_(std::move(q_hat)),
      q_floor_(q_floor),
      theta_ref_(std::move(theta_ref)),
      q_ref_(std::move(q_ref)) {}

void DrAccumulator::add(const ArmRecord& record) {
  const double th = theta_hat_(record.covariates);
  const double qh = q_hat_(record.covariates);
  sum_terms_ += dr_term(record, th, qh, q_floor_);
  if (theta_ref_) {
    const double g = th - theta_ref_(record.covariates);
    sum_sq_theta_ += g * g;
  }
  if (q_ref_) {
    const double g = qh - q_ref_(record.covariates);
    sum_sq_q_ += g * g;
  }
  ++count_;
}

void DrAccumulator::rebuild(std::span<const ArmRecord> records) {
  count_ = 0;
  sum_terms_ = sum_sq_theta_ = sum_sq_q_ = 0.0;
  for (const ArmRecord& r : records) add(r);
}

void DrAccumulator::set_nuisances(CovariateFn theta_hat, CovariateFn q_hat) {
  theta_hat_ = std::move(theta_hat);
  q_hat_ = std::move(q_hat);
}

double DrAccumulator::mean() const {
  if (count_ == 0) throw UndefinedEstimatorError("DrAccumulator: no records");
  return sum_terms_ / static_cast<double>(count_);
}

double DrAccumulator::err_theta() const {
  return count_ == 0 ? 0.0 : std::sqrt(sum_sq_theta_ / static_cast<double>(count_));
}

double DrAccumulator::err_q() const {
  return count_ == 0 ? 0.0 : std::sqrt(sum_sq_q_ / static_cast<double>(count_));
}

}  // namespace missbandit
