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

#include "missbandit/env.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "missbandit/errors.h"
#include "missbandit/normal.h"

namespace missbandit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt12 = std::sqrt(12.0);

double squared_norm(std::span<const double> v) {
  return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

bool is_dependent(const UniformCounterexampleArm& arm) {
  return arm.variant == CounterexampleVariant::kDependentArm1;
}

}  // namespace

GaussianLinearArm GaussianLinearArm::Make(double theta, std::vector<double> beta,
                                          double sigma_r, double sigma_c, double q) {
  if (beta.empty()) throw DomainError("GaussianLinearArm: beta must have length >= 1");
  if (!(sigma_r > 0.0)) throw DomainError("GaussianLinearArm: sigma_r must be > 0");
  if (!(sigma_c > 0.0)) throw DomainError("GaussianLinearArm: sigma_c must be > 0");
  if (!std::isfinite(theta)) throw DomainError("GaussianLinearArm: theta must be finite");
  GaussianLinearArm arm;
  arm.theta = theta;
  arm.beta = std::move(beta);
  arm.sigma_r = sigma_r;
  arm.sigma_c = sigma_c;
  arm.q = q;
  arm.tau = tau_threshold(q, squared_norm(arm.beta) + sigma_c * sigma_c);
  return arm;
}

double GaussianLinearArm::loading_norm() const { return std::sqrt(squared_norm(beta)); }

double tau_threshold(double q, double var_v) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw DomainError("tau_threshold: q = " + std::to_string(q) + " outside (0, 1]");
  }
  if (!(var_v > 0.0)) throw DomainError("tau_threshold: variance must be > 0");
  if (q == 1.0) return -kInf;
  return std::sqrt(var_v) * normal_quantile(1.0 - q);
}

double corr_reward_missing(std::span<const double> beta, double sigma_r,
                           double sigma_c, double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("corr_reward_missing: q = " + std::to_string(q) +
                      " outside (0, 1)");
  }
  const double b2 = squared_norm(beta);
  if (b2 == 0.0) return 0.0;
  const double sb = std::sqrt(b2);
  const double rho = sb / std::sqrt(b2 + sigma_c * sigma_c);
  const double tau_std = normal_quantile(1.0 - q);
  return rho * sb * normal_pdf(tau_std) /
         std::sqrt((b2 + sigma_r * sigma_r) * q * (1.0 - q));
}

double corr_supremum(double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("corr_supremum: q outside (0, 1)");
  return normal_pdf(normal_quantile(1.0 - q)) / std::sqrt(q * (1.0 - q));
}

std::vector<double> solve_beta_for_corr(double target, double sigma_r, double sigma_c,
                                        double q, std::size_t dim) {
  if (dim == 0) throw DomainError("solve_beta_for_corr: dim must be >= 1");
  if (!(sigma_r > 0.0 && sigma_c > 0.0)) {
    throw DomainError("solve_beta_for_corr: noise scales must be > 0");
  }
  const double sup = corr_supremum(q);
  if (!(target >= 0.0) || target >= sup) {
    throw CalibrationError("solve_beta_for_corr: target " + std::to_string(target) +
                               " not in [0, " + std::to_string(sup) + ")",
                           sup);
  }
  const double unit = 1.0 / std::sqrt(static_cast<double>(dim));
  if (target == 0.0) return std::vector<double>(dim, 0.0);

  auto corr_at = [&](double norm) {
    std::vector<double> b(dim, norm * unit);
    return corr_reward_missing(b, sigma_r, sigma_c, q);
  };
  double lo = 0.0;
  double hi = 1.0;
  while (corr_at(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw CalibrationError("solve_beta_for_corr: no bracket", sup);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double c = corr_at(mid);
    if (std::abs(c - target) <= 1e-12 || hi - lo <= 1e-15 * hi) {
      lo = hi = mid;
      break;
    }
    (c < target ? lo : hi) = mid;
  }
  return std::vector<double>(dim, 0.5 * (lo + hi) * unit);
}

double observed_mean_limit(const GaussianLinearArm& arm) {
  if (arm.q == 1.0) return arm.theta;
  const double b2 = squared_norm(arm.beta);
  const double var_v = b2 + arm.sigma_c * arm.sigma_c;
  const double rho2 = b2 / var_v;
  const double tau_std = normal_quantile(1.0 - arm.q);
  return arm.theta + rho2 * std::sqrt(var_v) * normal_pdf(tau_std) / arm.q;
}

Observation sample(const ArmModel& arm, RandomStream& rng) {
  return std::visit(
      Overloaded{
          [&](const GaussianLinearArm& g) {
            Observation obs;
            obs.covariates.resize(g.dim());
            for (double& x : obs.covariates) x = rng.normal();
            const double signal = dot(obs.covariates, g.beta);
            const double u_c = rng.normal(0.0, g.sigma_c);
            const double u_r = rng.normal(0.0, g.sigma_r);
            obs.observed = signal + u_c > g.tau;
            obs.reward = g.theta + signal + u_r;
            return obs;
          },
          [&](const UniformCounterexampleArm& u) {
            Observation obs;
            obs.observed = rng.bernoulli(0.5);
            if (is_dependent(u)) {
              obs.reward = obs.observed ? rng.uniform(0.0, 0.5) : rng.uniform(0.5, 1.0);
              obs.covariates = {obs.observed ? 1.0 : 0.0};
            } else {
              obs.reward = rng.uniform(0.0, 0.75);
              obs.covariates = {rng.normal()};
            }
            return obs;
          },
      },
      arm);
}

double mean_reward(const ArmModel& arm) {
  return std::visit(Overloaded{[](const GaussianLinearArm& g) { return g.theta; },
                               [](const UniformCounterexampleArm& u) {
                                 return is_dependent(u) ? 0.5 : 0.375;
                               }},
                    arm);
}

std::size_t covariate_dim(const ArmModel& arm) {
  return std::visit(Overloaded{[](const GaussianLinearArm& g) { return g.dim(); },
                               [](const UniformCounterexampleArm&) { return std::size_t{1}; }},
                    arm);
}

double conditional_mean(const ArmModel& arm, std::span<const double> x) {
  return std::visit(
      Overloaded{[&](const GaussianLinearArm& g) { return g.theta + dot(x, g.beta); },
                 [&](const UniformCounterexampleArm& u) {
                   if (!is_dependent(u)) return 0.375;
                   return x[0] > 0.5 ? 0.25 : 0.75;
                 }},
      arm);
}

double observation_probability(const ArmModel& arm, std::span<const double> x) {
  return std::visit(
      Overloaded{[&](const GaussianLinearArm& g) {
                   if (g.q == 1.0) return 1.0;
                   return normal_cdf((dot(x, g.beta) - g.tau) / g.sigma_c);
                 },
                 [&](const UniformCounterexampleArm& u) {
                   if (!is_dependent(u)) return 0.5;
                   return x[0] > 0.5 ? 1.0 : 0.0;
                 }},
      arm);
}

double observation_rate(const ArmModel& arm) {
  return std::visit(Overloaded{[](const GaussianLinearArm& g) { return g.q; },
                               [](const UniformCounterexampleArm&) { return 0.5; }},
                    arm);
}

double reward_sd(const ArmModel& arm) {
  return std::visit(
      Overloaded{[](const GaussianLinearArm& g) {
                   return std::sqrt(squared_norm(g.beta) + g.sigma_r * g.sigma_r);
                 },
                 [](const UniformCounterexampleArm& u) {
                   return (is_dependent(u) ? 1.0 : 0.75) / kSqrt12;
                 }},
      arm);
}

double noise_sd(const ArmModel& arm) {
  return std::visit(Overloaded{[](const GaussianLinearArm& g) { return g.sigma_r; },
                               [](const UniformCounterexampleArm& u) {
                                 return (is_dependent(u) ? 0.5 : 0.75) / kSqrt12;
                               }},
                    arm);
}

double loading_norm(const ArmModel& arm) {
  return std::visit(Overloaded{[](const GaussianLinearArm& g) { return g.loading_norm(); },
                               [](const UniformCounterexampleArm& u) {
                                 return is_dependent(u) ? 0.25 : 0.0;
                               }},
                    arm);
}

double conditional_reward_scale(const ArmModel& arm) {
  return std::max(noise_sd(arm), loading_norm(arm));
}

BanditInstance::BanditInstance(std::vector<ArmModel> arms) : arms_(std::move(arms)) {
  if (arms_.empty()) throw DomainError("BanditInstance: at least one arm required");
  thetas_.reserve(arms_.size());
  for (const auto& arm : arms_) thetas_.push_back(mean_reward(arm));
  optimal_arm_ = static_cast<std::size_t>(
      std::max_element(thetas_.begin(), thetas_.end()) - thetas_.begin());
  theta_bar_ = thetas_[optimal_arm_];
  gaps_.reserve(thetas_.size());
  for (double t : thetas_) gaps_.push_back(theta_bar_ - t);
}

double BanditInstance::sigma_bar_marginal() const {
  double s = 0.0;
  for (const auto& arm : arms_) s = std::max(s, reward_sd(arm));
  return s;
}

double BanditInstance::sigma_bar_conditional() const {
  double s = 0.0;
  for (const auto& arm : arms_) s = std::max(s, conditional_reward_scale(arm));
  return s;
}

double BanditInstance::q_min() const {
  double q = 1.0;
  for (const auto& arm : arms_) q = std::min(q, observation_rate(arm));
  return q;
}

double BanditInstance::a_cen() const {
  double s = 0.0;
  for (const auto& arm : arms_) s += 1.0 / observation_rate(arm);
  return s;
}

}  // namespace missbandit
