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

#ifndef MISSBANDIT_ANALYSIS_H_
#define MISSBANDIT_ANALYSIS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "missbandit/env.h"
#include "missbandit/policies.h"

namespace missbandit {

// Cumulative pseudo-regret over the T loop rounds, built from the gaps of
// the pulled arms. Realized rewards are never consulted.
std::vector<double> pseudo_regret(const RunResult& result, const BanditInstance& bandit);

// Leading term of the high-probability regret bound for UCB under
// reward-independent missingness: (4 sigma / q) sqrt(2 A T ln(2 A T / delta)).
// Throws DomainError unless 0 < delta < 1, sigma > 0, 0 < q <= 1, A, T >= 1.
double ucb_regret_bound(double sigma_bar, double q_lambda_low, std::size_t num_arms,
                      std::size_t horizon, double delta);

// Leading term of the DR-UCB bound: (4 sigma / q) sqrt(A T ln(2 A T / delta)).
double dr_regret_bound(double sigma_bar, double q_low, std::size_t num_arms,
                      std::size_t horizon, double delta);

// sqrt(T (A - 1)) / (16 sqrt(e)). Throws DomainError when T < A - 1.
double minimax_lower_bound(std::size_t horizon, std::size_t num_arms);

// sqrt(2 ln(2 / delta) n sigma^2).
double freedman_threshold(std::size_t n, double delta, double sigma);

// Fraction of `trials` sums of n iid N(0, sigma^2) draws whose absolute
// value exceeds freedman_threshold. Throws DomainError for trials < 1000.
double freedman_check(std::size_t n, double delta, double sigma, std::size_t trials,
                      std::uint64_t seed);

// Pull count after which an arm's observed count is expected to track
// q P: 1 + 24 ln(T) / q.
double missingness_min_pulls(std::size_t horizon, double q);

// (2 / delta^2) T^(1 - 12 delta^2) A_cen.
double missingness_rate_bound(std::size_t horizon, double delta, double a_cen);

struct MissingnessTally {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double rate() const {
    return checked == 0 ? 0.0 : static_cast<double>(violations) / static_cast<double>(checked);
  }
};

// Over every replication, arm and round (initialization included) at which
// P_a >= missingness_min_pulls, counts the cases N_a <= (1 - delta) q_a P_a.
MissingnessTally missingness_event_check(std::span<const RunResult> results,
                                         const BanditInstance& bandit, double delta);

// Compares the empirical MGF of Z = X Y, X ~ N(0, sigma^2), Y ~ Be(p),
// with exp(l^2 sigma^2 / 2) (1 + tolerance) for l in
// {-2, -1, -0.5, 0.5, 1, 2} / sigma. Throws DomainError for trials < 10^4.
bool subgaussian_product_check(double sigma, double p, std::size_t trials,
                               std::uint64_t seed, double tolerance = 0.05);

struct RegretSummary {
  std::string label;
  std::vector<double> mean_cum_regret;
  std::vector<double> lower_band;  // 2.5th percentile per round
  std::vector<double> upper_band;  // 97.5th percentile per round
  std::vector<double> optimal_rate;
};

// Per-round aggregation over replications, reduced in replication order.
// Throws DomainError when results is empty or horizons differ.
RegretSummary summarize_regret(std::string label, std::span<const RunResult> results,
                               const BanditInstance& bandit);

struct BoundReport {
  double sigma_bar = 0.0;     // scale used by ucb_bound
  double sigma_bar_dr = 0.0;  // scale used by dr_bound
  double q_low = 0.0;
  double q_lambda_low = 0.0;
  std::size_t num_arms = 0;
  std::size_t horizon = 0;
  double delta = 0.0;
  double a_cen = 0.0;
  double ucb_bound_value = 0.0;
  double dr_bound_value = 0.0;
  double lower_bound_value = 0.0;
};

// sigma_bar_dr <= 0 reuses sigma_bar for dr_bound.
BoundReport make_bound_report(double sigma_bar, double q_low, double q_lambda_low,
                              std::size_t num_arms, std::size_t horizon, double delta,
                              double a_cen, double sigma_bar_dr = 0.0);
std::string format_bound_report(const BoundReport& report);

// Share of (arm, round) pairs whose estimate missed the true mean by at
// least the bonus, computed per replication and then averaged. Needs the
// index trace; throws DomainError when a result has none.
double coverage_failure_rate(std::span<const RunResult> results, const BanditInstance& bandit);

// Linear-interpolation percentile (p in [0, 1]) of an unsorted sample.
double percentile(std::vector<double> values, double p);

}  // namespace missbandit

#endif  // MISSBANDIT_ANALYSIS_H_
