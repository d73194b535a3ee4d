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

#include "missbandit/analysis.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <utility>

#include "missbandit/errors.h"
#include "missbandit/random.h"

namespace missbandit {
namespace {

void check_bound_inputs(double sigma_bar, double q, std::size_t num_arms,
                        std::size_t horizon, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("bound: delta must lie in (0, 1)");
  if (!(sigma_bar > 0.0)) throw DomainError("bound: sigma_bar must be positive");
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("bound: q must lie in (0, 1]");
  if (num_arms == 0 || horizon == 0) throw DomainError("bound: A and T must be positive");
}

double log_term(std::size_t num_arms, std::size_t horizon, double delta) {
  return std::log(2.0 * static_cast<double>(num_arms) * static_cast<double>(horizon) / delta);
}

}  // namespace

std::vector<double> pseudo_regret(const RunResult& result, const BanditInstance& bandit) {
  std::vector<double> out;
  out.reserve(result.actions.size());
  double total = 0.0;
  for (std::size_t a : result.actions) {
    total += bandit.gaps().at(a);
    out.push_back(total);
  }
  return out;
}

double ucb_regret_bound(double sigma_bar, double q_lambda_low, std::size_t num_arms,
                      std::size_t horizon, double delta) {
  check_bound_inputs(sigma_bar, q_lambda_low, num_arms, horizon, delta);
  const double at = static_cast<double>(num_arms) * static_cast<double>(horizon);
  return 4.0 * sigma_bar / q_lambda_low *
         std::sqrt(2.0 * at * log_term(num_arms, horizon, delta));
}

double dr_regret_bound(double sigma_bar, double q_low, std::size_t num_arms,
                      std::size_t horizon, double delta) {
  check_bound_inputs(sigma_bar, q_low, num_arms, horizon, delta);
  const double at = static_cast<double>(num_arms) * static_cast<double>(horizon);
  return 4.0 * sigma_bar / q_low * std::sqrt(at * log_term(num_arms, horizon, delta));
}

double minimax_lower_bound(std::size_t horizon, std::size_t num_arms) {
  if (num_arms == 0) throw DomainError("minimax_lower_bound: A must be positive");
  if (horizon + 1 < num_arms) throw DomainError("minimax_lower_bound: requires T >= A - 1");
  const double spread = static_cast<double>(horizon) * static_cast<double>(num_arms - 1);
  return std::sqrt(spread) / (16.0 * std::sqrt(std::numbers::e));
}

double freedman_threshold(std::size_t n, double delta, double sigma) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("freedman: delta must lie in (0, 1]");
  return std::sqrt(2.0 * std::log(2.0 / delta) * static_cast<double>(n) * sigma * sigma);
}

double freedman_check(std::size_t n, double delta, double sigma, std::size_t trials,
                      std::uint64_t seed) {
  if (trials < 1000) throw DomainError("freedman_check: needs at least 1000 trials");
  const double threshold = freedman_threshold(n, delta, sigma);
  RandomStream rng(seed);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += rng.normal(0.0, sigma);
    if (std::abs(sum) > threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

double missingness_min_pulls(std::size_t horizon, double q) {
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("missingness_min_pulls: q must lie in (0, 1]");
  return 1.0 + 24.0 * std::log(static_cast<double>(horizon)) / q;
}

double missingness_rate_bound(std::size_t horizon, double delta, double a_cen) {
  return 2.0 / (delta * delta) *
         std::pow(static_cast<double>(horizon), 1.0 - 12.0 * delta * delta) * a_cen;
}

MissingnessTally missingness_event_check(std::span<const RunResult> results,
                                         const BanditInstance& bandit, double delta) {
  const std::size_t num_arms = bandit.num_arms();
  std::vector<double> q(num_arms), min_pulls(num_arms);
  MissingnessTally tally;
  for (const RunResult& r : results) {
    const std::size_t horizon = r.actions.size();
    for (std::size_t a = 0; a < num_arms; ++a) {
      q[a] = observation_rate(bandit.arm(a));
      min_pulls[a] = missingness_min_pulls(std::max<std::size_t>(horizon, 1), q[a]);
    }
    std::vector<std::size_t> pulls(num_arms, 0), observed(num_arms, 0);
    auto tick = [&]() {
      for (std::size_t a = 0; a < num_arms; ++a) {
        const double p = static_cast<double>(pulls[a]);
        if (p < min_pulls[a]) continue;
        ++tally.checked;
        if (static_cast<double>(observed[a]) <= (1.0 - delta) * q[a] * p) ++tally.violations;
      }
    };
    for (std::size_t i = 0; i < r.init_actions.size(); ++i) {
      ++pulls[r.init_actions[i]];
      observed[r.init_actions[i]] += r.init_observed[i] ? 1 : 0;
    }
    tick();
    for (std::size_t t = 0; t < horizon; ++t) {
      ++pulls[r.actions[t]];
      observed[r.actions[t]] += r.observed_flags[t] ? 1 : 0;
      tick();
    }
  }
  return tally;
}

bool subgaussian_product_check(double sigma, double p, std::size_t trials,
                               std::uint64_t seed, double tolerance) {
  if (trials < 10000) throw DomainError("subgaussian_product_check: needs 10^4 trials");
  if (!(sigma > 0.0)) throw DomainError("subgaussian_product_check: sigma must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("subgaussian_product_check: p outside [0, 1]");
  constexpr std::array<double, 6> kGrid{-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
  RandomStream rng(seed);
  std::vector<double> z(trials);
  for (double& v : z) {
    const double x = rng.normal(0.0, sigma);
    v = rng.bernoulli(p) ? x : 0.0;
  }
  for (double g : kGrid) {
    const double l = g / sigma;
    double mgf = 0.0;
    for (double v : z) mgf += std::exp(l * v);
    mgf /= static_cast<double>(trials);
    if (mgf > std::exp(0.5 * l * l * sigma * sigma) * (1.0 + tolerance)) return false;
  }
  return true;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw DomainError("percentile: empty sample");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

RegretSummary summarize_regret(std::string label, std::span<const RunResult> results,
                               const BanditInstance& bandit) {
  if (results.empty()) throw DomainError("summarize_regret: no replications");
  const std::size_t horizon = results.front().actions.size();
  std::vector<std::vector<double>> curves;
  curves.reserve(results.size());
  for (const RunResult& r : results) {
    if (r.actions.size() != horizon) throw DomainError("summarize_regret: horizons differ");
    curves.push_back(pseudo_regret(r, bandit));
  }
  RegretSummary s;
  s.label = std::move(label);
  s.mean_cum_regret.resize(horizon);
  s.lower_band.resize(horizon);
  s.upper_band.resize(horizon);
  s.optimal_rate.resize(horizon);
  const double reps = static_cast<double>(results.size());
  const std::size_t best = bandit.optimal_arm();
  std::vector<double> column(results.size());
  for (std::size_t t = 0; t < horizon; ++t) {
    double sum = 0.0;
    double hits = 0.0;
    for (std::size_t k = 0; k < results.size(); ++k) {
      column[k] = curves[k][t];
      sum += column[k];
      hits += results[k].actions[t] == best ? 1.0 : 0.0;
    }
    s.mean_cum_regret[t] = sum / reps;
    s.optimal_rate[t] = hits / reps;
    s.lower_band[t] = percentile(column, 0.025);
    s.upper_band[t] = percentile(column, 0.975);
  }
  return s;
}

BoundReport make_bound_report(double sigma_bar, double q_low, double q_lambda_low,
                              std::size_t num_arms, std::size_t horizon, double delta,
                              double a_cen, double sigma_bar_dr) {
  BoundReport r;
  r.sigma_bar = sigma_bar;
  r.sigma_bar_dr = sigma_bar_dr > 0.0 ? sigma_bar_dr : sigma_bar;
  r.q_low = q_low;
  r.q_lambda_low = q_lambda_low;
  r.num_arms = num_arms;
  r.horizon = horizon;
  r.delta = delta;
  r.a_cen = a_cen;
  r.ucb_bound_value = ucb_regret_bound(sigma_bar, q_lambda_low, num_arms, horizon, delta);
  r.dr_bound_value = dr_regret_bound(r.sigma_bar_dr, q_low, num_arms, horizon, delta);
  r.lower_bound_value = minimax_lower_bound(horizon, num_arms);
  return r;
}

std::string format_bound_report(const BoundReport& r) {
  std::ostringstream out;
  char line[160];
  auto row = [&](const char* key, double value) {
    std::snprintf(line, sizeof line, "%-16s %.6g\n", key, value);
    out << line;
  };
  row("sigma_bar", r.sigma_bar);
  row("sigma_bar_dr", r.sigma_bar_dr);
  row("q_low", r.q_low);
  row("q_lambda_low", r.q_lambda_low);
  row("arms", static_cast<double>(r.num_arms));
  row("horizon", static_cast<double>(r.horizon));
  row("delta", r.delta);
  row("a_cen", r.a_cen);
  row("ucb_bound", r.ucb_bound_value);
  row("dr_bound", r.dr_bound_value);
  row("lower_bound", r.lower_bound_value);
  out << "# leading terms only; lower-order remainders are not included\n";
  return out.str();
}

double coverage_failure_rate(std::span<const RunResult> results, const BanditInstance& bandit) {
  if (results.empty()) throw DomainError("coverage_failure_rate: no replications");
  const std::size_t num_arms = bandit.num_arms();
  double total = 0.0;
  for (const RunResult& r : results) {
    if (!r.trace) throw DomainError("coverage_failure_rate: result has no index trace");
    const IndexTrace& tr = *r.trace;
    const std::size_t rounds = tr.means.size() / num_arms;
    std::size_t misses = 0;
    for (std::size_t t = 0; t < rounds; ++t) {
      for (std::size_t a = 0; a < num_arms; ++a) {
        if (std::abs(tr.mean(t, a) - bandit.theta(a)) >= tr.bonus(t, a)) ++misses;
      }
    }
    total += rounds == 0 ? 0.0
                         : static_cast<double>(misses) / static_cast<double>(rounds * num_arms);
  }
  return total / static_cast<double>(results.size());
}

}  // namespace missbandit
