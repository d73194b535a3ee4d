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

#ifndef MISSBANDIT_MONTE_CARLO_H_
#define MISSBANDIT_MONTE_CARLO_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "missbandit/analysis.h"
#include "missbandit/config.h"
#include "missbandit/env.h"
#include "missbandit/policies.h"

namespace missbandit {

// Runs job(i) for i in [0, count) on up to `threads` workers (0 picks the
// hardware concurrency). Jobs are claimed from a shared counter; the first
// exception thrown by any job is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& job);

// S episodes of one policy, replication k seeded with base_seed + k. The
// output is in replication order whatever the thread count.
std::vector<RunResult> run_replications(const EpisodeConfig& base, std::size_t replications,
                                        std::uint64_t base_seed, std::size_t threads);

struct PolicyRuns {
  PolicySpec spec;
  std::vector<RunResult> results;
  RegretSummary summary;
};

struct MonteCarloResult {
  ScenarioConfig config;
  std::shared_ptr<const BanditInstance> bandit;
  std::vector<PolicyRuns> policies;
};

MonteCarloResult run_monte_carlo(const ScenarioConfig& config);

// 1-based rounds written to summary.csv: all rounds up to dense_rounds,
// then every stride-th, then the horizon.
std::vector<std::size_t> logged_rounds(std::size_t horizon, std::size_t dense_rounds,
                                       std::size_t stride);

// Per-arm trajectories of three mean estimators on pure samples of an arm
// (no policy in the loop): the regularized observed-reward mean, the
// doubly-robust mean with nuisances fitted on an auxiliary batch, and the
// doubly-robust mean with the true nuisances.
struct EstimatorPath {
  std::string estimator;  // "naive", "dr" or "oracle"
  std::size_t arm = 0;
  std::vector<std::size_t> rounds;
  std::vector<double> mean;
  std::vector<double> lower;  // 2.5th percentile over replications
  std::vector<double> upper;  // 97.5th percentile over replications
};

struct EstimatorTraceOptions {
  std::size_t horizon = 5000;
  std::size_t replications = 200;
  std::uint64_t base_seed = 1;
  std::size_t threads = 0;
  double lambda = 1.0;
  double q_low = 0.05;
  std::size_t auxiliary_size = 10000;
  std::vector<std::size_t> rounds;  // 1-based sample sizes to report
};

std::vector<EstimatorPath> estimator_trajectories(const BanditInstance& bandit,
                                                  const EstimatorTraceOptions& options);

// Throws IoError unless `dir` exists (or can be created) and accepts a file.
void ensure_writable_directory(const std::string& dir);

void write_summary_csv(const std::string& path, const MonteCarloResult& result);
void write_estimator_trace_csv(const std::string& path, const BanditInstance& bandit,
                               const std::vector<EstimatorPath>& paths);

// Bound report for a finished run: ucb_bound takes sigma from the first UCB
// policy and q_lambda from the smallest running ratio it saw; dr_bound
// takes sigma from the first DR-UCB policy (the bandit's conditional scale
// when there is none).
BoundReport bound_report_for(const MonteCarloResult& result);

// Everything `run` does: checks the output directory, simulates, and
// writes summary.csv, estimator_trace.csv, bounds.txt and the figures.
MonteCarloResult run_and_write(const ScenarioConfig& config);

}  // namespace missbandit

#endif  // MISSBANDIT_MONTE_CARLO_H_
