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

#include "missbandit/monte_carlo.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "missbandit/errors.h"
#include "missbandit/nuisance.h"
#include "missbandit/report.h"

namespace missbandit {
namespace {

constexpr std::uint64_t kTraceSampleStream = 100;
constexpr std::uint64_t kTraceAuxStream = 200;

std::size_t resolve_threads(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, jobs));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& job) {
  if (count == 0) return;
  const std::size_t workers = resolve_threads(threads, count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<RunResult> run_replications(const EpisodeConfig& base, std::size_t replications,
                                        std::uint64_t base_seed, std::size_t threads) {
  validate_episode(base);
  std::vector<RunResult> out(replications);
  parallel_for(replications, threads, [&](std::size_t k) {
    EpisodeConfig cfg = base;
    cfg.seed = base_seed + k;
    out[k] = run_episode(cfg);
  });
  return out;
}

MonteCarloResult run_monte_carlo(const ScenarioConfig& config) {
  config.validate();
  MonteCarloResult mc;
  mc.config = config;
  mc.bandit = build_bandit(config);
  const std::vector<PolicySpec> specs = resolve_policies(config, *mc.bandit);

  // One flat job list over (policy, replication) so a slow policy does not
  // leave workers idle.
  const std::size_t reps = config.replications;
  std::vector<EpisodeConfig> episodes;
  for (const PolicySpec& spec : specs) {
    EpisodeConfig e;
    e.horizon = config.horizon;
    e.policy = spec;
    e.bandit = mc.bandit;
    e.record_trace = config.record_trace;
    validate_episode(e);
    episodes.push_back(e);
  }
  std::vector<RunResult> flat(specs.size() * reps);
  parallel_for(flat.size(), config.threads, [&](std::size_t i) {
    EpisodeConfig cfg = episodes[i / reps];
    cfg.seed = config.base_seed + i % reps;
    flat[i] = run_episode(cfg);
  });

  for (std::size_t p = 0; p < specs.size(); ++p) {
    PolicyRuns runs;
    runs.spec = specs[p];
    runs.results.assign(std::make_move_iterator(flat.begin() + p * reps),
                        std::make_move_iterator(flat.begin() + (p + 1) * reps));
    runs.summary =
        summarize_regret(std::string(policy_name(specs[p].kind)), runs.results, *mc.bandit);
    mc.policies.push_back(std::move(runs));
  }
  return mc;
}

std::vector<std::size_t> logged_rounds(std::size_t horizon, std::size_t dense_rounds,
                                       std::size_t stride) {
  if (stride == 0) throw DomainError("logged_rounds: stride must be positive");
  std::vector<std::size_t> out;
  for (std::size_t t = 1; t <= horizon; ++t) {
    if (t <= dense_rounds || t % stride == 0 || t == horizon) out.push_back(t);
  }
  return out;
}

std::vector<EstimatorPath> estimator_trajectories(const BanditInstance& bandit,
                                                  const EstimatorTraceOptions& options) {
  const std::size_t num_arms = bandit.num_arms();
  const std::size_t reps = options.replications;
  std::vector<std::size_t> rounds = options.rounds;
  if (rounds.empty()) rounds = logged_rounds(options.horizon, 100, 10);
  for (std::size_t r : rounds) {
    if (r == 0 || r > options.horizon) throw DomainError("estimator_trajectories: bad round");
  }
  const std::size_t width = rounds.size();
  constexpr std::size_t kEstimators = 3;

  // values[rep][(estimator * num_arms + arm) * width + j]
  std::vector<std::vector<double>> values(reps);
  parallel_for(reps, options.threads, [&](std::size_t k) {
    std::vector<double>& row = values[k];
    row.assign(kEstimators * num_arms * width, 0.0);
    const RandomStream root(options.base_seed + k);
    for (std::size_t a = 0; a < num_arms; ++a) {
      const ArmModel& arm = bandit.arm(a);
      const std::size_t dim = covariate_dim(arm);
      const double floor = options.q_low;

      RandomStream aux_rng = root.derive(kTraceAuxStream + a);
      DifferentBatch batch;
      for (std::size_t i = 0; i < options.auxiliary_size; ++i) {
        const CensoredObservation c = censor(sample(arm, aux_rng));
        batch.auxiliary.push_back({c.covariates, c.observed, c.reward});
      }
      const auto fitted = std::make_shared<const NuisanceModels>(
          fit_nuisances(training_view(SplitPlan{batch}, {}, 1), dim, floor));
      DrAccumulator dr(
          [fitted](std::span<const double> x) { return fitted->theta.predict(x); },
          [fitted](std::span<const double> x) { return fitted->q.predict(x); }, floor);
      DrAccumulator oracle(
          [&arm](std::span<const double> x) { return conditional_mean(arm, x); },
          [&arm, floor](std::span<const double> x) {
            return std::clamp(observation_probability(arm, x), floor, 1.0);
          },
          floor);

      RandomStream rng = root.derive(kTraceSampleStream + a);
      ArmState state(options.lambda);
      std::size_t j = 0;
      for (std::size_t n = 1; n <= options.horizon && j < width; ++n) {
        state.update(censor(sample(arm, rng)));
        const ArmRecord& rec = state.records().back();
        dr.add(rec);
        oracle.add(rec);
        while (j < width && rounds[j] == n) {
          row[(0 * num_arms + a) * width + j] = ucb_mean(state, options.lambda);
          row[(1 * num_arms + a) * width + j] = dr.mean();
          row[(2 * num_arms + a) * width + j] = oracle.mean();
          ++j;
        }
      }
    }
  });

  static constexpr std::array<const char*, kEstimators> kNames{"naive", "dr", "oracle"};
  std::vector<EstimatorPath> out;
  std::vector<double> column(reps);
  for (std::size_t e = 0; e < kEstimators; ++e) {
    for (std::size_t a = 0; a < num_arms; ++a) {
      EstimatorPath path;
      path.estimator = kNames[e];
      path.arm = a;
      path.rounds = rounds;
      for (std::size_t j = 0; j < width; ++j) {
        double sum = 0.0;
        for (std::size_t k = 0; k < reps; ++k) {
          column[k] = values[k][(e * num_arms + a) * width + j];
          sum += column[k];
        }
        path.mean.push_back(sum / static_cast<double>(reps));
        path.lower.push_back(percentile(column, 0.025));
        path.upper.push_back(percentile(column, 0.975));
      }
      out.push_back(std::move(path));
    }
  }
  return out;
}

void ensure_writable_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir, ec)) {
    throw IoError("output directory \"" + dir + "\" does not exist and cannot be created");
  }
  const fs::path probe = fs::path(dir) / ".missbandit_write_probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "ok")) {
      throw IoError("output directory \"" + dir + "\" is not writable");
    }
  }
  fs::remove(probe, ec);
}

void write_summary_csv(const std::string& path, const MonteCarloResult& result) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write \"" + path + "\"");
  out << "policy,replication,round,action,regret_cum,observed_flag,optimal_flag\n";
  const ScenarioConfig& cfg = result.config;
  const std::vector<std::size_t> rounds =
      logged_rounds(cfg.horizon, cfg.dense_rounds, cfg.log_stride);
  const std::size_t best = result.bandit->optimal_arm();
  for (const PolicyRuns& runs : result.policies) {
    const std::string_view name = policy_name(runs.spec.kind);
    for (std::size_t k = 0; k < runs.results.size(); ++k) {
      const RunResult& r = runs.results[k];
      const std::vector<double> regret = pseudo_regret(r, *result.bandit);
      for (std::size_t t : rounds) {
        const std::size_t a = r.actions[t - 1];
        out << name << ',' << k << ',' << t << ',' << a + 1 << ','
            << format_double(regret[t - 1]) << ',' << (r.observed_flags[t - 1] ? 1 : 0) << ','
            << (a == best ? 1 : 0) << '\n';
      }
    }
  }
  if (!out) throw IoError("failed while writing \"" + path + "\"");
}

void write_estimator_trace_csv(const std::string& path, const BanditInstance& bandit,
                               const std::vector<EstimatorPath>& paths) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write \"" + path + "\"");
  out << "estimator,arm,round,mean,lower,upper,theta\n";
  for (const EstimatorPath& p : paths) {
    for (std::size_t j = 0; j < p.rounds.size(); ++j) {
      out << p.estimator << ',' << p.arm + 1 << ',' << p.rounds[j] << ','
          << format_double(p.mean[j]) << ',' << format_double(p.lower[j]) << ','
          << format_double(p.upper[j]) << ',' << format_double(bandit.theta(p.arm)) << '\n';
    }
  }
  if (!out) throw IoError("failed while writing \"" + path + "\"");
}

BoundReport bound_report_for(const MonteCarloResult& result) {
  const BanditInstance& bandit = *result.bandit;
  double sigma = bandit.sigma_bar_marginal();
  double delta = 0.1;
  double q_lambda = std::numeric_limits<double>::infinity();
  bool found = false;
  for (const PolicyRuns& runs : result.policies) {
    if (runs.spec.kind != PolicyKind::kUcb) continue;
    if (!found) {
      sigma = runs.spec.params.sigma_bar;
      delta = runs.spec.params.delta;
      found = true;
    }
    for (const RunResult& r : runs.results) q_lambda = std::min(q_lambda, r.q_lambda_inf);
  }
  if (!found && !result.policies.empty()) delta = result.policies.front().spec.params.delta;
  if (!std::isfinite(q_lambda)) q_lambda = bandit.q_min();
  double sigma_dr = bandit.sigma_bar_conditional();
  for (const PolicyRuns& runs : result.policies) {
    if (runs.spec.kind == PolicyKind::kDrUcb) {
      sigma_dr = runs.spec.params.sigma_bar;
      break;
    }
  }
  return make_bound_report(sigma, bandit.q_min(), q_lambda, bandit.num_arms(),
                           result.config.horizon, delta, bandit.a_cen(), sigma_dr);
}

MonteCarloResult run_and_write(const ScenarioConfig& config) {
  config.validate();
  ensure_writable_directory(config.output_dir);
  namespace fs = std::filesystem;
  const fs::path dir(config.output_dir);

  MonteCarloResult mc = run_monte_carlo(config);
  write_summary_csv((dir / "summary.csv").string(), mc);

  EstimatorTraceOptions opts;
  opts.horizon = config.horizon;
  opts.replications = config.replications;
  opts.base_seed = config.base_seed;
  opts.threads = config.threads;
  opts.q_low = mc.bandit->q_min();
  for (const PolicyRuns& runs : mc.policies) {
    if (runs.spec.kind == PolicyKind::kDrUcb) {
      opts.auxiliary_size = runs.spec.auxiliary_size;
      opts.q_low = runs.spec.params.q_low;
      break;
    }
  }
  opts.rounds = logged_rounds(config.horizon, config.dense_rounds, config.log_stride);
  const std::vector<EstimatorPath> paths = estimator_trajectories(*mc.bandit, opts);
  write_estimator_trace_csv((dir / "estimator_trace.csv").string(), *mc.bandit, paths);

  const BoundReport report = bound_report_for(mc);
  write_text_file((dir / "bounds.txt").string(), format_bound_report(report));

  std::vector<RegretSummary> summaries;
  for (const PolicyRuns& runs : mc.policies) summaries.push_back(runs.summary);
  write_regret_svg((dir / ("fig_regret_" + config.name + ".svg")).string(),
                   "Cumulative regret: " + config.name, summaries);
  write_optrate_svg((dir / ("fig_optrate_" + config.name + ".svg")).string(),
                    "Optimal-arm rate: " + config.name, summaries);
  write_estimator_svg((dir / "fig_estimators.svg").string(),
                      "Mean reward estimators: " + config.name, *mc.bandit, paths);
  return mc;
}

}  // namespace missbandit
