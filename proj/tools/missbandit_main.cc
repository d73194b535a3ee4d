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

// Command-line front end: Monte Carlo runs, bound tables, loading
// calibration and the concentration check suites.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "missbandit/analysis.h"
#include "missbandit/config.h"
#include "missbandit/env.h"
#include "missbandit/errors.h"
#include "missbandit/monte_carlo.h"

namespace {

using namespace missbandit;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitCheckFailed = 2;

struct RunFlags {
  std::string config_path;
  std::string preset_name;
  std::size_t reps = 0;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t threads = 0;
  std::string out;
};

struct BoundsFlags {
  std::size_t horizon = 0;
  std::size_t arms = 0;
  double sigma_bar = 1.0;
  double q_low = 1.0;
  double delta = 0.1;
};

struct CalibrateFlags {
  double corr = 0.0;
  double sigma_r = 1.0;
  double sigma_c = std::sqrt(2.0);
  double q = 0.5;
  std::vector<double> thetas;
  std::vector<double> arm_qs;
};

struct CheckFlags {
  std::string suite;
  std::size_t reps = 200;
  std::size_t horizon = 5000;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
};

int cmd_run(const RunFlags& f) {
  ScenarioConfig cfg;
  if (!f.config_path.empty()) {
    cfg = load_config(f.config_path);
  } else if (!f.preset_name.empty()) {
    cfg = preset(f.preset_name);
  } else {
    throw ConfigError("run: pass --config <path> or --preset <name>");
  }
  if (f.reps > 0) cfg.replications = f.reps;
  if (f.horizon > 0) cfg.horizon = f.horizon;
  if (f.seed_set) cfg.base_seed = f.seed;
  if (f.threads > 0) cfg.threads = f.threads;
  if (!f.out.empty()) cfg.output_dir = f.out;
  cfg.validate();

  const MonteCarloResult mc = run_and_write(cfg);
  std::printf("scenario %s: T=%zu, S=%zu, outputs in %s\n", cfg.name.c_str(), cfg.horizon,
              cfg.replications, cfg.output_dir.c_str());
  std::printf("%-12s %14s %14s\n", "policy", "mean_regret_T", "optimal_rate_T");
  for (const PolicyRuns& runs : mc.policies) {
    std::printf("%-12s %14.4f %14.4f\n", runs.summary.label.c_str(),
                runs.summary.mean_cum_regret.back(), runs.summary.optimal_rate.back());
  }
  std::printf("\n%s", format_bound_report(bound_report_for(mc)).c_str());
  return kExitOk;
}

int cmd_bounds(const BoundsFlags& f) {
  double a_cen = static_cast<double>(f.arms) / f.q_low;
  const BoundReport r =
      make_bound_report(f.sigma_bar, f.q_low, f.q_low, f.arms, f.horizon, f.delta, a_cen);
  std::printf("%s", format_bound_report(r).c_str());
  return kExitOk;
}

int cmd_calibrate(const CalibrateFlags& f) {
  std::vector<double> beta;
  try {
    beta = solve_beta_for_corr(f.corr, f.sigma_r, f.sigma_c, f.q);
  } catch (const CalibrationError& e) {
    std::fprintf(stderr, "error: %s (supremum %.6f)\n", e.what(), e.supremum());
    return kExitError;
  }
  const double beta_norm = std::abs(beta.at(0));
  std::printf("beta           %.10f\n", beta.at(0));
  std::printf("beta_norm_sq   %.10f\n", beta_norm * beta_norm);
  std::printf("corr_check     %.10f\n", f.corr == 0.0 || f.q >= 1.0
                                              ? 0.0
                                              : corr_reward_missing(beta, f.sigma_r, f.sigma_c, f.q));
  std::vector<double> thetas = f.thetas.empty() ? std::vector<double>{1.0} : f.thetas;
  std::vector<double> qs = f.arm_qs;
  if (qs.empty()) qs.assign(thetas.size(), f.q);
  if (qs.size() != thetas.size()) {
    throw ConfigError("calibrate: --theta and --arm-q need the same number of values");
  }
  std::printf("\n%-6s %10s %10s %12s %12s\n", "arm", "theta", "q", "tau", "theta_obs");
  for (std::size_t a = 0; a < thetas.size(); ++a) {
    const GaussianLinearArm arm =
        GaussianLinearArm::Make(thetas[a], beta, f.sigma_r, f.sigma_c, qs[a]);
    std::printf("%-6zu %10.4f %10.4f %12.6f %12.6f\n", a + 1, thetas[a], qs[a], arm.tau,
                observed_mean_limit(arm));
  }
  return kExitOk;
}

int report_check(const char* name, double value, double limit, bool pass) {
  std::printf("%s: value %.6g, limit %.6g: %s\n", name, value, limit, pass ? "PASS" : "FAIL");
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_check(const CheckFlags& f) {
  if (f.suite == "freedman") {
    const double rate = freedman_check(100, 0.05, 1.0, 10000, f.seed);
    std::printf("threshold %.6f\n", freedman_threshold(100, 0.05, 1.0));
    return report_check("freedman violation rate", rate, 0.05, rate <= 0.05);
  }
  if (f.suite == "subgaussian") {
    const bool ok = subgaussian_product_check(1.0, 0.5, 100000, f.seed);
    std::printf("subgaussian product (sigma=1, p=0.5, 1e5 draws): %s\n", ok ? "PASS" : "FAIL");
    return ok ? kExitOk : kExitCheckFailed;
  }
  if (f.suite == "chernoff" || f.suite == "coverage") {
    ScenarioConfig cfg = preset("scenario2");
    cfg.replications = f.reps;
    cfg.horizon = f.horizon;
    cfg.base_seed = f.seed;
    cfg.threads = f.threads;
    cfg.record_trace = f.suite == "coverage";
    cfg.policies.resize(1);  // UCB only
    const MonteCarloResult mc = run_monte_carlo(cfg);
    const std::vector<RunResult>& runs = mc.policies.front().results;
    if (f.suite == "chernoff") {
      const double delta = std::sqrt(2.0 / 12.0);
      const MissingnessTally tally = missingness_event_check(runs, *mc.bandit, delta);
      std::printf("checked pairs %zu, violations %zu, rate bound %.6g\n", tally.checked,
                  tally.violations,
                  missingness_rate_bound(cfg.horizon, delta, mc.bandit->a_cen()));
      return report_check("missingness event rate", tally.rate(), 0.01, tally.rate() <= 0.01);
    }
    const double delta = mc.policies.front().spec.params.delta;
    const double ucb_rate = coverage_failure_rate(runs, *mc.bandit);
    int code = report_check("ucb failure rate (scenario2)", ucb_rate, delta, ucb_rate <= delta);

    ScenarioConfig dr = preset("scenario3");
    dr.replications = f.reps;
    dr.horizon = f.horizon;
    dr.base_seed = f.seed;
    dr.threads = f.threads;
    dr.record_trace = true;
    std::erase_if(dr.policies,
                  [](const PolicyEntry& e) { return e.spec.kind != PolicyKind::kDrUcb; });
    const MonteCarloResult dmc = run_monte_carlo(dr);
    const double dr_rate = coverage_failure_rate(dmc.policies.front().results, *dmc.bandit);
    const double dr_delta = dmc.policies.front().spec.params.delta;
    const int dr_code =
        report_check("dr failure rate (scenario3)", dr_rate, dr_delta, dr_rate <= dr_delta);
    return code != kExitOk ? code : dr_code;
  }
  throw ConfigError("check: unknown suite \"" + f.suite + "\"");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit simulations with missing reward feedback"};
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Monte Carlo replications of a scenario");
  run_cmd->add_option("--config", run.config_path, "JSON scenario config");
  run_cmd->add_option("--preset", run.preset_name, "Built-in scenario instead of a config file");
  run_cmd->add_option("--reps", run.reps, "Replications S");
  run_cmd->add_option("--horizon", run.horizon, "Rounds T");
  run_cmd->add_option("--seed", run.seed, "Base seed")->each([&](const std::string&) {
    run.seed_set = true;
  });
  run_cmd->add_option("--threads", run.threads, "Worker threads (0: all cores)");
  run_cmd->add_option("--out", run.out, "Output directory");

  BoundsFlags bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Regret bound values");
  bounds_cmd->add_option("--T", bounds.horizon, "Horizon")->required();
  bounds_cmd->add_option("--A", bounds.arms, "Number of arms")->required();
  bounds_cmd->add_option("--sigma-bar", bounds.sigma_bar, "Reward scale");
  bounds_cmd->add_option("--q-low", bounds.q_low, "Lower bound on observation probability");
  bounds_cmd->add_option("--delta", bounds.delta, "Confidence level");

  CalibrateFlags cal;
  auto* cal_cmd = app.add_subcommand("calibrate", "Loading for a target Corr(R, C)");
  cal_cmd->add_option("--corr", cal.corr, "Target correlation")->required();
  cal_cmd->add_option("--sigma-r", cal.sigma_r, "Reward noise sd");
  cal_cmd->add_option("--sigma-c", cal.sigma_c, "Observation noise sd");
  cal_cmd->add_option("--q", cal.q, "Observation rate of the calibrated arm");
  cal_cmd->add_option("--theta", cal.thetas, "Arm means to tabulate");
  cal_cmd->add_option("--arm-q", cal.arm_qs, "Observation rates of the tabulated arms");

  CheckFlags check;
  auto* check_cmd = app.add_subcommand("check", "Concentration and coverage checks");
  check_cmd->add_option("--suite", check.suite, "Suite to run")
      ->required()
      ->check(CLI::IsMember({"freedman", "chernoff", "subgaussian", "coverage"}));
  check_cmd->add_option("--reps", check.reps, "Replications for simulation suites");
  check_cmd->add_option("--horizon", check.horizon, "Rounds for simulation suites");
  check_cmd->add_option("--seed", check.seed, "Seed");
  check_cmd->add_option("--threads", check.threads, "Worker threads (0: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*bounds_cmd) return cmd_bounds(bounds);
    if (*cal_cmd) return cmd_calibrate(cal);
    if (*check_cmd) return cmd_check(check);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
