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

#include "missbandit/config.h"

#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "missbandit/env.h"
#include "missbandit/errors.h"

namespace missbandit {
namespace {

std::string error_of(const std::string& json) {
  try {
    parse_config(json);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(PresetTest, AllPresetsValidateAndBuild) {
  for (const std::string& name : preset_names()) {
    const ScenarioConfig c = preset(name);
    EXPECT_EQ(c.name, name);
    EXPECT_NO_THROW(c.validate());
    const auto bandit = build_bandit(c);
    EXPECT_EQ(bandit->num_arms(), c.arms.size());
    EXPECT_EQ(resolve_policies(c, *bandit).size(), c.policies.size());
  }
}

TEST(PresetTest, ScenarioThreeMatchesDesign) {
  const ScenarioConfig c = preset("scenario3");
  ASSERT_EQ(c.arms.size(), 2u);
  EXPECT_DOUBLE_EQ(c.arms[0].theta, 0.5);
  EXPECT_DOUBLE_EQ(c.arms[1].theta, 1.0);
  EXPECT_DOUBLE_EQ(c.arms[0].q, 0.2);
  EXPECT_DOUBLE_EQ(c.arms[1].q, 0.9);
  EXPECT_EQ(c.horizon, 5000u);
  EXPECT_EQ(c.replications, 200u);
  ASSERT_TRUE(c.correlation_target.has_value());
  EXPECT_DOUBLE_EQ(*c.correlation_target, 0.2);
}

TEST(PresetTest, CalibratedLoadingHitsTarget) {
  const ScenarioConfig c = preset("scenario3");
  const std::vector<double> beta = calibrated_beta(c);
  double norm_sq = 0.0;
  for (double b : beta) norm_sq += b * b;
  EXPECT_NEAR(norm_sq, 0.7500062904867931, 1e-8);
  EXPECT_NEAR(corr_reward_missing(beta, 1.0, std::sqrt(2.0), 0.9), 0.2, 1e-10);
  const auto bandit = build_bandit(c);
  for (const ArmModel& arm : bandit->arms()) {
    EXPECT_NEAR(loading_norm(arm), std::sqrt(norm_sq), 1e-12);
  }
}

TEST(ResolvePoliciesTest, ScaleDefaults) {
  const ScenarioConfig c = preset("scenario3");
  const auto bandit = build_bandit(c);
  const auto specs = resolve_policies(c, *bandit);
  for (const PolicySpec& s : specs) {
    const double expected = (s.kind == PolicyKind::kUcb || s.kind == PolicyKind::kOracleUcb)
                                ? bandit->sigma_bar_marginal()
                                : bandit->sigma_bar_conditional();
    EXPECT_DOUBLE_EQ(s.params.sigma_bar, expected) << policy_name(s.kind);
    EXPECT_DOUBLE_EQ(s.params.q_low, 0.2);
  }
}

TEST(ParseConfigTest, PresetWithOverrides) {
  const ScenarioConfig c = parse_config(
      R"({"preset": "scenario2", "horizon": 100, "replications": 3, "base_seed": 9,
          "output_dir": "elsewhere"})");
  EXPECT_EQ(c.name, "scenario2");
  EXPECT_EQ(c.horizon, 100u);
  EXPECT_EQ(c.replications, 3u);
  EXPECT_EQ(c.base_seed, 9u);
  EXPECT_EQ(c.output_dir, "elsewhere");
  EXPECT_DOUBLE_EQ(c.arms[0].q, 0.25);
}

TEST(ParseConfigTest, FullSpecification) {
  const ScenarioConfig c = parse_config(R"({
    "name": "custom",
    "dim": 2,
    "arms": [{"kind": "gaussian", "theta": 0.1, "q": 0.5, "beta": [0.3, 0.4]},
             {"kind": "gaussian", "theta": 0.9, "q": 0.7, "beta": [0.3, 0.4]}],
    "policies": [{"kind": "dr-ucb", "split": "M2", "delta": 0.05, "lambda": 2,
                  "q_lambda": "running-min",
                  "bonus": {"c_q": 1, "alpha_q": 0.6, "c_theta": 1,
                            "alpha_theta": 0.6, "c_cross": 1, "alpha": 0.7}}],
    "horizon": 50, "replications": 2})");
  EXPECT_EQ(c.dim, 2u);
  ASSERT_EQ(c.policies.size(), 1u);
  const PolicySpec& s = c.policies[0].spec;
  EXPECT_EQ(s.kind, PolicyKind::kDrUcb);
  EXPECT_EQ(s.split, SplitMode::kLeaveOneOut);
  EXPECT_DOUBLE_EQ(s.params.delta, 0.05);
  EXPECT_DOUBLE_EQ(s.params.lambda, 2.0);
  EXPECT_EQ(s.params.q_lambda_mode, QLambdaMode::kRunningMin);
  EXPECT_TRUE(std::holds_alternative<RateBound>(s.params.bonus_mode));
}

TEST(ParseConfigTest, UnknownKeysAreNamed) {
  EXPECT_NE(error_of(R"({"preset": "scenario1", "horizn": 10})").find("\"horizn\""),
            std::string::npos);
  EXPECT_NE(error_of(R"({"preset": "scenario1", "policies": [{"kind": "ucb", "gamma": 1}]})")
                .find("\"gamma\""),
            std::string::npos);
}

TEST(ParseConfigTest, UnknownPresetListsKnownOnes) {
  const std::string msg = error_of(R"({"preset": "scenario9"})");
  EXPECT_NE(msg.find("scenario9"), std::string::npos);
  for (const std::string& name : preset_names()) {
    EXPECT_NE(msg.find(name), std::string::npos) << name;
  }
}

TEST(ParseConfigTest, InvalidValuesAreConfigErrors) {
  EXPECT_NE(error_of(R"({"preset": "scenario1", "policies": [{"kind": "greedy"}]})"), "");
  EXPECT_NE(error_of(R"({"preset": "scenario1", "arms": [{"theta": 1, "q": 1.5}]})"), "");
  EXPECT_NE(error_of(R"({"preset": "scenario1", "horizon": "long"})"), "");
  EXPECT_NE(error_of("{not json"), "");
}

TEST(LoadConfigTest, MissingFileNamesThePath) {
  try {
    load_config("/nonexistent/dir/cfg.json");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/cfg.json"), std::string::npos);
  }
}

}  // namespace
}  // namespace missbandit
