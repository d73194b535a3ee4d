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

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "missbandit/errors.h"

namespace missbandit {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 4> kPresets{"scenario1", "scenario2", "scenario3",
                                                   "counterexample"};

std::string joined(const std::vector<std::string>& names) {
  std::string out;
  for (const std::string& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(where + ": unknown key \"" + key + "\"");
    }
  }
}

template <typename T>
T field(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": key \"" + key + "\" has the wrong type");
  }
}

std::size_t count_field(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(where + ": key \"" + key + "\" must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

ArmSpec gaussian(double theta, double q) {
  ArmSpec a;
  a.theta = theta;
  a.q = q;
  return a;
}

PolicyEntry entry(PolicyKind kind) {
  PolicyEntry e;
  e.spec.kind = kind;
  return e;
}

ArmSpec parse_arm(const json& j, const std::string& where) {
  reject_unknown(j, {"kind", "theta", "q", "sigma_r", "sigma_c", "beta"}, where);
  ArmSpec a;
  if (j.contains("kind")) {
    const auto kind = field<std::string>(j, "kind", where);
    if (kind == "gaussian") {
      a.kind = ArmKind::kGaussian;
    } else if (kind == "counterexample-dependent") {
      a.kind = ArmKind::kCounterexampleDependent;
    } else if (kind == "counterexample-independent") {
      a.kind = ArmKind::kCounterexampleIndependent;
    } else {
      throw ConfigError(where + ": key \"kind\" has unknown value \"" + kind + "\"");
    }
  }
  if (j.contains("theta")) a.theta = field<double>(j, "theta", where);
  if (j.contains("q")) a.q = field<double>(j, "q", where);
  if (j.contains("sigma_r")) a.sigma_r = field<double>(j, "sigma_r", where);
  if (j.contains("sigma_c")) a.sigma_c = field<double>(j, "sigma_c", where);
  if (j.contains("beta")) a.beta = field<std::vector<double>>(j, "beta", where);
  return a;
}

PolicyEntry parse_policy(const json& j, const std::string& where) {
  reject_unknown(j,
                 {"kind", "delta", "lambda", "k_bar", "sigma_bar", "q_low", "q_lambda", "bonus",
                  "split", "auxiliary_size"},
                 where);
  if (!j.contains("kind")) throw ConfigError(where + ": missing key \"kind\"");
  const auto name = field<std::string>(j, "kind", where);
  const auto kind = parse_policy_kind(name);
  if (!kind) throw ConfigError(where + ": key \"kind\" has unknown value \"" + name + "\"");
  PolicyEntry e = entry(*kind);
  PolicyParams& p = e.spec.params;
  if (j.contains("delta")) p.delta = field<double>(j, "delta", where);
  if (j.contains("lambda")) p.lambda = field<double>(j, "lambda", where);
  if (j.contains("k_bar")) p.k_bar = field<double>(j, "k_bar", where);
  if (j.contains("sigma_bar")) e.sigma_bar = field<double>(j, "sigma_bar", where);
  if (j.contains("q_low")) e.q_low = field<double>(j, "q_low", where);
  if (j.contains("q_lambda")) {
    const auto mode = field<std::string>(j, "q_lambda", where);
    if (mode == "current") {
      p.q_lambda_mode = QLambdaMode::kCurrentRatio;
    } else if (mode == "running-min") {
      p.q_lambda_mode = QLambdaMode::kRunningMin;
    } else {
      throw ConfigError(where + ": key \"q_lambda\" has unknown value \"" + mode + "\"");
    }
  }
  if (j.contains("bonus")) {
    const json& b = j.at("bonus");
    if (b.is_string() && b.get<std::string>() == "oracle-err") {
      p.bonus_mode = OracleErr{};
    } else if (b.is_object()) {
      const std::string bw = where + ".bonus";
      reject_unknown(b, {"c_q", "alpha_q", "c_theta", "alpha_theta", "c_cross", "alpha"}, bw);
      RateBound rb;
      if (b.contains("c_q")) rb.c_q = field<double>(b, "c_q", bw);
      if (b.contains("alpha_q")) rb.alpha_q = field<double>(b, "alpha_q", bw);
      if (b.contains("c_theta")) rb.c_theta = field<double>(b, "c_theta", bw);
      if (b.contains("alpha_theta")) rb.alpha_theta = field<double>(b, "alpha_theta", bw);
      if (b.contains("c_cross")) rb.c_cross = field<double>(b, "c_cross", bw);
      if (b.contains("alpha")) rb.alpha = field<double>(b, "alpha", bw);
      p.bonus_mode = rb;
    } else {
      throw ConfigError(where +
                        ": key \"bonus\" must be \"oracle-err\" or a rate-bound object");
    }
  }
  if (j.contains("split")) {
    const auto split = field<std::string>(j, "split", where);
    if (split == "M1") {
      e.spec.split = SplitMode::kDifferentBatch;
    } else if (split == "M2") {
      e.spec.split = SplitMode::kLeaveOneOut;
    } else {
      throw ConfigError(where + ": key \"split\" has unknown value \"" + split + "\"");
    }
  }
  if (j.contains("auxiliary_size")) {
    e.spec.auxiliary_size = count_field(j, "auxiliary_size", where);
  }
  return e;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (arms.empty()) throw ConfigError("config: \"arms\" is empty");
  if (policies.empty()) throw ConfigError("config: \"policies\" is empty");
  if (dim == 0) throw ConfigError("config: \"dim\" must be positive");
  if (horizon < arms.size()) throw ConfigError("config: \"horizon\" is smaller than the arm count");
  if (replications == 0) throw ConfigError("config: \"replications\" must be positive");
  if (log_stride == 0) throw ConfigError("config: \"log_stride\" must be positive");
  if (correlation_target) {
    if (!(*correlation_target >= 0.0 && *correlation_target < 1.0)) {
      throw ConfigError("config: \"correlation_target\" must lie in [0, 1)");
    }
    if (calibration_arm >= arms.size() || arms[calibration_arm].kind != ArmKind::kGaussian) {
      throw ConfigError("config: \"calibration_arm\" must name a Gaussian arm");
    }
  }
  for (const ArmSpec& a : arms) {
    if (a.kind != ArmKind::kGaussian) continue;
    if (!std::isfinite(a.theta)) throw ConfigError("config: arm \"theta\" must be finite");
    if (!(a.q > 0.0 && a.q <= 1.0)) throw ConfigError("config: arm \"q\" must lie in (0, 1]");
    if (!(a.sigma_r > 0.0 && a.sigma_c > 0.0)) {
      throw ConfigError("config: arm \"sigma_r\" and \"sigma_c\" must be positive");
    }
    if (!a.beta.empty() && a.beta.size() != dim) {
      throw ConfigError("config: arm \"beta\" length differs from \"dim\"");
    }
  }
}

std::vector<std::string> preset_names() { return {kPresets.begin(), kPresets.end()}; }

ScenarioConfig preset(std::string_view name) {
  ScenarioConfig c;
  c.name = std::string(name);
  if (name == "scenario1" || name == "scenario2") {
    const double q1 = name == "scenario1" ? 1.0 : 0.25;
    const double q2 = name == "scenario1" ? 1.0 : 0.9;
    c.arms = {gaussian(0.5, q1), gaussian(1.0, q2)};
    c.policies = {entry(PolicyKind::kUcb), entry(PolicyKind::kOracleUcb)};
    return c;
  }
  if (name == "scenario3") {
    c.arms = {gaussian(0.5, 0.2), gaussian(1.0, 0.9)};
    c.correlation_target = 0.2;
    c.calibration_arm = 1;
    c.policies = {entry(PolicyKind::kUcb), entry(PolicyKind::kOdrUcb),
                  entry(PolicyKind::kDrUcb), entry(PolicyKind::kOracleDr)};
    return c;
  }
  if (name == "counterexample") {
    ArmSpec dependent;
    dependent.kind = ArmKind::kCounterexampleDependent;
    ArmSpec independent;
    independent.kind = ArmKind::kCounterexampleIndependent;
    c.arms = {dependent, independent};
    c.horizon = 2000;
    c.policies = {entry(PolicyKind::kUcb), entry(PolicyKind::kOdrUcb)};
    return c;
  }
  throw ConfigError("unknown preset \"" + std::string(name) +
                    "\"; known presets: " + joined(preset_names()));
}

ScenarioConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  const std::string where = "config";
  reject_unknown(doc,
                 {"preset", "name", "arms", "dim", "correlation_target", "calibration_arm",
                  "policies", "horizon", "replications", "base_seed", "threads", "output_dir",
                  "dense_rounds", "log_stride", "record_trace"},
                 where);
  ScenarioConfig c;
  if (doc.contains("preset")) {
    c = preset(field<std::string>(doc, "preset", where));
  } else {
    c.name = "custom";
  }
  if (doc.contains("name")) c.name = field<std::string>(doc, "name", where);
  if (doc.contains("dim")) c.dim = count_field(doc, "dim", where);
  if (doc.contains("arms")) {
    const json& arms = doc.at("arms");
    if (!arms.is_array()) throw ConfigError("config: key \"arms\" must be an array");
    c.arms.clear();
    for (std::size_t i = 0; i < arms.size(); ++i) {
      c.arms.push_back(parse_arm(arms[i], "config.arms[" + std::to_string(i) + "]"));
    }
  }
  if (doc.contains("correlation_target")) {
    if (doc.at("correlation_target").is_null()) {
      c.correlation_target.reset();
    } else {
      c.correlation_target = field<double>(doc, "correlation_target", where);
    }
  }
  if (doc.contains("calibration_arm")) {
    c.calibration_arm = count_field(doc, "calibration_arm", where);
  }
  if (doc.contains("policies")) {
    const json& ps = doc.at("policies");
    if (!ps.is_array()) throw ConfigError("config: key \"policies\" must be an array");
    c.policies.clear();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      c.policies.push_back(parse_policy(ps[i], "config.policies[" + std::to_string(i) + "]"));
    }
  }
  if (doc.contains("horizon")) c.horizon = count_field(doc, "horizon", where);
  if (doc.contains("replications")) c.replications = count_field(doc, "replications", where);
  if (doc.contains("base_seed")) c.base_seed = count_field(doc, "base_seed", where);
  if (doc.contains("threads")) c.threads = count_field(doc, "threads", where);
  if (doc.contains("output_dir")) c.output_dir = field<std::string>(doc, "output_dir", where);
  if (doc.contains("dense_rounds")) c.dense_rounds = count_field(doc, "dense_rounds", where);
  if (doc.contains("log_stride")) c.log_stride = count_field(doc, "log_stride", where);
  if (doc.contains("record_trace")) c.record_trace = field<bool>(doc, "record_trace", where);
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file \"" + path + "\"");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::vector<double> calibrated_beta(const ScenarioConfig& config) {
  if (!config.correlation_target) return {};
  const ArmSpec& ref = config.arms.at(config.calibration_arm);
  return solve_beta_for_corr(*config.correlation_target, ref.sigma_r, ref.sigma_c, ref.q,
                             config.dim);
}

std::shared_ptr<const BanditInstance> build_bandit(const ScenarioConfig& config) {
  config.validate();
  const std::vector<double> shared = calibrated_beta(config);
  std::vector<ArmModel> arms;
  for (const ArmSpec& a : config.arms) {
    switch (a.kind) {
      case ArmKind::kGaussian: {
        std::vector<double> beta = a.beta;
        if (!shared.empty()) beta = shared;
        if (beta.empty()) beta.assign(config.dim, 0.0);
        try {
          arms.emplace_back(GaussianLinearArm::Make(a.theta, beta, a.sigma_r, a.sigma_c, a.q));
        } catch (const DomainError& e) {
          throw ConfigError(std::string("config: invalid arm: ") + e.what());
        }
        break;
      }
      case ArmKind::kCounterexampleDependent:
        arms.emplace_back(UniformCounterexampleArm{CounterexampleVariant::kDependentArm1});
        break;
      case ArmKind::kCounterexampleIndependent:
        arms.emplace_back(UniformCounterexampleArm{CounterexampleVariant::kIndependentArm2});
        break;
    }
  }
  return std::make_shared<const BanditInstance>(std::move(arms));
}

std::vector<PolicySpec> resolve_policies(const ScenarioConfig& config,
                                         const BanditInstance& bandit) {
  std::vector<PolicySpec> out;
  for (const PolicyEntry& e : config.policies) {
    PolicySpec spec = e.spec;
    const bool marginal =
        spec.kind == PolicyKind::kUcb || spec.kind == PolicyKind::kOracleUcb;
    spec.params.sigma_bar = e.sigma_bar.value_or(
        marginal ? bandit.sigma_bar_marginal() : bandit.sigma_bar_conditional());
    spec.params.q_low = e.q_low.value_or(bandit.q_min());
    spec.params.horizon = config.horizon;
    spec.params.num_arms = bandit.num_arms();
    out.push_back(spec);
  }
  return out;
}

}  // namespace missbandit
