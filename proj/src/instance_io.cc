// Copyright 2026 The Pufferfish Calibration Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pufferfish/instance_io.h"

#include <cmath>
#include <fstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "pufferfish/status_macros.h"

namespace pufferfish {
namespace {

using nlohmann::json;

absl::StatusOr<std::vector<double>> ReadPmf(const json& scenario,
                                            const char* key) {
  if (!scenario.contains(key) || !scenario[key].is_array()) {
    return absl::InvalidArgumentError(
        absl::StrCat("scenario is missing array '", key, "'"));
  }
  std::vector<double> pmf;
  for (const json& v : scenario[key]) {
    if (!v.is_number()) {
      return absl::InvalidArgumentError(
          absl::StrCat("'", key, "' must contain only numbers"));
    }
    pmf.push_back(v.get<double>());
  }
  return pmf;
}

std::string StringOr(const json& obj, const char* key, std::string fallback) {
  if (obj.contains(key) && obj[key].is_string()) {
    return obj[key].get<std::string>();
  }
  return fallback;
}

json FiniteOrMarker(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

json DirectionToJson(const DirectionCalibration& dir) {
  json columns = json::array();
  for (const ColumnRoot& root : dir.columns) {
    json c = {{"x_prime", root.x_prime},
              {"degenerate", root.degenerate},
              {"theta_root", root.theta_root}};
    if (!root.degenerate) {
      c["bracket_low"] = root.bracket_low;
      c["bracket_high"] = root.bracket_high;
      c["phi"] = root.phi;
      c["iterations"] = root.iterations;
      c["converged"] = root.converged;
    }
    columns.push_back(std::move(c));
  }
  return {{"reversed", dir.reversed},
          {"plan_distance", dir.plan_distance},
          {"columns", std::move(columns)}};
}

}  // namespace

absl::StatusOr<PufferfishInstance> InstanceFromJson(const json& doc) {
  if (!doc.is_object() || !doc.contains("scenarios") ||
      !doc["scenarios"].is_array()) {
    return absl::InvalidArgumentError(
        "instance document needs a 'scenarios' array");
  }
  std::vector<SecretPairScenario> scenarios;
  size_t index = 0;
  for (const json& s : doc["scenarios"]) {
    if (!s.is_object()) {
      return absl::InvalidArgumentError("each scenario must be an object");
    }
    ASSIGN_OR_RETURN(std::vector<double> p_i, ReadPmf(s, "p_i"));
    ASSIGN_OR_RETURN(std::vector<double> p_j, ReadPmf(s, "p_j"));
    ASSIGN_OR_RETURN(ConditionalPrior prior_i,
                     ConditionalPrior::Create(std::move(p_i)));
    ASSIGN_OR_RETURN(ConditionalPrior prior_j,
                     ConditionalPrior::Create(std::move(p_j)));
    auto scenario = SecretPairScenario::Create(
        StringOr(s, "rho", absl::StrCat("rho", index)),
        StringOr(s, "s_i", "s_i"), StringOr(s, "s_j", "s_j"),
        std::move(prior_i), std::move(prior_j));
    if (!scenario.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "scenario ", index, ": ", scenario.status().message()));
    }
    scenarios.push_back(*std::move(scenario));
    ++index;
  }
  return PufferfishInstance::Create(std::move(scenarios));
}

absl::StatusOr<json> ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat("invalid JSON in ", path));
  }
  return doc;
}

absl::StatusOr<PufferfishInstance> ReadInstanceFile(const std::string& path) {
  ASSIGN_OR_RETURN(json doc, ReadJsonFile(path));
  return InstanceFromJson(doc);
}

json InstanceToJson(const PufferfishInstance& instance) {
  json scenarios = json::array();
  for (const SecretPairScenario& s : instance.scenarios()) {
    scenarios.push_back({{"rho", s.rho_id()},
                         {"s_i", s.s_i_label()},
                         {"s_j", s.s_j_label()},
                         {"p_i", s.prior_i().pmf()},
                         {"p_j", s.prior_j().pmf()}});
  }
  return {{"scenarios", std::move(scenarios)}};
}

json CalibrationToJson(const CalibrationResult& result) {
  json scenarios = json::array();
  for (const ScenarioCalibration& s : result.per_scenario) {
    json entry = {{"rho", s.rho_id},
                  {"s_i", s.s_i_label},
                  {"s_j", s.s_j_label},
                  {"alphabet_size", s.alphabet_size},
                  {"plan_distance", s.plan_distance},
                  {"theta_relaxed", s.theta_relaxed},
                  {"forward", DirectionToJson(s.forward)},
                  {"reverse", DirectionToJson(s.reverse)}};
    if (s.theta_relaxed > 0.0) {
      entry["binding"] = {{"reversed", s.binding_reversed},
                          {"x_prime", s.binding_column}};
    }
    scenarios.push_back(std::move(entry));
  }
  return {{"epsilon", result.epsilon},
          {"nu", result.nu},
          {"theta_l1", result.theta_l1},
          {"theta_w1", result.theta_w1},
          {"theta_relaxed", result.theta_relaxed},
          {"delta", result.delta},
          {"per_scenario", std::move(scenarios)}};
}

json AuditToJson(const AuditReport& report) {
  json scenarios = json::array();
  for (const ScenarioAudit& a : report.per_scenario) {
    scenarios.push_back({{"rho", a.rho_id},
                         {"max_log_ratio", a.max_log_ratio},
                         {"argmax_y", FiniteOrMarker(a.argmax_y)},
                         {"pass", a.pass}});
  }
  return {{"epsilon", report.epsilon},
          {"theta", report.theta},
          {"per_scenario", std::move(scenarios)},
          {"overall_pass", report.overall_pass}};
}

}  // namespace pufferfish
