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

#include "pufferfish/experiment.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "pufferfish/audit.h"
#include "pufferfish/calibrate.h"
#include "pufferfish/instance_io.h"
#include "pufferfish/status_macros.h"

namespace pufferfish {
namespace {

using nlohmann::json;

constexpr char kStagePayload[] = "type.pufferfish/failure_stage";

absl::Status Tagged(absl::Status status, std::string_view stage) {
  status.SetPayload(kStagePayload, absl::Cord(std::string(stage)));
  return status;
}

std::string Resolve(const std::string& base_dir, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

absl::StatusOr<IngestSpec> IngestSpecFromJson(const json& d,
                                              const std::string& base_dir) {
  IngestSpec spec;
  if (d.contains("path")) spec.paths.push_back(Resolve(base_dir, d["path"]));
  if (d.contains("paths")) {
    for (const json& p : d["paths"]) spec.paths.push_back(Resolve(base_dir, p));
  }
  if (!d.contains("sensitive") || !d.contains("public") ||
      !d.contains("secret_pair") || !d["secret_pair"].is_array() ||
      d["secret_pair"].size() != 2) {
    return absl::InvalidArgumentError(
        "dataset needs 'sensitive', 'public' and a two-element 'secret_pair'");
  }
  spec.sensitive_column = d["sensitive"].get<std::string>();
  spec.public_column = d["public"].get<std::string>();
  spec.secret_i = d["secret_pair"][0].get<std::string>();
  spec.secret_j = d["secret_pair"][1].get<std::string>();
  if (d.contains("rho")) spec.rho_id = d["rho"].get<std::string>();
  if (d.contains("encoding")) {
    const json& e = d["encoding"];
    if (e.is_array()) {
      spec.encoding = e.get<std::vector<std::string>>();
    } else if (e.is_object()) {
      std::map<int, std::string> by_code;
      for (auto it = e.begin(); it != e.end(); ++it) {
        if (!by_code.emplace(it.value().get<int>(), it.key()).second) {
          return absl::InvalidArgumentError(
              absl::StrCat("encoding code ", it.value().dump(), " repeated"));
        }
      }
      int expected = 0;
      for (const auto& [code, category] : by_code) {
        if (code != expected++) {
          return absl::InvalidArgumentError(
              "encoding codes must be exactly 0, 1, ..., n");
        }
        spec.encoding.push_back(category);
      }
    } else {
      return absl::InvalidArgumentError(
          "encoding must be a list or a category->code object");
    }
  }
  if (d.contains("bins")) spec.bins = d["bins"].get<int>();
  if (d.contains("delimiter")) {
    const std::string delim = d["delimiter"].get<std::string>();
    if (delim.size() != 1) {
      return absl::InvalidArgumentError("delimiter must be one character");
    }
    spec.csv.delimiter = delim[0];
  }
  if (d.contains("has_header")) spec.csv.has_header = d["has_header"];
  if (d.contains("columns")) {
    spec.csv.column_names = d["columns"].get<std::vector<std::string>>();
  }
  if (d.contains("comment")) {
    const std::string c = d["comment"].get<std::string>();
    if (c.size() != 1) {
      return absl::InvalidArgumentError("comment must be one character");
    }
    spec.csv.comment = c[0];
  }
  return spec;
}

std::string Cell(const std::optional<double>& v) {
  return v ? absl::StrFormat("%.17g", *v) : std::string();
}

json JsonOrNull(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

bool Requested(const ResultTable& table, Mechanism m) {
  return std::find(table.mechanisms.begin(), table.mechanisms.end(), m) !=
         table.mechanisms.end();
}

std::optional<double> Reduction(const std::optional<double>& baseline,
                                const std::optional<double>& relaxed) {
  if (!baseline || !relaxed || *baseline <= 0.0) return std::nullopt;
  return 100.0 * (*baseline - *relaxed) / *baseline;
}

bool PriorsIdentical(const PufferfishInstance& instance) {
  for (const SecretPairScenario& s : instance.scenarios()) {
    if (!std::equal(s.prior_i().pmf().begin(), s.prior_i().pmf().end(),
                    s.prior_j().pmf().begin())) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string_view MechanismName(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kL1:
      return "l1";
    case Mechanism::kW1:
      return "w1";
    case Mechanism::kRelaxed:
      return "relaxed";
  }
  return "unknown";
}

absl::StatusOr<Mechanism> ParseMechanism(std::string_view name) {
  if (name == "l1") return Mechanism::kL1;
  if (name == "w1") return Mechanism::kW1;
  if (name == "relaxed") return Mechanism::kRelaxed;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mechanism '", std::string(name), "' (l1|w1|relaxed)"));
}

std::vector<double> DefaultEpsilonGrid() {
  std::vector<double> grid;
  for (int k = 1; k <= 10; ++k) grid.push_back(k / 10.0);
  return grid;
}

absl::Status ValidateConfig(const ExperimentConfig& config) {
  if (config.instance.has_value() == config.dataset.has_value()) {
    return absl::InvalidArgumentError(
        "experiment needs exactly one of an inline instance or a dataset");
  }
  if (config.mechanisms.empty()) {
    return absl::InvalidArgumentError("experiment requests no mechanisms");
  }
  if (config.epsilons.empty()) {
    return absl::InvalidArgumentError("epsilon grid is empty");
  }
  for (size_t k = 0; k < config.epsilons.size(); ++k) {
    const double e = config.epsilons[k];
    if (!(e > 0.0) || !std::isfinite(e)) {
      return absl::InvalidArgumentError(
          absl::StrCat("epsilon grid entry ", e, " is not positive"));
    }
    if (k > 0 && !(e > config.epsilons[k - 1])) {
      return absl::InvalidArgumentError(
          "epsilon grid must be strictly increasing");
    }
  }
  if (!(config.nu > 0.0)) {
    return absl::InvalidArgumentError("nu must be positive");
  }
  return absl::OkStatus();
}

absl::StatusOr<ExperimentConfig> ExperimentConfigFromJson(
    const json& doc, const std::string& base_dir) {
  if (!doc.is_object()) {
    return absl::InvalidArgumentError("experiment config must be an object");
  }
  ExperimentConfig config;
  try {
    config.name = doc.value("name", std::string("experiment"));
    if (doc.contains("instance")) {
      ASSIGN_OR_RETURN(config.instance, InstanceFromJson(doc["instance"]));
    }
    if (doc.contains("instance_file")) {
      if (config.instance) {
        return absl::InvalidArgumentError(
            "give either 'instance' or 'instance_file', not both");
      }
      ASSIGN_OR_RETURN(config.instance,
                       ReadInstanceFile(Resolve(base_dir, doc["instance_file"])));
    }
    if (doc.contains("dataset")) {
      ASSIGN_OR_RETURN(config.dataset,
                       IngestSpecFromJson(doc["dataset"], base_dir));
    }
    if (doc.contains("epsilons")) {
      config.epsilons = doc["epsilons"].get<std::vector<double>>();
    }
    if (doc.contains("mechanisms")) {
      config.mechanisms.clear();
      for (const json& m : doc["mechanisms"]) {
        ASSIGN_OR_RETURN(Mechanism mech, ParseMechanism(m.get<std::string>()));
        config.mechanisms.push_back(mech);
      }
    }
    config.nu = doc.value("nu", config.nu);
    if (doc.contains("outputs")) {
      const json& o = doc["outputs"];
      config.csv_path = o.value("csv", std::string());
      config.json_path = o.value("json", std::string());
      config.plot_path = o.value("plotdata", std::string());
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed experiment config: ", e.what()));
  }
  RETURN_IF_ERROR(ValidateConfig(config));
  return config;
}

absl::StatusOr<ExperimentConfig> BuiltinExperiment(
    std::string_view name, const std::string& data_dir) {
  ExperimentConfig config;
  config.name = std::string(name);
  if (name == "table1") {
    ASSIGN_OR_RETURN(config.instance, MakeInstance({0.52, 0.48}, {0.5, 0.5}));
    return config;
  }
  if (name == "table2") {
    ASSIGN_OR_RETURN(config.instance,
                     MakeInstance({0.50001, 0.0, 0.00001, 0.49998},
                                  {0.49996, 0.00001, 0.0, 0.50003}));
    return config;
  }
  IngestSpec spec;
  auto in_dir = [&](const char* file) {
    return (std::filesystem::path(data_dir) / file).string();
  };
  if (name == "student") {
    spec.paths = {in_dir("student-por.csv")};
    spec.sensitive_column = "higher";
    spec.public_column = "romantic";
    spec.secret_i = "yes";
    spec.secret_j = "no";
    spec.encoding = {"no", "yes"};
    spec.csv.delimiter = ';';
  } else if (name == "census") {
    spec.paths = {in_dir("adult.data")};
    if (std::filesystem::exists(in_dir("adult.test"))) {
      spec.paths.push_back(in_dir("adult.test"));
    }
    spec.sensitive_column = "marital-status";
    spec.public_column = "workclass";
    spec.secret_i = "Married-civ-spouse";
    spec.secret_j = "Never-married";
    spec.csv.has_header = false;
    spec.csv.comment = '|';
    spec.csv.column_names = {
        "age",          "workclass",      "fnlwgt",        "education",
        "education-num", "marital-status", "occupation",    "relationship",
        "race",         "sex",            "capital-gain",  "capital-loss",
        "hours-per-week", "native-country", "income"};
  } else if (name == "bank") {
    spec.paths = {in_dir("bank-full.csv")};
    spec.sensitive_column = "loan";
    spec.public_column = "marital";
    spec.secret_i = "yes";
    spec.secret_j = "no";
    spec.csv.delimiter = ';';
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        "unknown builtin experiment '", std::string(name),
        "' (table1|table2|student|census|bank)"));
  }
  config.dataset = std::move(spec);
  return config;
}

std::optional<double> ResultRow::Delta() const {
  if (!theta_w1 || !theta_relaxed) return std::nullopt;
  return *theta_w1 - *theta_relaxed;
}

std::optional<double> ResultRow::ReductionVsW1() const {
  return Reduction(theta_w1, theta_relaxed);
}

std::optional<double> ResultRow::ReductionVsL1() const {
  return Reduction(theta_l1, theta_relaxed);
}

absl::StatusOr<ResultTable> RunExperiment(const ExperimentConfig& config) {
  RETURN_IF_ERROR(ValidateConfig(config));
  ResultTable table;
  table.name = config.name;
  table.mechanisms = config.mechanisms;

  std::optional<PufferfishInstance> instance = config.instance;
  if (config.dataset) {
    auto report = IngestCsv(*config.dataset);
    if (!report.ok()) {
      return Tagged(absl::Status(report.status().code(),
                                 absl::StrCat("ingesting ", config.name, ": ",
                                              report.status().message())),
                    "ingestion");
    }
    std::vector<SecretPairScenario> scenarios = {report->scenario};
    ASSIGN_OR_RETURN(instance, PufferfishInstance::Create(std::move(scenarios)));
    table.ingestion = *std::move(report);
  }

  const bool want_relaxed = Requested(table, Mechanism::kRelaxed);
  for (double epsilon : config.epsilons) {
    auto result = Calibrate(*instance, epsilon, {.nu = config.nu});
    if (!result.ok()) {
      return absl::Status(
          result.status().code(),
          absl::StrCat(config.name, " at epsilon=", epsilon, ": ",
                       result.status().message()));
    }
    ResultRow row;
    row.epsilon = epsilon;
    if (Requested(table, Mechanism::kL1)) row.theta_l1 = result->theta_l1;
    if (Requested(table, Mechanism::kW1)) row.theta_w1 = result->theta_w1;
    if (want_relaxed) {
      row.theta_relaxed = result->theta_relaxed;
      if (result->theta_relaxed > 0.0) {
        ASSIGN_OR_RETURN(AuditReport audit,
                         VerifyPufferfish(*instance, result->theta_relaxed,
                                          epsilon));
        double worst = 0.0;
        for (const ScenarioAudit& s : audit.per_scenario) {
          worst = std::max(worst, s.max_log_ratio);
        }
        row.audit_max_log_ratio = worst;
        if (!audit.overall_pass) {
          return Tagged(
              absl::InternalError(absl::StrFormat(
                  "AuditFailure: %s at epsilon=%g: theta=%.17g gives log "
                  "ratio %.17g > epsilon",
                  config.name, epsilon, result->theta_relaxed, worst)),
              "audit");
        }
      } else if (!PriorsIdentical(*instance)) {
        return Tagged(absl::InternalError(absl::StrCat(
                          "AuditFailure: ", config.name,
                          " calibrated zero noise for distinct priors")),
                      "audit");
      } else {
        row.audit_max_log_ratio = 0.0;
      }
    }
    table.rows.push_back(row);
  }
  return table;
}

std::string ResultTableToCsv(const ResultTable& table) {
  std::string out =
      "epsilon,theta_l1,theta_w1,theta_relaxed,delta,reduction_vs_w1_pct,"
      "reduction_vs_l1_pct\n";
  for (const ResultRow& row : table.rows) {
    absl::StrAppend(&out, absl::StrFormat("%.17g", row.epsilon), ",",
                    Cell(row.theta_l1), ",", Cell(row.theta_w1), ",",
                    Cell(row.theta_relaxed), ",", Cell(row.Delta()), ",",
                    Cell(row.ReductionVsW1()), ",", Cell(row.ReductionVsL1()),
                    "\n");
  }
  return out;
}

json ResultTableToJson(const ResultTable& table) {
  json mechanisms = json::array();
  for (Mechanism m : table.mechanisms) mechanisms.push_back(MechanismName(m));
  json rows = json::array();
  for (const ResultRow& row : table.rows) {
    rows.push_back({{"epsilon", row.epsilon},
                    {"theta_l1", JsonOrNull(row.theta_l1)},
                    {"theta_w1", JsonOrNull(row.theta_w1)},
                    {"theta_relaxed", JsonOrNull(row.theta_relaxed)},
                    {"delta", JsonOrNull(row.Delta())},
                    {"reduction_vs_w1_pct", JsonOrNull(row.ReductionVsW1())},
                    {"reduction_vs_l1_pct", JsonOrNull(row.ReductionVsL1())},
                    {"audit_max_log_ratio",
                     JsonOrNull(row.audit_max_log_ratio)}});
  }
  json doc = {{"name", table.name},
              {"mechanisms", std::move(mechanisms)},
              {"rows", std::move(rows)}};
  if (table.ingestion) {
    const IngestReport& r = *table.ingestion;
    doc["ingestion"] = {{"encoding", r.encoding},
                        {"counts_i", r.counts_i},
                        {"counts_j", r.counts_j},
                        {"rows_total", r.rows_total},
                        {"rows_dropped_missing", r.rows_dropped_missing},
                        {"rows_other_secret", r.rows_other_secret},
                        {"instance", InstanceToJson(*PufferfishInstance::Create(
                                         {r.scenario}))}};
  }
  return doc;
}

std::string FormatResultTable(const ResultTable& table) {
  std::string out = absl::StrFormat("%-10s", table.name);
  for (const ResultRow& row : table.rows) {
    absl::StrAppend(&out, absl::StrFormat(" %8s",
                                          absl::StrFormat("eps=%.2f", row.epsilon)));
  }
  out += "\n";
  auto line = [&](std::string_view label, auto getter) {
    absl::StrAppend(&out, absl::StrFormat("%-10s", std::string(label)));
    for (const ResultRow& row : table.rows) {
      const std::optional<double> v = getter(row);
      absl::StrAppend(&out, v ? absl::StrFormat(" %8.2f", *v)
                              : absl::StrFormat(" %8s", "-"));
    }
    out += "\n";
  };
  for (Mechanism m : table.mechanisms) {
    switch (m) {
      case Mechanism::kL1:
        line("l1", [](const ResultRow& r) { return r.theta_l1; });
        break;
      case Mechanism::kW1:
        line("w1", [](const ResultRow& r) { return r.theta_w1; });
        break;
      case Mechanism::kRelaxed:
        line("relaxed", [](const ResultRow& r) { return r.theta_relaxed; });
        break;
    }
  }
  return out;
}

absl::Status EmitOutputs(const ResultTable& table, OutputFormat format,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    return absl::UnavailableError(absl::StrCat("cannot write ", path));
  }
  switch (format) {
    case OutputFormat::kCsv:
    case OutputFormat::kPlotData:
      out << ResultTableToCsv(table);
      break;
    case OutputFormat::kJson:
      out << ResultTableToJson(table).dump(2) << "\n";
      break;
  }
  out.flush();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

FailureStage GetFailureStage(const absl::Status& status) {
  const auto stage = status.GetPayload(kStagePayload);
  if (!stage) return FailureStage::kOther;
  if (*stage == "ingestion") return FailureStage::kIngestion;
  if (*stage == "audit") return FailureStage::kAudit;
  return FailureStage::kOther;
}

}  // namespace pufferfish
