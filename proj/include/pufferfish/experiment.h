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

#ifndef PUFFERFISH_EXPERIMENT_H_
#define PUFFERFISH_EXPERIMENT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "pufferfish/ingest.h"
#include "pufferfish/prior_model.h"

namespace pufferfish {

enum class Mechanism { kL1, kW1, kRelaxed };

std::string_view MechanismName(Mechanism mechanism);
absl::StatusOr<Mechanism> ParseMechanism(std::string_view name);

// 0.1, 0.2, ..., 1.0.
std::vector<double> DefaultEpsilonGrid();

struct ExperimentConfig {
  std::string name;
  // Exactly one of `instance` and `dataset` is set.
  std::optional<PufferfishInstance> instance;
  std::optional<IngestSpec> dataset;
  std::vector<double> epsilons = DefaultEpsilonGrid();
  std::vector<Mechanism> mechanisms = {Mechanism::kL1, Mechanism::kW1,
                                       Mechanism::kRelaxed};
  double nu = 1e-12;
  // Output file names; empty means "<name>.csv", "<name>.json",
  // "<name>_plot.csv" in the output directory.
  std::string csv_path;
  std::string json_path;
  std::string plot_path;
};

// Grid non-empty, strictly increasing, positive; mechanisms non-empty;
// exactly one instance source.
absl::Status ValidateConfig(const ExperimentConfig& config);

// Relative paths inside the document are resolved against `base_dir`.
absl::StatusOr<ExperimentConfig> ExperimentConfigFromJson(
    const nlohmann::json& doc, const std::string& base_dir);

// "table1" and "table2" are self-contained. "student", "census" and "bank"
// ingest user-supplied UCI files from `data_dir` (student-por.csv,
// adult.data [+ adult.test], bank-full.csv).
absl::StatusOr<ExperimentConfig> BuiltinExperiment(std::string_view name,
                                                   const std::string& data_dir);

struct ResultRow {
  double epsilon = 0.0;
  std::optional<double> theta_l1;
  std::optional<double> theta_w1;
  std::optional<double> theta_relaxed;
  // Largest audited log-likelihood ratio at theta_relaxed.
  std::optional<double> audit_max_log_ratio;

  std::optional<double> Delta() const;
  // 100 (baseline - theta_relaxed) / baseline.
  std::optional<double> ReductionVsW1() const;
  std::optional<double> ReductionVsL1() const;
};

struct ResultTable {
  std::string name;
  std::vector<Mechanism> mechanisms;
  std::vector<ResultRow> rows;
  std::optional<IngestReport> ingestion;
};

// Calibrates every requested mechanism at every grid point and certifies each
// relaxed scale with the exact audit before it is reported.
absl::StatusOr<ResultTable> RunExperiment(const ExperimentConfig& config);

enum class OutputFormat { kCsv, kJson, kPlotData };

// epsilon,theta_l1,theta_w1,theta_relaxed,delta,reduction_vs_w1_pct,
// reduction_vs_l1_pct; cells of mechanisms not requested are empty.
std::string ResultTableToCsv(const ResultTable& table);
nlohmann::json ResultTableToJson(const ResultTable& table);
// Fixed-width text with two decimals, one line per mechanism.
std::string FormatResultTable(const ResultTable& table);

absl::Status EmitOutputs(const ResultTable& table, OutputFormat format,
                         const std::string& path);

// Which stage of an experiment produced a failed status.
enum class FailureStage { kOther, kIngestion, kAudit };
FailureStage GetFailureStage(const absl::Status& status);

}  // namespace pufferfish

#endif  // PUFFERFISH_EXPERIMENT_H_
