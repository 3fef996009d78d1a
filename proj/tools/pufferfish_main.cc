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

// Command-line front end: calibrate, audit, profile, plan, privatize and
// experiment subcommands.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "pufferfish/audit.h"
#include "pufferfish/calibrate.h"
#include "pufferfish/csv.h"
#include "pufferfish/experiment.h"
#include "pufferfish/instance_io.h"
#include "pufferfish/release.h"
#include "pufferfish/transport.h"

namespace pufferfish {
namespace {

constexpr int kExitError = 1;
constexpr int kExitAuditFailure = 2;
constexpr int kExitIngestionFailure = 3;

int Report(const absl::Status& status) {
  std::cerr << "error: " << status << "\n";
  return kExitError;
}

absl::Status WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  out.flush();
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  return absl::OkStatus();
}

absl::StatusOr<SecretPairScenario> PickScenario(
    const PufferfishInstance& instance, size_t index, bool reversed) {
  if (index >= instance.scenarios().size()) {
    return absl::OutOfRangeError(
        absl::StrCat("scenario index ", index, " out of range (",
                     instance.scenarios().size(), " scenarios)"));
  }
  const SecretPairScenario& s = instance.scenarios()[index];
  return reversed ? s.Swapped() : s;
}

struct CalibrateArgs {
  std::string instance;
  double epsilon = 1.0;
  std::string mechanism = "all";
  double nu = 1e-12;
};

int RunCalibrate(const CalibrateArgs& args) {
  auto instance = ReadInstanceFile(args.instance);
  if (!instance.ok()) return Report(instance.status());
  auto result = Calibrate(*instance, args.epsilon, {.nu = args.nu});
  if (!result.ok()) return Report(result.status());

  nlohmann::json doc = CalibrationToJson(*result);
  std::string row = absl::StrFormat("epsilon=%.4g", args.epsilon);
  const bool all = args.mechanism == "all";
  if (all || args.mechanism == "l1") {
    absl::StrAppend(&row, absl::StrFormat(" l1=%.2f", result->theta_l1));
  }
  if (all || args.mechanism == "w1") {
    absl::StrAppend(&row, absl::StrFormat(" w1=%.2f", result->theta_w1));
  }
  if (all || args.mechanism == "relaxed") {
    absl::StrAppend(&row,
                    absl::StrFormat(" relaxed=%.2f", result->theta_relaxed));
  }
  if (all) {
    absl::StrAppend(&row, absl::StrFormat(" delta=%.2f", result->delta));
  }
  if (!all) {
    for (const char* key : {"theta_l1", "theta_w1", "theta_relaxed"}) {
      if (std::string(key) != "theta_" + args.mechanism) doc.erase(key);
    }
    if (args.mechanism != "relaxed") {
      doc.erase("per_scenario");
      doc.erase("delta");
    }
  }
  std::cout << doc.dump(2) << "\n" << row << "\n";
  return 0;
}

struct AuditArgs {
  std::string instance;
  double theta = 1.0;
  double epsilon = 1.0;
};

int RunAudit(const AuditArgs& args) {
  auto instance = ReadInstanceFile(args.instance);
  if (!instance.ok()) return Report(instance.status());
  auto report = VerifyPufferfish(*instance, args.theta, args.epsilon);
  if (!report.ok()) return Report(report.status());
  std::cout << AuditToJson(*report).dump(2) << "\n";
  return report->overall_pass ? 0 : kExitAuditFailure;
}

struct PlanArgs {
  std::string instance;
  size_t scenario = 0;
  bool reversed = false;
  // Profile only.
  std::optional<double> theta;
  double epsilon = 1.0;
  std::string format = "json";
  std::string out;
};

int RunProfile(const PlanArgs& args) {
  auto instance = ReadInstanceFile(args.instance);
  if (!instance.ok()) return Report(instance.status());
  auto scenario = PickScenario(*instance, args.scenario, args.reversed);
  if (!scenario.ok()) return Report(scenario.status());
  double theta;
  if (args.theta) {
    theta = *args.theta;
  } else {
    auto result = Calibrate(*instance, args.epsilon);
    if (!result.ok()) return Report(result.status());
    theta = result->theta_relaxed;
  }
  auto profile =
      ComputeRelaxationProfile(KantorovichPlan(*scenario), theta, args.epsilon);
  if (!profile.ok()) return Report(profile.status());
  const std::string csv = ProfileToCsv(*profile);
  if (args.out.empty()) {
    std::cout << csv;
    return 0;
  }
  const absl::Status written = WriteText(args.out, csv);
  return written.ok() ? 0 : Report(written);
}

int RunPlan(const PlanArgs& args) {
  auto instance = ReadInstanceFile(args.instance);
  if (!instance.ok()) return Report(instance.status());
  auto scenario = PickScenario(*instance, args.scenario, args.reversed);
  if (!scenario.ok()) return Report(scenario.status());
  const TransportPlan plan = KantorovichPlan(*scenario);
  const std::string text =
      args.format == "csv" ? PlanToCsv(plan) : PlanToJson(plan).dump(2) + "\n";
  if (args.out.empty()) {
    std::cout << text;
    return 0;
  }
  const absl::Status written = WriteText(args.out, text);
  return written.ok() ? 0 : Report(written);
}

struct PrivatizeArgs {
  std::string csv;
  std::string column;
  double theta = 1.0;
  uint64_t seed = 0;
  std::string out;
  std::string delimiter = ",";
};

int RunPrivatize(const PrivatizeArgs& args) {
  CsvOptions options;
  options.delimiter = args.delimiter.front();
  auto table = ReadCsv(args.csv, options);
  if (!table.ok()) return Report(table.status());
  const std::optional<size_t> index = table->ColumnIndex(args.column);
  if (!index) {
    return Report(absl::NotFoundError(
        absl::StrCat("column '", args.column, "' not in ", args.csv)));
  }
  std::vector<double> values;
  values.reserve(table->rows.size());
  for (size_t r = 0; r < table->rows.size(); ++r) {
    double v;
    if (!absl::SimpleAtod(table->rows[r][*index], &v)) {
      return Report(absl::InvalidArgumentError(
          absl::StrCat("row ", r + 1, ": '", table->rows[r][*index],
                       "' is not numeric")));
    }
    values.push_back(v);
  }
  auto record = Privatize(values, args.theta, args.seed);
  if (!record.ok()) return Report(record.status());
  for (size_t r = 0; r < table->rows.size(); ++r) {
    table->rows[r][*index] = absl::StrFormat("%.17g", record->released[r]);
  }
  const absl::Status written = WriteCsv(args.out, *table, options.delimiter);
  if (!written.ok()) return Report(written);
  const nlohmann::json summary = {{"theta", record->theta},
                                  {"seed", record->seed},
                                  {"rows", record->released.size()},
                                  {"empirical_mse", record->empirical_mse},
                                  {"theoretical_mse", record->theoretical_mse}};
  std::cout << summary.dump(2) << "\n";
  return 0;
}

struct ExperimentArgs {
  std::string config;
  std::string builtin;
  std::string out_dir = ".";
  std::string data_dir = ".";
};

int RunExperimentCommand(const ExperimentArgs& args) {
  absl::StatusOr<ExperimentConfig> config;
  if (!args.builtin.empty()) {
    config = BuiltinExperiment(args.builtin, args.data_dir);
  } else {
    auto doc = ReadJsonFile(args.config);
    if (!doc.ok()) return Report(doc.status());
    config = ExperimentConfigFromJson(
        *doc, std::filesystem::path(args.config).parent_path().string());
  }
  if (!config.ok()) return Report(config.status());
  auto table = RunExperiment(*config);
  if (!table.ok()) {
    std::cerr << "error: " << table.status() << "\n";
    switch (GetFailureStage(table.status())) {
      case FailureStage::kAudit:
        return kExitAuditFailure;
      case FailureStage::kIngestion:
        return kExitIngestionFailure;
      case FailureStage::kOther:
        return kExitError;
    }
  }

  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  if (ec) {
    return Report(absl::UnavailableError(
        absl::StrCat("cannot create ", args.out_dir, ": ", ec.message())));
  }
  auto in_out_dir = [&](const std::string& path, const std::string& fallback) {
    const std::filesystem::path p(path.empty() ? fallback : path);
    return p.is_absolute() ? p.string()
                           : (std::filesystem::path(args.out_dir) / p).string();
  };
  const std::string& name = config->name;
  const std::vector<std::pair<OutputFormat, std::string>> outputs = {
      {OutputFormat::kCsv, in_out_dir(config->csv_path, name + ".csv")},
      {OutputFormat::kJson, in_out_dir(config->json_path, name + ".json")},
      {OutputFormat::kPlotData,
       in_out_dir(config->plot_path, name + "_plot.csv")},
  };
  for (const auto& [format, path] : outputs) {
    const absl::Status status = EmitOutputs(*table, format, path);
    if (!status.ok()) return Report(status);
  }
  std::cout << FormatResultTable(*table);
  if (table->ingestion) {
    std::cout << "encoding:";
    for (const std::string& value : table->ingestion->encoding) {
      std::cout << " " << value;
    }
    std::cout << "\n";
  }
  for (const auto& [format, path] : outputs) std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace
}  // namespace pufferfish

int main(int argc, char** argv) {
  using namespace pufferfish;
  CLI::App app{"Laplace noise calibration for pufferfish privacy"};
  app.require_subcommand(1);

  CalibrateArgs calibrate;
  CLI::App* calibrate_cmd =
      app.add_subcommand("calibrate", "Noise scale under each mechanism");
  calibrate_cmd->add_option("--instance", calibrate.instance, "Instance JSON")
      ->required()
      ->check(CLI::ExistingFile);
  calibrate_cmd->add_option("--epsilon", calibrate.epsilon, "Privacy budget")
      ->required();
  calibrate_cmd->add_option("--mechanism", calibrate.mechanism)
      ->check(CLI::IsMember({"l1", "w1", "relaxed", "all"}));
  calibrate_cmd->add_option("--nu", calibrate.nu, "Root-finding tolerance");

  AuditArgs audit;
  CLI::App* audit_cmd =
      app.add_subcommand("audit", "Exact check of a noise scale");
  audit_cmd->add_option("--instance", audit.instance)
      ->required()
      ->check(CLI::ExistingFile);
  audit_cmd->add_option("--theta", audit.theta)->required();
  audit_cmd->add_option("--epsilon", audit.epsilon)->required();

  PlanArgs profile;
  CLI::App* profile_cmd = app.add_subcommand(
      "profile", "Per-entry relaxation terms as CSV");
  profile_cmd->add_option("--instance", profile.instance)
      ->required()
      ->check(CLI::ExistingFile);
  profile_cmd->add_option("--theta", profile.theta,
                          "Defaults to the calibrated relaxed scale");
  profile_cmd->add_option("--epsilon", profile.epsilon)->required();
  profile_cmd->add_option("--scenario", profile.scenario);
  profile_cmd->add_flag("--reverse", profile.reversed, "Swap the secret pair");
  profile_cmd->add_option("--out", profile.out, "CSV path (default stdout)");

  PlanArgs plan;
  CLI::App* plan_cmd =
      app.add_subcommand("plan", "Optimal transport plan of a scenario");
  plan_cmd->add_option("--instance", plan.instance)
      ->required()
      ->check(CLI::ExistingFile);
  plan_cmd->add_option("--scenario", plan.scenario);
  plan_cmd->add_flag("--reverse", plan.reversed, "Swap the secret pair");
  plan_cmd->add_option("--format", plan.format)
      ->check(CLI::IsMember({"json", "csv"}));
  plan_cmd->add_option("--out", plan.out);

  PrivatizeArgs privatize;
  CLI::App* privatize_cmd =
      app.add_subcommand("privatize", "Add Laplace noise to a CSV column");
  privatize_cmd->add_option("--csv", privatize.csv)
      ->required()
      ->check(CLI::ExistingFile);
  privatize_cmd->add_option("--column", privatize.column)->required();
  privatize_cmd->add_option("--theta", privatize.theta)->required();
  privatize_cmd->add_option("--seed", privatize.seed)->required();
  privatize_cmd->add_option("--out", privatize.out)->required();
  privatize_cmd->add_option("--delimiter", privatize.delimiter)
      ->check([](const std::string& d) {
        return d.size() == 1 ? std::string() : "delimiter must be one char";
      });

  ExperimentArgs experiment;
  CLI::App* experiment_cmd =
      app.add_subcommand("experiment", "Run a calibration sweep");
  auto* config_opt =
      experiment_cmd->add_option("--config", experiment.config)
          ->check(CLI::ExistingFile);
  auto* builtin_opt =
      experiment_cmd->add_option("--builtin", experiment.builtin)
          ->check(CLI::IsMember({"table1", "table2", "student", "census",
                                 "bank"}));
  config_opt->excludes(builtin_opt);
  experiment_cmd->add_option("--out-dir", experiment.out_dir);
  experiment_cmd->add_option("--data-dir", experiment.data_dir,
                             "Directory holding UCI files");

  CLI11_PARSE(app, argc, argv);

  if (*calibrate_cmd) return RunCalibrate(calibrate);
  if (*audit_cmd) return RunAudit(audit);
  if (*profile_cmd) return RunProfile(profile);
  if (*plan_cmd) return RunPlan(plan);
  if (*privatize_cmd) return RunPrivatize(privatize);
  if (experiment.config.empty() && experiment.builtin.empty()) {
    std::cerr << "experiment: one of --config or --builtin is required\n";
    return kExitError;
  }
  return RunExperimentCommand(experiment);
}
