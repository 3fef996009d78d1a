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

#ifndef PUFFERFISH_INGEST_H_
#define PUFFERFISH_INGEST_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "pufferfish/csv.h"
#include "pufferfish/prior_model.h"

namespace pufferfish {

// Describes how to derive a secret-pair scenario from a table: the public
// column X is tabulated separately for rows carrying each secret value.
struct IngestSpec {
  // One or more files with identical layout; their rows are concatenated.
  std::vector<std::string> paths;
  std::string sensitive_column;
  std::string public_column;
  std::string secret_i;
  std::string secret_j;
  // Ordered categories of the public column; category k is encoded as k.
  // When empty (and no bins), observed values are sorted lexicographically.
  std::vector<std::string> encoding;
  // Uniform-width bin count for a numeric public column.
  std::optional<int> bins;
  std::string rho_id = "empirical";
  CsvOptions csv;
};

struct IngestReport {
  SecretPairScenario scenario;
  // The category order actually used (bin labels for numeric columns).
  std::vector<std::string> encoding;
  std::vector<uint64_t> counts_i;
  std::vector<uint64_t> counts_j;
  size_t rows_total = 0;
  // Rows with an empty cell in either column.
  size_t rows_dropped_missing = 0;
  // Rows whose sensitive value is neither secret.
  size_t rows_other_secret = 0;
};

// Errors: missing column, a public value absent from an explicit encoding,
// or a secret value that never appears. Only rows with empty cells are
// dropped, and they are counted in the report.
absl::StatusOr<IngestReport> IngestCsv(const IngestSpec& spec);

// Same as IngestCsv but over an already-loaded table; `spec.paths` is
// ignored.
absl::StatusOr<IngestReport> IngestTable(const CsvTable& table,
                                         const IngestSpec& spec);

}  // namespace pufferfish

#endif  // PUFFERFISH_INGEST_H_
