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

#ifndef PUFFERFISH_CSV_H_
#define PUFFERFISH_CSV_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace pufferfish {

struct CsvOptions {
  char delimiter = ',';
  bool has_header = true;
  // Column names for header-less files; ignored when has_header is true.
  std::vector<std::string> column_names;
  // Strip ASCII whitespace around unquoted cells.
  bool trim = true;
  // Lines starting with this character are skipped.
  std::optional<char> comment;
};

// A fully materialized CSV file. Quoted cells ("a,b", "say ""hi""") are
// supported; records may not span lines.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<size_t> ColumnIndex(std::string_view name) const;
};

absl::StatusOr<std::vector<std::string>> ParseCsvLine(std::string_view line,
                                                      char delimiter,
                                                      bool trim);

absl::StatusOr<CsvTable> ReadCsv(const std::string& path,
                                 const CsvOptions& options = {});

// Quotes a cell if it contains the delimiter, a quote, or a line break.
std::string EscapeCsvCell(std::string_view cell, char delimiter = ',');

absl::Status WriteCsv(const std::string& path, const CsvTable& table,
                      char delimiter = ',');

}  // namespace pufferfish

#endif  // PUFFERFISH_CSV_H_
