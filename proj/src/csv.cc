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

#include "pufferfish/csv.h"

#include <fstream>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace pufferfish {

std::optional<size_t> CsvTable::ColumnIndex(std::string_view name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

absl::StatusOr<std::vector<std::string>> ParseCsvLine(std::string_view line,
                                                      char delimiter,
                                                      bool trim) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  bool was_quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      if (trim && absl::StripAsciiWhitespace(cell).empty()) cell.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == delimiter) {
      cells.push_back(was_quoted || !trim
                          ? cell
                          : std::string(absl::StripAsciiWhitespace(cell)));
      cell.clear();
      was_quoted = false;
    } else if (!(trim && was_quoted && absl::ascii_isspace(c))) {
      cell.push_back(c);
    }
  }
  if (quoted) {
    return absl::InvalidArgumentError("unterminated quoted cell");
  }
  cells.push_back(was_quoted || !trim
                      ? cell
                      : std::string(absl::StripAsciiWhitespace(cell)));
  return cells;
}

absl::StatusOr<CsvTable> ReadCsv(const std::string& path,
                                 const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open CSV file: ", path));
  }
  CsvTable table;
  if (!options.has_header) table.header = options.column_names;
  std::string line;
  size_t line_number = 0;
  bool header_pending = options.has_header;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // UTF-8 byte order mark.
    if (line_number == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
      line.erase(0, 3);
    }
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    if (options.comment && line.front() == *options.comment) continue;
    auto cells = ParseCsvLine(line, options.delimiter, options.trim);
    if (!cells.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ":", line_number, ": ", cells.status().message()));
    }
    if (header_pending) {
      table.header = *std::move(cells);
      header_pending = false;
      continue;
    }
    if (!table.header.empty() && cells->size() != table.header.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", line_number, ": expected ",
                       table.header.size(), " cells, found ", cells->size()));
    }
    table.rows.push_back(*std::move(cells));
  }
  if (header_pending) {
    return absl::InvalidArgumentError(
        absl::StrCat("CSV file has no header row: ", path));
  }
  return table;
}

std::string EscapeCsvCell(std::string_view cell, char delimiter) {
  if (cell.find_first_of(std::string{delimiter, '"', '\n', '\r'}) ==
      std::string_view::npos) {
    return std::string(cell);
  }
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

absl::Status WriteCsv(const std::string& path, const CsvTable& table,
                      char delimiter) {
  std::ofstream out(path);
  if (!out) {
    return absl::UnavailableError(absl::StrCat("cannot write ", path));
  }
  auto write_row = [&](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << delimiter;
      out << EscapeCsvCell(row[i], delimiter);
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
  out.flush();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

}  // namespace pufferfish
