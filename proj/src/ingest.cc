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

#include "pufferfish/ingest.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "pufferfish/status_macros.h"

namespace pufferfish {
namespace {

std::optional<double> ParseNumber(const std::string& cell) {
  double value = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

struct RetainedRow {
  const std::string* secret;
  const std::string* value;
};

}  // namespace

absl::StatusOr<IngestReport> IngestTable(const CsvTable& table,
                                         const IngestSpec& spec) {
  if (spec.secret_i == spec.secret_j) {
    return absl::InvalidArgumentError(
        absl::StrCat("secret pair values must differ: '", spec.secret_i, "'"));
  }
  const auto sensitive = table.ColumnIndex(spec.sensitive_column);
  if (!sensitive) {
    return absl::InvalidArgumentError(absl::StrCat(
        "missing sensitive column '", spec.sensitive_column, "'"));
  }
  const auto public_col = table.ColumnIndex(spec.public_column);
  if (!public_col) {
    return absl::InvalidArgumentError(
        absl::StrCat("missing public column '", spec.public_column, "'"));
  }
  if (spec.bins && *spec.bins < 1) {
    return absl::InvalidArgumentError("bins must be positive");
  }

  size_t dropped = 0;
  std::vector<RetainedRow> retained;
  retained.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    const std::string& s = row[*sensitive];
    const std::string& x = row[*public_col];
    if (s.empty() || x.empty()) {
      ++dropped;
      continue;
    }
    retained.push_back({&s, &x});
  }

  // Encoding of the public column into {0, ..., n}.
  std::vector<std::string> encoding;
  std::vector<size_t> codes(retained.size());
  if (spec.bins) {
    const int bins = *spec.bins;
    std::vector<double> values(retained.size());
    for (size_t r = 0; r < retained.size(); ++r) {
      auto v = ParseNumber(*retained[r].value);
      if (!v) {
        return absl::InvalidArgumentError(
            absl::StrCat("public column '", spec.public_column,
                         "' has non-numeric value '", *retained[r].value,
                         "' but bins were requested"));
      }
      values[r] = *v;
    }
    double lo = 0.0;
    double hi = 0.0;
    if (!values.empty()) {
      auto [mn, mx] = std::minmax_element(values.begin(), values.end());
      lo = *mn;
      hi = *mx;
    }
    const double width = (hi - lo) / bins;
    for (int b = 0; b < bins; ++b) {
      encoding.push_back(absl::StrFormat("[%.17g,%.17g%c", lo + b * width,
                                         b + 1 == bins ? hi : lo + (b + 1) * width,
                                         b + 1 == bins ? ']' : ')'));
    }
    for (size_t r = 0; r < retained.size(); ++r) {
      size_t bin = 0;
      if (hi > lo) {
        const double pos = (values[r] - lo) / (hi - lo) * bins;
        bin = std::min(static_cast<size_t>(std::max(pos, 0.0)),
                       static_cast<size_t>(bins - 1));
      }
      codes[r] = bin;
    }
  } else {
    if (spec.encoding.empty()) {
      std::set<std::string> observed;
      for (const RetainedRow& row : retained) observed.insert(*row.value);
      encoding.assign(observed.begin(), observed.end());
    } else {
      encoding = spec.encoding;
    }
    std::map<std::string, size_t> index;
    for (size_t k = 0; k < encoding.size(); ++k) {
      if (!index.emplace(encoding[k], k).second) {
        return absl::InvalidArgumentError(
            absl::StrCat("duplicate category '", encoding[k], "' in encoding"));
      }
    }
    for (size_t r = 0; r < retained.size(); ++r) {
      auto it = index.find(*retained[r].value);
      if (it == index.end()) {
        return absl::InvalidArgumentError(
            absl::StrCat("public value '", *retained[r].value,
                         "' has no entry in the encoding"));
      }
      codes[r] = it->second;
    }
  }
  if (encoding.empty()) {
    return absl::InvalidArgumentError("no rows retained; alphabet is empty");
  }

  std::vector<uint64_t> counts_i(encoding.size(), 0);
  std::vector<uint64_t> counts_j(encoding.size(), 0);
  size_t other = 0;
  for (size_t r = 0; r < retained.size(); ++r) {
    if (*retained[r].secret == spec.secret_i) {
      ++counts_i[codes[r]];
    } else if (*retained[r].secret == spec.secret_j) {
      ++counts_j[codes[r]];
    } else {
      ++other;
    }
  }
  auto prior_i = ConditionalPrior::FromCounts(counts_i);
  if (!prior_i.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("secret value '", spec.secret_i, "' does not appear in '",
                     spec.sensitive_column, "'"));
  }
  auto prior_j = ConditionalPrior::FromCounts(counts_j);
  if (!prior_j.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("secret value '", spec.secret_j, "' does not appear in '",
                     spec.sensitive_column, "'"));
  }
  ASSIGN_OR_RETURN(SecretPairScenario scenario,
                   SecretPairScenario::Create(spec.rho_id, spec.secret_i,
                                              spec.secret_j,
                                              *std::move(prior_i),
                                              *std::move(prior_j)));
  return IngestReport{.scenario = std::move(scenario),
                      .encoding = std::move(encoding),
                      .counts_i = std::move(counts_i),
                      .counts_j = std::move(counts_j),
                      .rows_total = table.rows.size(),
                      .rows_dropped_missing = dropped,
                      .rows_other_secret = other};
}

absl::StatusOr<IngestReport> IngestCsv(const IngestSpec& spec) {
  if (spec.paths.empty()) {
    return absl::InvalidArgumentError("no input files given");
  }
  ASSIGN_OR_RETURN(CsvTable table, ReadCsv(spec.paths.front(), spec.csv));
  for (size_t k = 1; k < spec.paths.size(); ++k) {
    ASSIGN_OR_RETURN(CsvTable more, ReadCsv(spec.paths[k], spec.csv));
    if (more.header != table.header) {
      return absl::InvalidArgumentError(absl::StrCat(
          "header of ", spec.paths[k], " differs from ", spec.paths.front()));
    }
    table.rows.insert(table.rows.end(),
                      std::make_move_iterator(more.rows.begin()),
                      std::make_move_iterator(more.rows.end()));
  }
  return IngestTable(table, spec);
}

}  // namespace pufferfish
