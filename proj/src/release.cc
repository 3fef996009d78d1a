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

#include "pufferfish/release.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace pufferfish {

absl::StatusOr<std::vector<double>> SampleLaplace(double theta, uint64_t seed,
                                                  size_t count) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    return absl::InvalidArgumentError(
        absl::StrCat("NonPositiveTheta: theta must be positive, got ", theta));
  }
  SplitMix64 rng(seed);
  std::vector<double> samples(count);
  for (double& z : samples) {
    const double u = rng.NextCentered();
    z = -theta * std::copysign(1.0, u) * std::log1p(-2.0 * std::abs(u));
  }
  return samples;
}

absl::StatusOr<ReleaseRecord> Privatize(std::span<const double> column,
                                        double theta, uint64_t seed) {
  auto noise = SampleLaplace(theta, seed, column.size());
  if (!noise.ok()) return noise.status();
  ReleaseRecord record;
  record.theta = theta;
  record.seed = seed;
  record.original.assign(column.begin(), column.end());
  record.released.resize(column.size());
  double squared = 0.0;
  for (size_t k = 0; k < column.size(); ++k) {
    record.released[k] = column[k] + (*noise)[k];
    const double diff = record.released[k] - column[k];
    squared += diff * diff;
  }
  record.empirical_mse =
      column.empty() ? 0.0 : squared / static_cast<double>(column.size());
  record.theoretical_mse = 2.0 * theta * theta;
  return record;
}

}  // namespace pufferfish
