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

#include "pufferfish/prior_model.h"

#include <cmath>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace pufferfish {

absl::StatusOr<ConditionalPrior> ConditionalPrior::Create(
    std::vector<double> pmf) {
  if (pmf.empty()) {
    return absl::InvalidArgumentError("prior must have alphabet size >= 1");
  }
  double total = 0.0;
  for (size_t x = 0; x < pmf.size(); ++x) {
    if (!std::isfinite(pmf[x]) || pmf[x] < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("prior entry ", x, " is negative or not finite: ",
                       pmf[x]));
    }
    total += pmf[x];
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("prior sums to ", total, ", expected 1"));
  }
  return ConditionalPrior(std::move(pmf));
}

absl::StatusOr<ConditionalPrior> ConditionalPrior::FromCounts(
    std::span<const uint64_t> counts) {
  if (counts.empty()) {
    return absl::InvalidArgumentError("EmptySupport: no categories");
  }
  const uint64_t total =
      std::accumulate(counts.begin(), counts.end(), uint64_t{0});
  if (total == 0) {
    return absl::InvalidArgumentError("EmptySupport: all counts are zero");
  }
  std::vector<double> pmf(counts.size());
  for (size_t x = 0; x < counts.size(); ++x) {
    pmf[x] = static_cast<double>(counts[x]) / static_cast<double>(total);
  }
  return Create(std::move(pmf));
}

std::vector<double> ConditionalPrior::Cumulative() const {
  std::vector<double> cdf(pmf_.size());
  std::partial_sum(pmf_.begin(), pmf_.end(), cdf.begin());
  return cdf;
}

absl::StatusOr<SecretPairScenario> SecretPairScenario::Create(
    std::string rho_id, std::string s_i_label, std::string s_j_label,
    ConditionalPrior prior_i, ConditionalPrior prior_j) {
  if (s_i_label == s_j_label) {
    return absl::InvalidArgumentError(
        absl::StrCat("secret pair labels must differ, both are '", s_i_label,
                     "'"));
  }
  if (prior_i.alphabet_size() != prior_j.alphabet_size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "priors have different alphabet sizes: ", prior_i.alphabet_size(),
        " vs ", prior_j.alphabet_size()));
  }
  return SecretPairScenario(std::move(rho_id), std::move(s_i_label),
                            std::move(s_j_label), std::move(prior_i),
                            std::move(prior_j));
}

SecretPairScenario SecretPairScenario::Swapped() const {
  return SecretPairScenario(rho_id_, s_j_label_, s_i_label_, prior_j_,
                            prior_i_);
}

absl::StatusOr<PufferfishInstance> PufferfishInstance::Create(
    std::vector<SecretPairScenario> scenarios) {
  if (scenarios.empty()) {
    return absl::InvalidArgumentError("instance needs at least one scenario");
  }
  const size_t size = scenarios.front().alphabet_size();
  for (const SecretPairScenario& s : scenarios) {
    if (s.alphabet_size() != size) {
      return absl::InvalidArgumentError(absl::StrCat(
          "scenario '", s.rho_id(), "' has alphabet size ", s.alphabet_size(),
          ", expected ", size));
    }
  }
  return PufferfishInstance(std::move(scenarios));
}

absl::StatusOr<PufferfishInstance> MakeInstance(std::vector<double> p_i,
                                                std::vector<double> p_j) {
  auto prior_i = ConditionalPrior::Create(std::move(p_i));
  if (!prior_i.ok()) return prior_i.status();
  auto prior_j = ConditionalPrior::Create(std::move(p_j));
  if (!prior_j.ok()) return prior_j.status();
  auto scenario = SecretPairScenario::Create("rho", "s_i", "s_j",
                                             *std::move(prior_i),
                                             *std::move(prior_j));
  if (!scenario.ok()) return scenario.status();
  std::vector<SecretPairScenario> scenarios;
  scenarios.push_back(*std::move(scenario));
  return PufferfishInstance::Create(std::move(scenarios));
}

}  // namespace pufferfish
