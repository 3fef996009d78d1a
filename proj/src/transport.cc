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

#include "pufferfish/transport.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace pufferfish {
namespace {

size_t Distance(size_t a, size_t b) { return a > b ? a - b : b - a; }

}  // namespace

TransportPlan::TransportPlan(size_t size, std::vector<double> matrix)
    : size_(size),
      matrix_(std::move(matrix)),
      row_marginal_(size, 0.0),
      col_marginal_(size, 0.0) {
  for (double& v : matrix_) {
    if (v <= kSupportThreshold) v = 0.0;
  }
  for (size_t x = 0; x < size_; ++x) {
    for (size_t xp = 0; xp < size_; ++xp) {
      const double v = matrix_[x * size_ + xp];
      row_marginal_[x] += v;
      col_marginal_[xp] += v;
      if (v > 0.0) {
        support_.emplace_back(x, xp);
        max_distance_ = std::max(max_distance_, Distance(x, xp));
      }
    }
  }
}

absl::StatusOr<TransportPlan> TransportPlan::FromMatrix(
    size_t size, std::vector<double> matrix) {
  if (size == 0 || matrix.size() != size * size) {
    return absl::InvalidArgumentError(
        absl::StrCat("plan matrix must be ", size, "x", size));
  }
  double total = 0.0;
  for (double v : matrix) {
    if (!std::isfinite(v) || v < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("plan entry is negative or not finite: ", v));
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("plan mass is ", total, ", expected 1"));
  }
  return TransportPlan(size, std::move(matrix));
}

TransportPlan TransportPlan::Transposed() const {
  std::vector<double> t(matrix_.size());
  for (size_t x = 0; x < size_; ++x) {
    for (size_t xp = 0; xp < size_; ++xp) {
      t[xp * size_ + x] = matrix_[x * size_ + xp];
    }
  }
  return TransportPlan(size_, std::move(t));
}

double TransportPlan::TransportCost() const {
  double cost = 0.0;
  for (auto [x, xp] : support_) {
    cost += static_cast<double>(Distance(x, xp)) * (*this)(x, xp);
  }
  return cost;
}

TransportPlan KantorovichPlan(const SecretPairScenario& scenario) {
  const size_t size = scenario.alphabet_size();
  const std::vector<double> f_i = scenario.prior_i().Cumulative();
  const std::vector<double> f_j = scenario.prior_j().Cumulative();
  // Joint CMF with index -1 mapped to 0.
  auto joint = [&](size_t x_plus_one, size_t xp_plus_one) {
    if (x_plus_one == 0 || xp_plus_one == 0) return 0.0;
    return std::min(f_i[x_plus_one - 1], f_j[xp_plus_one - 1]);
  };
  std::vector<double> matrix(size * size);
  for (size_t x = 0; x < size; ++x) {
    for (size_t xp = 0; xp < size; ++xp) {
      const double mass = joint(x + 1, xp + 1) - joint(x, xp + 1) -
                          joint(x + 1, xp) + joint(x, xp);
      matrix[x * size + xp] = std::max(mass, 0.0);
    }
  }
  return TransportPlan(size, std::move(matrix));
}

bool WorstCaseCondition(const SecretPairScenario& scenario) {
  const size_t n = scenario.alphabet_size() - 1;
  return scenario.prior_i()[0] - 1e-12 > 1.0 - scenario.prior_j()[n];
}

absl::StatusOr<TransportPlan> WorstCasePlan(
    const SecretPairScenario& scenario) {
  if (!WorstCaseCondition(scenario)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "ConditionNotMet: P(0|s_i) = ", scenario.prior_i()[0],
        " is not greater than 1 - P(n|s_j) = ",
        1.0 - scenario.prior_j()[scenario.alphabet_size() - 1]));
  }
  const size_t size = scenario.alphabet_size();
  const size_t n = size - 1;
  const ConditionalPrior& p_i = scenario.prior_i();
  const ConditionalPrior& p_j = scenario.prior_j();
  std::vector<double> matrix(size * size, 0.0);
  for (size_t xp = 0; xp < n; ++xp) matrix[xp] = p_j[xp];
  for (size_t x = 1; x < size; ++x) matrix[x * size + n] = p_i[x];
  matrix[n] = p_i[0] + p_j[n] - 1.0;
  return TransportPlan(size, std::move(matrix));
}

MassSplit SplitColumnMass(const TransportPlan& plan, size_t x_prime) {
  MassSplit split;
  for (size_t x = 0; x < plan.size(); ++x) {
    if (x == x_prime) {
      split.diagonal = plan(x, x_prime);
    } else {
      split.off_diagonal += plan(x, x_prime);
    }
  }
  return split;
}

std::string PlanToCsv(const TransportPlan& plan) {
  std::string out = "x";
  for (size_t xp = 0; xp < plan.size(); ++xp) absl::StrAppend(&out, ",", xp);
  out += "\n";
  for (size_t x = 0; x < plan.size(); ++x) {
    absl::StrAppend(&out, x);
    for (size_t xp = 0; xp < plan.size(); ++xp) {
      absl::StrAppend(&out, ",", absl::StrFormat("%.17g", plan(x, xp)));
    }
    out += "\n";
  }
  return out;
}

nlohmann::json PlanToJson(const TransportPlan& plan) {
  nlohmann::json matrix = nlohmann::json::array();
  for (size_t x = 0; x < plan.size(); ++x) {
    nlohmann::json row = nlohmann::json::array();
    for (size_t xp = 0; xp < plan.size(); ++xp) row.push_back(plan(x, xp));
    matrix.push_back(std::move(row));
  }
  nlohmann::json support = nlohmann::json::array();
  for (auto [x, xp] : plan.support()) {
    support.push_back({x, xp, plan(x, xp)});
  }
  return {{"matrix", std::move(matrix)},
          {"support", std::move(support)},
          {"max_distance", plan.max_distance()}};
}

}  // namespace pufferfish
