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

#ifndef PUFFERFISH_TRANSPORT_H_
#define PUFFERFISH_TRANSPORT_H_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "pufferfish/prior_model.h"

namespace pufferfish {

// Entries at or below this mass are not part of the plan's support, and are
// stored as exact zeros.
inline constexpr double kSupportThreshold = 1e-12;

// A coupling pi(x, x') of two priors on {0, ..., n}, stored densely in
// row-major order. Rows index the first prior (s_i), columns the second.
class TransportPlan {
 public:
  // Validates non-negativity and unit total mass. Entries at or below
  // kSupportThreshold are zeroed.
  static absl::StatusOr<TransportPlan> FromMatrix(size_t size,
                                                  std::vector<double> matrix);

  size_t size() const { return size_; }
  double operator()(size_t x, size_t x_prime) const {
    return matrix_[x * size_ + x_prime];
  }
  std::span<const double> matrix() const { return matrix_; }
  const std::vector<double>& row_marginal() const { return row_marginal_; }
  const std::vector<double>& col_marginal() const { return col_marginal_; }
  const std::vector<std::pair<size_t, size_t>>& support() const {
    return support_;
  }
  // max |x - x'| over the support; 0 for a diagonal plan.
  size_t max_distance() const { return max_distance_; }

  // The plan of the reversed secret pair.
  TransportPlan Transposed() const;

  // Sum of |x - x'| pi(x, x').
  double TransportCost() const;

 private:
  friend TransportPlan KantorovichPlan(const SecretPairScenario&);
  friend absl::StatusOr<TransportPlan> WorstCasePlan(const SecretPairScenario&);

  TransportPlan(size_t size, std::vector<double> matrix);

  size_t size_;
  std::vector<double> matrix_;
  std::vector<double> row_marginal_;
  std::vector<double> col_marginal_;
  std::vector<std::pair<size_t, size_t>> support_;
  size_t max_distance_ = 0;
};

// The Kantorovich optimal plan for the |x - x'| ground cost, obtained by
// differencing the joint cumulative mass M(x, x') = min(F_i(x), F_j(x')).
TransportPlan KantorovichPlan(const SecretPairScenario& scenario);

// True iff P(0 | s_i) > 1 - P(n | s_j), which forces mass onto (0, n).
bool WorstCaseCondition(const SecretPairScenario& scenario);

// Closed-form plan valid under WorstCaseCondition: row 0 carries p_j except at
// column n, column n carries p_i except at row 0, and (0, n) takes the
// remainder. Fails with "ConditionNotMet" otherwise.
absl::StatusOr<TransportPlan> WorstCasePlan(const SecretPairScenario& scenario);

struct MassSplit {
  double diagonal = 0.0;
  double off_diagonal = 0.0;
};

// Splits column x' into pi(x', x') and the mass transported from x != x'.
MassSplit SplitColumnMass(const TransportPlan& plan, size_t x_prime);

// Dense matrix dump, one row per x, with a header naming the columns.
std::string PlanToCsv(const TransportPlan& plan);

// {"matrix": [[...]], "support": [[x, x', mass], ...], "max_distance": n}
nlohmann::json PlanToJson(const TransportPlan& plan);

}  // namespace pufferfish

#endif  // PUFFERFISH_TRANSPORT_H_
