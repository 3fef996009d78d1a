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

#ifndef PUFFERFISH_AUDIT_H_
#define PUFFERFISH_AUDIT_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "pufferfish/prior_model.h"
#include "pufferfish/transport.h"

namespace pufferfish {

// Slack on the log-likelihood ratio, in nats.
inline constexpr double kAuditTolerance = 1e-9;

enum class Secret { kFirst, kSecond };

// log P(y | s) for Y = X + Laplace(theta), X ~ P(. | s):
//   log sum_x p(x) e^{-|y - x|/theta} - log(2 theta).
double OutputLogDensity(const SecretPairScenario& scenario, Secret secret,
                        double theta, double y);

// log P(y | s_i) - log P(y | s_j) at a finite y.
double OutputLogRatio(const SecretPairScenario& scenario, double theta,
                      double y);

struct ScenarioAudit {
  std::string rho_id;
  // sup_y |log P(y | s_i) - log P(y | s_j)|.
  double max_log_ratio = 0.0;
  // Where the supremum is attained; +/-infinity for a tail limit.
  double argmax_y = 0.0;
  bool pass = true;
};

struct AuditReport {
  double epsilon = 0.0;
  double theta = 0.0;
  std::vector<ScenarioAudit> per_scenario;
  bool overall_pass = true;
};

// Exact check of the pufferfish condition for Laplace(theta) noise. Between
// consecutive alphabet points both output densities have the form
// a e^{y/theta} + b e^{-y/theta}, so the ratio is monotone there and the
// supremum over all real y is attained at an alphabet point or a tail limit.
absl::StatusOr<AuditReport> VerifyPufferfish(const PufferfishInstance& instance,
                                             double theta, double epsilon);

// True iff f_{x'}(theta) <= kFunctionTolerance for every column.
bool VerifyRelaxedCondition(const TransportPlan& plan, double theta,
                            double epsilon);

struct RelaxationEntry {
  size_t x = 0;
  size_t x_prime = 0;
  // (e^{|x - x'|/theta} - e^eps) pi(x, x').
  double value = 0.0;
};

struct RelaxationProfile {
  double theta = 0.0;
  double epsilon = 0.0;
  // Support entries ordered by x', then x.
  std::vector<RelaxationEntry> entries;
  std::vector<double> column_sums;
};

absl::StatusOr<RelaxationProfile> ComputeRelaxationProfile(
    const TransportPlan& plan, double theta, double epsilon);

// index,x,x_prime,i_value,column_sum
std::string ProfileToCsv(const RelaxationProfile& profile);

}  // namespace pufferfish

#endif  // PUFFERFISH_AUDIT_H_
