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

#include "pufferfish/audit.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "pufferfish/calibrate.h"

namespace pufferfish {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log sum_x p(x) e^{score(x)} over the support of p.
template <typename Score>
double LogSumExp(const ConditionalPrior& prior, Score score) {
  double peak = -kInf;
  for (size_t x = 0; x < prior.alphabet_size(); ++x) {
    if (prior[x] > 0.0) peak = std::max(peak, std::log(prior[x]) + score(x));
  }
  double sum = 0.0;
  for (size_t x = 0; x < prior.alphabet_size(); ++x) {
    if (prior[x] > 0.0) sum += std::exp(std::log(prior[x]) + score(x) - peak);
  }
  return peak + std::log(sum);
}

// Limit of the log ratio as y -> +inf (direction = +1) or -inf (-1); there
// the densities are proportional to sum_x p(x) e^{direction * x / theta}.
double TailLogRatio(const SecretPairScenario& scenario, double theta,
                    double direction) {
  auto score = [&](size_t x) {
    return direction * static_cast<double>(x) / theta;
  };
  return LogSumExp(scenario.prior_i(), score) -
         LogSumExp(scenario.prior_j(), score);
}

absl::Status CheckPositive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " must be positive and finite, got ", value));
  }
  return absl::OkStatus();
}

}  // namespace

double OutputLogDensity(const SecretPairScenario& scenario, Secret secret,
                        double theta, double y) {
  const ConditionalPrior& prior =
      secret == Secret::kFirst ? scenario.prior_i() : scenario.prior_j();
  return LogSumExp(prior,
                   [&](size_t x) {
                     return -std::abs(y - static_cast<double>(x)) / theta;
                   }) -
         std::log(2.0 * theta);
}

double OutputLogRatio(const SecretPairScenario& scenario, double theta,
                      double y) {
  return OutputLogDensity(scenario, Secret::kFirst, theta, y) -
         OutputLogDensity(scenario, Secret::kSecond, theta, y);
}

absl::StatusOr<AuditReport> VerifyPufferfish(const PufferfishInstance& instance,
                                             double theta, double epsilon) {
  if (auto s = CheckPositive(theta, "theta"); !s.ok()) return s;
  if (auto s = CheckPositive(epsilon, "epsilon"); !s.ok()) return s;
  AuditReport report;
  report.epsilon = epsilon;
  report.theta = theta;
  for (const SecretPairScenario& scenario : instance.scenarios()) {
    ScenarioAudit audit;
    audit.rho_id = scenario.rho_id();
    audit.max_log_ratio = -kInf;
    auto consider = [&](double value, double y) {
      if (std::abs(value) > audit.max_log_ratio) {
        audit.max_log_ratio = std::abs(value);
        audit.argmax_y = y;
      }
    };
    for (size_t x = 0; x < scenario.alphabet_size(); ++x) {
      const auto y = static_cast<double>(x);
      consider(OutputLogRatio(scenario, theta, y), y);
    }
    consider(TailLogRatio(scenario, theta, -1.0), -kInf);
    consider(TailLogRatio(scenario, theta, +1.0), kInf);
    audit.pass = audit.max_log_ratio <= epsilon + kAuditTolerance;
    report.overall_pass = report.overall_pass && audit.pass;
    report.per_scenario.push_back(std::move(audit));
  }
  return report;
}

bool VerifyRelaxedCondition(const TransportPlan& plan, double theta,
                            double epsilon) {
  for (size_t xp = 0; xp < plan.size(); ++xp) {
    if (ColumnFunction(plan, xp, theta, epsilon) > kFunctionTolerance) {
      return false;
    }
  }
  return true;
}

absl::StatusOr<RelaxationProfile> ComputeRelaxationProfile(
    const TransportPlan& plan, double theta, double epsilon) {
  if (auto s = CheckPositive(theta, "theta"); !s.ok()) return s;
  if (auto s = CheckPositive(epsilon, "epsilon"); !s.ok()) return s;
  RelaxationProfile profile;
  profile.theta = theta;
  profile.epsilon = epsilon;
  profile.column_sums.assign(plan.size(), 0.0);
  const double e_eps = std::exp(epsilon);
  for (size_t xp = 0; xp < plan.size(); ++xp) {
    for (size_t x = 0; x < plan.size(); ++x) {
      const double mass = plan(x, xp);
      if (mass <= 0.0) continue;
      const double d = x > xp ? x - xp : xp - x;
      const double value = (std::exp(d / theta) - e_eps) * mass;
      profile.entries.push_back({.x = x, .x_prime = xp, .value = value});
      profile.column_sums[xp] += value;
    }
  }
  return profile;
}

std::string ProfileToCsv(const RelaxationProfile& profile) {
  std::string out = "index,x,x_prime,i_value,column_sum\n";
  for (size_t k = 0; k < profile.entries.size(); ++k) {
    const RelaxationEntry& e = profile.entries[k];
    absl::StrAppend(&out, k, ",", e.x, ",", e.x_prime, ",",
                    absl::StrFormat("%.17g", e.value), ",",
                    absl::StrFormat("%.17g", profile.column_sums[e.x_prime]),
                    "\n");
  }
  return out;
}

}  // namespace pufferfish
