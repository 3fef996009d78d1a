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

#ifndef PUFFERFISH_CALIBRATE_H_
#define PUFFERFISH_CALIBRATE_H_

#include <cstddef>
#include <vector>

#include "absl/status/statusor.h"
#include "pufferfish/prior_model.h"
#include "pufferfish/transport.h"

namespace pufferfish {

// Tolerances used when asserting on calibrated scales and on f_{x'} values.
inline constexpr double kThetaTolerance = 1e-8;
inline constexpr double kFunctionTolerance = 1e-10;

// Columns whose off-diagonal mass is at or below this are degenerate: their
// column function never turns positive.
inline constexpr double kDegenerateMass = 1e-15;

struct CalibrationOptions {
  // Root-finding tolerance on t = e^{1/theta}.
  double nu = 1e-12;
  int max_iterations = 200;
};

// The per-column initial interval [1/phi, n/phi] for the relaxed root, where
// n is the plan's max support distance.
struct Bracket {
  double theta_low = 0.0;
  double theta_high = 0.0;
  double phi = 0.0;
};

struct ColumnRoot {
  size_t x_prime = 0;
  double theta_root = 0.0;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
  double phi = 0.0;
  bool degenerate = false;
  // False when the iteration cap was hit; theta_root is then the safe
  // endpoint of the last bracket.
  bool converged = true;
  int iterations = 0;
};

// One direction of a secret pair: the plan P(.|s_i) -> P(.|s_j) or its
// reverse.
struct DirectionCalibration {
  bool reversed = false;
  size_t plan_distance = 0;
  std::vector<ColumnRoot> columns;
};

struct ScenarioCalibration {
  std::string rho_id;
  std::string s_i_label;
  std::string s_j_label;
  size_t alphabet_size = 0;
  size_t plan_distance = 0;
  double theta_relaxed = 0.0;
  DirectionCalibration forward;
  DirectionCalibration reverse;
  // Where theta_relaxed is attained; meaningless when theta_relaxed is 0.
  bool binding_reversed = false;
  size_t binding_column = 0;
};

struct CalibrationResult {
  double epsilon = 0.0;
  double nu = 0.0;
  double theta_l1 = 0.0;
  double theta_w1 = 0.0;
  double theta_relaxed = 0.0;
  // theta_w1 - theta_relaxed.
  double delta = 0.0;
  std::vector<ScenarioCalibration> per_scenario;
};

// (alphabet_size - 1) / epsilon: the l1 sensitivity of the identity query.
absl::StatusOr<double> ThetaL1(const PufferfishInstance& instance,
                               double epsilon);

// Max over scenarios of the Kantorovich plan's support distance, over
// epsilon.
absl::StatusOr<double> ThetaW1(const PufferfishInstance& instance,
                               double epsilon);

// f_{x'}(theta) = sum_x (e^{|x - x'|/theta} - e^epsilon) pi(x, x').
// Decreasing in theta. Returns +infinity when the positive part overflows.
double ColumnFunction(const TransportPlan& plan, size_t x_prime, double theta,
                      double epsilon);

// phi = ln((e^eps P(x') - pi(x', x')) / (P(x') - pi(x', x'))), with
// f(1/phi) >= 0 and f(n/phi) <= 0. Fails with "DegenerateColumn" if the
// column has no off-diagonal mass.
absl::StatusOr<Bracket> ColumnBracket(const TransportPlan& plan,
                                      size_t x_prime, double epsilon);

// Finds the root of f_{x'} with Brent's method in t = e^{1/theta} and returns
// the larger-theta endpoint of the final bracket, so f(theta_root) <= 0.
absl::StatusOr<ColumnRoot> SolveColumnRoot(
    const TransportPlan& plan, size_t x_prime, double epsilon,
    const CalibrationOptions& options = {});

// All three mechanisms. The relaxed scale is the max column root over every
// scenario, in both directions of each secret pair.
absl::StatusOr<CalibrationResult> Calibrate(
    const PufferfishInstance& instance, double epsilon,
    const CalibrationOptions& options = {});

// Per-column closed form 1/ln(e^eps + (e^eps - 1) pi(x',x') / off(x')) for a
// plan whose support distance is exactly 1, maximized over non-degenerate
// columns of this single direction. Fails with "NotOrderOne" otherwise.
absl::StatusOr<double> ClosedFormOrderOne(const TransportPlan& plan,
                                          double epsilon);

// Closed form over both directions of the scenario's secret pair.
absl::StatusOr<double> ClosedFormOrderOne(const SecretPairScenario& scenario,
                                          double epsilon);

struct DeltaBounds {
  double low = 0.0;
  double high = 0.0;
};

// Bounds on theta_w1 - theta_relaxed from the per-column brackets:
// low = theta_w1 - max bracket_high, high = theta_w1 - max bracket_low.
// Fails with "AllDegenerate" when no column has off-diagonal mass.
absl::StatusOr<DeltaBounds> NoiseReductionBounds(
    const CalibrationResult& result);

}  // namespace pufferfish

#endif  // PUFFERFISH_CALIBRATE_H_
