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

#include "pufferfish/calibrate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "pufferfish/status_macros.h"

namespace pufferfish {
namespace {

constexpr double kMaxExponent = 700.0;

size_t Distance(size_t a, size_t b) { return a > b ? a - b : b - a; }

absl::Status CheckEpsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("NonPositiveEpsilon: epsilon must be positive and "
                     "finite, got ",
                     epsilon));
  }
  return absl::OkStatus();
}

// A column's off-diagonal entries as (distance, mass) pairs, with the
// constant part of g collected into `rhs`:
//   g(t) = sum_d mass_d t^d - rhs,  rhs = e^eps P(x') - pi(x', x').
struct ColumnPolynomial {
  std::vector<std::pair<double, double>> terms;
  double rhs = 0.0;
  double max_distance = 0.0;
  double mass_at_max_distance = 0.0;

  double operator()(double t) const {
    double sum = 0.0;
    for (auto [d, mass] : terms) sum += mass * std::pow(t, d);
    return sum - rhs;
  }
};

ColumnPolynomial MakeColumnPolynomial(const TransportPlan& plan,
                                      size_t x_prime, double epsilon) {
  ColumnPolynomial poly;
  const MassSplit split = SplitColumnMass(plan, x_prime);
  poly.rhs = std::expm1(epsilon) * split.diagonal +
             std::exp(epsilon) * split.off_diagonal;
  for (size_t x = 0; x < plan.size(); ++x) {
    const double mass = plan(x, x_prime);
    if (x == x_prime || mass <= 0.0) continue;
    const double d = static_cast<double>(Distance(x, x_prime));
    poly.terms.emplace_back(d, mass);
    if (d > poly.max_distance) {
      poly.max_distance = d;
      poly.mass_at_max_distance = mass;
    }
  }
  return poly;
}

ColumnRoot DegenerateRoot(size_t x_prime) {
  ColumnRoot root;
  root.x_prime = x_prime;
  root.degenerate = true;
  return root;
}

absl::StatusOr<DirectionCalibration> CalibrateDirection(
    const TransportPlan& plan, bool reversed, double epsilon,
    const CalibrationOptions& options) {
  DirectionCalibration direction;
  direction.reversed = reversed;
  direction.plan_distance = plan.max_distance();
  direction.columns.reserve(plan.size());
  for (size_t xp = 0; xp < plan.size(); ++xp) {
    ASSIGN_OR_RETURN(ColumnRoot root,
                     SolveColumnRoot(plan, xp, epsilon, options));
    direction.columns.push_back(root);
  }
  return direction;
}

}  // namespace

absl::StatusOr<double> ThetaL1(const PufferfishInstance& instance,
                               double epsilon) {
  RETURN_IF_ERROR(CheckEpsilon(epsilon));
  return static_cast<double>(instance.alphabet_size() - 1) / epsilon;
}

absl::StatusOr<double> ThetaW1(const PufferfishInstance& instance,
                               double epsilon) {
  RETURN_IF_ERROR(CheckEpsilon(epsilon));
  size_t distance = 0;
  for (const SecretPairScenario& scenario : instance.scenarios()) {
    distance = std::max(distance, KantorovichPlan(scenario).max_distance());
  }
  return static_cast<double>(distance) / epsilon;
}

double ColumnFunction(const TransportPlan& plan, size_t x_prime, double theta,
                      double epsilon) {
  double max_exponent = 0.0;
  double column_mass = 0.0;
  for (size_t x = 0; x < plan.size(); ++x) {
    if (plan(x, x_prime) <= 0.0) continue;
    column_mass += plan(x, x_prime);
    max_exponent =
        std::max(max_exponent, static_cast<double>(Distance(x, x_prime)) / theta);
  }
  if (max_exponent <= kMaxExponent) {
    const double e_eps = std::exp(epsilon);
    double sum = 0.0;
    for (size_t x = 0; x < plan.size(); ++x) {
      const double mass = plan(x, x_prime);
      if (mass <= 0.0) continue;
      const double d = static_cast<double>(Distance(x, x_prime));
      sum += (std::exp(d / theta) - e_eps) * mass;
    }
    return sum;
  }
  // log sum_x pi(x, x') e^{d/theta}, factoring out the dominant exponent.
  double scaled = 0.0;
  for (size_t x = 0; x < plan.size(); ++x) {
    const double mass = plan(x, x_prime);
    if (mass <= 0.0) continue;
    const double d = static_cast<double>(Distance(x, x_prime));
    scaled += mass * std::exp(d / theta - max_exponent);
  }
  const double log_positive = max_exponent + std::log(scaled);
  const double log_negative = epsilon + std::log(column_mass);
  const double gap = log_positive - log_negative;
  if (gap > kMaxExponent) return std::numeric_limits<double>::infinity();
  return std::exp(log_negative) * std::expm1(gap);
}

absl::StatusOr<Bracket> ColumnBracket(const TransportPlan& plan,
                                      size_t x_prime, double epsilon) {
  RETURN_IF_ERROR(CheckEpsilon(epsilon));
  if (x_prime >= plan.size()) {
    return absl::OutOfRangeError(absl::StrCat("column ", x_prime,
                                              " outside alphabet of size ",
                                              plan.size()));
  }
  const MassSplit split = SplitColumnMass(plan, x_prime);
  if (split.off_diagonal <= kDegenerateMass) {
    return absl::FailedPreconditionError(absl::StrCat(
        "DegenerateColumn: column ", x_prime, " has no off-diagonal mass"));
  }
  // ln(e^eps + (e^eps - 1) diag/off), written so that diag == 0 gives eps.
  const double phi =
      epsilon +
      std::log1p(-std::expm1(-epsilon) * split.diagonal / split.off_diagonal);
  const auto n = static_cast<double>(plan.max_distance());
  return Bracket{.theta_low = 1.0 / phi, .theta_high = n / phi, .phi = phi};
}

absl::StatusOr<ColumnRoot> SolveColumnRoot(const TransportPlan& plan,
                                           size_t x_prime, double epsilon,
                                           const CalibrationOptions& options) {
  RETURN_IF_ERROR(CheckEpsilon(epsilon));
  if (!(options.nu > 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "NonPositiveTolerance: nu must be positive, got ", options.nu));
  }
  if (x_prime >= plan.size()) {
    return absl::OutOfRangeError(absl::StrCat("column ", x_prime,
                                              " outside alphabet of size ",
                                              plan.size()));
  }
  if (SplitColumnMass(plan, x_prime).off_diagonal <= kDegenerateMass) {
    return DegenerateRoot(x_prime);
  }
  ASSIGN_OR_RETURN(Bracket bracket, ColumnBracket(plan, x_prime, epsilon));
  ColumnRoot root{.x_prime = x_prime,
                  .bracket_low = bracket.theta_low,
                  .bracket_high = bracket.theta_high,
                  .phi = bracket.phi};

  const ColumnPolynomial g = MakeColumnPolynomial(plan, x_prime, epsilon);
  // t_a = e^{1/theta_a} has g >= 0; t_b = e^{1/theta_b} has g <= 0. The
  // upper end is additionally capped where the column's farthest term alone
  // reaches rhs, which keeps every power finite.
  const double t_lo = std::exp(bracket.phi / static_cast<double>(
                                                 plan.max_distance()));
  const double t_cap =
      std::pow(g.rhs / g.mass_at_max_distance, 1.0 / g.max_distance);
  const double t_hi = std::max(t_lo, std::min(std::exp(bracket.phi), t_cap));
  if (!std::isfinite(t_hi)) {
    return absl::OutOfRangeError(
        absl::StrCat("bracket for column ", x_prime, " overflows"));
  }

  // Brent's method; [b, c] always brackets the root and b is the best
  // estimate.
  double a = t_hi;
  double b = t_lo;
  double fa = g(a);
  double fb = g(b);
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  int iteration = 0;
  bool converged = false;
  for (; iteration < options.max_iterations; ++iteration) {
    if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol =
        2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
        0.5 * options.nu;
    const double half_width = 0.5 * (c - b);
    if (std::abs(half_width) <= tol || fb == 0.0) {
      converged = true;
      break;
    }
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        // Secant.
        p = 2.0 * half_width * s;
        q = 1.0 - s;
      } else {
        // Inverse quadratic interpolation.
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * half_width * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      // Accept only candidates strictly inside [b, c] that shrink fast
      // enough; otherwise bisect.
      const double min1 = 3.0 * half_width * q - std::abs(tol * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = half_width;
        e = d;
      }
    } else {
      d = half_width;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : std::copysign(tol, half_width);
    fb = g(b);
  }
  // g is increasing in t, so the smaller t of the final bracket has g <= 0,
  // i.e. the larger theta is the safe one.
  const double t_safe = fb == 0.0 ? b : std::min(b, c);
  root.theta_root = 1.0 / std::log(t_safe);
  root.iterations = iteration;
  root.converged = converged;
  return root;
}

absl::StatusOr<CalibrationResult> Calibrate(const PufferfishInstance& instance,
                                            double epsilon,
                                            const CalibrationOptions& options) {
  RETURN_IF_ERROR(CheckEpsilon(epsilon));
  if (!(options.nu > 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "NonPositiveTolerance: nu must be positive, got ", options.nu));
  }
  CalibrationResult result;
  result.epsilon = epsilon;
  result.nu = options.nu;
  ASSIGN_OR_RETURN(result.theta_l1, ThetaL1(instance, epsilon));
  size_t max_distance = 0;
  for (const SecretPairScenario& scenario : instance.scenarios()) {
    const TransportPlan forward = KantorovichPlan(scenario);
    ScenarioCalibration detail;
    detail.rho_id = scenario.rho_id();
    detail.s_i_label = scenario.s_i_label();
    detail.s_j_label = scenario.s_j_label();
    detail.alphabet_size = scenario.alphabet_size();
    detail.plan_distance = forward.max_distance();
    ASSIGN_OR_RETURN(detail.forward,
                     CalibrateDirection(forward, false, epsilon, options));
    ASSIGN_OR_RETURN(detail.reverse, CalibrateDirection(forward.Transposed(),
                                                        true, epsilon, options));
    for (const DirectionCalibration* dir : {&detail.forward, &detail.reverse}) {
      for (const ColumnRoot& root : dir->columns) {
        if (root.theta_root > detail.theta_relaxed) {
          detail.theta_relaxed = root.theta_root;
          detail.binding_reversed = dir->reversed;
          detail.binding_column = root.x_prime;
        }
      }
    }
    max_distance = std::max(max_distance, detail.plan_distance);
    result.theta_relaxed = std::max(result.theta_relaxed, detail.theta_relaxed);
    result.per_scenario.push_back(std::move(detail));
  }
  result.theta_w1 = static_cast<double>(max_distance) / epsilon;
  result.delta = result.theta_w1 - result.theta_relaxed;
  return result;
}

absl::StatusOr<double> ClosedFormOrderOne(const TransportPlan& plan,
                                          double epsilon) {
  RETURN_IF_ERROR(CheckEpsilon(epsilon));
  if (plan.max_distance() != 1) {
    return absl::FailedPreconditionError(
        absl::StrCat("NotOrderOne: plan support distance is ",
                     plan.max_distance(), ", expected 1"));
  }
  double theta = 0.0;
  for (size_t xp = 0; xp < plan.size(); ++xp) {
    const MassSplit split = SplitColumnMass(plan, xp);
    if (split.off_diagonal <= kDegenerateMass) continue;
    const double ratio = split.diagonal / split.off_diagonal;
    theta = std::max(
        theta, 1.0 / std::log(std::exp(epsilon) + std::expm1(epsilon) * ratio));
  }
  return theta;
}

absl::StatusOr<double> ClosedFormOrderOne(const SecretPairScenario& scenario,
                                          double epsilon) {
  const TransportPlan plan = KantorovichPlan(scenario);
  ASSIGN_OR_RETURN(double forward, ClosedFormOrderOne(plan, epsilon));
  ASSIGN_OR_RETURN(double reverse,
                   ClosedFormOrderOne(plan.Transposed(), epsilon));
  return std::max(forward, reverse);
}

absl::StatusOr<DeltaBounds> NoiseReductionBounds(
    const CalibrationResult& result) {
  double max_low = 0.0;
  double max_high = 0.0;
  bool any = false;
  for (const ScenarioCalibration& scenario : result.per_scenario) {
    for (const DirectionCalibration* dir :
         {&scenario.forward, &scenario.reverse}) {
      for (const ColumnRoot& root : dir->columns) {
        if (root.degenerate) continue;
        any = true;
        max_low = std::max(max_low, root.bracket_low);
        max_high = std::max(max_high, root.bracket_high);
      }
    }
  }
  if (!any) {
    return absl::FailedPreconditionError(
        "AllDegenerate: no column has off-diagonal mass");
  }
  return DeltaBounds{.low = result.theta_w1 - max_high,
                     .high = result.theta_w1 - max_low};
}

}  // namespace pufferfish
