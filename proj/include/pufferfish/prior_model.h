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

#ifndef PUFFERFISH_PRIOR_MODEL_H_
#define PUFFERFISH_PRIOR_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace pufferfish {

// Probabilities must sum to one within this tolerance.
inline constexpr double kNormalizationTolerance = 1e-9;

// A probability mass function P(x | s, rho) over the integer alphabet
// {0, ..., alphabet_size() - 1}. Immutable once constructed.
class ConditionalPrior {
 public:
  // Validates that every entry is finite and non-negative and that the entries
  // sum to one within kNormalizationTolerance.
  static absl::StatusOr<ConditionalPrior> Create(std::vector<double> pmf);

  // Normalizes raw counts. Fails with an "EmptySupport" error when every
  // count is zero.
  static absl::StatusOr<ConditionalPrior> FromCounts(
      std::span<const uint64_t> counts);

  size_t alphabet_size() const { return pmf_.size(); }
  const std::vector<double>& pmf() const { return pmf_; }
  double operator[](size_t x) const { return pmf_[x]; }

  // Cumulative mass F(x) = sum_{k <= x} P(k).
  std::vector<double> Cumulative() const;

  friend bool operator==(const ConditionalPrior&,
                         const ConditionalPrior&) = default;

 private:
  explicit ConditionalPrior(std::vector<double> pmf) : pmf_(std::move(pmf)) {}

  std::vector<double> pmf_;
};

// One adversary belief rho together with one protected secret pair
// (s_i, s_j) and the two conditional priors it induces.
class SecretPairScenario {
 public:
  static absl::StatusOr<SecretPairScenario> Create(std::string rho_id,
                                                   std::string s_i_label,
                                                   std::string s_j_label,
                                                   ConditionalPrior prior_i,
                                                   ConditionalPrior prior_j);

  const std::string& rho_id() const { return rho_id_; }
  const std::string& s_i_label() const { return s_i_label_; }
  const std::string& s_j_label() const { return s_j_label_; }
  const ConditionalPrior& prior_i() const { return prior_i_; }
  const ConditionalPrior& prior_j() const { return prior_j_; }
  size_t alphabet_size() const { return prior_i_.alphabet_size(); }

  // The same scenario with the roles of s_i and s_j exchanged.
  SecretPairScenario Swapped() const;

 private:
  SecretPairScenario(std::string rho_id, std::string s_i_label,
                     std::string s_j_label, ConditionalPrior prior_i,
                     ConditionalPrior prior_j)
      : rho_id_(std::move(rho_id)),
        s_i_label_(std::move(s_i_label)),
        s_j_label_(std::move(s_j_label)),
        prior_i_(std::move(prior_i)),
        prior_j_(std::move(prior_j)) {}

  std::string rho_id_;
  std::string s_i_label_;
  std::string s_j_label_;
  ConditionalPrior prior_i_;
  ConditionalPrior prior_j_;
};

// The discriminative pairs and adversary beliefs to protect. The privacy
// budget is supplied per call and is not part of the instance.
class PufferfishInstance {
 public:
  static absl::StatusOr<PufferfishInstance> Create(
      std::vector<SecretPairScenario> scenarios);

  const std::vector<SecretPairScenario>& scenarios() const {
    return scenarios_;
  }
  size_t alphabet_size() const { return scenarios_.front().alphabet_size(); }

 private:
  explicit PufferfishInstance(std::vector<SecretPairScenario> scenarios)
      : scenarios_(std::move(scenarios)) {}

  std::vector<SecretPairScenario> scenarios_;
};

// Convenience for tests and built-in experiments: a single-scenario instance
// built from two pmf vectors.
absl::StatusOr<PufferfishInstance> MakeInstance(std::vector<double> p_i,
                                                std::vector<double> p_j);

}  // namespace pufferfish

#endif  // PUFFERFISH_PRIOR_MODEL_H_
