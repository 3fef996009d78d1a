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

#ifndef PUFFERFISH_RELEASE_H_
#define PUFFERFISH_RELEASE_H_

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace pufferfish {

// SplitMix64 (Steele, Lea, Flood 2014). Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = uint64_t;

  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (-0.5, 0.5), from the top 53 bits.
  double NextCentered() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53 - 0.5;
  }

 private:
  uint64_t state_;
};

// Laplace(0, theta) samples by inverse CDF:
//   z = -theta sign(u) ln(1 - 2|u|), u ~ U(-1/2, 1/2).
// The same seed always yields the same sequence.
absl::StatusOr<std::vector<double>> SampleLaplace(double theta, uint64_t seed,
                                                  size_t count);

struct ReleaseRecord {
  double theta = 0.0;
  uint64_t seed = 0;
  std::vector<double> original;
  std::vector<double> released;
  double empirical_mse = 0.0;
  // 2 theta^2, the Laplace variance.
  double theoretical_mse = 0.0;
};

// Releases Y = X + N with N ~ Laplace(theta) i.i.d. per entry.
absl::StatusOr<ReleaseRecord> Privatize(std::span<const double> column,
                                        double theta, uint64_t seed);

}  // namespace pufferfish

#endif  // PUFFERFISH_RELEASE_H_
