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

#ifndef PUFFERFISH_INSTANCE_IO_H_
#define PUFFERFISH_INSTANCE_IO_H_

#include <string>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "pufferfish/audit.h"
#include "pufferfish/calibrate.h"
#include "pufferfish/prior_model.h"

namespace pufferfish {

// Instance documents look like
//   {"scenarios": [{"rho": "r", "s_i": "a", "s_j": "b",
//                   "p_i": [0.52, 0.48], "p_j": [0.5, 0.5]}]}
absl::StatusOr<PufferfishInstance> InstanceFromJson(const nlohmann::json& doc);
absl::StatusOr<PufferfishInstance> ReadInstanceFile(const std::string& path);
nlohmann::json InstanceToJson(const PufferfishInstance& instance);

nlohmann::json CalibrationToJson(const CalibrationResult& result);
nlohmann::json AuditToJson(const AuditReport& report);

absl::StatusOr<nlohmann::json> ReadJsonFile(const std::string& path);

}  // namespace pufferfish

#endif  // PUFFERFISH_INSTANCE_IO_H_
