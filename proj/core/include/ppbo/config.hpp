// Copyright 2026 The PPBO Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "ppbo/acquisition.hpp"
#include "ppbo/domain.hpp"
#include "ppbo/harness.hpp"
#include "ppbo/preference_model.hpp"

namespace ppbo {

// JSON readers throw ValidationError naming the offending key. Keys missing
// from an object keep the value of `defaults`.

// {"lower": [...], "upper": [...]}
Domain domain_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Domain& domain);

// {"sigma_f": .., "l": .., "sigma": ..}
Hyperparameters hyper_from_json(const nlohmann::json& j,
                                const Hyperparameters& defaults);
nlohmann::json to_json(const Hyperparameters& hyper);

// {"n_uniform": .., "scale0": .., "scale_min": .., "decay": .., "shape": ..,
//  "m": ..}. n_uniform may be the string "inf".
TgnSchedule schedule_from_json(const nlohmann::json& j,
                               const TgnSchedule& defaults);
nlohmann::json to_json(const TgnSchedule& schedule);

// {"strategy": "pcd", "K": .., "J": .., "restarts": .., "R": ..,
//  "coordinate_only": ..}
AcquisitionConfig acquisition_from_json(const nlohmann::json& j,
                                        const AcquisitionConfig& defaults);
nlohmann::json to_json(const AcquisitionConfig& cfg);

// Harness config: {"function", "noise_sd", "budget", "seeds" (count or list),
// "out", "trace", "timing", "jobs", "hyper": {...}, "schedule": {...},
// "acquisition": {...}} plus the acquisition keys at top level.
BenchmarkConfig benchmark_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);

}  // namespace ppbo
