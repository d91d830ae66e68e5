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

#include "ppbo/preference_model.hpp"

namespace ppbo {

inline constexpr int kModelSchemaVersion = 1;

nlohmann::json to_json(const ProjectiveQuery& q);
ProjectiveQuery query_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Observation& obs);
Observation observation_from_json(const nlohmann::json& j);

// {"schema_version", "dim", "hyper", "observations", "f_map", "weights",
//  "fit": {...}}. Doubles are written in shortest round-trip form, so a
// reloaded model predicts bitwise the same as the original.
nlohmann::json model_to_json(const ModelState& model);

// Throws FormatError on a missing field or a schema version other than
// kModelSchemaVersion.
ModelState model_from_json(const nlohmann::json& j);

void save_model(const ModelState& model, const std::string& path);
ModelState load_model(const std::string& path);

}  // namespace ppbo
