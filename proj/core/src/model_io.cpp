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

#include "ppbo/model_io.hpp"

#include <fstream>

#include "ppbo/config.hpp"
#include "ppbo/errors.hpp"

namespace ppbo {

namespace {

using nlohmann::json;

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Vector to_eigen(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

}  // namespace

json to_json(const ProjectiveQuery& q) {
  return {{"xi", to_std(q.xi().values())}, {"x", to_std(q.x().coords())}};
}

ProjectiveQuery query_from_json(const json& j) {
  return ProjectiveQuery(make_projection(to_eigen(j.at("xi"))),
                         UnitPoint(to_eigen(j.at("x"))));
}

json to_json(const Observation& obs) {
  json j = to_json(obs.query);
  j["alpha"] = obs.alpha;
  j["betas"] = obs.betas;
  return j;
}

Observation observation_from_json(const json& j) {
  Observation obs{j.at("alpha").get<double>(), query_from_json(j),
                  j.at("betas").get<std::vector<double>>()};
  obs.validate();
  return obs;
}

json model_to_json(const ModelState& model) {
  if (!model.fitted) throw StateError("cannot serialize an unfitted model");
  json obs = json::array();
  for (const Observation& o : model.dataset) obs.push_back(to_json(o));
  return {{"schema_version", kModelSchemaVersion},
          {"dim", model.dim},
          {"hyper", to_json(model.hyper)},
          {"observations", std::move(obs)},
          {"f_map", to_std(model.f_map)},
          {"weights", to_std(model.weights)},
          {"fit",
           {{"iterations", model.report.iterations},
            {"gradient_norm", model.report.gradient_norm},
            {"objective_trace", model.report.objective_trace}}}};
}

ModelState model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("schema_version")) {
    throw FormatError("model document has no schema_version");
  }
  const int version = j.at("schema_version").get<int>();
  if (version != kModelSchemaVersion) {
    throw FormatError("model schema version " + std::to_string(version) +
                      " is not supported (expected " +
                      std::to_string(kModelSchemaVersion) +
                      "); re-export the model with this release");
  }
  try {
    const int dim = j.at("dim").get<int>();
    Dataset dataset;
    for (const json& o : j.at("observations")) {
      dataset.push_back(observation_from_json(o));
    }
    Hyperparameters hyper =
        hyper_from_json(j.at("hyper"), Hyperparameters::defaults_for(dim));
    FitReport report;
    if (j.contains("fit")) {
      const json& f = j.at("fit");
      report.iterations = f.value("iterations", 0);
      report.gradient_norm = f.value("gradient_norm", 0.0);
      report.objective_trace =
          f.value("objective_trace", std::vector<double>{});
    }
    return restore_model(dataset, hyper, dim, to_eigen(j.at("f_map")),
                         to_eigen(j.at("weights")), std::move(report));
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model document: ") + e.what());
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("invalid model document: ") + e.what());
  }
}

void save_model(const ModelState& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << model_to_json(model).dump();
}

ModelState load_model(const std::string& path) {
  return model_from_json(read_json_file(path));
}

}  // namespace ppbo
