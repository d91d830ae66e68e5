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

#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ppbo/errors.hpp"
#include "ppbo/model_io.hpp"

namespace ppbo {
namespace {

using nlohmann::json;

ModelState fixture_model() {
  std::mt19937_64 rng(90);
  const Dataset data = testing::random_dataset(rng, 4, 9, 3);
  return fit_map(data, Hyperparameters{0.8, 0.12, 0.07}, 3);
}

Matrix probe_points() {
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix pts(15, 3);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = unif(rng);
  return pts;
}

TEST(ModelIo, JsonRoundTripPredictsBitwise) {
  const ModelState model = fixture_model();
  const json doc = json::parse(model_to_json(model).dump());
  const ModelState back = model_from_json(doc);
  EXPECT_EQ(back.f_map, model.f_map);
  EXPECT_EQ(back.weights, model.weights);
  EXPECT_EQ(back.report.objective_trace, model.report.objective_trace);
  EXPECT_EQ(back.dataset.size(), model.dataset.size());
  const Prediction a = predict(model, probe_points());
  const Prediction b = predict(back, probe_points());
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.cov, b.cov);
}

TEST(ModelIo, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "ppbo_model_io_test.json";
  const ModelState model = fixture_model();
  save_model(model, path.string());
  const ModelState back = load_model(path.string());
  EXPECT_EQ(predict(back, probe_points()).mean, predict(model, probe_points()).mean);
  std::filesystem::remove(path);
  EXPECT_THROW(load_model(path.string()), FormatError);
}

TEST(ModelIo, ObservationRoundTrip) {
  const ModelState model = fixture_model();
  for (const Observation& o : model.dataset) {
    const Observation back = observation_from_json(json::parse(to_json(o).dump()));
    EXPECT_EQ(back.alpha, o.alpha);
    EXPECT_EQ(back.betas, o.betas);
    EXPECT_EQ(back.query, o.query);
  }
}

TEST(ModelIo, RejectsOtherSchemaVersions) {
  json doc = model_to_json(fixture_model());
  doc["schema_version"] = 0;
  try {
    model_from_json(doc);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("re-export"), std::string::npos);
  }
}

TEST(ModelIo, RejectsMalformedDocuments) {
  const json good = model_to_json(fixture_model());
  for (const char* key : {"f_map", "weights", "observations", "hyper", "dim"}) {
    json doc = good;
    doc.erase(key);
    EXPECT_THROW(model_from_json(doc), FormatError) << key;
  }
  json bad_len = good;
  bad_len["f_map"].erase(0);
  EXPECT_THROW(model_from_json(bad_len), FormatError);
  json bad_alpha = good;
  bad_alpha["observations"][0]["alpha"] = 3.0;
  EXPECT_THROW(model_from_json(bad_alpha), FormatError);
}

TEST(ModelIo, UnfittedModelCannotBeSaved) {
  EXPECT_THROW(model_to_json(ModelState{}), StateError);
}

}  // namespace
}  // namespace ppbo
