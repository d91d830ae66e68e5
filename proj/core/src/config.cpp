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

#include "ppbo/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "ppbo/errors.hpp"

namespace ppbo {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& field) {
  if (!j.is_object()) throw ValidationError(field, field + " must be an object");
}

double number(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ValidationError(key, key + " must be a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(key, key + " must be finite");
  return x;
}

int integer(const json& j, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) {
    throw ValidationError(key, key + " must be an integer");
  }
  return v.get<int>();
}

bool boolean(const json& j, const std::string& key, bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ValidationError(key, key + " must be a boolean");
  return v.get<bool>();
}

Vector vector_field(const json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ValidationError(key, key + " must be an array of numbers");
  }
  const json& arr = j.at(key);
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      throw ValidationError(key, key + " must be an array of numbers");
    }
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

// Rewraps validation failures of a nested struct with its field prefix.
template <typename F>
auto with_prefix(const std::string& prefix, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    if (e.field() == prefix) throw;
    throw ValidationError(prefix + "." + e.field(), e.what());
  } catch (const ArgumentError& e) {
    throw ValidationError(prefix, e.what());
  }
}

}  // namespace

Domain domain_from_json(const json& j) {
  require_object(j, "domain");
  Vector lower = vector_field(j, "lower");
  Vector upper = vector_field(j, "upper");
  try {
    return Domain(std::move(lower), std::move(upper));
  } catch (const Error& e) {
    throw ValidationError("domain", e.what());
  }
}

json to_json(const Domain& domain) {
  return {{"lower", std::vector<double>(domain.lower().begin(), domain.lower().end())},
          {"upper", std::vector<double>(domain.upper().begin(), domain.upper().end())}};
}

Hyperparameters hyper_from_json(const json& j, const Hyperparameters& defaults) {
  require_object(j, "hyper");
  Hyperparameters h;
  h.sigma_f = number(j, "sigma_f", defaults.sigma_f);
  h.l = number(j, "l", defaults.l);
  h.sigma = number(j, "sigma", defaults.sigma);
  try {
    h.validate();
  } catch (const ArgumentError& e) {
    throw ValidationError("hyper", e.what());
  }
  return h;
}

json to_json(const Hyperparameters& hyper) {
  return {{"sigma_f", hyper.sigma_f}, {"l", hyper.l}, {"sigma", hyper.sigma}};
}

TgnSchedule schedule_from_json(const json& j, const TgnSchedule& defaults) {
  require_object(j, "schedule");
  TgnSchedule s = defaults;
  if (j.contains("n_uniform")) {
    const json& v = j.at("n_uniform");
    if (v.is_string() && v.get<std::string>() == "inf") {
      s.n_uniform = TgnSchedule::kAlwaysUniform;
    } else if (v.is_number_integer() && v.get<long long>() >= 0) {
      s.n_uniform = v.get<std::size_t>();
    } else {
      throw ValidationError("n_uniform",
                            "n_uniform must be a nonnegative integer or \"inf\"");
    }
  }
  s.scale0 = number(j, "scale0", s.scale0);
  s.scale_min = number(j, "scale_min", s.scale_min);
  s.decay = number(j, "decay", s.decay);
  s.shape = number(j, "shape", s.shape);
  s.pseudo_count = integer(j, "m", s.pseudo_count);
  try {
    s.validate();
  } catch (const ArgumentError& e) {
    throw ValidationError("schedule", e.what());
  }
  return s;
}

json to_json(const TgnSchedule& schedule) {
  json j;
  if (schedule.n_uniform == TgnSchedule::kAlwaysUniform) {
    j["n_uniform"] = "inf";
  } else {
    j["n_uniform"] = schedule.n_uniform;
  }
  j["scale0"] = schedule.scale0;
  j["scale_min"] = schedule.scale_min;
  j["decay"] = schedule.decay;
  j["shape"] = schedule.shape;
  j["m"] = schedule.pseudo_count;
  return j;
}

AcquisitionConfig acquisition_from_json(const json& j,
                                        const AcquisitionConfig& defaults) {
  require_object(j, "acquisition");
  AcquisitionConfig c = defaults;
  if (j.contains("strategy")) {
    if (!j.at("strategy").is_string()) {
      throw ValidationError("strategy", "strategy must be a string");
    }
    try {
      c.strategy = parse_strategy(j.at("strategy").get<std::string>());
    } catch (const LookupError& e) {
      throw ValidationError("strategy", e.what());
    }
  }
  c.K = integer(j, "K", c.K);
  c.J = integer(j, "J", c.J);
  c.restarts = integer(j, "restarts", c.restarts);
  c.R = integer(j, "R", c.R);
  c.coordinate_only = boolean(j, "coordinate_only", c.coordinate_only);
  try {
    c.validate();
  } catch (const ArgumentError& e) {
    throw ValidationError("acquisition", e.what());
  }
  return c;
}

json to_json(const AcquisitionConfig& cfg) {
  return {{"strategy", strategy_name(cfg.strategy)},
          {"K", cfg.K},
          {"J", cfg.J},
          {"restarts", cfg.restarts},
          {"R", cfg.R},
          {"coordinate_only", cfg.coordinate_only}};
}

BenchmarkConfig benchmark_from_json(const json& j) {
  require_object(j, "config");
  std::string function = "camel2d";
  if (j.contains("function")) {
    if (!j.at("function").is_string()) {
      throw ValidationError("function", "function must be a string");
    }
    function = j.at("function").get<std::string>();
  }
  BenchmarkConfig cfg;
  try {
    cfg = BenchmarkConfig::defaults_for(function);
  } catch (const LookupError& e) {
    throw ValidationError("function", e.what());
  }
  if (j.contains("noise_sd")) {
    double s = number(j, "noise_sd", 0.0);
    if (s < 0.0) throw ValidationError("noise_sd", "noise_sd must be >= 0");
    cfg.noise_sd = s;
  }
  cfg.budget = integer(j, "budget", cfg.budget);
  if (j.contains("seeds")) {
    const json& s = j.at("seeds");
    cfg.seeds.clear();
    if (s.is_number_integer()) {
      long long count = s.get<long long>();
      if (count < 1) throw ValidationError("seeds", "seeds must be positive");
      for (long long i = 0; i < count; ++i) {
        cfg.seeds.push_back(static_cast<std::uint64_t>(i));
      }
    } else if (s.is_array()) {
      for (const json& v : s) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
          throw ValidationError("seeds", "seeds must be nonnegative integers");
        }
        cfg.seeds.push_back(v.get<std::uint64_t>());
      }
    } else {
      throw ValidationError("seeds", "seeds must be a count or a list");
    }
  }
  if (j.contains("out")) cfg.output_path = j.at("out").get<std::string>();
  if (j.contains("trace")) cfg.trace_path = j.at("trace").get<std::string>();
  cfg.record_timing = boolean(j, "timing", cfg.record_timing);
  cfg.jobs = integer(j, "jobs", cfg.jobs);

  const int dim = make_test_function(function, 0.0).domain.dim();
  if (j.contains("hyper")) {
    cfg.hyper = with_prefix("hyper", [&] {
      return hyper_from_json(j.at("hyper"), Hyperparameters::defaults_for(dim));
    });
  }
  if (j.contains("schedule")) {
    cfg.schedule = with_prefix("schedule", [&] {
      return schedule_from_json(j.at("schedule"), TgnSchedule::defaults_for(dim));
    });
  }
  cfg.acquisition = acquisition_from_json(j, cfg.acquisition);
  if (j.contains("acquisition")) {
    cfg.acquisition = with_prefix("acquisition", [&] {
      return acquisition_from_json(j.at("acquisition"), cfg.acquisition);
    });
  }
  try {
    cfg.validate(dim);
  } catch (const ArgumentError& e) {
    throw ValidationError("config", e.what());
  }
  return cfg;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace ppbo
