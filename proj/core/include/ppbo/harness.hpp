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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ppbo/acquisition.hpp"
#include "ppbo/domain.hpp"
#include "ppbo/preference_model.hpp"
#include "ppbo/rng.hpp"
#include "ppbo/test_functions.hpp"

namespace ppbo {

struct BenchmarkConfig {
  std::string function = "camel2d";
  std::optional<double> noise_sd;  // default: 1% of the sampled range
  AcquisitionConfig acquisition;
  int budget = 100;
  std::vector<std::uint64_t> seeds;
  std::optional<Hyperparameters> hyper;  // default: defaults_for(D)
  std::optional<TgnSchedule> schedule;   // default: defaults_for(D)
  IncumbentOptions incumbent;
  std::string output_path;  // CSV; empty = do not write
  std::string trace_path;   // oracle line-search CSV; empty = do not write
  // When false the wall_ms column is written as 0 so that repeated runs are
  // byte-identical.
  bool record_timing = true;
  int jobs = 1;

  // Budget 100 for D <= 6 and 60 above; seeds 0..9. A budget equal to D
  // runs the initialization only.
  static BenchmarkConfig defaults_for(const std::string& function);
  void validate(int dim) const;
};

struct ConvergenceRecord {
  std::uint64_t seed = 0;
  std::size_t iteration = 0;  // queries answered so far
  Vector x_opt;               // incumbent, native units
  double f_true = 0.0;        // noiseless objective at x_opt
  double wall_ms = 0.0;
};

struct OracleTraceRow {
  std::uint64_t seed = 0;
  std::size_t query = 0;
  double alpha = 0.0;
  double value = 0.0;
};

struct SeedRun {
  std::uint64_t seed = 0;
  std::vector<ConvergenceRecord> records;
  std::vector<OracleTraceRow> trace;
  bool failed = false;
  std::string error;
};

struct BenchmarkResult {
  int dim = 0;
  std::vector<SeedRun> runs;

  bool all_completed() const;
};

// D queries; query i has xi = e_i and a uniform reference zeroed at i.
std::vector<ProjectiveQuery> initial_queries(int dim, Rng& rng);

// One seed of the loop: initialize, then fit / acquire / answer until the
// budget is spent. Records one row after the initial fit and one after each
// later fit (budget - D + 1 rows). Numerical failures mark the run failed.
SeedRun run_seed(const BenchmarkConfig& cfg, const TestFunction& tf,
                 std::uint64_t seed);

// All seeds (in parallel when cfg.jobs > 1), ordered by seed position. Writes
// the CSV outputs named in the config.
BenchmarkResult run_benchmark(const BenchmarkConfig& cfg);
// Same with an explicit objective; cfg.function and cfg.noise_sd are ignored.
BenchmarkResult run_benchmark(const BenchmarkConfig& cfg, const TestFunction& tf);

// seed,iteration,f_true,wall_ms,x_opt_0..x_opt_{D-1}
void write_convergence_csv(std::ostream& out, const BenchmarkResult& result);
// seed,query,alpha,value
void write_trace_csv(std::ostream& out, const BenchmarkResult& result);

// Median of the last record's f_true over completed runs.
double final_median(const BenchmarkResult& result);
// Median of the first record's f_true over completed runs.
double initial_median(const BenchmarkResult& result);

}  // namespace ppbo
