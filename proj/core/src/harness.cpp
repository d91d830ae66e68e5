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

#include "ppbo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "ppbo/errors.hpp"
#include "ppbo/oracle.hpp"

namespace ppbo {

BenchmarkConfig BenchmarkConfig::defaults_for(const std::string& function) {
  const int dim = make_test_function(function, 0.0).domain.dim();
  BenchmarkConfig cfg;
  cfg.function = function;
  cfg.budget = dim <= 6 ? 100 : 60;
  for (std::uint64_t s = 0; s < 10; ++s) cfg.seeds.push_back(s);
  return cfg;
}

void BenchmarkConfig::validate(int dim) const {
  if (budget < dim) {
    throw ArgumentError("budget must cover the " + std::to_string(dim) +
                        " initial queries");
  }
  if (seeds.empty()) throw ArgumentError("at least one seed is required");
  if (jobs < 1) throw ArgumentError("jobs must be >= 1");
  acquisition.validate();
  if (hyper) hyper->validate();
  if (schedule) schedule->validate();
}

bool BenchmarkResult::all_completed() const {
  return std::none_of(runs.begin(), runs.end(),
                      [](const SeedRun& r) { return r.failed; });
}

std::vector<ProjectiveQuery> initial_queries(int dim, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<ProjectiveQuery> queries;
  queries.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    Vector x(dim);
    for (int d = 0; d < dim; ++d) x[d] = unif(rng);
    queries.push_back(
        ProjectiveQuery::with_reference(coordinate_projection(dim, i), x));
  }
  return queries;
}

SeedRun run_seed(const BenchmarkConfig& cfg, const TestFunction& tf,
                 std::uint64_t seed) {
  using Clock = std::chrono::steady_clock;
  const int dim = tf.domain.dim();
  const Hyperparameters hyper = cfg.hyper.value_or(Hyperparameters::defaults_for(dim));
  const TgnSchedule schedule = cfg.schedule.value_or(TgnSchedule::defaults_for(dim));

  Rng init_rng = make_rng(seed, Stream::kInitialization);
  Rng oracle_rng = make_rng(seed, Stream::kOracle);
  Rng pseudo_rng = make_rng(seed, Stream::kPseudoObservations);
  Rng acq_rng = make_rng(seed, Stream::kAcquisition);
  Rng inc_rng = make_rng(seed, Stream::kIncumbent);
  Rng* noise = tf.noise_sd > 0.0 ? &oracle_rng : nullptr;
  const bool tracing = !cfg.trace_path.empty();

  SeedRun run;
  run.seed = seed;
  Dataset dataset;
  auto answer = [&](const ProjectiveQuery& q) {
    OracleTrace trace;
    OracleAnswer a = projective_feedback(tf, q, noise, tracing ? &trace : nullptr);
    for (const auto& e : trace.entries) {
      run.trace.push_back({seed, dataset.size(), e.alpha, e.value});
    }
    dataset.push_back(
        make_observation(a.alpha_star, q, schedule, dataset.size(), pseudo_rng));
  };
  auto record = [&](const Incumbent& inc, Clock::time_point start) {
    ConvergenceRecord rec;
    rec.seed = seed;
    rec.iteration = dataset.size();
    rec.x_opt = denormalize_point(tf.domain, inc.x);
    rec.f_true = eval_test_function(tf, rec.x_opt);
    if (cfg.record_timing) {
      rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start)
                        .count();
    }
    run.records.push_back(std::move(rec));
  };

  try {
    auto start = Clock::now();
    for (const ProjectiveQuery& q : initial_queries(dim, init_rng)) answer(q);
    ModelState model = fit_map(dataset, hyper, dim);
    Incumbent inc = posterior_mean_argmax(model, inc_rng, cfg.incumbent);
    record(inc, start);

    while (static_cast<int>(dataset.size()) < cfg.budget) {
      start = Clock::now();
      AcquisitionResult next =
          select_next_query(model, inc, cfg.acquisition, dataset.size(), acq_rng);
      answer(next.query);
      FitOptions options;
      options.initial_weights = warm_start_weights(model, dataset);
      model = fit_map(dataset, hyper, dim, options);
      inc = posterior_mean_argmax(model, inc_rng, cfg.incumbent);
      record(inc, start);
    }
  } catch (const Error& e) {
    run.failed = true;
    run.error = e.what();
  }
  return run;
}

BenchmarkResult run_benchmark(const BenchmarkConfig& cfg) {
  return run_benchmark(cfg, make_test_function(cfg.function, cfg.noise_sd));
}

BenchmarkResult run_benchmark(const BenchmarkConfig& cfg, const TestFunction& tf) {
  cfg.validate(tf.domain.dim());

  BenchmarkResult result;
  result.dim = tf.domain.dim();
  result.runs.resize(cfg.seeds.size());
  const int workers =
      std::min<int>(cfg.jobs, static_cast<int>(cfg.seeds.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
      result.runs[i] = run_seed(cfg, tf, cfg.seeds[i]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cfg.seeds.size(); i = next++) {
          result.runs[i] = run_seed(cfg, tf, cfg.seeds[i]);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  if (!cfg.output_path.empty()) {
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + cfg.output_path);
    write_convergence_csv(out, result);
  }
  if (!cfg.trace_path.empty()) {
    std::ofstream out(cfg.trace_path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + cfg.trace_path);
    write_trace_csv(out, result);
  }
  return result;
}

void write_convergence_csv(std::ostream& out, const BenchmarkResult& result) {
  out << "seed,iteration,f_true,wall_ms";
  for (int d = 0; d < result.dim; ++d) out << ",x_opt_" << d;
  out << '\n';
  std::ostringstream line;
  line << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const SeedRun& run : result.runs) {
    for (const ConvergenceRecord& r : run.records) {
      line.str("");
      line << r.seed << ',' << r.iteration << ',' << r.f_true << ',' << std::fixed
           << std::setprecision(3) << r.wall_ms << std::defaultfloat
           << std::setprecision(std::numeric_limits<double>::max_digits10);
      for (Eigen::Index d = 0; d < r.x_opt.size(); ++d) line << ',' << r.x_opt[d];
      out << line.str() << '\n';
    }
  }
}

void write_trace_csv(std::ostream& out, const BenchmarkResult& result) {
  out << "seed,query,alpha,value\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const SeedRun& run : result.runs) {
    for (const OracleTraceRow& r : run.trace) {
      out << r.seed << ',' << r.query << ',' << r.alpha << ',' << r.value << '\n';
    }
  }
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

double final_median(const BenchmarkResult& result) {
  std::vector<double> v;
  for (const SeedRun& run : result.runs) {
    if (!run.failed && !run.records.empty()) v.push_back(run.records.back().f_true);
  }
  return median(std::move(v));
}

double initial_median(const BenchmarkResult& result) {
  std::vector<double> v;
  for (const SeedRun& run : result.runs) {
    if (!run.failed && !run.records.empty()) v.push_back(run.records.front().f_true);
  }
  return median(std::move(v));
}

}  // namespace ppbo
