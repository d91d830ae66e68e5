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

#include <csignal>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ppbo/config.hpp"
#include "ppbo/errors.hpp"
#include "ppbo/harness.hpp"
#include "ppbo/http_api.hpp"

namespace {

ppbo::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

struct BenchArgs {
  std::string config;
  std::string function;
  std::string strategy;
  int budget = 0;
  int seeds = 0;
  std::string out;
  std::string trace;
  double noise_sd = -1.0;
  bool no_timing = false;
  int jobs = 0;
};

int run_bench(const BenchArgs& args) {
  nlohmann::json j = args.config.empty() ? nlohmann::json::object()
                                         : ppbo::read_json_file(args.config);
  if (!args.function.empty()) j["function"] = args.function;
  if (!args.strategy.empty()) j["strategy"] = args.strategy;
  if (args.budget > 0) j["budget"] = args.budget;
  if (args.seeds > 0) j["seeds"] = args.seeds;
  if (!args.out.empty()) j["out"] = args.out;
  if (!args.trace.empty()) j["trace"] = args.trace;
  if (args.noise_sd >= 0.0) j["noise_sd"] = args.noise_sd;
  if (args.no_timing) j["timing"] = false;
  if (args.jobs > 0) j["jobs"] = args.jobs;

  const ppbo::BenchmarkConfig cfg = ppbo::benchmark_from_json(j);
  const ppbo::BenchmarkResult result = ppbo::run_benchmark(cfg);
  for (const ppbo::SeedRun& run : result.runs) {
    if (run.failed) {
      std::cerr << "seed " << run.seed << " failed: " << run.error << '\n';
    }
  }
  std::cout << cfg.function << " " << ppbo::strategy_name(cfg.acquisition.strategy)
            << ": median f at incumbent " << ppbo::initial_median(result)
            << " -> " << ppbo::final_median(result) << " over "
            << result.runs.size() << " seeds\n";
  return result.all_completed() ? 0 : 1;
}

int run_serve(const std::string& host, int port, const std::string& data_dir) {
  ppbo::SessionStore store(data_dir);
  ppbo::HttpServer server(store);
  const int bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << "cannot bind " << host << ":" << port << '\n';
    return 1;
  }
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << "listening on http://" << host << ":" << bound << " (data in "
            << data_dir << ")" << std::endl;
  const bool ok = server.listen_after_bind();
  g_server = nullptr;
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projective preferential Bayesian optimization"};
  app.require_subcommand(1);

  BenchArgs bench;
  CLI::App* b = app.add_subcommand("bench", "Run the seeded benchmark loop");
  b->add_option("--config", bench.config, "JSON config file")->check(CLI::ExistingFile);
  b->add_option("--function", bench.function, "camel2d, hartmann6, levy10, ackley20, quadratic-<D>");
  b->add_option("--strategy", bench.strategy, "ei, ext, exr, pcd, rand, ei-ext, ei-rand");
  b->add_option("--budget", bench.budget, "Queries per seed (including the D initial ones)");
  b->add_option("--seeds", bench.seeds, "Number of seeds, 0..n-1");
  b->add_option("--out", bench.out, "Convergence CSV");
  b->add_option("--trace", bench.trace, "Oracle line-search CSV");
  b->add_option("--noise-sd", bench.noise_sd, "Oracle noise sd (0 = noiseless)");
  b->add_flag("--no-timing", bench.no_timing, "Write wall_ms as 0");
  b->add_option("--jobs", bench.jobs, "Seeds run in parallel");

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir = "ppbo-sessions";
  CLI::App* s = app.add_subcommand("serve", "Serve elicitation sessions over HTTP");
  s->add_option("--host", host, "Bind address");
  s->add_option("--port", port, "Port (0 picks a free one)");
  s->add_option("--data-dir", data_dir, "Session directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (b->parsed()) return run_bench(bench);
    return run_serve(host, port, data_dir);
  } catch (const ppbo::ValidationError& e) {
    std::cerr << "invalid config (" << e.field() << "): " << e.what() << '\n';
    return 2;
  } catch (const ppbo::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
