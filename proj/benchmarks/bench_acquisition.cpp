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

#include <benchmark/benchmark.h>

#include "ppbo/acquisition.hpp"

#include "bench_data.hpp"

namespace ppbo::bench {
namespace {

const ModelState& shared_model() {
  static const ModelState model =
      fit_map(synthetic_dataset(20, 25, 6, 5), Hyperparameters::defaults_for(6), 6);
  return model;
}

// One EI evaluation: joint slice posterior on J points and K Thompson draws.
void BM_ExpectedImprovement(benchmark::State& state) {
  const ModelState& model = shared_model();
  AcquisitionConfig cfg;
  cfg.J = static_cast<int>(state.range(0));
  Rng rng = make_rng(6, Stream::kAcquisition);
  const ProjectiveQuery q = next_query_random(6, cfg, rng);
  for (auto _ : state) {
    Rng draws = make_rng(8, Stream::kAcquisition);
    benchmark::DoNotOptimize(expected_improvement(model, q, cfg, 0.0, draws));
  }
}
BENCHMARK(BM_ExpectedImprovement)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_SelectNextQuery(benchmark::State& state) {
  const ModelState& model = shared_model();
  AcquisitionConfig cfg;
  cfg.strategy = static_cast<Strategy>(state.range(0));
  Rng inc_rng = make_rng(7, Stream::kIncumbent);
  const Incumbent inc = posterior_mean_argmax(model, inc_rng);
  Rng rng = make_rng(7, Stream::kAcquisition);
  for (auto _ : state) benchmark::DoNotOptimize(select_next_query(model, inc, cfg, 20, rng).score);
  state.SetLabel(strategy_name(cfg.strategy));
}
BENCHMARK(BM_SelectNextQuery)
    ->Arg(static_cast<int>(Strategy::kExpectedImprovement))
    ->Arg(static_cast<int>(Strategy::kEiExploit))
    ->Arg(static_cast<int>(Strategy::kCoordinateDescent))
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace ppbo::bench
