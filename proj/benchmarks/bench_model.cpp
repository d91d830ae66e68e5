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

#include "ppbo/preference_model.hpp"

#include "bench_data.hpp"

namespace ppbo::bench {
namespace {

// Fit cost grows with N * (m + 1) latent locations.
void BM_FitMap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int dim = 6;
  const Dataset data = synthetic_dataset(n, 25, dim, 1);
  const Hyperparameters hyper = Hyperparameters::defaults_for(dim);
  for (auto _ : state) benchmark::DoNotOptimize(fit_map(data, hyper, dim).f_map.data());
  state.counters["latents"] = n * 26;
}
BENCHMARK(BM_FitMap)->Arg(5)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_WarmStartRefit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int dim = 6;
  const Dataset data = synthetic_dataset(n + 1, 25, dim, 2);
  const Hyperparameters hyper = Hyperparameters::defaults_for(dim);
  const ModelState previous = fit_map(Dataset(data.begin(), data.end() - 1), hyper, dim);
  FitOptions opts;
  opts.initial_weights = warm_start_weights(previous, data);
  for (auto _ : state) benchmark::DoNotOptimize(fit_map(data, hyper, dim, opts).f_map.data());
}
BENCHMARK(BM_WarmStartRefit)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_PredictJoint(benchmark::State& state) {
  const int dim = 6;
  const ModelState model = fit_map(synthetic_dataset(20, 25, dim, 3), Hyperparameters::defaults_for(dim), dim);
  const Matrix points = uniform_points(static_cast<int>(state.range(0)), dim, 4);
  for (auto _ : state) benchmark::DoNotOptimize(predict(model, points).cov.data());
}
BENCHMARK(BM_PredictJoint)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace ppbo::bench
