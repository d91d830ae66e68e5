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

#include <algorithm>
#include <numeric>
#include <random>

#include "ppbo/errors.hpp"
#include "ppbo/preference_model.hpp"

namespace ppbo {

namespace {

constexpr double kInitialStep = 0.1;
constexpr double kFinalStep = 1e-4;
constexpr int kMaxEvaluations = 4000;

// Compass search on the posterior mean inside the unit cube.
Vector coordinate_search(const ModelState& model, Vector x, double& value) {
  double step = kInitialStep;
  int evals = 0;
  while (step > kFinalStep && evals < kMaxEvaluations) {
    bool improved = false;
    for (int d = 0; d < x.size() && !improved; ++d) {
      for (double sign : {1.0, -1.0}) {
        Vector y = x;
        y[d] = std::clamp(x[d] + sign * step, 0.0, 1.0);
        if (y[d] == x[d]) continue;
        double fy = predict_mean(model, y);
        ++evals;
        if (fy > value) {
          x = std::move(y);
          value = fy;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return x;
}

}  // namespace

Incumbent posterior_mean_argmax(const ModelState& model, Rng& rng,
                                const IncumbentOptions& options) {
  if (!model.fitted) throw StateError("model has not been fitted");
  const int dim = model.dim;
  const int n = model.location_count();
  if (n == 0) return {UnitPoint::center(dim), 0.0};

  const int restarts = std::max(options.restarts, 0);
  Matrix candidates(n + restarts, dim);
  candidates.topRows(n) = model.layout.locations;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int r = 0; r < restarts; ++r) {
    for (int d = 0; d < dim; ++d) candidates(n + r, d) = unif(rng);
  }
  Vector means =
      kernel_matrix(candidates, model.layout.locations, model.hyper) *
      model.weights;

  std::vector<int> order(static_cast<std::size_t>(candidates.rows()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return means[a] > means[b]; });

  // Distinct starting points only; duplicated training locations are common.
  std::vector<Vector> starts;
  for (int idx : order) {
    if (static_cast<int>(starts.size()) >= std::max(options.refine, 1)) break;
    Vector c = candidates.row(idx).transpose();
    bool seen = std::any_of(starts.begin(), starts.end(),
                            [&](const Vector& s) { return s == c; });
    if (!seen) starts.push_back(std::move(c));
  }

  Vector best;
  double best_value = -std::numeric_limits<double>::infinity();
  for (Vector& start : starts) {
    double value = predict_mean(model, start);
    Vector x = coordinate_search(model, std::move(start), value);
    if (value > best_value) {
      best_value = value;
      best = std::move(x);
    }
  }
  UnitPoint x_star(best);
  return {x_star, predict_mean(model, x_star.coords())};
}

}  // namespace ppbo
