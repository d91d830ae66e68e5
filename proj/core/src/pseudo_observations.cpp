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
#include <cmath>
#include <random>
#include <sstream>

#include "ppbo/errors.hpp"
#include "ppbo/preference_model.hpp"

namespace ppbo {

TgnSchedule TgnSchedule::defaults_for(int dim) {
  TgnSchedule s;
  s.n_uniform = static_cast<std::size_t>(dim);
  return s;
}

void TgnSchedule::validate() const {
  if (!(scale_min > 0.0) || !(scale0 >= scale_min)) {
    throw ArgumentError("TGN schedule requires scale0 >= scale_min > 0");
  }
  if (!(decay > 0.0 && decay < 1.0)) {
    throw ArgumentError("TGN decay must lie in (0, 1)");
  }
  if (!(shape >= 2.0)) throw ArgumentError("TGN shape must be >= 2");
  if (pseudo_count < 1) throw ArgumentError("pseudo_count must be >= 1");
}

double TgnSchedule::scale_at(std::size_t query_index) const {
  return std::max(scale_min,
                  scale0 * std::pow(decay, static_cast<double>(query_index)));
}

void Observation::validate() const {
  FeasibleInterval interval = feasible_interval(query);
  if (!interval.contains(alpha)) {
    throw RangeError("observation alpha outside the feasible interval");
  }
  if (betas.empty()) {
    throw ArgumentError("observation needs at least one pseudo-observation");
  }
  for (double b : betas) {
    if (!interval.contains(b)) {
      throw RangeError("pseudo-observation outside the feasible interval");
    }
    if (std::abs(b - alpha) < kMinPseudoGap) {
      throw ArgumentError("pseudo-observation coincides with the answer");
    }
  }
}

namespace {

// One draw from a generalized normal density proportional to
// exp(-|t / scale|^shape), centred at zero: |t| = scale * G^(1/shape) with
// G ~ Gamma(1/shape, 1), sign uniform.
double generalized_normal(double scale, double shape, Rng& rng) {
  std::gamma_distribution<double> gamma(1.0 / shape, 1.0);
  std::bernoulli_distribution sign(0.5);
  double magnitude = scale * std::pow(gamma(rng), 1.0 / shape);
  return sign(rng) ? magnitude : -magnitude;
}

}  // namespace

std::vector<double> sample_pseudo_observations(double alpha,
                                               const FeasibleInterval& interval,
                                               int m,
                                               const TgnSchedule& schedule,
                                               std::size_t query_index,
                                               Rng& rng) {
  if (m < 1) {
    std::ostringstream os;
    os << "pseudo-observation count must be positive, got " << m;
    throw ArgumentError(os.str());
  }
  if (!interval.contains(alpha)) {
    throw RangeError("alpha outside the feasible interval");
  }
  if (!(interval.length() > 2.0 * kMinPseudoGap)) {
    throw RangeError("feasible interval too short for pseudo-observations");
  }

  const bool uniform = query_index < schedule.n_uniform;
  const double scale = schedule.scale_at(query_index);
  std::uniform_real_distribution<double> unif(interval.lo, interval.hi);

  std::vector<double> betas;
  betas.reserve(static_cast<std::size_t>(m));
  while (static_cast<int>(betas.size()) < m) {
    double b = uniform ? unif(rng)
                       : alpha + generalized_normal(scale, schedule.shape, rng);
    if (b < interval.lo || b > interval.hi) continue;  // truncation
    if (std::abs(b - alpha) < kMinPseudoGap) continue;
    betas.push_back(b);
  }
  return betas;
}

Observation make_observation(double alpha, ProjectiveQuery query,
                             const TgnSchedule& schedule,
                             std::size_t query_index, Rng& rng) {
  FeasibleInterval interval = feasible_interval(query);
  if (!interval.contains(alpha)) {
    throw RangeError("alpha outside the feasible interval");
  }
  alpha = std::clamp(alpha, interval.lo, interval.hi);
  std::vector<double> betas = sample_pseudo_observations(
      alpha, interval, schedule.pseudo_count, schedule, query_index, rng);
  return Observation{alpha, std::move(query), std::move(betas)};
}

}  // namespace ppbo
