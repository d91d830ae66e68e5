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

#include <random>

#include "ppbo/preference_model.hpp"

namespace ppbo::bench {

// Axis-aligned observations with uniform answers and pseudo-observations.
inline Dataset synthetic_dataset(int n, int m, int dim, std::uint64_t seed) {
  Rng rng = make_rng(seed, Stream::kPseudoObservations);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Dataset out;
  for (int i = 0; i < n; ++i) {
    Vector xi = Vector::Zero(dim);
    xi[i % dim] = 1.0;
    Vector x(dim);
    for (int d = 0; d < dim; ++d) x[d] = d == i % dim ? 0.0 : unif(rng);
    const ProjectiveQuery q(make_projection(xi), UnitPoint(x));
    TgnSchedule schedule = TgnSchedule::defaults_for(dim);
    schedule.pseudo_count = m;
    out.push_back(make_observation(unif(rng), q, schedule, static_cast<std::size_t>(i), rng));
  }
  return out;
}

inline Matrix uniform_points(int count, int dim, std::uint64_t seed) {
  Rng rng = make_rng(seed, Stream::kInitialization);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix pts(count, dim);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = unif(rng);
  return pts;
}

}  // namespace ppbo::bench
