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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ppbo/domain.hpp"
#include "ppbo/preference_model.hpp"
#include "ppbo/rng.hpp"

namespace ppbo {

enum class Strategy {
  kExpectedImprovement,  // "ei"
  kExploit,              // "ext"
  kExplore,              // "exr"
  kCoordinateDescent,    // "pcd"
  kRandom,               // "rand"
  kEiExploit,            // "ei-ext"
  kEiRandom,             // "ei-rand"
};

// Accepts the lower- or upper-case names listed above.
Strategy parse_strategy(std::string_view name);
std::string strategy_name(Strategy strategy);

struct AcquisitionConfig {
  Strategy strategy = Strategy::kExpectedImprovement;
  int K = 100;         // Monte-Carlo replicates of the slice maximum
  int J = 50;          // grid points per slice
  int restarts = 20;   // random directions / reference points per search
  bool coordinate_only = false;
  int R = 50;          // reference points averaged by integrated EI

  void validate() const;
};

struct AcquisitionResult {
  ProjectiveQuery query;
  double score = 0.0;
  int evaluations = 0;
};

// J evenly spaced scalars covering the feasible interval of `q`.
std::vector<double> slice_grid(const ProjectiveQuery& q, int J);

// J x K standard normal draws reused across candidate queries in one round.
Matrix draw_standard_normals(int J, int K, Rng& rng);

// Column k of the result of mean + chol(cov) * normals, maximized over rows:
// the maxima of K joint Gaussian draws. A zero covariance collapses every
// draw onto max(mean).
Vector sample_maxima(const Vector& mean, const Matrix& cov,
                     const Matrix& normals);

// Maxima of K joint posterior draws along the slice grid of `q`, with
// K = normals.cols() and J = normals.rows().
Vector slice_maxima(const ModelState& model, const ProjectiveQuery& q,
                    const Matrix& normals);

// One discrete Thompson draw of max_alpha f(alpha xi + x).
double thompson_max_sample(const ModelState& model, const ProjectiveQuery& q,
                           int J, Rng& rng);

// (1/K) sum_k max(z_k - mu_star, 0).
double improvement_score(const Vector& maxima, double mu_star);
// Unbiased sample variance of the maxima (0 for a single draw).
double variance_score(const Vector& maxima);

double expected_improvement(const ModelState& model, const ProjectiveQuery& q,
                            const AcquisitionConfig& cfg, double mu_star,
                            Rng& rng);
double explore_score(const ModelState& model, const ProjectiveQuery& q,
                     const AcquisitionConfig& cfg, Rng& rng);

// Maximizes EI (or the exploration score for kExplore) over queries. Directions
// are the coordinate vectors when cfg.coordinate_only, otherwise cfg.restarts
// random nonnegative directions; for each direction the free reference
// coordinates are searched by random sampling plus coordinate refinement.
// All candidates share one set of normal draws.
AcquisitionResult optimize_acquisition(const ModelState& model,
                                       const AcquisitionConfig& cfg,
                                       double mu_star, Rng& rng);

// Query whose line passes through x_star: x = x_star zeroed on `support`,
// xi = x_star restricted to `support` and scaled to unit sup-norm. When
// x_star vanishes on the support xi falls back to e_d, d = support[0].
ProjectiveQuery exploit_query(const UnitPoint& x_star,
                              const std::vector<int>& support);
// exploit_query with a single uniformly drawn support coordinate.
ProjectiveQuery next_query_exploit(const UnitPoint& x_star, Rng& rng);

// xi = e_d with d = iteration mod D, x = x_star with coordinate d zeroed.
ProjectiveQuery next_query_pcd(const UnitPoint& x_star, std::size_t iteration);

// Random support of random size with U(0,1] values, or a uniformly chosen
// coordinate vector when coordinate_only.
ProjectionVector random_direction(int dim, bool coordinate_only, Rng& rng);
// Uniform reference on the cube, zeroed on the direction's support.
ProjectiveQuery next_query_random(int dim, const AcquisitionConfig& cfg,
                                  Rng& rng);

struct IntegratedEi {
  ProjectiveQuery query;
  std::vector<double> scores;  // per coordinate, mean EI over R references
  int chosen = 0;
};

// Picks the coordinate with the largest EI averaged over cfg.R shared random
// references, then sets x from the incumbent (kEiExploit) or uniformly at
// random (kEiRandom).
IntegratedEi next_query_integrated_ei(const ModelState& model,
                                      const Incumbent& incumbent,
                                      const AcquisitionConfig& cfg, Rng& rng);

// Dispatches on cfg.strategy. `iteration` is the number of answered queries
// and drives the PCD cycle.
AcquisitionResult select_next_query(const ModelState& model,
                                    const Incumbent& incumbent,
                                    const AcquisitionConfig& cfg,
                                    std::size_t iteration, Rng& rng);

}  // namespace ppbo
