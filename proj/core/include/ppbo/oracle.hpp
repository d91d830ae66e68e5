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

#include <vector>

#include "ppbo/domain.hpp"
#include "ppbo/rng.hpp"
#include "ppbo/test_functions.hpp"

namespace ppbo {

struct OracleAnswer {
  double alpha_star = 0.0;
  double f_at_answer = 0.0;  // noiseless objective at the answer, diagnostic
};

// Every objective evaluation made while answering one query.
struct OracleTrace {
  struct Entry {
    double alpha;
    double value;
  };
  std::vector<Entry> entries;
};

struct LineSearchOptions {
  int grid_points = 201;
  double tolerance = 1e-5;
  // Lowest grid local minima whose brackets get refined.
  int brackets = 5;
};

// Simulated oracle answer argmin_alpha f(alpha xi + x) over the feasible
// interval. Scans a uniform grid, refines the best local-minimum brackets by
// golden-section search and finishes with one parabolic step. With `rng` each
// evaluation carries fresh N(0, noise_sd^2) noise; without it the search is
// exact.
OracleAnswer projective_feedback(const TestFunction& tf,
                                 const ProjectiveQuery& q, Rng* rng = nullptr,
                                 OracleTrace* trace = nullptr,
                                 const LineSearchOptions& options = {});

}  // namespace ppbo
