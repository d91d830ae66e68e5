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
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "ppbo/domain.hpp"
#include "ppbo/rng.hpp"

namespace ppbo {

// Squared-exponential kernel sigma_f^2 * exp(-|p - q|^2 / (2 l)) and the
// white-noise scale sigma of the preference likelihood. Note that l divides
// the squared distance directly; it is not a squared lengthscale.
struct Hyperparameters {
  double sigma_f = 1.0;
  double l = 0.1;
  double sigma = 0.1;

  // sigma_f = 1, l = 0.05 * dim, sigma = 0.1.
  static Hyperparameters defaults_for(int dim);
  void validate() const;
};

// Pseudo-observation sampling schedule. The first `n_uniform` queries draw
// uniformly on the feasible interval; later ones draw from a truncated
// generalized normal centred on the answer, with scale
// max(scale_min, scale0 * decay^query_index) and exponent `shape`.
struct TgnSchedule {
  std::size_t n_uniform = 2;
  double scale0 = 0.3;
  double scale_min = 0.05;
  double decay = 0.9;
  double shape = 2.0;
  int pseudo_count = 25;

  static constexpr std::size_t kAlwaysUniform =
      std::numeric_limits<std::size_t>::max();

  static TgnSchedule defaults_for(int dim);
  void validate() const;
  double scale_at(std::size_t query_index) const;
};

// Minimum distance between the answer and any of its pseudo-observations.
inline constexpr double kMinPseudoGap = 1e-6;

// One projective preferential answer: alpha is the preferred scalar projection
// of `query`, betas are the frozen Monte-Carlo pseudo-observations on the same
// line that it was preferred over.
struct Observation {
  double alpha = 0.0;
  ProjectiveQuery query;
  std::vector<double> betas;

  void validate() const;
};

using Dataset = std::vector<Observation>;

std::vector<double> sample_pseudo_observations(double alpha,
                                               const FeasibleInterval& interval,
                                               int m,
                                               const TgnSchedule& schedule,
                                               std::size_t query_index,
                                               Rng& rng);

// Attaches freshly drawn pseudo-observations to an answered query.
Observation make_observation(double alpha, ProjectiveQuery query,
                             const TgnSchedule& schedule,
                             std::size_t query_index, Rng& rng);

// --- kernel and smoothed probit ---------------------------------------------

double kernel_eval(const UnitPoint& p, const UnitPoint& q,
                   const Hyperparameters& hyper);
double kernel_eval(const Vector& p, const Vector& q,
                   const Hyperparameters& hyper);

// Rows of `a` and `b` are points. Returns the |a| x |b| cross-covariance.
Matrix kernel_matrix(const Matrix& a, const Matrix& b,
                     const Hyperparameters& hyper);
Matrix kernel_matrix(const Matrix& points, const Hyperparameters& hyper);

// [Phi * phi](z) = Phi(z / sqrt(2)).
double smoothed_probit(double z);
// d/dz of smoothed_probit.
double smoothed_probit_density(double z);

// --- latent layout ----------------------------------------------------------

// Where one observation's latent values sit in the stacked vector f: the
// winner first, then its losers, contiguously.
struct ObservationSlots {
  int winner = 0;
  int loser_count = 0;

  int first_loser() const { return winner + 1; }
  int size() const { return loser_count + 1; }
};

struct LatentLayout {
  std::vector<ObservationSlots> slots;
  Matrix locations;  // one unit-cube point per row

  int size() const { return static_cast<int>(locations.rows()); }
};

LatentLayout build_layout(const Dataset& dataset, int dim);

// --- objective --------------------------------------------------------------

// Log-likelihood part of T: value = -sum_i 1/m_i sum_j [Phi*phi](Delta_ij),
// gradient w.r.t. f, and curvature Lambda = -(Hessian) as one dense block per
// observation (the likelihood only couples a winner with its own losers).
struct LikelihoodTerms {
  double value = 0.0;
  Vector gradient;
  std::vector<Matrix> curvature;
};

LikelihoodTerms likelihood_terms(const std::vector<ObservationSlots>& slots,
                                 const Vector& f, double sigma);

// Lambda with negative eigenvalues clipped, plus 1e-8 * trace / n on the
// diagonal. Operates block by block.
std::vector<Matrix> repair_curvature(const std::vector<Matrix>& blocks, int n);

struct Objective {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};

// T(f) = -1/2 f' Sigma^-1 f + likelihood, with its gradient and Hessian
// -Sigma^-1 - Lambda(f).
Objective functional_T(const Dataset& dataset, const Hyperparameters& hyper,
                       const Vector& f);

// Cholesky of a symmetric PSD matrix with diagonal jitter starting at
// 1e-10 * mean(diag) and growing x10 up to 1e-4 * mean(diag).
struct JitteredFactor {
  Eigen::LLT<Matrix> llt;
  double jitter = 0.0;
};
JitteredFactor factorize_with_jitter(const Matrix& a);

// --- fitted model -----------------------------------------------------------

struct FitOptions {
  int max_iterations = 100;
  double gradient_tolerance = 1e-5;
  // Initial weights a = Sigma^-1 f. Must have one entry per latent location.
  std::optional<Vector> initial_weights;
};

struct FitReport {
  int iterations = 0;
  double gradient_norm = 0.0;
  std::vector<double> objective_trace;
};

// Laplace-approximated posterior over the latent utility. Immutable once built
// by fit_map or restore_model; safe to share read-only across threads.
struct ModelState {
  int dim = 0;
  Hyperparameters hyper;
  Dataset dataset;
  LatentLayout layout;
  Matrix sigma;  // prior covariance of all latent locations
  Vector f_map;
  Vector weights;  // Sigma^-1 f_map
  std::vector<Matrix> lambda;       // likelihood curvature at f_map
  std::vector<Matrix> lambda_psd;   // repaired curvature
  std::vector<Matrix> lambda_sqrt;  // symmetric square root of lambda_psd
  Eigen::LLT<Matrix> b_factor;      // I + lambda_sqrt Sigma lambda_sqrt
  FitReport report;
  bool fitted = false;

  int location_count() const { return layout.size(); }
};

// Damped Newton ascent of T. Each step solves with Sigma^-1 + Lambda_psd
// through the factor of I + Lambda_psd^1/2 Sigma Lambda_psd^1/2, so Sigma
// itself is never inverted. Backtracks by halving (at most 30 times) and
// falls back to a gradient step when the Newton direction does not improve T.
// Throws ConvergenceError when the gradient tolerance is not met.
ModelState fit_map(const Dataset& dataset, const Hyperparameters& hyper,
                   int dim, const FitOptions& options = {});

// Weights of `previous` extended with zeros for observations appended since.
Vector warm_start_weights(const ModelState& previous, const Dataset& next);

// Rebuilds a model from its data and MAP solution without refitting. Used by
// deserialization; yields bitwise the same predictions as the original.
ModelState restore_model(const Dataset& dataset, const Hyperparameters& hyper,
                         int dim, Vector f_map, Vector weights,
                         FitReport report = {});

// Sigma^-1 + Lambda_psd.
Matrix laplace_precision(const ModelState& model);

struct Prediction {
  Vector mean;
  Matrix cov;
};

struct MarginalPrediction {
  Vector mean;
  Vector variance;
};

// Rows of `points` are unit-cube test locations.
Prediction predict(const ModelState& model, const Matrix& points);
Prediction predict(const ModelState& model,
                   const std::vector<UnitPoint>& points);
MarginalPrediction predict_marginal(const ModelState& model,
                                    const Matrix& points);
double predict_mean(const ModelState& model, const Vector& point);

struct Incumbent {
  UnitPoint x;
  double mu = 0.0;
};

struct IncumbentOptions {
  int restarts = 64;
  // Best candidates handed to local coordinate search.
  int refine = 8;
};

// argmax of the posterior mean: candidates are the training locations plus
// `restarts` uniform points, the best `refine` of which are polished by a
// coordinate pattern search. An empty model returns the cube centre.
Incumbent posterior_mean_argmax(const ModelState& model, Rng& rng,
                                const IncumbentOptions& options = {});

}  // namespace ppbo
