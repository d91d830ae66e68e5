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

#include "ppbo/preference_model.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ppbo/errors.hpp"

namespace ppbo {

namespace {

// Multiplies the block-diagonal matrix described by (blocks, slots) with `m`.
Matrix block_multiply(const std::vector<Matrix>& blocks,
                      const std::vector<ObservationSlots>& slots,
                      const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const ObservationSlots& s = slots[i];
    out.middleRows(s.winner, s.size()).noalias() =
        blocks[i] * m.middleRows(s.winner, s.size());
  }
  return out;
}

std::vector<Matrix> block_sqrt(const std::vector<Matrix>& blocks) {
  std::vector<Matrix> out;
  out.reserve(blocks.size());
  for (const Matrix& b : blocks) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(b);
    Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Matrix r = eig.eigenvectors() * root.asDiagonal() *
               eig.eigenvectors().transpose();
    out.push_back(0.5 * (r + r.transpose()));
  }
  return out;
}

// Cholesky of I + S Sigma S with S block diagonal. Eigenvalues are >= 1, so
// failure means non-finite input.
Eigen::LLT<Matrix> factor_b(const Matrix& sigma,
                            const std::vector<Matrix>& sqrt_blocks,
                            const std::vector<ObservationSlots>& slots) {
  const Eigen::Index n = sigma.rows();
  Matrix s_sigma = block_multiply(sqrt_blocks, slots, sigma);
  Matrix b = block_multiply(sqrt_blocks, slots, s_sigma.transpose());
  b = 0.5 * (b + b.transpose()).eval();
  b.diagonal().array() += 1.0;
  Eigen::LLT<Matrix> llt(b);
  if (n > 0 && llt.info() != Eigen::Success) {
    throw NumericError("factorization of I + W^1/2 Sigma W^1/2 failed");
  }
  return llt;
}

struct Iterate {
  Vector weights;
  Vector f;
  double objective = 0.0;
  Vector gradient;  // dT/df = -weights + likelihood gradient
  LikelihoodTerms lik;
};

Iterate evaluate(const std::vector<ObservationSlots>& slots, double sigma_noise,
                 Vector weights, Vector f) {
  Iterate it;
  it.lik = likelihood_terms(slots, f, sigma_noise);
  it.objective = -0.5 * weights.dot(f) + it.lik.value;
  it.gradient = it.lik.gradient - weights;
  it.weights = std::move(weights);
  it.f = std::move(f);
  return it;
}

// Backtracking along weights + t * step, halving t up to 30 times. Returns
// true and updates `current` when T does not decrease and the candidate is
// an actual move (strictly better T or smaller gradient at equal T).
bool line_search(const Matrix& sigma, const std::vector<ObservationSlots>& slots,
                 double sigma_noise, const Vector& step, Iterate& current) {
  const Vector f_step = sigma * step;
  double t = 1.0;
  for (int halving = 0; halving <= 30; ++halving, t *= 0.5) {
    Iterate cand = evaluate(slots, sigma_noise, current.weights + t * step,
                            current.f + t * f_step);
    if (!std::isfinite(cand.objective)) continue;
    const bool better = cand.objective > current.objective;
    const bool flatter =
        cand.objective == current.objective &&
        cand.gradient.lpNorm<Eigen::Infinity>() <
            current.gradient.lpNorm<Eigen::Infinity>();
    if (better || flatter) {
      current = std::move(cand);
      return true;
    }
  }
  return false;
}

void check_dataset(const Dataset& dataset, int dim) {
  for (const Observation& obs : dataset) {
    if (obs.query.dim() != dim) {
      throw ShapeError("observation dimension does not match the model");
    }
    obs.validate();
  }
}

}  // namespace

ModelState restore_model(const Dataset& dataset, const Hyperparameters& hyper,
                         int dim, Vector f_map, Vector weights,
                         FitReport report) {
  hyper.validate();
  check_dataset(dataset, dim);
  ModelState model;
  model.dim = dim;
  model.hyper = hyper;
  model.dataset = dataset;
  model.layout = build_layout(dataset, dim);
  const int n = model.layout.size();
  if (f_map.size() != n || weights.size() != n) {
    throw ShapeError("MAP vectors do not match the dataset");
  }
  if (!f_map.allFinite() || !weights.allFinite()) {
    throw NumericError("MAP vectors are not finite");
  }
  model.sigma = kernel_matrix(model.layout.locations, hyper);
  model.f_map = std::move(f_map);
  model.weights = std::move(weights);
  LikelihoodTerms lik =
      likelihood_terms(model.layout.slots, model.f_map, hyper.sigma);
  model.lambda = std::move(lik.curvature);
  model.lambda_psd = repair_curvature(model.lambda, n);
  model.lambda_sqrt = block_sqrt(model.lambda_psd);
  model.b_factor = factor_b(model.sigma, model.lambda_sqrt, model.layout.slots);
  model.report = std::move(report);
  model.fitted = true;
  return model;
}

ModelState fit_map(const Dataset& dataset, const Hyperparameters& hyper,
                   int dim, const FitOptions& options) {
  hyper.validate();
  check_dataset(dataset, dim);
  const LatentLayout layout = build_layout(dataset, dim);
  const int n = layout.size();
  const auto& slots = layout.slots;
  const Matrix sigma = kernel_matrix(layout.locations, hyper);

  Iterate current = evaluate(slots, hyper.sigma, Vector::Zero(n),
                             Vector::Zero(n));
  if (options.initial_weights) {
    if (options.initial_weights->size() != n) {
      throw ShapeError("initial weights do not match the dataset");
    }
    Iterate warm = evaluate(slots, hyper.sigma, *options.initial_weights,
                            sigma * *options.initial_weights);
    if (std::isfinite(warm.objective) && warm.objective >= current.objective) {
      current = std::move(warm);
    }
  }

  FitReport report;
  report.objective_trace.push_back(current.objective);
  double grad_norm = n > 0 ? current.gradient.lpNorm<Eigen::Infinity>() : 0.0;
  int iter = 0;
  while (grad_norm >= options.gradient_tolerance &&
         iter < options.max_iterations) {
    ++iter;
    // Newton direction in weight space:
    //   a_new = b - S L^-T L^-1 S Sigma b,  b = W f + grad loglik,
    // where W is the repaired curvature, S = W^1/2 and L L^T = I + S Sigma S.
    std::vector<Matrix> w = repair_curvature(current.lik.curvature, n);
    std::vector<Matrix> s = block_sqrt(w);
    Eigen::LLT<Matrix> llt = factor_b(sigma, s, slots);
    Vector b = block_multiply(w, slots, current.f) + current.lik.gradient;
    Vector rhs = block_multiply(s, slots, Matrix(sigma * b));
    Vector correction = block_multiply(s, slots, Matrix(llt.solve(rhs)));
    Vector newton_step = b - correction - current.weights;

    bool moved = line_search(sigma, slots, hyper.sigma, newton_step, current);
    if (!moved) {
      // Gradient ascent in f is a valid ascent direction in weight space too:
      // dT/da = Sigma dT/df, so <dT/da, dT/df> >= 0.
      moved = line_search(sigma, slots, hyper.sigma, Vector(current.gradient),
                          current);
    }
    report.objective_trace.push_back(current.objective);
    grad_norm = current.gradient.lpNorm<Eigen::Infinity>();
    if (!moved) break;
  }
  report.iterations = iter;
  report.gradient_norm = grad_norm;
  if (!(grad_norm < options.gradient_tolerance) && n > 0) {
    std::ostringstream os;
    os << "MAP estimation did not converge after " << iter
       << " iterations (gradient norm " << grad_norm << ")";
    throw ConvergenceError(os.str(), grad_norm);
  }
  return restore_model(dataset, hyper, dim, std::move(current.f),
                       std::move(current.weights), std::move(report));
}

Vector warm_start_weights(const ModelState& previous, const Dataset& next) {
  if (next.size() < previous.dataset.size()) {
    throw ArgumentError("warm start requires an extended dataset");
  }
  int n = 0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    if (i < previous.dataset.size() &&
        (next[i].alpha != previous.dataset[i].alpha ||
         next[i].betas != previous.dataset[i].betas)) {
      throw ArgumentError("warm start dataset does not extend the model's");
    }
    n += 1 + static_cast<int>(next[i].betas.size());
  }
  Vector w = Vector::Zero(n);
  w.head(previous.weights.size()) = previous.weights;
  return w;
}

Matrix laplace_precision(const ModelState& model) {
  if (!model.fitted) throw StateError("model has not been fitted");
  const int n = model.location_count();
  if (n == 0) return Matrix::Zero(0, 0);
  JitteredFactor prior = factorize_with_jitter(model.sigma);
  Matrix h = prior.llt.solve(Matrix::Identity(n, n));
  for (std::size_t i = 0; i < model.layout.slots.size(); ++i) {
    const ObservationSlots& s = model.layout.slots[i];
    h.block(s.winner, s.winner, s.size(), s.size()) += model.lambda_psd[i];
  }
  h = 0.5 * (h + h.transpose()).eval();
  factorize_with_jitter(h);  // throws NumericError when H is not PD
  return h;
}

namespace {

void check_points(const ModelState& model, const Matrix& points) {
  if (!model.fitted) throw StateError("model has not been fitted");
  if (points.rows() == 0) throw ArgumentError("no test points given");
  if (points.cols() != model.dim) {
    throw ShapeError("test point dimension does not match the model");
  }
}

// L^-1 S K(X, points): rows index training locations.
Matrix whitened_cross(const ModelState& model, const Matrix& cross) {
  Matrix v = block_multiply(model.lambda_sqrt, model.layout.slots, cross);
  model.b_factor.matrixL().solveInPlace(v);
  return v;
}

}  // namespace

Prediction predict(const ModelState& model, const Matrix& points) {
  check_points(model, points);
  Prediction out;
  Matrix prior = kernel_matrix(points, model.hyper);
  if (model.location_count() == 0) {
    out.mean = Vector::Zero(points.rows());
    out.cov = std::move(prior);
    return out;
  }
  Matrix cross = kernel_matrix(model.layout.locations, points, model.hyper);
  out.mean = cross.transpose() * model.weights;
  Matrix v = whitened_cross(model, cross);
  out.cov = prior;
  out.cov.noalias() -= v.transpose() * v;
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  for (Eigen::Index i = 0; i < out.cov.rows(); ++i) {
    out.cov(i, i) = std::max(out.cov(i, i), 0.0);
  }
  return out;
}

Prediction predict(const ModelState& model,
                   const std::vector<UnitPoint>& points) {
  Matrix rows(static_cast<Eigen::Index>(points.size()), model.dim);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].dim() != model.dim) {
      throw ShapeError("test point dimension does not match the model");
    }
    rows.row(static_cast<Eigen::Index>(i)) = points[i].coords();
  }
  return predict(model, rows);
}

MarginalPrediction predict_marginal(const ModelState& model,
                                    const Matrix& points) {
  check_points(model, points);
  MarginalPrediction out;
  const double prior_var = model.hyper.sigma_f * model.hyper.sigma_f;
  if (model.location_count() == 0) {
    out.mean = Vector::Zero(points.rows());
    out.variance = Vector::Constant(points.rows(), prior_var);
    return out;
  }
  Matrix cross = kernel_matrix(model.layout.locations, points, model.hyper);
  out.mean = cross.transpose() * model.weights;
  Matrix v = whitened_cross(model, cross);
  out.variance = (prior_var - v.colwise().squaredNorm().array())
                     .cwiseMax(0.0)
                     .matrix()
                     .transpose();
  return out;
}

double predict_mean(const ModelState& model, const Vector& point) {
  if (!model.fitted) throw StateError("model has not been fitted");
  if (point.size() != model.dim) {
    throw ShapeError("test point dimension does not match the model");
  }
  const Matrix& x = model.layout.locations;
  const double amp = model.hyper.sigma_f * model.hyper.sigma_f;
  const double scale = -1.0 / (2.0 * model.hyper.l);
  double mu = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double sq = 0.0;
    for (Eigen::Index d = 0; d < x.cols(); ++d) {
      double diff = x(i, d) - point[d];
      sq += diff * diff;
    }
    mu += model.weights[i] * amp * std::exp(scale * sq);
  }
  return mu;
}

}  // namespace ppbo
