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

#include <cmath>

#include <Eigen/Eigenvalues>

#include "ppbo/errors.hpp"
#include "ppbo/preference_model.hpp"

namespace ppbo {

LatentLayout build_layout(const Dataset& dataset, int dim) {
  int n = 0;
  for (const Observation& obs : dataset) {
    n += 1 + static_cast<int>(obs.betas.size());
  }
  LatentLayout layout;
  layout.locations.resize(n, dim);
  layout.slots.reserve(dataset.size());
  int row = 0;
  for (const Observation& obs : dataset) {
    if (obs.query.dim() != dim) {
      throw ShapeError("observation dimension does not match the model");
    }
    ObservationSlots slot;
    slot.winner = row;
    slot.loser_count = static_cast<int>(obs.betas.size());
    layout.slots.push_back(slot);
    layout.locations.row(row++) = embed(obs.alpha, obs.query).coords();
    for (double beta : obs.betas) {
      layout.locations.row(row++) = embed(beta, obs.query).coords();
    }
  }
  return layout;
}

LikelihoodTerms likelihood_terms(const std::vector<ObservationSlots>& slots,
                                 const Vector& f, double sigma) {
  LikelihoodTerms out;
  out.gradient = Vector::Zero(f.size());
  out.curvature.reserve(slots.size());
  const double inv_sigma = 1.0 / sigma;
  for (const ObservationSlots& s : slots) {
    const double weight = 1.0 / s.loser_count;
    const double fw = f[s.winner];
    Matrix block = Matrix::Zero(s.size(), s.size());
    for (int j = 0; j < s.loser_count; ++j) {
      const int loser = s.first_loser() + j;
      const double delta = (f[loser] - fw) * inv_sigma;
      const double density = smoothed_probit_density(delta);
      out.value -= weight * smoothed_probit(delta);

      const double slope = weight * density * inv_sigma;
      out.gradient[loser] -= slope;
      out.gradient[s.winner] += slope;

      // d/dz density(z) = -z/2 * density(z).
      const double h = weight * (-0.5 * delta * density) * inv_sigma * inv_sigma;
      block(0, 0) += h;
      block(j + 1, j + 1) += h;
      block(0, j + 1) -= h;
      block(j + 1, 0) -= h;
    }
    out.curvature.push_back(std::move(block));
  }
  return out;
}

std::vector<Matrix> repair_curvature(const std::vector<Matrix>& blocks, int n) {
  std::vector<Matrix> repaired;
  repaired.reserve(blocks.size());
  double trace = 0.0;
  for (const Matrix& b : blocks) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(b);
    Vector clipped = eig.eigenvalues().cwiseMax(0.0);
    trace += clipped.sum();
    repaired.push_back(eig.eigenvectors() * clipped.asDiagonal() *
                       eig.eigenvectors().transpose());
  }
  const double jitter = n > 0 ? 1e-8 * trace / n : 0.0;
  for (Matrix& b : repaired) {
    b = 0.5 * (b + b.transpose()).eval();
    b.diagonal().array() += jitter;
  }
  return repaired;
}

Objective functional_T(const Dataset& dataset, const Hyperparameters& hyper,
                       const Vector& f) {
  hyper.validate();
  const int dim = dataset.empty() ? 0 : dataset.front().query.dim();
  LatentLayout layout = build_layout(dataset, dim);
  if (f.size() != layout.size()) {
    throw ShapeError("latent vector length does not match the dataset");
  }
  if (!f.allFinite()) throw NumericError("latent vector is not finite");

  Objective out;
  const int n = layout.size();
  if (n == 0) {
    out.gradient = Vector::Zero(0);
    out.hessian = Matrix::Zero(0, 0);
    return out;
  }
  Matrix sigma = kernel_matrix(layout.locations, hyper);
  JitteredFactor factor = factorize_with_jitter(sigma);
  Vector prior_grad = factor.llt.solve(f);
  LikelihoodTerms lik = likelihood_terms(layout.slots, f, hyper.sigma);

  out.value = -0.5 * f.dot(prior_grad) + lik.value;
  out.gradient = -prior_grad + lik.gradient;
  out.hessian = -factor.llt.solve(Matrix::Identity(n, n));
  out.hessian = 0.5 * (out.hessian + out.hessian.transpose()).eval();
  for (std::size_t i = 0; i < layout.slots.size(); ++i) {
    const ObservationSlots& s = layout.slots[i];
    out.hessian.block(s.winner, s.winner, s.size(), s.size()) -=
        lik.curvature[i];
  }
  return out;
}

}  // namespace ppbo
