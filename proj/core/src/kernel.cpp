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
#include <sstream>

#include "ppbo/errors.hpp"
#include "ppbo/preference_model.hpp"

namespace ppbo {

Hyperparameters Hyperparameters::defaults_for(int dim) {
  return {1.0, 0.05 * dim, 0.1};
}

void Hyperparameters::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(sigma_f)) throw ArgumentError("sigma_f must be positive");
  if (!positive(l)) throw ArgumentError("l must be positive");
  if (!positive(sigma)) throw ArgumentError("sigma must be positive");
}

double kernel_eval(const Vector& p, const Vector& q,
                   const Hyperparameters& hyper) {
  if (p.size() != q.size()) {
    std::ostringstream os;
    os << "kernel arguments have dimensions " << p.size() << " and "
       << q.size();
    throw ShapeError(os.str());
  }
  double sq = (p - q).squaredNorm();
  return hyper.sigma_f * hyper.sigma_f * std::exp(-sq / (2.0 * hyper.l));
}

double kernel_eval(const UnitPoint& p, const UnitPoint& q,
                   const Hyperparameters& hyper) {
  return kernel_eval(p.coords(), q.coords(), hyper);
}

Matrix kernel_matrix(const Matrix& a, const Matrix& b,
                     const Hyperparameters& hyper) {
  if (a.cols() != b.cols()) throw ShapeError("kernel_matrix: dimension mismatch");
  const double amp = hyper.sigma_f * hyper.sigma_f;
  const double scale = -1.0 / (2.0 * hyper.l);
  const Eigen::Index dim = a.cols();
  Matrix k(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      double sq = 0.0;
      for (Eigen::Index d = 0; d < dim; ++d) {
        double diff = a(i, d) - b(j, d);
        sq += diff * diff;
      }
      k(i, j) = amp * std::exp(scale * sq);
    }
  }
  return k;
}

Matrix kernel_matrix(const Matrix& points, const Hyperparameters& hyper) {
  const double amp = hyper.sigma_f * hyper.sigma_f;
  const double scale = -1.0 / (2.0 * hyper.l);
  const Eigen::Index n = points.rows();
  const Eigen::Index dim = points.cols();
  Matrix k(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    k(j, j) = amp;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double sq = 0.0;
      for (Eigen::Index d = 0; d < dim; ++d) {
        double diff = points(i, d) - points(j, d);
        sq += diff * diff;
      }
      k(i, j) = amp * std::exp(scale * sq);
      k(j, i) = k(i, j);
    }
  }
  return k;
}

double smoothed_probit(double z) {
  // Phi(z / sqrt 2) = erfc(-z / 2) / 2.
  return 0.5 * std::erfc(-0.5 * z);
}

double smoothed_probit_density(double z) {
  // phi(z / sqrt 2) / sqrt 2 = exp(-z^2 / 4) / (2 sqrt(pi)).
  static const double kNorm = 0.5 / std::sqrt(M_PI);
  return kNorm * std::exp(-0.25 * z * z);
}

JitteredFactor factorize_with_jitter(const Matrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("factorize: matrix not square");
  JitteredFactor out;
  if (a.rows() == 0) {
    out.llt.compute(a);
    return out;
  }
  if (!a.allFinite()) throw NumericError("factorize: non-finite matrix");
  double scale = a.diagonal().cwiseAbs().mean();
  if (!(scale > 0.0)) scale = 1.0;
  for (double rel = 1e-10; rel <= 1e-4 * (1.0 + 1e-9); rel *= 10.0) {
    Matrix shifted = a;
    shifted.diagonal().array() += rel * scale;
    out.llt.compute(shifted);
    if (out.llt.info() == Eigen::Success) {
      out.jitter = rel * scale;
      return out;
    }
  }
  throw NumericError("Cholesky factorization failed after jitter escalation");
}

}  // namespace ppbo
