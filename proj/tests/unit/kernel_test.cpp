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
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ppbo/errors.hpp"
#include "ppbo/preference_model.hpp"

namespace ppbo {
namespace {

using testing::se_kernel;

TEST(Kernel, ZeroDistanceGivesAmplitude) {
  Hyperparameters h{1.7, 0.3, 0.1};
  Vector p(3);
  p << 0.1, 0.5, 0.9;
  EXPECT_EQ(kernel_eval(p, p, h), 1.7 * 1.7);
}

TEST(Kernel, ClosedForm) {
  Hyperparameters h{1.0, 1.0, 0.1};
  Vector p = Vector::Zero(2);
  Vector q = Vector::Ones(2);  // squared distance 2
  EXPECT_NEAR(kernel_eval(p, q, h), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(kernel_eval(p, q, h), 0.3678794, 1e-7);
}

TEST(Kernel, SymmetricAndMatchesDefinition) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Hyperparameters h{0.8, 0.2, 0.1};
  for (int i = 0; i < 200; ++i) {
    Vector p(4), q(4);
    for (int d = 0; d < 4; ++d) {
      p[d] = unif(rng);
      q[d] = unif(rng);
    }
    EXPECT_EQ(kernel_eval(p, q, h), kernel_eval(q, p, h));
    EXPECT_NEAR(kernel_eval(p, q, h), se_kernel(p, q, 0.8, 0.2), 1e-15);
  }
}

TEST(Kernel, DimensionMismatchThrows) {
  Hyperparameters h;
  EXPECT_THROW(kernel_eval(Vector::Zero(2), Vector::Zero(3), h), ShapeError);
}

TEST(Kernel, MatrixIsExactlySymmetricWithAmplitudeDiagonal) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix pts(30, 3);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = unif(rng);
  Hyperparameters h{1.3, 0.15, 0.1};
  const Matrix k = kernel_matrix(pts, h);
  EXPECT_EQ(k, k.transpose());
  for (int i = 0; i < 30; ++i) EXPECT_EQ(k(i, i), 1.3 * 1.3);
  const Matrix cross = kernel_matrix(pts, pts.topRows(5), h);
  EXPECT_LT((cross - k.leftCols(5)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Hyperparameters, ValidatesPositivity) {
  EXPECT_THROW((Hyperparameters{0.0, 1.0, 1.0}.validate()), ArgumentError);
  EXPECT_THROW((Hyperparameters{1.0, -1.0, 1.0}.validate()), ArgumentError);
  EXPECT_THROW((Hyperparameters{1.0, 1.0, 0.0}.validate()), ArgumentError);
  const Hyperparameters d = Hyperparameters::defaults_for(6);
  EXPECT_EQ(d.sigma_f, 1.0);
  EXPECT_DOUBLE_EQ(d.l, 0.3);
  EXPECT_EQ(d.sigma, 0.1);
}

TEST(SmoothedProbit, CentreAndReflection) {
  EXPECT_EQ(smoothed_probit(0.0), 0.5);
  for (double z = -8.0; z <= 8.0; z += 0.37) {
    EXPECT_NEAR(smoothed_probit(z) + smoothed_probit(-z), 1.0, 1e-15);
  }
}

TEST(SmoothedProbit, MatchesQuadratureAtOne) {
  EXPECT_NEAR(smoothed_probit(1.0), testing::smoothed_probit_quadrature(1.0), 1e-12);
  EXPECT_NEAR(smoothed_probit(1.0), 0.7602500, 1e-7);
}

TEST(SmoothedProbit, QuadratureOracleOnGrid) {
  for (int k = -60; k <= 60; ++k) {
    const double z = k / 10.0;
    EXPECT_LT(std::abs(smoothed_probit(z) - testing::smoothed_probit_quadrature(z)), 1e-8)
        << "z = " << z;
  }
}

TEST(SmoothedProbit, QuadratureRuleIntegratesPolynomials) {
  // Sanity of the oracle itself: int t^2 e^{-t^2} = sqrt(pi)/2, odd moments 0.
  const testing::Quadrature q = testing::gauss_hermite(64);
  double m0 = 0, m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    m0 += q.weights[i];
    m1 += q.weights[i] * q.nodes[i];
    m2 += q.weights[i] * q.nodes[i] * q.nodes[i];
  }
  EXPECT_NEAR(m0, std::sqrt(M_PI), 1e-12);
  EXPECT_NEAR(m1, 0.0, 1e-12);
  EXPECT_NEAR(m2, std::sqrt(M_PI) / 2.0, 1e-12);
}

TEST(SmoothedProbit, StrictlyIncreasing) {
  // Strict on [-30, 8]; above 8 the gaps drop below one ulp of 1.0 and the
  // values can only be nondecreasing.
  double prev = smoothed_probit(-30.0);
  for (int k = -2999; k <= 1200; ++k) {
    const double z = k / 100.0;
    const double v = smoothed_probit(z);
    if (z <= 8.0) {
      EXPECT_GT(v, prev) << "z = " << z;
    } else {
      EXPECT_GE(v, prev) << "z = " << z;
    }
    prev = v;
  }
}

TEST(SmoothedProbit, DensityIsDerivative) {
  for (double z = -5.0; z <= 5.0; z += 0.25) {
    const double h = 1e-5;
    const double fd = (smoothed_probit(z + h) - smoothed_probit(z - h)) / (2 * h);
    EXPECT_NEAR(smoothed_probit_density(z), fd, 1e-9);
  }
}

TEST(Jitter, StartsSmallAndEscalates) {
  Matrix pd(2, 2);
  pd << 2, 1, 1, 2;
  JitteredFactor f = factorize_with_jitter(pd);
  EXPECT_EQ(f.llt.info(), Eigen::Success);
  EXPECT_NEAR(f.jitter, 1e-10 * 2.0, 1e-24);

  Matrix singular = Matrix::Ones(3, 3);  // rank one
  f = factorize_with_jitter(singular);
  EXPECT_EQ(f.llt.info(), Eigen::Success);
  EXPECT_GT(f.jitter, 0.0);
  EXPECT_LE(f.jitter, 1e-4);

  Matrix indefinite(2, 2);
  indefinite << 1, 0, 0, -1;
  EXPECT_THROW(factorize_with_jitter(indefinite), NumericError);

  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = bad(1, 0) = std::nan("");
  EXPECT_THROW(factorize_with_jitter(bad), NumericError);
}

}  // namespace
}  // namespace ppbo
