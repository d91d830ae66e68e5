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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace ppbo::testing {

Quadrature gauss_hermite(int n) {
  Mat jacobi = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(jacobi);
  Quadrature q;
  for (int i = 0; i < n; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    q.nodes.push_back(eig.eigenvalues()[i]);
    q.weights.push_back(std::sqrt(M_PI) * v0 * v0);
  }
  return q;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double smoothed_probit_quadrature(double z) {
  static const Quadrature q = gauss_hermite(64);
  double sum = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    sum += q.weights[i] * normal_cdf(z - std::sqrt(2.0) * q.nodes[i]);
  }
  return sum / std::sqrt(M_PI);
}

double se_kernel(const Vec& p, const Vec& q, double sigma_f, double l) {
  return sigma_f * sigma_f * std::exp(-(p - q).squaredNorm() / (2.0 * l));
}

Pairs latent_pairs(const Dataset& data, int dim) {
  int total = 0;
  for (const Observation& o : data) total += 1 + static_cast<int>(o.betas.size());
  Pairs p;
  p.locations.resize(total, dim);
  int row = 0;
  for (const Observation& o : data) {
    const Vec xi = o.query.xi().values();
    const Vec x = o.query.x().coords();
    const int w = row;
    p.locations.row(row++) = (o.alpha * xi + x).transpose();
    for (double b : o.betas) {
      p.locations.row(row) = (b * xi + x).transpose();
      p.winner.push_back(w);
      p.loser.push_back(row++);
      p.weight.push_back(1.0 / static_cast<double>(o.betas.size()));
    }
  }
  return p;
}

Mat reference_sigma(const Pairs& pairs, const Hyperparameters& hyper) {
  const Eigen::Index n = pairs.locations.rows();
  Mat sigma(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      sigma(i, j) = se_kernel(pairs.locations.row(i), pairs.locations.row(j),
                              hyper.sigma_f, hyper.l);
    }
  }
  return sigma;
}

Mat jittered_inverse(const Mat& a) {
  const Eigen::Index n = a.rows();
  const double scale = a.diagonal().cwiseAbs().mean();
  double rel = 1e-10;
  for (int k = 0; k <= 6; ++k, rel *= 10.0) {
    Mat shifted = a + rel * scale * Mat::Identity(n, n);
    Eigen::LLT<Mat> llt(shifted);
    if (llt.info() == Eigen::Success) return llt.solve(Mat::Identity(n, n));
  }
  return Mat();
}

double reference_loglik(const Pairs& pairs, double sigma, const Vec& f) {
  double lik = 0.0;
  for (std::size_t k = 0; k < pairs.winner.size(); ++k) {
    const double z = (f[pairs.loser[k]] - f[pairs.winner[k]]) / sigma;
    lik -= pairs.weight[k] * smoothed_probit_quadrature(z);
  }
  return lik;
}

double reference_T(const Dataset& data, const Hyperparameters& hyper,
                   const Vec& f) {
  const Pairs p = latent_pairs(data, data.front().query.dim());
  const Mat inv = jittered_inverse(reference_sigma(p, hyper));
  return -0.5 * f.dot(inv * f) + reference_loglik(p, hyper.sigma, f);
}

Vec fd_gradient(const std::function<double(const Vec&)>& fn, const Vec& x,
                double h) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec a = x, b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (fn(a) - fn(b)) / (2.0 * h);
  }
  return g;
}

Mat fd_jacobian(const std::function<Vec(const Vec&)>& fn, const Vec& x,
                double h) {
  Mat jac;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec a = x, b = x;
    a[i] += h;
    b[i] -= h;
    const Vec col = (fn(a) - fn(b)) / (2.0 * h);
    if (jac.size() == 0) jac.resize(col.size(), x.size());
    jac.col(i) = col;
  }
  return jac;
}

double relative_error(const Mat& a, const Mat& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

Vec bfgs_maximize(const std::function<double(const Vec&)>& fn, Vec x,
                  int max_iter) {
  auto neg = [&](const Vec& v) { return -fn(v); };
  const Eigen::Index n = x.size();
  Mat h_inv = Mat::Identity(n, n);
  double fx = neg(x);
  Vec g = fd_gradient(neg, x, 1e-6);
  for (int it = 0; it < max_iter && g.lpNorm<Eigen::Infinity>() > 1e-8; ++it) {
    Vec dir = -h_inv * g;
    if (dir.dot(g) >= 0.0) {
      h_inv.setIdentity();
      dir = -g;
    }
    double t = 1.0;
    Vec x_new = x + dir;
    double f_new = neg(x_new);
    while (f_new > fx + 1e-4 * t * g.dot(dir) && t > 1e-12) {
      t *= 0.5;
      x_new = x + t * dir;
      f_new = neg(x_new);
    }
    if (t <= 1e-12) break;
    const Vec g_new = fd_gradient(neg, x_new, 1e-6);
    const Vec s = x_new - x;
    const Vec y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-14) {
      const Mat eye = Mat::Identity(n, n);
      h_inv = (eye - s * y.transpose() / sy) * h_inv *
                  (eye - y * s.transpose() / sy) +
              s * s.transpose() / sy;
    }
    x = x_new;
    fx = f_new;
    g = g_new;
  }
  return x;
}

ProjectiveQuery axis_query(int dim, int d, const Vec& reference) {
  return ProjectiveQuery::with_reference(coordinate_projection(dim, d), reference);
}

Dataset random_dataset(std::mt19937_64& rng, int n, int m, int dim) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Dataset data;
  for (int i = 0; i < n; ++i) {
    Vec raw = Vec::Zero(dim);
    while (raw.maxCoeff() <= 0.0) {
      for (int d = 0; d < dim; ++d) raw[d] = unif(rng) < 0.5 ? unif(rng) : 0.0;
    }
    Vec x(dim);
    for (int d = 0; d < dim; ++d) x[d] = unif(rng);
    ProjectiveQuery q = ProjectiveQuery::with_reference(make_projection(raw), x);
    const double alpha = unif(rng);
    std::vector<double> betas;
    while (static_cast<int>(betas.size()) < m) {
      const double b = unif(rng);
      if (std::abs(b - alpha) > 1e-3) betas.push_back(b);
    }
    data.push_back(Observation{alpha, q, betas});
  }
  return data;
}

Gaussian reference_posterior(const Dataset& data, const Hyperparameters& hyper,
                             const Vec& f_map, const Mat& points) {
  const int dim = static_cast<int>(points.cols());
  const Pairs pairs = latent_pairs(data, dim);
  const Eigen::Index n = pairs.locations.rows();
  const Eigen::Index t = points.rows();

  Mat lambda = Mat::Zero(n, n);
  for (std::size_t k = 0; k < pairs.winner.size(); ++k) {
    const int w = pairs.winner[k];
    const int l = pairs.loser[k];
    const double u = (f_map[l] - f_map[w]) / hyper.sigma;
    const double density = std::exp(-u * u / 4.0) / (2.0 * std::sqrt(M_PI));
    // d2/du2 of -Psi(u) is u/2 * density; Lambda is its negation over sigma^2.
    const double h = pairs.weight[k] * (-u / 2.0) * density / (hyper.sigma * hyper.sigma);
    lambda(l, l) += h;
    lambda(w, w) += h;
    lambda(l, w) -= h;
    lambda(w, l) -= h;
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(lambda);
  const Vec clipped = eig.eigenvalues().cwiseMax(0.0);
  lambda = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
  if (n > 0) lambda.diagonal().array() += 1e-8 * clipped.sum() / static_cast<double>(n);

  Mat k_star(n, t);
  Mat k_ss(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      k_star(j, i) = se_kernel(pairs.locations.row(j), points.row(i), hyper.sigma_f, hyper.l);
    }
    for (Eigen::Index j = 0; j < t; ++j) {
      k_ss(i, j) = se_kernel(points.row(i), points.row(j), hyper.sigma_f, hyper.l);
    }
  }
  Gaussian g;
  if (n == 0) {
    g.mean = Vec::Zero(t);
    g.cov = k_ss;
    return g;
  }
  const Mat s_inv = jittered_inverse(reference_sigma(pairs, hyper));
  const Mat precision_inv = (s_inv + lambda).inverse();
  const Mat a = s_inv * k_star;
  g.mean = a.transpose() * f_map;
  g.cov = k_ss - k_star.transpose() * a + a.transpose() * precision_inv * a;
  return g;
}

Vec mc_maxima(const Gaussian& g, int count, std::mt19937_64& rng) {
  const Mat sym = 0.5 * (g.cov + g.cov.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> eig(sym);
  const Mat root = eig.eigenvectors() *
                   eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec z(g.mean.size());
  Vec out(count);
  for (int k = 0; k < count; ++k) {
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
    out[k] = (g.mean + root * z).maxCoeff();
  }
  return out;
}

}  // namespace ppbo::testing
