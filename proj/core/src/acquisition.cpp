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

#include "ppbo/acquisition.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ppbo/errors.hpp"

namespace ppbo {

namespace {

struct StrategyName {
  Strategy strategy;
  const char* name;
};

constexpr StrategyName kStrategyNames[] = {
    {Strategy::kExpectedImprovement, "ei"},
    {Strategy::kExploit, "ext"},
    {Strategy::kExplore, "exr"},
    {Strategy::kCoordinateDescent, "pcd"},
    {Strategy::kRandom, "rand"},
    {Strategy::kEiExploit, "ei-ext"},
    {Strategy::kEiRandom, "ei-rand"},
};

// Reference refinement: step sizes tried on each free coordinate.
constexpr double kRefineSteps[] = {0.25, 0.125, 0.0625};
constexpr int kRefineBudget = 60;

}  // namespace

Strategy parse_strategy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (const StrategyName& s : kStrategyNames) {
    if (lower == s.name) return s.strategy;
  }
  throw LookupError("unknown acquisition strategy '" + std::string(name) + "'");
}

std::string strategy_name(Strategy strategy) {
  for (const StrategyName& s : kStrategyNames) {
    if (s.strategy == strategy) return s.name;
  }
  return "unknown";
}

void AcquisitionConfig::validate() const {
  if (K < 1) throw ArgumentError("K must be >= 1");
  if (J < 2) throw ArgumentError("J must be >= 2");
  if (restarts < 1) throw ArgumentError("restarts must be >= 1");
  if (R < 1) throw ArgumentError("R must be >= 1");
}

std::vector<double> slice_grid(const ProjectiveQuery& q, int J) {
  if (J < 2) throw ArgumentError("slice grid needs at least two points");
  FeasibleInterval interval = feasible_interval(q);
  std::vector<double> grid(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) {
    grid[j] = interval.lo + interval.length() * j / (J - 1);
  }
  grid.back() = interval.hi;
  return grid;
}

Matrix draw_standard_normals(int J, int K, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(J, K);
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < J; ++j) z(j, k) = normal(rng);
  }
  return z;
}

Vector sample_maxima(const Vector& mean, const Matrix& cov,
                     const Matrix& normals) {
  if (cov.rows() != mean.size() || cov.cols() != mean.size() ||
      normals.rows() != mean.size()) {
    throw ShapeError("sample_maxima: inconsistent sizes");
  }
  const Eigen::Index K = normals.cols();
  if (!(cov.diagonal().maxCoeff() > 0.0)) {
    return Vector::Constant(K, mean.maxCoeff());
  }
  JitteredFactor factor = factorize_with_jitter(cov);
  Matrix draws = factor.llt.matrixL() * normals;
  draws.colwise() += mean;
  return draws.colwise().maxCoeff().transpose();
}

namespace {

Matrix slice_points(const ProjectiveQuery& q, int J) {
  std::vector<double> grid = slice_grid(q, J);
  Matrix points(J, q.dim());
  for (int j = 0; j < J; ++j) points.row(j) = embed(grid[j], q).coords();
  return points;
}

}  // namespace

Vector slice_maxima(const ModelState& model, const ProjectiveQuery& q,
                    const Matrix& normals) {
  Prediction pred =
      predict(model, slice_points(q, static_cast<int>(normals.rows())));
  return sample_maxima(pred.mean, pred.cov, normals);
}

double thompson_max_sample(const ModelState& model, const ProjectiveQuery& q,
                           int J, Rng& rng) {
  Matrix normals = draw_standard_normals(J, 1, rng);
  return slice_maxima(model, q, normals)[0];
}

double improvement_score(const Vector& maxima, double mu_star) {
  if (maxima.size() == 0) return 0.0;
  return (maxima.array() - mu_star).cwiseMax(0.0).mean();
}

double variance_score(const Vector& maxima) {
  const Eigen::Index k = maxima.size();
  if (k < 2) return 0.0;
  const double mean = maxima.mean();
  return (maxima.array() - mean).square().sum() / static_cast<double>(k - 1);
}

double expected_improvement(const ModelState& model, const ProjectiveQuery& q,
                            const AcquisitionConfig& cfg, double mu_star,
                            Rng& rng) {
  cfg.validate();
  Matrix normals = draw_standard_normals(cfg.J, cfg.K, rng);
  return improvement_score(slice_maxima(model, q, normals), mu_star);
}

double explore_score(const ModelState& model, const ProjectiveQuery& q,
                     const AcquisitionConfig& cfg, Rng& rng) {
  cfg.validate();
  Matrix normals = draw_standard_normals(cfg.J, cfg.K, rng);
  return variance_score(slice_maxima(model, q, normals));
}

ProjectionVector random_direction(int dim, bool coordinate_only, Rng& rng) {
  std::uniform_int_distribution<int> coord(0, dim - 1);
  if (coordinate_only) return coordinate_projection(dim, coord(rng));
  std::uniform_int_distribution<int> size_dist(1, dim);
  const int size = size_dist(rng);
  std::vector<int> idx(static_cast<std::size_t>(dim));
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  // U(0, 1] entries: 1 - U[0, 1).
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector raw = Vector::Zero(dim);
  for (int i = 0; i < size; ++i) raw[idx[i]] = 1.0 - unif(rng);
  return make_projection(raw);
}

ProjectiveQuery next_query_random(int dim, const AcquisitionConfig& cfg,
                                  Rng& rng) {
  ProjectionVector xi = random_direction(dim, cfg.coordinate_only, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector x(dim);
  for (int d = 0; d < dim; ++d) x[d] = unif(rng);
  return ProjectiveQuery::with_reference(std::move(xi), x);
}

namespace {

// Scores one candidate with the round's shared normals.
class CandidateScorer {
 public:
  CandidateScorer(const ModelState& model, const AcquisitionConfig& cfg,
                  double mu_star, Matrix normals)
      : model_(model), cfg_(cfg), mu_star_(mu_star),
        normals_(std::move(normals)) {}

  double operator()(const ProjectiveQuery& q) {
    ++evaluations_;
    Vector maxima = slice_maxima(model_, q, normals_);
    return cfg_.strategy == Strategy::kExplore
               ? variance_score(maxima)
               : improvement_score(maxima, mu_star_);
  }

  int evaluations() const { return evaluations_; }

 private:
  const ModelState& model_;
  const AcquisitionConfig& cfg_;
  double mu_star_;
  Matrix normals_;
  int evaluations_ = 0;
};

struct Scored {
  Vector x;
  double score = -std::numeric_limits<double>::infinity();
};

// Best reference for a fixed direction: random sampling then compass search
// over the coordinates off the support.
Scored search_reference(const ProjectionVector& xi, CandidateScorer& scorer,
                        int samples, Rng& rng) {
  const int dim = xi.dim();
  std::vector<int> free;
  for (int d = 0; d < dim; ++d) {
    if (!xi.on_support(d)) free.push_back(d);
  }
  auto score_at = [&](const Vector& x) {
    return scorer(ProjectiveQuery::with_reference(xi, x));
  };

  Scored best;
  if (free.empty()) {
    best.x = Vector::Zero(dim);
    best.score = score_at(best.x);
    return best;
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    Vector x = Vector::Zero(dim);
    for (int d : free) x[d] = unif(rng);
    double v = score_at(x);
    if (v > best.score) best = {std::move(x), v};
  }

  int spent = 0;
  for (double step : kRefineSteps) {
    bool improved = true;
    while (improved && spent < kRefineBudget) {
      improved = false;
      for (int d : free) {
        for (double sign : {1.0, -1.0}) {
          Vector y = best.x;
          y[d] = std::clamp(y[d] + sign * step, 0.0, 1.0);
          if (y[d] == best.x[d]) continue;
          double v = score_at(y);
          ++spent;
          if (v > best.score) {
            best = {std::move(y), v};
            improved = true;
            break;
          }
        }
        if (spent >= kRefineBudget) break;
      }
    }
  }
  return best;
}

}  // namespace

AcquisitionResult optimize_acquisition(const ModelState& model,
                                       const AcquisitionConfig& cfg,
                                       double mu_star, Rng& rng) {
  cfg.validate();
  if (cfg.strategy != Strategy::kExpectedImprovement &&
      cfg.strategy != Strategy::kExplore) {
    throw ArgumentError("optimize_acquisition supports the ei and exr strategies");
  }
  const int dim = model.dim;
  CandidateScorer scorer(model, cfg, mu_star,
                         draw_standard_normals(cfg.J, cfg.K, rng));

  std::vector<ProjectionVector> directions;
  if (cfg.coordinate_only) {
    for (int d = 0; d < dim; ++d) directions.push_back(coordinate_projection(dim, d));
  } else {
    for (int r = 0; r < cfg.restarts; ++r) {
      directions.push_back(random_direction(dim, false, rng));
    }
  }

  std::size_t best_dir = 0;
  Scored best;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    Scored s = search_reference(directions[i], scorer, cfg.restarts, rng);
    if (s.score > best.score) {
      best = std::move(s);
      best_dir = i;
    }
  }
  return {ProjectiveQuery::with_reference(directions[best_dir], best.x),
          std::max(best.score, 0.0), scorer.evaluations()};
}

ProjectiveQuery exploit_query(const UnitPoint& x_star,
                              const std::vector<int>& support) {
  const int dim = x_star.dim();
  if (support.empty()) throw ArgumentError("exploit support is empty");
  Vector raw = Vector::Zero(dim);
  for (int d : support) {
    if (d < 0 || d >= dim) throw ArgumentError("support index out of range");
    raw[d] = x_star[d];
  }
  if (raw.maxCoeff() <= 0.0) {
    return ProjectiveQuery::with_reference(coordinate_projection(dim, support[0]),
                                           x_star.coords());
  }
  ProjectionVector xi = make_projection(raw);
  Vector x = x_star.coords();
  for (int d : support) x[d] = 0.0;
  return ProjectiveQuery(std::move(xi), UnitPoint(std::move(x)));
}

ProjectiveQuery next_query_exploit(const UnitPoint& x_star, Rng& rng) {
  std::uniform_int_distribution<int> coord(0, x_star.dim() - 1);
  return exploit_query(x_star, {coord(rng)});
}

ProjectiveQuery next_query_pcd(const UnitPoint& x_star, std::size_t iteration) {
  const int dim = x_star.dim();
  const int d = static_cast<int>(iteration % static_cast<std::size_t>(dim));
  return ProjectiveQuery::with_reference(coordinate_projection(dim, d),
                                         x_star.coords());
}

IntegratedEi next_query_integrated_ei(const ModelState& model,
                                      const Incumbent& incumbent,
                                      const AcquisitionConfig& cfg, Rng& rng) {
  cfg.validate();
  const int dim = model.dim;
  Matrix normals = draw_standard_normals(cfg.J, cfg.K, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix refs(cfg.R, dim);
  for (int r = 0; r < cfg.R; ++r) {
    for (int d = 0; d < dim; ++d) refs(r, d) = unif(rng);
  }

  IntegratedEi out{next_query_pcd(incumbent.x, 0), {}, 0};
  out.scores.assign(static_cast<std::size_t>(dim), 0.0);
  for (int d = 0; d < dim; ++d) {
    ProjectionVector xi = coordinate_projection(dim, d);
    double total = 0.0;
    for (int r = 0; r < cfg.R; ++r) {
      ProjectiveQuery q =
          ProjectiveQuery::with_reference(xi, refs.row(r).transpose());
      total += improvement_score(slice_maxima(model, q, normals), incumbent.mu);
    }
    out.scores[d] = total / cfg.R;
    if (out.scores[d] > out.scores[out.chosen]) out.chosen = d;
  }

  ProjectionVector xi = coordinate_projection(dim, out.chosen);
  if (cfg.strategy == Strategy::kEiRandom) {
    Vector x(dim);
    for (int d = 0; d < dim; ++d) x[d] = unif(rng);
    out.query = ProjectiveQuery::with_reference(std::move(xi), x);
  } else {
    out.query = ProjectiveQuery::with_reference(std::move(xi),
                                                incumbent.x.coords());
  }
  return out;
}

AcquisitionResult select_next_query(const ModelState& model,
                                    const Incumbent& incumbent,
                                    const AcquisitionConfig& cfg,
                                    std::size_t iteration, Rng& rng) {
  switch (cfg.strategy) {
    case Strategy::kExpectedImprovement:
    case Strategy::kExplore:
      return optimize_acquisition(model, cfg, incumbent.mu, rng);
    case Strategy::kExploit:
      return {next_query_exploit(incumbent.x, rng), 0.0, 0};
    case Strategy::kCoordinateDescent:
      return {next_query_pcd(incumbent.x, iteration), 0.0, 0};
    case Strategy::kRandom:
      return {next_query_random(model.dim, cfg, rng), 0.0, 0};
    case Strategy::kEiExploit:
    case Strategy::kEiRandom: {
      IntegratedEi ie = next_query_integrated_ei(model, incumbent, cfg, rng);
      return {std::move(ie.query), ie.scores[ie.chosen], model.dim * cfg.R};
    }
  }
  throw ArgumentError("unhandled strategy");
}

}  // namespace ppbo
