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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit when any
// fails. Positional arguments select criteria by name; with none, all run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "ppbo/acquisition.hpp"
#include "ppbo/harness.hpp"
#include "ppbo/oracle.hpp"
#include "ppbo/preference_model.hpp"
#include "ppbo/test_functions.hpp"

namespace ppbo {
namespace {

using testing::Mat;
using testing::Vec;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::function<Verdict()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

BenchmarkConfig campaign(const std::string& function, Strategy s, int budget, int seeds) {
  BenchmarkConfig cfg = BenchmarkConfig::defaults_for(function);
  cfg.acquisition.strategy = s;
  cfg.budget = budget;
  cfg.seeds.resize(static_cast<std::size_t>(seeds));
  std::iota(cfg.seeds.begin(), cfg.seeds.end(), std::uint64_t{0});
  cfg.record_timing = false;
  cfg.jobs = 1;
  return cfg;
}

double line_value(const TestFunction& tf, const ProjectiveQuery& q, double alpha) {
  return tf.evaluator(denormalize_point(tf.domain, embed(alpha, q)));
}

// --- benchmark campaigns ------------------------------------------------------

Verdict camel_random() {
  const BenchmarkResult r = run_benchmark(campaign("camel2d", Strategy::kRandom, 20, 10));
  const double med = final_median(r);
  return {r.all_completed() && med <= 0.1052, "median " + fmt("%.4f", med) + " (bound 0.1052)"};
}

Verdict camel_pcd() {
  const BenchmarkResult r = run_benchmark(campaign("camel2d", Strategy::kCoordinateDescent, 40, 10));
  const double med = final_median(r);
  BenchmarkConfig quiet = campaign("camel2d", Strategy::kCoordinateDescent, 40, 10);
  quiet.noise_sd = 0.0;
  const double med0 = final_median(run_benchmark(quiet));
  const bool ok = r.all_completed() && std::abs(med + 1.0316) <= 0.15;
  return {ok, "median " + fmt("%.4f", med) + " (target -1.0316 +- 0.15); noiseless oracle gives " +
                  fmt("%.4f", med0)};
}

Verdict hartmann_ranking() {
  const BenchmarkResult pcd = run_benchmark(campaign("hartmann6", Strategy::kCoordinateDescent, 60, 5));
  const BenchmarkResult rnd = run_benchmark(campaign("hartmann6", Strategy::kRandom, 60, 5));
  const double p = final_median(pcd), r = final_median(rnd);
  const double p0 = initial_median(pcd), r0 = initial_median(rnd);
  const bool ok = pcd.all_completed() && rnd.all_completed() && p <= r && p < p0 && r < r0;
  return {ok, "pcd " + fmt("%.4f", p0) + " -> " + fmt("%.4f", p) + ", rand " + fmt("%.4f", r0) +
                  " -> " + fmt("%.4f", r)};
}

// --- model numerics -----------------------------------------------------------

Verdict probit_quadrature() {
  double worst = 0.0;
  for (int k = 0; k <= 120; ++k) {
    const double z = -6.0 + 0.1 * k;
    worst = std::max(worst, std::abs(smoothed_probit(z) - testing::smoothed_probit_quadrature(z)));
  }
  return {worst < 1e-8, "max abs error " + fmt("%.2e", worst)};
}

Vec random_latent(std::mt19937_64& rng, Eigen::Index n, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Vec f(n);
  for (Eigen::Index i = 0; i < n; ++i) f[i] = normal(rng);
  return f;
}

Verdict derivatives() {
  std::mt19937_64 rng(3);
  double g_worst = 0.0, h_worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + i % 5;
    const int m = std::vector<int>{4, 9, 16}[i % 3];
    const int dim = 2 + i % 5;
    const Dataset data = testing::random_dataset(rng, n, m, dim);
    const Hyperparameters hyper = Hyperparameters::defaults_for(dim);
    const testing::Pairs pairs = testing::latent_pairs(data, dim);
    const Mat inv = testing::jittered_inverse(testing::reference_sigma(pairs, hyper));
    auto ref_t = [&](const Vec& f) {
      return -0.5 * f.dot(inv * f) + testing::reference_loglik(pairs, hyper.sigma, f);
    };
    auto grad = [&](const Vec& f) { return Vec(functional_T(data, hyper, f).gradient); };
    const Vec f = random_latent(rng, pairs.locations.rows(), 0.3);
    const Objective t = functional_T(data, hyper, f);
    g_worst = std::max(g_worst, testing::relative_error(t.gradient, testing::fd_gradient(ref_t, f, 1e-5)));
    h_worst = std::max(h_worst, testing::relative_error(t.hessian, testing::fd_jacobian(grad, f, 1e-5)));
  }
  return {g_worst < 1e-4 && h_worst < 1e-3,
          "gradient " + fmt("%.2e", g_worst) + ", Hessian " + fmt("%.2e", h_worst)};
}

struct FitCase {
  int n, m, dim;
};

std::vector<FitCase> fit_cases() {
  std::vector<FitCase> out;
  for (int n : {1, 2, 5, 8}) {
    for (int m : {4, 16, 25}) {
      for (int dim : {2, 4, 6}) out.push_back({n, m, dim});
    }
  }
  return out;
}

Verdict map_ascent() {
  std::mt19937_64 rng(21);
  int bad_trace = 0, bad_grad = 0, bad_pd = 0;
  double worst_grad = 0.0;
  const std::vector<FitCase> cases = fit_cases();
  for (const FitCase& c : cases) {
    const Dataset data = testing::random_dataset(rng, c.n, c.m, c.dim);
    const ModelState model = fit_map(data, Hyperparameters::defaults_for(c.dim), c.dim);
    const auto& trace = model.report.objective_trace;
    if (!std::is_sorted(trace.begin(), trace.end())) ++bad_trace;
    // Stationarity: a = grad loglik(f) at f = Sigma a.
    const LikelihoodTerms lik = likelihood_terms(model.layout.slots, model.f_map, model.hyper.sigma);
    const double g = (lik.gradient - model.weights).lpNorm<Eigen::Infinity>();
    worst_grad = std::max(worst_grad, g);
    if (g >= 1e-5) ++bad_grad;
    Eigen::SelfAdjointEigenSolver<Mat> eig(laplace_precision(model));
    if (eig.eigenvalues().minCoeff() <= 0.0) ++bad_pd;
  }
  return {bad_trace == 0 && bad_grad == 0 && bad_pd == 0,
          std::to_string(cases.size()) + " fixtures; non-monotone " + std::to_string(bad_trace) +
              ", max |grad| " + fmt("%.2e", worst_grad) + ", not PD " + std::to_string(bad_pd)};
}

Verdict predictive_identities() {
  std::mt19937_64 rng(31);
  double worst_mean = 0.0, min_var = INFINITY;
  for (const FitCase& c : fit_cases()) {
    const Dataset data = testing::random_dataset(rng, c.n, c.m, c.dim);
    const ModelState model = fit_map(data, Hyperparameters::defaults_for(c.dim), c.dim);
    const Prediction p = predict(model, model.layout.locations);
    worst_mean = std::max(worst_mean, (p.mean - model.f_map).lpNorm<Eigen::Infinity>());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Matrix probe(20, c.dim);
    for (Eigen::Index i = 0; i < probe.size(); ++i) probe.data()[i] = unif(rng);
    min_var = std::min({min_var, p.cov.diagonal().minCoeff(), predict_marginal(model, probe).variance.minCoeff()});
  }
  const Dataset data = testing::random_dataset(rng, 5, 16, 2);
  const Hyperparameters hyper{1.5, 0.1, 0.1};
  const Prediction far = predict(fit_map(data, hyper, 2), Matrix::Constant(1, 2, 12.0));
  const double revert = std::max(std::abs(far.mean[0]), std::abs(far.cov(0, 0) - 2.25));
  return {worst_mean < 1e-8 && min_var >= 0.0 && revert < 1e-6,
          "mean error " + fmt("%.2e", worst_mean) + ", min variance " + fmt("%.2e", min_var) +
              ", prior reversion " + fmt("%.2e", revert)};
}

// --- oracle and acquisition ---------------------------------------------------

Verdict oracle_exactness() {
  int misses = 0;
  double worst_excess = -INFINITY;
  for (const char* name : {"camel2d", "hartmann6", "levy10", "ackley20"}) {
    const TestFunction tf = make_test_function(name, 0.0);
    Rng rng = make_rng(0, Stream::kInitialization);
    AcquisitionConfig cfg;
    for (int i = 0; i < 100; ++i) {
      cfg.coordinate_only = i % 2 == 0;
      const ProjectiveQuery q = next_query_random(tf.domain.dim(), cfg, rng);
      double grid_min = INFINITY;
      for (int g = 0; g <= 2000; ++g) grid_min = std::min(grid_min, line_value(tf, q, g / 2000.0));
      const double excess = line_value(tf, q, projective_feedback(tf, q).alpha_star) - grid_min;
      worst_excess = std::max(worst_excess, excess);
      if (excess > 1e-6) ++misses;
    }
  }
  double quad_err = 0.0;
  for (int dim : {2, 3, 5}) {
    const TestFunction tf = make_test_function("quadratic-" + std::to_string(dim), 0.0);
    const Vector c = default_quadratic_center(dim);
    for (int d = 0; d < dim; ++d) {
      const ProjectiveQuery q = testing::axis_query(dim, d, Vector::Constant(dim, 0.3));
      const Vector p = denormalize_point(tf.domain, embed(projective_feedback(tf, q).alpha_star, q));
      quad_err = std::max(quad_err, std::abs(p[d] - c[d]));
    }
  }
  return {misses == 0 && quad_err < 1e-6, "grid misses " + std::to_string(misses) +
                                              "/400 (worst excess " + fmt("%.2e", worst_excess) +
                                              "), quadratic error " + fmt("%.2e", quad_err)};
}

Verdict determinism() {
  BenchmarkConfig cfg = campaign("camel2d", Strategy::kExpectedImprovement, 6, 3);
  cfg.acquisition.K = 50;
  cfg.acquisition.J = 20;
  std::ostringstream a, b;
  write_convergence_csv(a, run_benchmark(cfg));
  cfg.jobs = 2;
  write_convergence_csv(b, run_benchmark(cfg));
  const bool csv_same = !a.str().empty() && a.str() == b.str();

  std::mt19937_64 rng(5);
  const Dataset data = testing::random_dataset(rng, 4, 10, 3);
  const ModelState model = fit_map(data, Hyperparameters::defaults_for(3), 3);
  Rng inc_rng = make_rng(5, Stream::kIncumbent);
  const Incumbent inc = posterior_mean_argmax(model, inc_rng);
  int differing = 0;
  for (Strategy s : {Strategy::kExpectedImprovement, Strategy::kExploit, Strategy::kExplore,
                     Strategy::kCoordinateDescent, Strategy::kRandom, Strategy::kEiExploit,
                     Strategy::kEiRandom}) {
    AcquisitionConfig ac;
    ac.strategy = s;
    ac.K = 50;
    ac.J = 20;
    Rng r1 = make_rng(9, Stream::kAcquisition);
    Rng r2 = make_rng(9, Stream::kAcquisition);
    if (!(select_next_query(model, inc, ac, 4, r1).query == select_next_query(model, inc, ac, 4, r2).query)) {
      ++differing;
    }
  }
  return {csv_same && differing == 0, std::string("CSV ") + (csv_same ? "identical" : "differs") +
                                          ", strategies with differing queries " +
                                          std::to_string(differing) + "/7"};
}

Verdict exploitation_geometry() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int dim = 2 + trial % 5;
    Vector x(dim);
    for (int d = 0; d < dim; ++d) x[d] = unif(rng);
    std::vector<int> support(static_cast<std::size_t>(dim));
    std::iota(support.begin(), support.end(), 0);
    std::shuffle(support.begin(), support.end(), rng);
    support.resize(1 + rng() % static_cast<std::size_t>(dim));
    const ProjectiveQuery q = exploit_query(UnitPoint(x), support);
    double alpha = 0.0;
    for (int d : support) alpha = std::max(alpha, x[d]);
    worst = std::max(worst, (embed(alpha, q).coords() - x).lpNorm<Eigen::Infinity>());
  }
  bool cycles = true;
  for (int dim : {2, 3, 6}) {
    Vector x(dim);
    for (int d = 0; d < dim; ++d) x[d] = unif(rng);
    const UnitPoint x_star(x);
    for (std::size_t it = 0; it < static_cast<std::size_t>(3 * dim); ++it) {
      const ProjectiveQuery q = next_query_pcd(x_star, it);
      cycles = cycles && q.xi().support() == std::vector<int>{static_cast<int>(it % dim)} &&
               q == next_query_pcd(x_star, it + static_cast<std::size_t>(dim));
    }
  }
  return {worst < 1e-9 && cycles, "max residual " + fmt("%.2e", worst) + ", PCD period D " +
                                      (cycles ? "holds" : "broken")};
}

}  // namespace
}  // namespace ppbo

int main(int argc, char** argv) {
  using namespace ppbo;
  const std::vector<Criterion> criteria = {
      {"camel2d-rand-baseline", camel_random},
      {"camel2d-pcd-convergence", camel_pcd},
      {"hartmann6-ranking", hartmann_ranking},
      {"probit-quadrature", probit_quadrature},
      {"objective-derivatives", derivatives},
      {"map-ascent", map_ascent},
      {"predictive-identities", predictive_identities},
      {"oracle-exactness", oracle_exactness},
      {"determinism", determinism},
      {"exploitation-geometry", exploitation_geometry},
  };

  CLI::App app{"Acceptance criteria"};
  std::vector<std::string> only;
  app.add_option("criteria", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.name) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", c.name.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
