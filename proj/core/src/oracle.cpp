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

#include "ppbo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "ppbo/errors.hpp"

namespace ppbo {

namespace {

struct Sample {
  double alpha;
  double value;
};

class LineObjective {
 public:
  LineObjective(const TestFunction& tf, const ProjectiveQuery& q, Rng* rng,
                OracleTrace* trace)
      : tf_(tf), q_(q), rng_(rng), trace_(trace) {}

  double operator()(double alpha) {
    Vector p = denormalize_point(tf_.domain, embed(alpha, q_));
    double v = eval_test_function(tf_, p, rng_);
    samples_.push_back({alpha, v});
    if (trace_ != nullptr) trace_->entries.push_back({alpha, v});
    return v;
  }

  const std::vector<Sample>& samples() const { return samples_; }

 private:
  const TestFunction& tf_;
  const ProjectiveQuery& q_;
  Rng* rng_;
  OracleTrace* trace_;
  std::vector<Sample> samples_;
};

void golden_section(LineObjective& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
}

// Vertex of the parabola through the best sample and its nearest evaluated
// neighbours on either side, if it falls strictly between them.
std::optional<double> parabolic_vertex(std::vector<Sample> samples) {
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) { return a.alpha < b.alpha; });
  auto best = std::min_element(
      samples.begin(), samples.end(),
      [](const Sample& a, const Sample& b) { return a.value < b.value; });
  auto left = best;
  while (left != samples.begin() && left->alpha == best->alpha) --left;
  auto right = best;
  while (right != samples.end() && right->alpha == best->alpha) ++right;
  if (left->alpha == best->alpha || right == samples.end()) return std::nullopt;

  const double x1 = left->alpha, f1 = left->value;
  const double x2 = best->alpha, f2 = best->value;
  const double x3 = right->alpha, f3 = right->value;
  const double num = (x2 - x1) * (x2 - x1) * (f2 - f3) -
                     (x2 - x3) * (x2 - x3) * (f2 - f1);
  const double den = (x2 - x1) * (f2 - f3) - (x2 - x3) * (f2 - f1);
  if (den == 0.0 || !std::isfinite(num / den)) return std::nullopt;
  const double vertex = x2 - 0.5 * num / den;
  if (!(vertex > x1 && vertex < x3) || vertex == x2) return std::nullopt;
  return vertex;
}

}  // namespace

OracleAnswer projective_feedback(const TestFunction& tf,
                                 const ProjectiveQuery& q, Rng* rng,
                                 OracleTrace* trace,
                                 const LineSearchOptions& options) {
  if (q.dim() != tf.domain.dim()) {
    throw ShapeError("query dimension does not match " + tf.name);
  }
  if (options.grid_points < 3) throw ArgumentError("grid needs >= 3 points");
  const FeasibleInterval interval = feasible_interval(q);
  LineObjective f(tf, q, rng, trace);

  const int g = options.grid_points;
  std::vector<double> grid(static_cast<std::size_t>(g));
  std::vector<double> values(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i) {
    grid[i] = i + 1 == g ? interval.hi
                         : interval.lo + interval.length() * i / (g - 1);
    values[i] = f(grid[i]);
  }

  std::vector<int> minima;
  for (int i = 0; i < g; ++i) {
    const bool left_ok = i == 0 || values[i] <= values[i - 1];
    const bool right_ok = i + 1 == g || values[i] <= values[i + 1];
    if (left_ok && right_ok) minima.push_back(i);
  }
  std::stable_sort(minima.begin(), minima.end(),
                   [&](int a, int b) { return values[a] < values[b]; });
  if (static_cast<int>(minima.size()) > options.brackets) {
    minima.resize(static_cast<std::size_t>(std::max(options.brackets, 1)));
  }
  for (int i : minima) {
    const double a = grid[std::max(i - 1, 0)];
    const double b = grid[std::min(i + 1, g - 1)];
    golden_section(f, a, b, options.tolerance);
  }
  if (auto vertex = parabolic_vertex(f.samples())) f(*vertex);

  const auto& samples = f.samples();
  const Sample& best = *std::min_element(
      samples.begin(), samples.end(),
      [](const Sample& a, const Sample& b) { return a.value < b.value; });
  OracleAnswer answer;
  answer.alpha_star = best.alpha;
  answer.f_at_answer =
      tf.evaluator(denormalize_point(tf.domain, embed(best.alpha, q)));
  return answer;
}

}  // namespace ppbo
