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
#include <vector>

#include <Eigen/Core>

namespace ppbo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Absolute slack accepted on domain membership checks in native units.
inline constexpr double kBoundaryTolerance = 1e-9;
// Slack accepted on unit-cube coordinates before clamping.
inline constexpr double kUnitTolerance = 1e-12;

// Axis-aligned box [lower, upper] in native units, D >= 2.
class Domain {
 public:
  Domain(Vector lower, Vector upper);

  static Domain unit_cube(int dim);

  int dim() const { return static_cast<int>(lower_.size()); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  double width(int d) const { return upper_[d] - lower_[d]; }

  bool contains(const Vector& p, double tol = kBoundaryTolerance) const;

 private:
  Vector lower_;
  Vector upper_;
};

// A point of the normalized cube [0,1]^D.
class UnitPoint {
 public:
  // Coordinates within kUnitTolerance of the cube are clamped onto it; anything
  // further out throws DomainError.
  explicit UnitPoint(Vector coords);

  static UnitPoint center(int dim);

  int dim() const { return static_cast<int>(coords_.size()); }
  const Vector& coords() const { return coords_; }
  double operator[](int d) const { return coords_[d]; }

 private:
  Vector coords_;
};

// Nonnegative direction with sup-norm exactly one. Entries off the support are
// exactly zero.
class ProjectionVector {
 public:
  int dim() const { return static_cast<int>(values_.size()); }
  const Vector& values() const { return values_; }
  const std::vector<int>& support() const { return support_; }
  double operator[](int d) const { return values_[d]; }
  bool on_support(int d) const { return values_[d] != 0.0; }

 private:
  friend ProjectionVector make_projection(const Vector& raw);
  ProjectionVector() = default;

  Vector values_;
  std::vector<int> support_;
};

// Scales `raw` by its largest entry. Throws InvalidProjection when `raw` is
// all-zero or has a negative entry.
ProjectionVector make_projection(const Vector& raw);

// Standard basis vector e_d of dimension `dim`.
ProjectionVector coordinate_projection(int dim, int d);

// A projective query (xi, x). The reference x is zero on the support of xi,
// which makes the feasible interval exactly [0, 1].
class ProjectiveQuery {
 public:
  ProjectiveQuery(ProjectionVector xi, UnitPoint x);

  // Builds a query from an arbitrary reference by zeroing it on xi's support.
  static ProjectiveQuery with_reference(ProjectionVector xi, const Vector& x);

  int dim() const { return xi_.dim(); }
  const ProjectionVector& xi() const { return xi_; }
  const UnitPoint& x() const { return x_; }

 private:
  ProjectionVector xi_;
  UnitPoint x_;
};

bool operator==(const ProjectiveQuery& a, const ProjectiveQuery& b);

struct FeasibleInterval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double alpha, double tol = kBoundaryTolerance) const {
    return alpha >= lo - tol && alpha <= hi + tol;
  }
};

// Affine map of a native point onto [0,1]^D. Throws DomainError naming the
// first coordinate outside the domain.
UnitPoint normalize_point(const Domain& domain, const Vector& p);

// Inverse of normalize_point.
Vector denormalize_point(const Domain& domain, const UnitPoint& u);

// {alpha : alpha * xi + x in [0,1]^D}, computed coordinate by coordinate.
FeasibleInterval feasible_interval(const ProjectiveQuery& q);

// alpha * xi + x. Throws RangeError when alpha is outside the feasible interval.
UnitPoint embed(double alpha, const ProjectiveQuery& q);

}  // namespace ppbo
