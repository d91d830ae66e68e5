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

#include "ppbo/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "ppbo/errors.hpp"

namespace ppbo {

Domain::Domain(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw ShapeError("domain bounds have different lengths");
  }
  if (lower_.size() < 2) {
    throw DomainError("domain must have at least two dimensions");
  }
  for (int d = 0; d < dim(); ++d) {
    if (!std::isfinite(lower_[d]) || !std::isfinite(upper_[d]) ||
        !(lower_[d] < upper_[d])) {
      std::ostringstream os;
      os << "domain coordinate " << d << " has invalid bounds [" << lower_[d]
         << ", " << upper_[d] << "]";
      throw DomainError(os.str());
    }
  }
}

Domain Domain::unit_cube(int dim) {
  return Domain(Vector::Zero(dim), Vector::Ones(dim));
}

bool Domain::contains(const Vector& p, double tol) const {
  if (p.size() != lower_.size()) return false;
  for (int d = 0; d < dim(); ++d) {
    if (!(p[d] >= lower_[d] - tol && p[d] <= upper_[d] + tol)) return false;
  }
  return true;
}

UnitPoint::UnitPoint(Vector coords) : coords_(std::move(coords)) {
  for (int d = 0; d < dim(); ++d) {
    double c = coords_[d];
    if (!(c >= -kUnitTolerance && c <= 1.0 + kUnitTolerance)) {
      std::ostringstream os;
      os << "unit coordinate " << d << " = " << c << " outside [0, 1]";
      throw DomainError(os.str());
    }
    coords_[d] = std::clamp(c, 0.0, 1.0);
  }
}

UnitPoint UnitPoint::center(int dim) {
  return UnitPoint(Vector::Constant(dim, 0.5));
}

ProjectionVector make_projection(const Vector& raw) {
  double peak = 0.0;
  for (int d = 0; d < raw.size(); ++d) {
    if (!std::isfinite(raw[d])) {
      throw InvalidProjection("projection entries must be finite");
    }
    if (raw[d] < 0.0) {
      std::ostringstream os;
      os << "projection entry " << d << " is negative (" << raw[d] << ")";
      throw InvalidProjection(os.str());
    }
    peak = std::max(peak, raw[d]);
  }
  if (peak == 0.0) throw InvalidProjection("projection vector is all zero");

  ProjectionVector xi;
  xi.values_ = raw / peak;
  for (int d = 0; d < raw.size(); ++d) {
    // Exact division by the peak leaves the peak entry at exactly 1.
    if (raw[d] == peak) xi.values_[d] = 1.0;
    if (xi.values_[d] != 0.0) xi.support_.push_back(d);
  }
  return xi;
}

ProjectionVector coordinate_projection(int dim, int d) {
  if (d < 0 || d >= dim) throw ArgumentError("coordinate index out of range");
  Vector raw = Vector::Zero(dim);
  raw[d] = 1.0;
  return make_projection(raw);
}

ProjectiveQuery::ProjectiveQuery(ProjectionVector xi, UnitPoint x)
    : xi_(std::move(xi)), x_(std::move(x)) {
  if (xi_.dim() != x_.dim()) {
    throw ShapeError("projection and reference have different dimensions");
  }
  for (int d : xi_.support()) {
    if (x_[d] != 0.0) {
      std::ostringstream os;
      os << "reference coordinate " << d << " = " << x_[d]
         << " must be zero on the projection support";
      throw InvalidQuery(os.str());
    }
  }
}

ProjectiveQuery ProjectiveQuery::with_reference(ProjectionVector xi,
                                                const Vector& x) {
  Vector ref = x;
  for (int d : xi.support()) ref[d] = 0.0;
  return ProjectiveQuery(std::move(xi), UnitPoint(std::move(ref)));
}

bool operator==(const ProjectiveQuery& a, const ProjectiveQuery& b) {
  return a.xi().values() == b.xi().values() && a.x().coords() == b.x().coords();
}

UnitPoint normalize_point(const Domain& domain, const Vector& p) {
  if (p.size() != domain.dim()) {
    throw ShapeError("point dimension does not match domain");
  }
  Vector u(domain.dim());
  for (int d = 0; d < domain.dim(); ++d) {
    double lo = domain.lower()[d];
    double hi = domain.upper()[d];
    if (!(p[d] >= lo - kBoundaryTolerance && p[d] <= hi + kBoundaryTolerance)) {
      std::ostringstream os;
      os << "coordinate " << d << " = " << p[d] << " outside domain [" << lo
         << ", " << hi << "]";
      throw DomainError(os.str());
    }
    u[d] = std::clamp((p[d] - lo) / (hi - lo), 0.0, 1.0);
  }
  return UnitPoint(std::move(u));
}

Vector denormalize_point(const Domain& domain, const UnitPoint& u) {
  if (u.dim() != domain.dim()) {
    throw ShapeError("point dimension does not match domain");
  }
  Vector p(domain.dim());
  for (int d = 0; d < domain.dim(); ++d) {
    p[d] = domain.lower()[d] + u[d] * domain.width(d);
  }
  return p;
}

FeasibleInterval feasible_interval(const ProjectiveQuery& q) {
  // alpha * xi_d + x_d in [0, 1] for every d on the support.
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (int d : q.xi().support()) {
    double s = q.xi()[d];
    double x = q.x()[d];
    lo = std::max(lo, -x / s);
    hi = std::min(hi, (1.0 - x) / s);
  }
  if (!(lo <= hi)) throw InvalidQuery("query has an empty feasible interval");
  return {lo, hi};
}

UnitPoint embed(double alpha, const ProjectiveQuery& q) {
  FeasibleInterval interval = feasible_interval(q);
  if (!std::isfinite(alpha) || !interval.contains(alpha)) {
    std::ostringstream os;
    os << "alpha = " << alpha << " outside feasible interval [" << interval.lo
       << ", " << interval.hi << "]";
    throw RangeError(os.str());
  }
  alpha = std::clamp(alpha, interval.lo, interval.hi);
  Vector p = alpha * q.xi().values() + q.x().coords();
  for (int d = 0; d < p.size(); ++d) p[d] = std::clamp(p[d], 0.0, 1.0);
  return UnitPoint(std::move(p));
}

}  // namespace ppbo
