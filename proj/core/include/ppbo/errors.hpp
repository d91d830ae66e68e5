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

#include <stdexcept>
#include <string>

namespace ppbo {

// Base of every error raised by the library. Each subclass corresponds to one
// failure category so callers (the CLI, the HTTP layer) can map them to exit
// codes and status codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point lies outside its domain, or a domain is malformed.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A projection vector is all-zero or has a negative entry.
class InvalidProjection : public Error {
 public:
  using Error::Error;
};

// A projective query breaks the zero-reference-on-support convention.
class InvalidQuery : public Error {
 public:
  using Error::Error;
};

// A scalar argument is outside its admissible interval.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Mismatched vector or matrix dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Bad argument value (non-positive counts, invalid hyperparameters, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Non-finite numbers, or a factorization that failed after jitter escalation.
class NumericError : public Error {
 public:
  using Error::Error;
};

// MAP estimation ran out of iterations.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double gradient_norm)
      : Error(what), gradient_norm_(gradient_norm) {}
  double gradient_norm() const { return gradient_norm_; }

 private:
  double gradient_norm_;
};

// Operation requires a fitted model.
class StateError : public Error {
 public:
  using Error::Error;
};

// Unknown name (test function, strategy, ...).
class LookupError : public Error {
 public:
  using Error::Error;
};

// Malformed or incompatible serialized document.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Session lifecycle conflicts (no pending query, budget exhausted).
class ConflictError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Client-supplied input failed validation. Carries the offending field.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace ppbo
