// Copyright 2026 The qcorr developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "qcorr/core.hpp"

namespace qcorr {

/// How a reported number relates to the quantity it estimates.
///   Exact           — the number is the quantity.
///   LowerBoundOfMax — the quantity is a maximum; the search reports the best
///                     candidate found, so the true value is >= the report.
///   UpperBoundOfMin — dual case: the true value is <= the report.
enum class BoundDirection { Exact, LowerBoundOfMax, UpperBoundOfMin };

inline std::string to_string(BoundDirection d) {
  switch (d) {
    case BoundDirection::Exact: return "EXACT";
    case BoundDirection::LowerBoundOfMax: return "LOWER_BOUND_OF_MAX";
    case BoundDirection::UpperBoundOfMin: return "UPPER_BOUND_OF_MIN";
  }
  return "?";
}

enum class WitnessKind { None, Decomposition, Measurement };

/// Numeric result tagged with its bound direction. Optimizer outputs carry
/// the candidate that achieved the value (decomposition isometry or
/// measurement matrix) so the number can be replayed independently, plus the
/// candidate cardinality searched — for q > 1 optimization values can depend
/// on that cap, so it is part of the result.
struct BoundedValue {
  double value = 0.0;
  BoundDirection direction = BoundDirection::Exact;
  long budget_used = 0;       // objective evaluations spent
  int candidate_cap = 0;      // outcome/member count searched; 0 = not applicable
  WitnessKind witness_kind = WitnessKind::None;
  Matrix witness;             // empty when witness_kind == None

  /// Smallest value of the true quantity consistent with this report.
  double lower_limit() const {
    return direction == BoundDirection::UpperBoundOfMin
               ? -std::numeric_limits<double>::infinity()
               : value;
  }
  /// Largest value of the true quantity consistent with this report.
  double upper_limit() const {
    return direction == BoundDirection::LowerBoundOfMax
               ? std::numeric_limits<double>::infinity()
               : value;
  }
};

inline BoundedValue exact_value(double v) {
  return BoundedValue{v, BoundDirection::Exact, 0, 0, WitnessKind::None, Matrix()};
}

/// Interval sum: directions combine when compatible; a mixed sum keeps only
/// the interval semantics of whichever side stays one-sided.
inline BoundedValue bounded_sum(const BoundedValue& a, const BoundedValue& b) {
  BoundedValue out;
  out.value = a.value + b.value;
  out.budget_used = a.budget_used + b.budget_used;
  const double lo = a.lower_limit() + b.lower_limit();
  const double hi = a.upper_limit() + b.upper_limit();
  if (std::isfinite(lo) && std::isfinite(hi))
    out.direction = BoundDirection::Exact;
  else if (std::isfinite(lo))
    out.direction = BoundDirection::LowerBoundOfMax;
  else if (std::isfinite(hi))
    out.direction = BoundDirection::UpperBoundOfMin;
  else
    throw input_error("bounds: sum of opposite one-sided bounds carries no information");
  return out;
}

/// c - b for exact c: flips the bound direction of b.
inline BoundedValue bounded_complement(double c, const BoundedValue& b) {
  BoundedValue out = b;
  out.value = c - b.value;
  if (b.direction == BoundDirection::LowerBoundOfMax)
    out.direction = BoundDirection::UpperBoundOfMin;
  else if (b.direction == BoundDirection::UpperBoundOfMin)
    out.direction = BoundDirection::LowerBoundOfMax;
  return out;
}

struct OptimizationBudget {
  int restarts = 32;
  int max_iterations = 300;
  double convergence_tol = 1e-8;
  std::uint64_t rng_seed = 0;
  // 0 = automatic (r^2 members, d^2 outcomes, clamped for tractability).
  int max_members = 0;
  int max_outcomes = 0;

  void validate() const {
    if (restarts < 1 || max_iterations < 1 || !(convergence_tol > 0.0))
      throw input_error("budget: restarts, iterations and tolerance must be positive");
    if (max_members < 0 || max_outcomes < 0)
      throw input_error("budget: candidate caps cannot be negative");
  }
};

}  // namespace qcorr
