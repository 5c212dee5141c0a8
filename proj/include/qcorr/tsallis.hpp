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

#include <cmath>

#include "qcorr/core.hpp"
#include "qcorr/state.hpp"

namespace qcorr {

/// The entropic order q >= 0. Values within `limit_epsilon` of 1 take the
/// q = 1 branch (natural logarithm / von Neumann entropy); the generalized
/// closed forms lose precision catastrophically nearer than ~1e-12.
struct EntropyParameter {
  double q;
  double limit_epsilon;

  explicit EntropyParameter(double q_, double eps = 1e-9) : q(q_), limit_epsilon(eps) {
    if (!(q >= 0.0)) throw input_error("q: entropic order must be >= 0");
    if (!(eps > 0.0)) throw input_error("q: limit epsilon must be positive");
  }

  bool unit_branch() const { return std::abs(q - 1.0) < limit_epsilon; }
};

/// Deformed logarithm (x^(1-q) - 1)/(1-q); natural log on the q = 1 branch.
inline double q_log(double x, const EntropyParameter& qp) {
  if (!(x > 0.0)) throw std::domain_error("q_log: argument must be positive");
  if (qp.unit_branch()) return std::log(x);
  return std::expm1((1.0 - qp.q) * std::log(x)) / (1.0 - qp.q);
}

/// Entropy of a classical spectrum: (1 - sum_i p_i^q)/(q - 1), evaluated as
/// -sum p expm1((q-1) ln p)/(q-1) for stability across q ~ 1. Eigenvalues
/// below the spectrum cutoff are treated as exactly zero.
inline double tsallis_entropy_from_spectrum(const RealVector& spectrum,
                                            const EntropyParameter& qp) {
  double acc = 0.0;
  if (qp.unit_branch()) {
    for (int i = 0; i < spectrum.size(); ++i) {
      const double p = spectrum[i];
      if (p > tol::spectrum_zero) acc -= p * std::log(p);
    }
    return acc;
  }
  for (int i = 0; i < spectrum.size(); ++i) {
    const double p = spectrum[i];
    if (p > tol::spectrum_zero) acc -= p * std::expm1((qp.q - 1.0) * std::log(p));
  }
  return acc / (qp.q - 1.0);
}

inline double tsallis_entropy(const DensityOperator& rho, const EntropyParameter& qp) {
  return tsallis_entropy_from_spectrum(spectral_decompose(rho).eigenvalues, qp);
}

/// Entropy of the maximally mixed state (1 - d^(1-q))/(q - 1); ln d at q = 1.
/// This is the maximum of the entropy over states of dimension d.
inline double max_tsallis_entropy(int d, const EntropyParameter& qp) {
  if (d < 2) throw input_error("dims: maximum entropy needs dimension >= 2");
  if (qp.unit_branch()) return std::log(static_cast<double>(d));
  return -std::expm1((1.0 - qp.q) * std::log(static_cast<double>(d))) / (qp.q - 1.0);
}

/// q-expectation weight p^q with the 0^q := 0 convention.
inline double q_weight(double p, const EntropyParameter& qp) {
  if (p < tol::zero_weight) return 0.0;
  return std::exp(qp.q * std::log(p));
}

/// Mutual entropy across a declared split: S(left) + S(right) - S(whole).
inline double q_mutual_entropy_split(const DensityOperator& rho,
                                     const std::vector<std::string>& left,
                                     const EntropyParameter& qp) {
  std::vector<std::string> right;
  for (const auto& l : rho.layout().labels())
    if (std::find(left.begin(), left.end(), l) == left.end()) right.push_back(l);
  if (left.empty() || right.empty())
    throw input_error("labels: split must leave subsystems on both sides");
  const double s_left = tsallis_entropy(partial_trace(rho, left), qp);
  const double s_right = tsallis_entropy(partial_trace(rho, right), qp);
  return s_left + s_right - tsallis_entropy(rho, qp);
}

/// Mutual entropy of a bipartite state (exactly two subsystems).
inline double q_mutual_entropy(const DensityOperator& rho_ab, const EntropyParameter& qp) {
  if (rho_ab.layout().size() != 2)
    throw input_error("labels: mutual entropy expects a bipartite layout");
  return q_mutual_entropy_split(rho_ab, {rho_ab.layout().labels()[0]}, qp);
}

}  // namespace qcorr
