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
#include <vector>

#include "qcorr/ensemble.hpp"
#include "qcorr/random.hpp"
#include "qcorr/state.hpp"

namespace qcorr::testing {

inline PureState basis_state(const SubsystemLayout& layout, int index) {
  Vector v = Vector::Zero(layout.ambient_dim());
  v[index] = 1.0;
  return PureState(std::move(v), layout);
}

/// (|00> + |11>)/sqrt(2) on two qubits labelled A, B.
inline PureState bell_state() {
  SubsystemLayout l({2, 2}, {"A", "B"});
  Vector v = Vector::Zero(4);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  return PureState(std::move(v), l);
}

/// (|000> + |111>)/sqrt(2) on three qubits labelled A, B, C.
inline PureState ghz_state() {
  SubsystemLayout l({2, 2, 2}, {"A", "B", "C"});
  Vector v = Vector::Zero(8);
  v[0] = v[7] = 1.0 / std::sqrt(2.0);
  return PureState(std::move(v), l);
}

/// (|0...0> + |1...1>)/sqrt(2) on n qubits.
inline PureState ghz_state(int n) {
  SubsystemLayout l(std::vector<int>(n, 2));
  Vector v = Vector::Zero(l.ambient_dim());
  v[0] = v[l.ambient_dim() - 1] = 1.0 / std::sqrt(2.0);
  return PureState(std::move(v), l);
}

/// sqrt(w)|00> + sqrt(1-w)|11>.
inline PureState weighted_bell(double w) {
  SubsystemLayout l({2, 2}, {"A", "B"});
  Vector v = Vector::Zero(4);
  v[0] = std::sqrt(w);
  v[3] = std::sqrt(1.0 - w);
  return PureState(std::move(v), l);
}

inline DensityOperator maximally_mixed(const SubsystemLayout& layout) {
  const int d = layout.ambient_dim();
  return DensityOperator::unchecked(Matrix::Identity(d, d) / static_cast<double>(d), layout);
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace qcorr::testing
