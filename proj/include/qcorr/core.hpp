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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qcorr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Raised when caller-supplied data violates a documented precondition.
/// The message starts with the name of the violated invariant.
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when an internal numerical consistency check fails (e.g. an
/// eigendecomposition that does not reconstruct its input, or the two
/// evaluation routes of a dual-path quantity disagreeing).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tolerances. Grouped here so every module classifies noise the same way.
namespace tol {
inline constexpr double pure_norm = 1e-12;        // |<psi|psi> - 1|
inline constexpr double hermiticity = 1e-8;       // max rejected (M - M^+)/2 entry
inline constexpr double trace_one = 1e-10;        // |tr rho - 1|
inline constexpr double eig_floor = -1e-10;       // most negative admissible eigenvalue
inline constexpr double reconstruction = 1e-10;   // spectral / purification round trip
inline constexpr double ensemble_parent = 1e-9;   // sum_i p_i rho_i vs declared parent
inline constexpr double completeness = 1e-9;      // sum_x |v_x><v_x| vs identity
inline constexpr double zero_weight = 1e-14;      // probabilities treated as exactly 0
inline constexpr double spectrum_zero = 1e-14;    // eigenvalues dropped from entropy sums
inline constexpr double rank_cut = 1e-12;         // eigenvalues counted towards rank
inline constexpr double identity_check = 1e-9;    // exact per-candidate identities
inline constexpr double certify = 1e-6;           // optimizer-certification slack
inline constexpr double premise = 1e-9;           // subadditivity-gap classification
inline constexpr double dual_path = 1e-8;         // closed form vs direct evaluation
inline constexpr double witness_replay = 1e-12;   // re-evaluated witness vs reported
inline constexpr double oracle_agree = 1e-3;      // optimizer vs grid oracle
}  // namespace tol

inline double sqr(double x) { return x * x; }

/// Kronecker product; the left factor owns the most significant index block.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

}  // namespace qcorr
