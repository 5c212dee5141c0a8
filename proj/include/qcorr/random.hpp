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
#include <random>

#include "qcorr/core.hpp"
#include "qcorr/state.hpp"

namespace qcorr {

/// Splittable seed derivation (SplitMix64 finalizer). Sub-streams for trial
/// i of a sweep use derive_seed(master, i), so any subset of a sweep can be
/// reproduced independently.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double gaussian() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t bits() { return engine_(); }

  Complex complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return Complex(re, im);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

inline Vector gaussian_vector(int n, Rng& rng) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.complex_gaussian();
  return v;
}

/// Haar-random isometry (m x r, orthonormal columns) via QR of a Gaussian
/// matrix with the R-diagonal phase fix.
inline Matrix haar_isometry(int m, int r, Rng& rng) {
  if (r > m) throw input_error("dims: isometry needs at least as many rows as columns");
  Matrix g(m, r);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < r; ++j) g(i, j) = rng.complex_gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(m, r);
  Matrix rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  for (int j = 0; j < r; ++j) {
    const Complex d = rr(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline Matrix haar_unitary(int n, Rng& rng) { return haar_isometry(n, n, rng); }

/// Haar-distributed pure state: normalized complex Gaussian vector.
inline PureState random_pure(const SubsystemLayout& layout, std::uint64_t seed) {
  Rng rng(seed);
  Vector v = gaussian_vector(layout.ambient_dim(), rng);
  v /= v.norm();
  return PureState(std::move(v), layout);
}

/// Mixed state of the given rank: partial trace of a Haar-random
/// purification over an ancilla of dimension `rank`.
inline DensityOperator random_density(const SubsystemLayout& layout, int rank,
                                      std::uint64_t seed) {
  const int d = layout.ambient_dim();
  if (rank < 1 || rank > d)
    throw input_error("dims: rank must lie between 1 and the ambient dimension");
  Rng rng(seed);
  Vector v = gaussian_vector(d * rank, rng);
  v /= v.norm();
  // rho[i,j] = sum_a v[i*rank+a] conj(v[j*rank+a])
  Matrix rho = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Complex acc = 0;
      for (int a = 0; a < rank; ++a) acc += v[i * rank + a] * std::conj(v[j * rank + a]);
      rho(i, j) = acc;
    }
  return DensityOperator::unchecked(std::move(rho), layout);
}

}  // namespace qcorr
