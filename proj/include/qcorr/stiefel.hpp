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

#include <functional>
#include <vector>

#include "qcorr/core.hpp"
#include "qcorr/random.hpp"

namespace qcorr {

/// Anti-Hermitian matrix from m(m-1) real coordinates (one complex number
/// per strict upper-triangular entry). Diagonal generators only rotate row
/// phases, which no objective here depends on, so they are omitted.
inline Matrix antihermitian_from_params(const RealVector& theta, int m) {
  Matrix a = Matrix::Zero(m, m);
  int k = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const Complex z(theta[k], theta[k + 1]);
      k += 2;
      a(i, j) = z;
      a(j, i) = -std::conj(z);
    }
  return a;
}

inline int generator_params(int m) { return m * (m - 1); }

/// exp(A) for anti-Hermitian A, via the eigensystem of the Hermitian -iA.
inline Matrix unitary_exp(const Matrix& a) {
  const Matrix h = Complex(0, -1) * a;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    phases[i] = std::exp(Complex(0, es.eigenvalues()[i]));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Point on the Stiefel manifold reached from `base` by the exponential map.
inline Matrix isometry_from_params(const RealVector& theta, const Matrix& base) {
  return unitary_exp(antihermitian_from_params(theta, static_cast<int>(base.rows()))) * base;
}

/// Canonical embedding [I_r; 0] as an m x r isometry.
inline Matrix embedding_isometry(int m, int r) {
  Matrix v = Matrix::Zero(m, r);
  v.topLeftCorner(r, r).setIdentity();
  return v;
}

struct SearchResult {
  RealVector x;
  double f = 0.0;
  long evaluations = 0;
};

/// Nelder–Mead simplex descent (minimization). Deterministic given x0.
inline SearchResult nelder_mead(const std::function<double(const RealVector&)>& f,
                                const RealVector& x0, double scale, int max_iterations,
                                double tolerance) {
  const int n = static_cast<int>(x0.size());
  SearchResult res;
  if (n == 0) {
    res.x = x0;
    res.f = f(x0);
    res.evaluations = 1;
    return res;
  }
  std::vector<RealVector> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (int i = 1; i <= n; ++i) xs[i][i - 1] += scale;
  long evals = 0;
  for (int i = 0; i <= n; ++i) {
    fs[i] = f(xs[i]);
    ++evals;
  }
  auto order = [&]() {
    std::vector<int> idx(n + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    std::vector<RealVector> x2(n + 1);
    std::vector<double> f2(n + 1);
    for (int i = 0; i <= n; ++i) {
      x2[i] = xs[idx[i]];
      f2[i] = fs[idx[i]];
    }
    xs.swap(x2);
    fs.swap(f2);
  };
  order();
  for (int it = 0; it < max_iterations; ++it) {
    if (fs[n] - fs[0] < tolerance) break;
    RealVector centroid = RealVector::Zero(n);
    for (int i = 0; i < n; ++i) centroid += xs[i];
    centroid /= n;

    RealVector xr = centroid + (centroid - xs[n]);
    const double fr = f(xr);
    ++evals;
    if (fr < fs[0]) {
      RealVector xe = centroid + 2.0 * (centroid - xs[n]);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        xs[n] = xe;
        fs[n] = fe;
      } else {
        xs[n] = xr;
        fs[n] = fr;
      }
    } else if (fr < fs[n - 1]) {
      xs[n] = xr;
      fs[n] = fr;
    } else {
      RealVector xc = centroid + 0.5 * (xs[n] - centroid);
      const double fc = f(xc);
      ++evals;
      if (fc < fs[n]) {
        xs[n] = xc;
        fs[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          xs[i] = xs[0] + 0.5 * (xs[i] - xs[0]);
          fs[i] = f(xs[i]);
          ++evals;
        }
      }
    }
    order();
  }
  res.x = xs[0];
  res.f = fs[0];
  res.evaluations = evals;
  return res;
}

/// Coordinate pattern search (minimization): probes +/- step along each
/// coordinate, accepts improvements, halves the step on a stall.
/// Deterministic; used by the grid oracle as its refinement stage.
inline SearchResult pattern_search(const std::function<double(const RealVector&)>& f,
                                   const RealVector& x0, double step0, double min_step,
                                   long max_evaluations = 100000) {
  SearchResult res;
  res.x = x0;
  res.f = f(x0);
  res.evaluations = 1;
  double step = step0;
  while (step > min_step && res.evaluations < max_evaluations) {
    bool improved = false;
    for (int k = 0; k < res.x.size(); ++k) {
      for (double sgn : {1.0, -1.0}) {
        RealVector probe = res.x;
        probe[k] += sgn * step;
        const double fp = f(probe);
        ++res.evaluations;
        if (fp < res.f - 1e-15) {
          res.x = probe;
          res.f = fp;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return res;
}

}  // namespace qcorr
