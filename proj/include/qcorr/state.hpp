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
#include <utility>
#include <vector>

#include "qcorr/core.hpp"
#include "qcorr/layout.hpp"

namespace qcorr {

class DensityOperator;

/// Normalized state vector with a subsystem layout.
class PureState {
 public:
  PureState(Vector amplitudes, SubsystemLayout layout)
      : amplitudes_(std::move(amplitudes)), layout_(std::move(layout)) {
    if (amplitudes_.size() != layout_.ambient_dim())
      throw input_error("dims: amplitude vector does not match layout dimension");
    if (std::abs(amplitudes_.norm() - 1.0) > tol::pure_norm)
      throw input_error("norm: state vector is not normalized");
  }

  const Vector& amplitudes() const { return amplitudes_; }
  const SubsystemLayout& layout() const { return layout_; }
  int dim() const { return static_cast<int>(amplitudes_.size()); }

  DensityOperator to_density() const;

 private:
  Vector amplitudes_;
  SubsystemLayout layout_;
};

/// Hermitian, positive-semidefinite, unit-trace matrix with a subsystem
/// layout. Ingestion symmetrizes (M + M^+)/2 and rejects inputs whose
/// anti-Hermitian part exceeds the hermiticity tolerance.
class DensityOperator {
 public:
  /// Full validation: hermiticity, trace, and positive semidefiniteness.
  DensityOperator(Matrix m, SubsystemLayout layout)
      : DensityOperator(std::move(m), std::move(layout), true) {}

  /// Skips the eigenvalue check. For internal construction of matrices that
  /// are positive by construction (partial traces, convex mixtures, ...).
  static DensityOperator unchecked(Matrix m, SubsystemLayout layout) {
    return DensityOperator(std::move(m), std::move(layout), false);
  }

  const Matrix& matrix() const { return matrix_; }
  const SubsystemLayout& layout() const { return layout_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

 private:
  DensityOperator(Matrix m, SubsystemLayout layout, bool check_psd)
      : matrix_(std::move(m)), layout_(std::move(layout)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() != layout_.ambient_dim())
      throw input_error("dims: matrix does not match layout dimension");
    const Matrix anti = 0.5 * (matrix_ - matrix_.adjoint());
    if (anti.cwiseAbs().maxCoeff() > tol::hermiticity)
      throw input_error("hermiticity: matrix is not Hermitian within tolerance");
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint());
    if (std::abs(matrix_.trace().real() - 1.0) > tol::trace_one ||
        std::abs(matrix_.trace().imag()) > tol::trace_one)
      throw input_error("trace: matrix trace is not 1 within tolerance");
    if (check_psd) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < tol::eig_floor)
        throw input_error("psd: matrix has a negative eigenvalue beyond tolerance");
    }
  }

  Matrix matrix_;
  SubsystemLayout layout_;
};

inline DensityOperator PureState::to_density() const {
  return DensityOperator::unchecked(amplitudes_ * amplitudes_.adjoint(), layout_);
}

/// Eigensystem of a density operator: eigenvalues descending, clipped to
/// [0, 1] and renormalized; eigenvector phases fixed so the first component
/// of significant modulus is real positive.
struct SpectralDecomposition {
  RealVector eigenvalues;  // descending, sum 1
  Matrix eigenvectors;     // columns match eigenvalues
};

inline SpectralDecomposition spectral_decompose(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  if (es.info() != Eigen::Success)
    throw numeric_error("eigensolver failed to converge");
  RealVector vals = es.eigenvalues();
  Matrix vecs = es.eigenvectors();
  const Matrix recon = vecs * vals.asDiagonal() * vecs.adjoint();
  if ((recon - rho.matrix()).cwiseAbs().maxCoeff() > tol::reconstruction)
    throw numeric_error("spectral decomposition does not reconstruct its input");
  if (vals.minCoeff() < tol::eig_floor)
    throw input_error("psd: matrix has a negative eigenvalue beyond tolerance");

  const int n = static_cast<int>(vals.size());
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int i = 0; i < n; ++i) {  // descending order
    out.eigenvalues[i] = vals[n - 1 - i];
    out.eigenvectors.col(i) = vecs.col(n - 1 - i);
  }
  for (int i = 0; i < n; ++i) {
    double v = out.eigenvalues[i];
    out.eigenvalues[i] = std::min(1.0, std::max(0.0, v));
    // Phase convention: first component above threshold made real positive.
    for (int k = 0; k < n; ++k) {
      Complex c = out.eigenvectors(k, i);
      if (std::abs(c) > 1e-8) {
        out.eigenvectors.col(i) *= std::conj(c) / std::abs(c);
        break;
      }
    }
  }
  out.eigenvalues /= out.eigenvalues.sum();
  return out;
}

inline int rank_of(const SpectralDecomposition& sd) {
  int r = 0;
  for (int i = 0; i < sd.eigenvalues.size(); ++i)
    if (sd.eigenvalues[i] > tol::rank_cut) ++r;
  return std::max(r, 1);
}

// ---------------------------------------------------------------------------
// Tensor algebra on labelled subsystems.

inline DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator::unchecked(kron(a.matrix(), b.matrix()),
                                    a.layout().concatenated(b.layout()));
}

inline PureState tensor_product(const PureState& a, const PureState& b) {
  return PureState(kron(a.amplitudes(), b.amplitudes()),
                   a.layout().concatenated(b.layout()));
}

inline DensityOperator partial_trace(const DensityOperator& rho,
                                     const std::vector<std::string>& keep) {
  const auto& layout = rho.layout();
  auto keep_mask = label_mask(layout, keep);
  std::vector<bool> trace_mask(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) trace_mask[i] = !keep_mask[i];

  auto kept = selected_offsets(layout, keep_mask);
  auto traced = selected_offsets(layout, trace_mask);
  const auto nk = kept.size();

  Matrix out = Matrix::Zero(nk, nk);
  const Matrix& m = rho.matrix();
  for (std::size_t i = 0; i < nk; ++i)
    for (std::size_t j = 0; j < nk; ++j) {
      Complex acc = 0;
      for (int t : traced) acc += m(kept[i] + t, kept[j] + t);
      out(i, j) = acc;
    }
  return DensityOperator::unchecked(std::move(out), layout.sublayout(keep));
}

inline DensityOperator partial_trace(const PureState& psi,
                                     const std::vector<std::string>& keep) {
  const auto& layout = psi.layout();
  auto keep_mask = label_mask(layout, keep);
  std::vector<bool> trace_mask(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) trace_mask[i] = !keep_mask[i];

  auto kept = selected_offsets(layout, keep_mask);
  auto traced = selected_offsets(layout, trace_mask);
  const auto nk = kept.size();

  // rho[i,j] = sum_t psi[i+t] conj(psi[j+t]) without forming |psi><psi|.
  Matrix out = Matrix::Zero(nk, nk);
  const Vector& v = psi.amplitudes();
  for (int t : traced)
    for (std::size_t i = 0; i < nk; ++i) {
      const Complex vi = v[kept[i] + t];
      if (vi == Complex(0, 0)) continue;
      for (std::size_t j = 0; j < nk; ++j)
        out(i, j) += vi * std::conj(v[kept[j] + t]);
    }
  return DensityOperator::unchecked(std::move(out), layout.sublayout(keep));
}

/// Basis permutation that reorders subsystems into `new_order` (a
/// permutation of the layout's labels). Entry p[i] is the source index of
/// destination index i.
inline std::vector<int> subsystem_permutation(const SubsystemLayout& layout,
                                              const std::vector<std::string>& new_order) {
  if (new_order.size() != layout.size())
    throw input_error("labels: permutation must list every subsystem exactly once");
  std::vector<std::size_t> src_pos;
  for (const auto& l : new_order) src_pos.push_back(layout.index_of(l));
  std::set<std::size_t> uniq(src_pos.begin(), src_pos.end());
  if (uniq.size() != src_pos.size())
    throw input_error("labels: permutation must list every subsystem exactly once");

  auto src_strides = layout.strides();
  std::vector<int> new_dims;
  for (auto p : src_pos) new_dims.push_back(layout.dims()[p]);

  const int D = layout.ambient_dim();
  std::vector<int> perm(D);
  for (int idx = 0; idx < D; ++idx) {
    int rem = idx, src = 0;
    for (std::size_t k = new_dims.size(); k-- > 0;) {
      src += (rem % new_dims[k]) * src_strides[src_pos[k]];
      rem /= new_dims[k];
    }
    perm[idx] = src;
  }
  return perm;
}

inline PureState permute_subsystems(const PureState& psi,
                                    const std::vector<std::string>& new_order) {
  auto perm = subsystem_permutation(psi.layout(), new_order);
  Vector out(psi.dim());
  for (int i = 0; i < psi.dim(); ++i) out[i] = psi.amplitudes()[perm[i]];
  std::vector<int> d;
  for (const auto& l : new_order) d.push_back(psi.layout().dim_of(l));
  return PureState(std::move(out), SubsystemLayout(d, new_order));
}

inline DensityOperator permute_subsystems(const DensityOperator& rho,
                                          const std::vector<std::string>& new_order) {
  auto perm = subsystem_permutation(rho.layout(), new_order);
  const int D = rho.dim();
  Matrix out(D, D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) out(i, j) = rho.matrix()(perm[i], perm[j]);
  std::vector<int> d;
  for (const auto& l : new_order) d.push_back(rho.layout().dim_of(l));
  return DensityOperator::unchecked(std::move(out), SubsystemLayout(d, new_order));
}

/// Operator acting on one labelled subsystem, embedded into the full space.
inline Matrix embed_operator(const Matrix& op, const SubsystemLayout& layout,
                             const std::string& label) {
  const std::size_t pos = layout.index_of(label);
  if (op.rows() != layout.dims()[pos] || op.cols() != layout.dims()[pos])
    throw input_error("dims: operator does not match subsystem dimension");
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t k = 0; k < layout.size(); ++k) {
    if (k == pos)
      out = kron(out, op);
    else
      out = kron(out, Matrix::Identity(layout.dims()[k], layout.dims()[k]));
  }
  return out;
}

/// Partial inner product <w|_s rho |w>_s: contracts one subsystem with a
/// (possibly subnormalized) vector, yielding an unnormalized operator on the
/// remaining subsystems. The trace of the result is the outcome probability
/// of the rank-1 measurement element |w><w|.
inline Matrix contract_subsystem(const Matrix& m, const SubsystemLayout& layout,
                                 const std::string& label, const Vector& w) {
  const std::size_t pos = layout.index_of(label);
  const int d = layout.dims()[pos];
  if (w.size() != d) throw input_error("dims: vector does not match subsystem dimension");
  std::vector<bool> rest_mask(layout.size(), true);
  rest_mask[pos] = false;
  auto rest = selected_offsets(layout, rest_mask);
  const int stride = layout.strides()[pos];
  const auto nr = rest.size();

  Matrix out = Matrix::Zero(nr, nr);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nr; ++j) {
      Complex acc = 0;
      for (int b = 0; b < d; ++b) {
        const Complex wb = std::conj(w[b]);
        if (wb == Complex(0, 0)) continue;
        for (int bp = 0; bp < d; ++bp)
          acc += wb * m(rest[i] + b * stride, rest[j] + bp * stride) * w[bp];
      }
      out(i, j) = acc;
    }
  return out;
}

/// <w|_s |psi>: contraction of a pure state with a vector on one subsystem.
inline Vector contract_subsystem(const Vector& psi, const SubsystemLayout& layout,
                                 const std::string& label, const Vector& w) {
  const std::size_t pos = layout.index_of(label);
  const int d = layout.dims()[pos];
  if (w.size() != d) throw input_error("dims: vector does not match subsystem dimension");
  std::vector<bool> rest_mask(layout.size(), true);
  rest_mask[pos] = false;
  auto rest = selected_offsets(layout, rest_mask);
  const int stride = layout.strides()[pos];

  Vector out = Vector::Zero(rest.size());
  for (std::size_t i = 0; i < rest.size(); ++i) {
    Complex acc = 0;
    for (int b = 0; b < d; ++b) acc += std::conj(w[b]) * psi[rest[i] + b * stride];
    out[i] = acc;
  }
  return out;
}

/// Minimal purification: ancilla dimension equals the rank of rho.
/// The ancilla label avoids collision by priming "R" as needed.
inline PureState purify(const DensityOperator& rho) {
  auto sd = spectral_decompose(rho);
  const int r = rank_of(sd);
  std::string anc = "R";
  while (rho.layout().has_label(anc)) anc += "'";
  SubsystemLayout full = rho.layout().concatenated(SubsystemLayout({r}, {anc}));

  Vector psi = Vector::Zero(rho.dim() * r);
  for (int i = 0; i < r; ++i) {
    const double s = std::sqrt(std::max(0.0, sd.eigenvalues[i]));
    for (int k = 0; k < rho.dim(); ++k) psi[k * r + i] = s * sd.eigenvectors(k, i);
  }
  psi /= psi.norm();
  return PureState(std::move(psi), std::move(full));
}

}  // namespace qcorr
