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

#include <optional>
#include <utility>
#include <vector>

#include "qcorr/core.hpp"
#include "qcorr/state.hpp"
#include "qcorr/tsallis.hpp"

namespace qcorr {

/// Weighted list of states {p_i, rho_i} on a common layout. When a parent is
/// declared, the convex mixture must reconstruct it.
class Ensemble {
 public:
  Ensemble(std::vector<double> weights, std::vector<DensityOperator> members,
           std::optional<DensityOperator> parent = std::nullopt)
      : weights_(std::move(weights)), members_(std::move(members)),
        parent_(std::move(parent)) {
    if (weights_.size() != members_.size() || members_.empty())
      throw input_error("ensemble: need one weight per member");
    double sum = 0.0;
    for (double w : weights_) {
      if (w < 0.0) throw input_error("ensemble: weights must be nonnegative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > tol::trace_one)
      throw input_error("ensemble: weights must sum to 1");
    for (const auto& m : members_)
      if (!(m.layout() == members_.front().layout()))
        throw input_error("ensemble: members must share one layout");
    if (parent_) {
      if (!(parent_->layout() == members_.front().layout()))
        throw input_error("ensemble: parent layout does not match members");
      Matrix mix = Matrix::Zero(parent_->dim(), parent_->dim());
      for (std::size_t i = 0; i < members_.size(); ++i)
        mix += weights_[i] * members_[i].matrix();
      if ((mix - parent_->matrix()).cwiseAbs().maxCoeff() > tol::ensemble_parent)
        throw input_error("ensemble: members do not reconstruct the declared parent");
    }
  }

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<DensityOperator>& members() const { return members_; }
  const std::optional<DensityOperator>& parent() const { return parent_; }
  std::size_t size() const { return members_.size(); }

 private:
  std::vector<double> weights_;
  std::vector<DensityOperator> members_;
  std::optional<DensityOperator> parent_;
};

/// chi_q of an ensemble with declared parent:
/// S_q(parent) - sum_i p_i^q S_q(rho_i). Nonnegative for q >= 1.
inline double tsallis_q_difference(const Ensemble& ens, const EntropyParameter& qp) {
  if (!ens.parent())
    throw input_error("ensemble: Tsallis-q difference needs a declared parent");
  double sub = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const double p = ens.weights()[i];
    if (p < tol::zero_weight) continue;
    sub += q_weight(p, qp) * tsallis_entropy(ens.members()[i], qp);
  }
  return tsallis_entropy(*ens.parent(), qp) - sub;
}

/// Rank-1 measurement {|v_x><v_x|}: possibly subnormalized vectors on one
/// subsystem completing to the identity. Equivalently the rows of an m x d
/// matrix K with K^+ K = I.
class Rank1Measurement {
 public:
  explicit Rank1Measurement(std::vector<Vector> vectors) : vectors_(std::move(vectors)) {
    if (vectors_.empty()) throw input_error("measurement: needs at least one outcome");
    const auto d = vectors_.front().size();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& v : vectors_) {
      if (v.size() != d) throw input_error("measurement: outcome vectors must share one dimension");
      sum += v * v.adjoint();
    }
    if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol::completeness)
      throw input_error("measurement: outcomes do not complete to the identity");
  }

  /// Rows of K become the outcome vectors (K^+ K = I required).
  static Rank1Measurement from_isometry(const Matrix& k) {
    std::vector<Vector> vs;
    vs.reserve(k.rows());
    for (Eigen::Index x = 0; x < k.rows(); ++x) vs.push_back(k.row(x).adjoint());
    return Rank1Measurement(std::move(vs));
  }

  /// Orthonormal basis measurement from the columns of a unitary.
  static Rank1Measurement from_basis(const Matrix& u) {
    std::vector<Vector> vs;
    vs.reserve(u.cols());
    for (Eigen::Index x = 0; x < u.cols(); ++x) vs.push_back(u.col(x));
    return Rank1Measurement(std::move(vs));
  }

  Matrix to_isometry() const {
    Matrix k(vectors_.size(), vectors_.front().size());
    for (std::size_t x = 0; x < vectors_.size(); ++x) k.row(x) = vectors_[x].adjoint();
    return k;
  }

  const std::vector<Vector>& vectors() const { return vectors_; }
  std::size_t outcomes() const { return vectors_.size(); }
  int dim() const { return static_cast<int>(vectors_.front().size()); }

 private:
  std::vector<Vector> vectors_;
};

/// Ensemble of the complementary reduction induced by measuring `on`.
/// Outcomes with probability below the zero-weight cutoff are dropped; the
/// parent is the reduction onto the unmeasured subsystems.
inline Ensemble induced_ensemble(const DensityOperator& rho, const Rank1Measurement& meas,
                                 const std::string& on) {
  const auto& layout = rho.layout();
  if (meas.dim() != layout.dim_of(on))
    throw input_error("measurement: outcome dimension does not match subsystem");
  std::vector<std::string> rest;
  for (const auto& l : layout.labels())
    if (l != on) rest.push_back(l);
  if (rest.empty()) throw input_error("labels: measurement must leave a remainder system");

  std::vector<double> ps;
  std::vector<DensityOperator> conds;
  auto rest_layout = layout.sublayout(rest);
  for (const auto& v : meas.vectors()) {
    Matrix c = contract_subsystem(rho.matrix(), layout, on, v);
    const double p = c.trace().real();
    if (p < tol::zero_weight) continue;
    ps.push_back(p);
    conds.push_back(DensityOperator::unchecked(c / p, rest_layout));
  }
  const double total = std::accumulate(ps.begin(), ps.end(), 0.0);
  for (auto& p : ps) p /= total;  // absorbs float noise; total is 1 within 1e-9
  return Ensemble(std::move(ps), std::move(conds), partial_trace(rho, rest));
}

}  // namespace qcorr
