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

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "qcorr/core.hpp"

namespace qcorr {

/// Ordered list of local dimensions with unique subsystem labels.
/// Basis indices are row-major: the first subsystem is most significant.
class SubsystemLayout {
 public:
  SubsystemLayout(std::vector<int> dims, std::vector<std::string> labels)
      : dims_(std::move(dims)), labels_(std::move(labels)) {
    if (dims_.empty()) throw input_error("dims: layout needs at least one subsystem");
    for (int d : dims_)
      if (d < 1) throw input_error("dims: local dimensions must be positive");
    if (labels_.size() != dims_.size())
      throw input_error("labels: one label per subsystem required");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size())
      throw input_error("labels: subsystem labels must be unique");
  }

  /// Labels default to "A", "B", "C", ...
  explicit SubsystemLayout(std::vector<int> dims)
      : SubsystemLayout(dims, default_labels(dims.size())) {}

  static std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
      if (i < 26)
        out.push_back(std::string(1, static_cast<char>('A' + i)));
      else
        out.push_back("S" + std::to_string(i));
    }
    return out;
  }

  const std::vector<int>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return dims_.size(); }

  int ambient_dim() const {
    return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<int>());
  }

  int dim_of(const std::string& label) const { return dims_[index_of(label)]; }

  std::size_t index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
      throw input_error("labels: unknown subsystem label '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
  }

  bool has_label(const std::string& label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
  }

  /// Sub-layout of the given labels, kept in this layout's order.
  SubsystemLayout sublayout(const std::vector<std::string>& keep) const {
    std::vector<int> d;
    std::vector<std::string> l;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (std::find(keep.begin(), keep.end(), labels_[i]) != keep.end()) {
        d.push_back(dims_[i]);
        l.push_back(labels_[i]);
      }
    }
    for (const auto& k : keep) index_of(k);  // reject unknown labels
    return SubsystemLayout(std::move(d), std::move(l));
  }

  SubsystemLayout concatenated(const SubsystemLayout& other) const {
    std::vector<int> d = dims_;
    d.insert(d.end(), other.dims_.begin(), other.dims_.end());
    std::vector<std::string> l = labels_;
    l.insert(l.end(), other.labels_.begin(), other.labels_.end());
    return SubsystemLayout(std::move(d), std::move(l));
  }

  /// Row-major strides; stride of the last subsystem is 1.
  std::vector<int> strides() const {
    std::vector<int> s(dims_.size());
    int acc = 1;
    for (std::size_t i = dims_.size(); i-- > 0;) {
      s[i] = acc;
      acc *= dims_[i];
    }
    return s;
  }

  bool operator==(const SubsystemLayout& other) const {
    return dims_ == other.dims_ && labels_ == other.labels_;
  }

 private:
  std::vector<int> dims_;
  std::vector<std::string> labels_;
};

/// All base offsets generated by the subsystems selected in `mask`,
/// enumerated in row-major order of the selected subsystems.
inline std::vector<int> selected_offsets(const SubsystemLayout& layout,
                                         const std::vector<bool>& mask) {
  const auto& dims = layout.dims();
  auto strides = layout.strides();
  std::vector<int> offsets{0};
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (!mask[k]) continue;
    std::vector<int> next;
    next.reserve(offsets.size() * dims[k]);
    for (int base : offsets)
      for (int i = 0; i < dims[k]; ++i) next.push_back(base + i * strides[k]);
    offsets.swap(next);
  }
  return offsets;
}

inline std::vector<bool> label_mask(const SubsystemLayout& layout,
                                    const std::vector<std::string>& labels) {
  std::vector<bool> mask(layout.size(), false);
  for (const auto& l : labels) mask[layout.index_of(l)] = true;
  return mask;
}

}  // namespace qcorr
