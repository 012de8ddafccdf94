// Copyright 2026 The sparselab Authors.
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

#include "sparselab/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sparselab/error.hpp"

namespace sparselab {

Dictionary::Dictionary(Mat data) : data_(std::move(data)) { validate(); }

Dictionary::Dictionary(Mat data, std::vector<int> labels) : data_(std::move(data)), labels_(std::move(labels)) {
  validate();
}

Dictionary Dictionary::normalized(const Mat& raw) { return Dictionary(normalize_columns(raw)); }

Dictionary Dictionary::normalized(const Mat& raw, std::vector<int> labels) {
  return Dictionary(normalize_columns(raw), std::move(labels));
}

void Dictionary::validate() {
  if (data_.rows() < 1 || data_.cols() < 1) throw Error(ErrorCode::DimensionMismatch, "empty dictionary");
  require_finite(data_, "dictionary");
  for (Eigen::Index j = 0; j < data_.cols(); ++j) {
    const double norm = data_.col(j).norm();
    if (std::abs(norm - 1.0) > kUnitTolerance) {
      throw Error(ErrorCode::NotNormalized,
                  "column " + std::to_string(j) + " has norm " + std::to_string(norm));
    }
  }
  if (labels_.empty()) {
    num_classes_ = 0;
    return;
  }
  if (static_cast<Eigen::Index>(labels_.size()) != data_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "label count does not match column count");
  }
  const int lo = *std::min_element(labels_.begin(), labels_.end());
  if (lo < 1) throw Error(ErrorCode::InvalidArgument, "class labels are 1-based");
  num_classes_ = *std::max_element(labels_.begin(), labels_.end());
  std::vector<bool> seen(static_cast<std::size_t>(num_classes_) + 1, false);
  for (int l : labels_) seen[static_cast<std::size_t>(l)] = true;
  for (int l = 1; l <= num_classes_; ++l) {
    if (!seen[static_cast<std::size_t>(l)]) {
      throw Error(ErrorCode::InvalidArgument, "class " + std::to_string(l) + " has no columns");
    }
  }
}

std::vector<Eigen::Index> Dictionary::class_columns(int l) const {
  std::vector<Eigen::Index> cols;
  for (std::size_t j = 0; j < labels_.size(); ++j) {
    if (labels_[j] == l) cols.push_back(static_cast<Eigen::Index>(j));
  }
  return cols;
}

Dictionary Dictionary::with_column_negated(Eigen::Index j) const {
  Dictionary copy = *this;
  copy.data_.col(j) *= -1.0;
  return copy;
}

}  // namespace sparselab
