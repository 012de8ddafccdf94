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

#ifndef SPARSELAB_DICTIONARY_HPP
#define SPARSELAB_DICTIONARY_HPP

#include <vector>

#include "sparselab/numerics.hpp"

namespace sparselab {

/// Unit-norm columns, optionally labelled with 1-based class indices.
///
/// A labelled dictionary with L classes has at least one column in every
/// class 1..L. Columns are checked to unit norm within kUnitTolerance at
/// construction; use Dictionary::normalized() to build one from raw data.
class Dictionary {
 public:
  static constexpr double kUnitTolerance = 1e-12;

  Dictionary() = default;

  /// Unlabelled dictionary. Throws NotNormalized / NonFinite.
  explicit Dictionary(Mat data);

  /// Labelled dictionary. Throws NotNormalized / DimensionMismatch /
  /// InvalidArgument (empty class or label < 1).
  Dictionary(Mat data, std::vector<int> labels);

  /// Normalises columns first (ZeroColumn on degenerate input).
  static Dictionary normalized(const Mat& raw);
  static Dictionary normalized(const Mat& raw, std::vector<int> labels);

  const Mat& data() const { return data_; }
  Eigen::Index rows() const { return data_.rows(); }
  Eigen::Index cols() const { return data_.cols(); }
  auto column(Eigen::Index j) const { return data_.col(j); }

  bool labeled() const { return !labels_.empty(); }
  const std::vector<int>& labels() const { return labels_; }
  int label(Eigen::Index j) const { return labels_.at(static_cast<std::size_t>(j)); }
  int num_classes() const { return num_classes_; }

  /// Column indices carrying class `l`, ascending.
  std::vector<Eigen::Index> class_columns(int l) const;

  /// Copy with column `j` negated (labels kept).
  Dictionary with_column_negated(Eigen::Index j) const;

 private:
  void validate();

  Mat data_;
  std::vector<int> labels_;
  int num_classes_ = 0;
};

}  // namespace sparselab

#endif  // SPARSELAB_DICTIONARY_HPP
