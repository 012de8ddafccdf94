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

#ifndef SPARSELAB_NUMERICS_HPP
#define SPARSELAB_NUMERICS_HPP

#include <Eigen/Dense>

namespace sparselab {

// Dense column-major storage. Dimensions are validated by the operations
// that consume them rather than by a wrapper type.
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Column norms at or below this are treated as a degenerate sample.
inline constexpr double kZeroColumnNorm = 1e-12;

/// Pivots with |R_kk| <= kRankTolerance * |R_11| are dropped by least_squares.
inline constexpr double kRankTolerance = 1e-10;

bool all_finite(const Mat& m);

/// Throws NonFinite if any entry is NaN or infinite.
void require_finite(const Mat& m, const char* what);

/// Scales every column to unit Euclidean norm. Throws ZeroColumn.
Mat normalize_columns(const Mat& m);

/// MᵀM.
Mat gram(const Mat& m);

/// argmin ‖Mβ − y‖₂ by Householder QR with column pivoting. Columns whose
/// pivot falls under the rank tolerance get a zero coefficient.
Vec least_squares(const Mat& m, const Vec& y);

/// Entrywise sign(v)·max(|v| − λ, 0).
Vec soft_threshold(const Vec& v, double lambda);
double soft_threshold(double v, double lambda);

/// Numerical rank of M under the same pivot rule as least_squares.
Eigen::Index numerical_rank(const Mat& m);

/// Compensated (Neumaier) dot product, accumulated in long double.
long double dot_extended(const double* a, const double* b, Eigen::Index n);

}  // namespace sparselab

#endif  // SPARSELAB_NUMERICS_HPP
