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

#include "sparselab/numerics.hpp"

#include <cmath>
#include <string>

#include "sparselab/error.hpp"

namespace sparselab {

bool all_finite(const Mat& m) { return m.allFinite(); }

void require_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorCode::NonFinite, std::string(what) + " has NaN/Inf entries");
}

Mat normalize_columns(const Mat& m) {
  if (m.rows() < 1 || m.cols() < 1) throw Error(ErrorCode::DimensionMismatch, "empty matrix");
  require_finite(m, "matrix");
  Mat out = m;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double norm = m.col(j).norm();
    if (!(norm > kZeroColumnNorm)) {
      throw Error(ErrorCode::ZeroColumn, "column " + std::to_string(j) + " has norm " + std::to_string(norm));
    }
    out.col(j) /= norm;
  }
  return out;
}

Mat gram(const Mat& m) {
  Mat g = m.transpose() * m;
  // Symmetrise so downstream code can rely on exact symmetry.
  return 0.5 * (g + g.transpose());
}

Vec least_squares(const Mat& m, const Vec& y) {
  if (m.rows() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix has " + std::to_string(m.rows()) + " rows, rhs has " + std::to_string(y.size()));
  }
  Eigen::ColPivHouseholderQR<Mat> qr(m);
  qr.setThreshold(kRankTolerance);
  // Eigen's solve() truncates by its own epsilon rule; apply ours instead.
  const Eigen::Index rank = qr.rank();
  Vec beta = Vec::Zero(m.cols());
  if (rank == 0) return beta;
  Vec c = y;
  c.applyOnTheLeft(qr.householderQ().setLength(rank).adjoint());
  const Vec head = qr.matrixQR()
                       .topLeftCorner(rank, rank)
                       .triangularView<Eigen::Upper>()
                       .solve(c.head(rank));
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index i = 0; i < rank; ++i) beta[perm[i]] = head[i];
  return beta;
}

double soft_threshold(double v, double lambda) {
  if (v > lambda) return v - lambda;
  if (v < -lambda) return v + lambda;
  return 0.0;
}

Vec soft_threshold(const Vec& v, double lambda) {
  if (lambda < 0) throw Error(ErrorCode::InvalidArgument, "soft_threshold requires lambda >= 0");
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = soft_threshold(v[i], lambda);
  return out;
}

Eigen::Index numerical_rank(const Mat& m) {
  Eigen::ColPivHouseholderQR<Mat> qr(m);
  qr.setThreshold(kRankTolerance);
  return qr.rank();
}

long double dot_extended(const double* a, const double* b, Eigen::Index n) {
  long double sum = 0.0L;
  long double comp = 0.0L;
  for (Eigen::Index i = 0; i < n; ++i) {
    const long double term = static_cast<long double>(a[i]) * static_cast<long double>(b[i]);
    const long double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace sparselab
