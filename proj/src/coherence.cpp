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

#include "sparselab/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparselab/error.hpp"

namespace sparselab {
namespace {

// Double-precision Gram entries are within ~m·eps of the exact value, far
// below this margin, so every pair that could be the true maximum is
// re-evaluated in extended precision.
constexpr double kRefineMargin = 1e-10;

double extended_abs_dot(const Mat& x, Eigen::Index i, Eigen::Index j) {
  return static_cast<double>(std::fabs(dot_extended(x.col(i).data(), x.col(j).data(), x.rows())));
}

}  // namespace

double mutual_coherence(const Mat& x) {
  const Eigen::Index n = x.cols();
  if (n < 2) throw Error(ErrorCode::TooFewColumns, "mutual coherence needs at least two columns");
  const Mat g = x.transpose() * x;
  double coarse = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) coarse = std::max(coarse, std::abs(g(i, j)));
  }
  double mu = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (std::abs(g(i, j)) >= coarse - kRefineMargin) mu = std::max(mu, extended_abs_dot(x, i, j));
    }
  }
  return mu;
}

double mutual_coherence(const Dictionary& d) { return mutual_coherence(d.data()); }

double welch_bound(Eigen::Index m, Eigen::Index n) {
  if (m < 1 || n <= m) {
    throw Error(ErrorCode::NotUnderdetermined,
                "Welch bound needs N > m >= 1 (m=" + std::to_string(m) + ", N=" + std::to_string(n) + ")");
  }
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  return std::sqrt((nd - md) / (md * (nd - 1.0)));
}

std::optional<double> RecoveryCertificate::slack() const {
  if (!welch_bound) return std::nullopt;
  return mu - *welch_bound;
}

RecoveryCertificate certificate_from_mu(double mu) {
  RecoveryCertificate c;
  c.mu = mu;
  if (mu <= 0.0) {
    c.k_max_noiseless = std::numeric_limits<double>::infinity();
    c.k_max_noisy = std::numeric_limits<double>::infinity();
  } else {
    c.k_max_noiseless = 0.5 * (1.0 + 1.0 / mu);
    c.k_max_noisy = 0.25 * (1.0 + 1.0 / mu);
  }
  return c;
}

RecoveryCertificate certificate(const Dictionary& d) {
  RecoveryCertificate c = certificate_from_mu(mutual_coherence(d));
  if (d.cols() > d.rows()) c.welch_bound = welch_bound(d.rows(), d.cols());
  return c;
}

bool StabilityConstants::error_bound_defined() const {
  return mu * (4.0 * static_cast<double>(k) - 1.0) < 1.0;
}

std::optional<double> StabilityConstants::error_bound(double epsilon, double zeta) const {
  if (!error_bound_defined()) return std::nullopt;
  const double s = epsilon + zeta;
  return s * s / (1.0 - mu * (4.0 * static_cast<double>(k) - 1.0));
}

StabilityConstants stability_constants(double mu, std::size_t k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "stability constants need k >= 1");
  if (!(mu >= 0.0 && mu <= 1.0)) throw Error(ErrorCode::InvalidArgument, "mu must lie in [0, 1]");
  StabilityConstants s;
  s.mu = mu;
  s.k = k;
  s.beta = mu * static_cast<double>(k);
  if (s.beta < 0.5) {
    s.gamma = std::sqrt(1.0 - s.beta) / (1.0 - 2.0 * s.beta);
    s.C = *s.gamma * std::sqrt(static_cast<double>(k));
  }
  return s;
}

AugmentedCoherence coherence_with_test(const Dictionary& d, const Vec& y) {
  if (y.size() != d.rows()) throw Error(ErrorCode::DimensionMismatch, "test sample length differs from m");
  if (std::abs(y.norm() - 1.0) > 1e-10) throw Error(ErrorCode::NotNormalized, "test sample must have unit norm");
  const double mu = mutual_coherence(d);
  double mu_aug = mu;
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    const double v = static_cast<double>(std::fabs(dot_extended(y.data(), d.data().col(j).data(), y.size())));
    mu_aug = std::max(mu_aug, v);
  }
  return {mu_aug, mu_aug > mu + 1e-12};
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

std::vector<SpanViolation> spark_violation_scan(const Dictionary& d, std::size_t k, std::size_t max_reports) {
  const auto n = static_cast<std::size_t>(d.cols());
  if (k < 1 || k >= n) throw Error(ErrorCode::InvalidArgument, "scan needs 1 <= k < N");
  if (binomial(n, k) > kMaxEnumeration) {
    throw Error(ErrorCode::CombinatorialBlowup,
                "C(" + std::to_string(n) + "," + std::to_string(k) + ") exceeds the enumeration limit");
  }
  const Mat& x = d.data();
  const Eigen::Index m = x.rows();
  std::vector<SpanViolation> found;
  std::vector<Eigen::Index> subset(k);
  for (std::size_t i = 0; i < k; ++i) subset[i] = static_cast<Eigen::Index>(i);
  Mat block(m, static_cast<Eigen::Index>(k));
  while (true) {
    for (std::size_t i = 0; i < k; ++i) block.col(static_cast<Eigen::Index>(i)) = x.col(subset[i]);
    Eigen::ColPivHouseholderQR<Mat> qr(block);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() == static_cast<Eigen::Index>(k)) {
      const Mat q = qr.householderQ() * Mat::Identity(m, static_cast<Eigen::Index>(k));
      for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
        if (std::find(subset.begin(), subset.end(), j) != subset.end()) continue;
        const Vec r = x.col(j) - q * (q.transpose() * x.col(j));
        if (r.norm() <= 1e-8 * x.col(j).norm()) {
          found.push_back({subset, j});
          if (max_reports && found.size() >= max_reports) return found;
        }
      }
    }
    // Next k-subset in lexicographic order.
    std::size_t pos = k;
    while (pos > 0 && subset[pos - 1] == static_cast<Eigen::Index>(n - k + pos - 1)) --pos;
    if (pos == 0) break;
    ++subset[pos - 1];
    for (std::size_t i = pos; i < k; ++i) subset[i] = subset[i - 1] + 1;
  }
  return found;
}

}  // namespace sparselab
