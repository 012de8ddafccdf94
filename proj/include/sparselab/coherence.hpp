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

#ifndef SPARSELAB_COHERENCE_HPP
#define SPARSELAB_COHERENCE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "sparselab/dictionary.hpp"

namespace sparselab {

/// max_{i≠j} |⟨x_i, x_j⟩| over unit columns. Inner products near the
/// maximum are re-accumulated in extended precision so values just below 1
/// stay distinguishable from 1. Throws TooFewColumns when N < 2.
double mutual_coherence(const Dictionary& d);
double mutual_coherence(const Mat& unit_columns);

/// Lower bound √((N−m)/(m(N−1))) on the coherence of any m×N unit-column
/// matrix. Throws NotUnderdetermined when N <= m.
double welch_bound(Eigen::Index m, Eigen::Index n);

/// ℓ1/ℓ0-equivalence bounds implied by the coherence of a dictionary.
struct RecoveryCertificate {
  double mu = 0.0;
  /// Only defined for underdetermined dictionaries (N > m).
  std::optional<double> welch_bound;
  /// ½(1 + 1/μ); +∞ when μ = 0.
  double k_max_noiseless = 0.0;
  /// ¼(1 + 1/μ); +∞ when μ = 0.
  double k_max_noisy = 0.0;

  /// Sparsity k certified in the exact case: k < k_max_noiseless (strict).
  bool verdict_noiseless(double k) const { return k < k_max_noiseless; }
  /// Sparsity k certified in the noisy case: k <= k_max_noisy.
  bool verdict_noisy(double k) const { return k <= k_max_noisy; }
  /// μ − Welch bound, when the bound applies.
  std::optional<double> slack() const;
};

RecoveryCertificate certificate(const Dictionary& d);

/// Bounds from μ alone (μ = 0 gives infinite caps).
RecoveryCertificate certificate_from_mu(double mu);

/// Noisy-case stability quantities for coherence μ and sparsity k.
struct StabilityConstants {
  double mu = 0.0;
  std::size_t k = 0;
  double beta = 0.0;
  /// √(1−β)/(1−2β), defined when β < ½.
  std::optional<double> gamma;
  /// γ√k, defined with gamma.
  std::optional<double> C;

  bool stability_defined() const { return gamma.has_value(); }
  /// True when μ(4k−1) < 1.
  bool error_bound_defined() const;
  /// (ε+ζ)² / (1 − μ(4k−1)), the squared-error bound; empty when undefined.
  std::optional<double> error_bound(double epsilon, double zeta) const;
};

StabilityConstants stability_constants(double mu, std::size_t k);

struct AugmentedCoherence {
  double mu_aug = 0.0;
  bool increased = false;
};

/// μ([y, X]) for a unit-norm test sample y, and whether it exceeds μ(X)
/// by more than 1e-12. Throws NotNormalized / DimensionMismatch.
AugmentedCoherence coherence_with_test(const Dictionary& d, const Vec& y);

struct SpanViolation {
  std::vector<Eigen::Index> support;
  Eigen::Index spanned_column = 0;
};

/// Largest number of subsets spark_violation_scan will enumerate.
inline constexpr double kMaxEnumeration = 1e6;

/// C(n, k) as a double (exact for the sizes used here).
double binomial(std::size_t n, std::size_t k);

/// Enumerates k-subsets of columns; for every linearly independent subset,
/// reports each other column whose least-squares residual onto the subset is
/// at most 1e-8·‖column‖. A nonempty result means k fails the noiseless
/// coherence bound. `max_reports` = 0 means unlimited.
/// Throws CombinatorialBlowup when C(N, k) > 1e6.
std::vector<SpanViolation> spark_violation_scan(const Dictionary& d, std::size_t k,
                                                std::size_t max_reports = 0);

/// A class with more training samples than the dimension of its subspace
/// admits test samples the noiseless coherence bound cannot certify.
/// The dimension estimate itself comes from outside this library.
inline bool class_surplus(std::size_t class_dimension, std::size_t class_size) {
  return class_size > class_dimension;
}

}  // namespace sparselab

#endif  // SPARSELAB_COHERENCE_HPP
