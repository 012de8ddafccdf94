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

#ifndef SPARSELAB_CLASSIFY_HPP
#define SPARSELAB_CLASSIFY_HPP

#include <cstddef>
#include <vector>

#include "sparselab/dictionary.hpp"
#include "sparselab/solvers.hpp"

namespace sparselab {

/// Gaussian-kernel view of a labelled training set.
struct KernelModel {
  double sigma = 1.0;
  /// K_ij = exp(−‖x_i − x_j‖² / σ²).
  Mat gram;
  std::vector<int> labels;
  int num_classes = 0;

  Eigen::Index size() const { return gram.rows(); }
  /// Largest off-diagonal Gram entry.
  double mu_kernel() const;
  std::vector<Eigen::Index> class_columns(int l) const;
};

/// Gram from explicit pairwise distances.
KernelModel gaussian_gram(const Dictionary& d, double sigma);

/// Gram through ‖x_i − x_j‖² = 2 − 2⟨x_i, x_j⟩ (unit columns only).
KernelModel gaussian_gram_from_inner(const Dictionary& d, double sigma);

struct KernelBound {
  bool passes = false;
  double sigma_cap = 0.0;
};

/// 2/√(ln 3): below it μ_kernel < 1/3 is possible for unit-norm data.
double kernel_sigma_cap();

/// passes iff σ < kernel_sigma_cap().
KernelBound kernel_coherence_bound(double sigma);

/// Test sample in feature space, φ(y) = Φc.
struct KernelTestSample {
  CoefVector coefs;
  int label = 0;

  /// ⟨φ(y), φ(y)⟩ = cᵀKc.
  double self_inner(const KernelModel& k) const;
};

struct KcdConfig {
  double conv_tol = 1e-12;
  std::size_t max_sweeps = 100000;
  double support_threshold = kSupportThreshold;
};

struct KcdResult {
  CoefVector alpha;
  std::size_t sweeps = 0;
  bool converged = true;
};

/// Cyclic coordinate descent (ascending index) on
/// ½(cᵀKc − 2αᵀKc + αᵀKα) + λ‖α‖₁. Entries at or below the support
/// threshold are zeroed on exit. A run that hits max_sweeps returns the last
/// iterate with converged = false.
KcdResult kcd_lasso(const KernelModel& k, const KernelTestSample& t, double lambda, const KcdConfig& cfg = {});

struct ClassDecision {
  int label = 0;
  /// residuals[l − 1] is the class-l residual.
  std::vector<double> residuals;
  CoefVector coef;
  bool converged = true;
};

/// Lowest class index attaining the minimum residual.
int argmin_class(const std::vector<double>& residuals);

/// Class residuals ‖y − X δ_l(α)‖₂ for a given α and the smallest-residual label.
ClassDecision decide_from_coefficients(const Dictionary& d, const Vec& y, CoefVector alpha);

/// SRC: α* by basis pursuit, lasso or BPDN according to cfg.mode, then the
/// class with the smallest ‖y − X δ_l(α*)‖₂.
ClassDecision src_classify(const Dictionary& d, const Vec& y, const SolverConfig& cfg = {});

/// Kernel SRC with residuals √(cᵀKc − 2δ_l(α)ᵀKc + δ_l(α)ᵀKδ_l(α)).
ClassDecision ksrc_classify(const KernelModel& k, const KernelTestSample& t, double lambda,
                            const KcdConfig& cfg = {});

}  // namespace sparselab

#endif  // SPARSELAB_CLASSIFY_HPP
