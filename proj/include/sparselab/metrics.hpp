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

#ifndef SPARSELAB_METRICS_HPP
#define SPARSELAB_METRICS_HPP

#include <cstddef>
#include <vector>

#include "sparselab/classify.hpp"
#include "sparselab/solvers.hpp"

namespace sparselab {

struct RecoveryErrors {
  double err_l2 = 0.0;
  double err_supp = 0.0;
  double err_supp_l2 = 0.0;
  double err_supp_l1 = 0.0;
  double mu = 0.0;
  /// Some ratio had a zero denominator and was reported as 0.
  bool degenerate = false;
};

/// Relative ℓ2 error against α0 and the off-support share of α1 (count,
/// ℓ2 mass, ℓ1 mass). `on_support[j]` marks the ground-truth class columns.
/// Throws ZeroGroundTruth when ‖α0‖₂ = 0, DimensionMismatch on sizes.
RecoveryErrors recovery_errors(const CoefVector& alpha1, const CoefVector& alpha0,
                               const std::vector<bool>& on_support, double mu, double tau = kSupportThreshold);

struct ResidualSummary {
  double err_truth = 0.0;
  double min_other = 0.0;
};

/// Means over trials of the truth-class residual and the smallest other one.
ResidualSummary class_residual_summary(const std::vector<ClassDecision>& decisions, int truth_class);

/// One kernel-SRC trial at a fixed σ: a training set, its test samples and
/// their decisions.
struct KernelTrialOutcome {
  double mu_kernel = 0.0;
  std::vector<int> truth;
  std::vector<ClassDecision> decisions;
  double corr_gt = 0.0;
  double corr_other = 0.0;
  std::size_t not_converged = 0;
};

struct SweepPoint {
  double sigma_or_stage = 0.0;
  double sparsity = 0.0;
  double accuracy = 0.0;
  double supp_l2 = 0.0;
  double supp_l1 = 0.0;
  double corr_gt = 0.0;
  double corr_other = 0.0;
};

/// Sparsity: mean over trials of the median ‖α‖₀(τ)/N_tr. Accuracy and
/// supp(ℓp) = ‖δ_GT(α)‖_p/‖α‖_p: mean over trials of the per-trial mean.
/// `labels` are the training-column classes (N_tr = labels.size()).
SweepPoint kernel_sweep_point(double sigma, const std::vector<KernelTrialOutcome>& trials,
                              const std::vector<int>& labels, double tau = kSupportThreshold);

struct Correlations {
  double corr_gt = 0.0;
  double corr_other = 0.0;
};

/// Kernel products ⟨φ(y), φ(x_j)⟩ = (Kc)_j. corr_gt: median over every
/// (test, same-class column) pair. corr_other: median, over every
/// (test, other class) pair, of the median over that class's columns.
Correlations correlation_diagnostics(const KernelModel& k, const std::vector<KernelTestSample>& tests);

struct ContributionProfile {
  /// Mean |α| per column, normalised to sum 1.
  Vec profile;
  /// profile summed per class; class_sums[l − 1] is class l.
  std::vector<double> class_sums;
};

/// `batch[t]` holds the coefficient vectors of one trial's test samples of
/// the target class. Averages |α| within each trial, then over trials.
ContributionProfile class_contribution_profile(const std::vector<std::vector<CoefVector>>& batch,
                                               const std::vector<int>& labels);

struct SigmaSearchResult {
  double sigma = 0.0;
  std::size_t index = 0;
  /// No grid point qualified; the smallest one is returned.
  bool no_qualifying_sigma = false;
};

/// k_sup = ½(1 + 1/μ).
double sparsity_cap(double mu);

/// Largest grid σ at which ‖α‖₀(τ) < k_sup(σ) holds in at least
/// `confidence` of all (trial, test) pairs. per_sigma[s] are the trials run
/// at grid[s]. Throws InvalidArgument unless the grid is ascending and
/// below the kernel coherence cap.
SigmaSearchResult sigma_mc_search(const std::vector<double>& grid,
                                  const std::vector<std::vector<KernelTrialOutcome>>& per_sigma,
                                  double confidence = 0.95, double tau = kSupportThreshold);

/// Largest grid σ whose accuracy is within `tol` of the best on the grid.
SigmaSearchResult sigma_acc_search(const std::vector<double>& grid, const std::vector<double>& accuracy,
                                   double tol = 0.005);

/// Geometric grid start·factor^i, i < count.
std::vector<double> geometric_grid(double start, double factor, std::size_t count);

/// Median of a copy (mean of the middle pair for even sizes). Empty → 0.
double median(std::vector<double> v);

}  // namespace sparselab

#endif  // SPARSELAB_METRICS_HPP
