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

#include "sparselab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparselab/error.hpp"

namespace sparselab {
namespace {

// a/b, or 0 with the flag raised when b = 0.
double ratio(double a, double b, bool& degenerate) {
  if (b == 0.0) {
    degenerate = true;
    return 0.0;
  }
  return a / b;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

RecoveryErrors recovery_errors(const CoefVector& alpha1, const CoefVector& alpha0,
                               const std::vector<bool>& on_support, double mu, double tau) {
  const Eigen::Index n = alpha0.size();
  if (alpha1.size() != n || static_cast<Eigen::Index>(on_support.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient vectors and mask differ in length");
  }
  const double a0 = alpha0.l2();
  if (a0 == 0.0) throw Error(ErrorCode::ZeroGroundTruth, "ground-truth coefficients are zero");

  RecoveryErrors e;
  e.mu = mu;
  e.err_l2 = (alpha1.entries - alpha0.entries).norm() / a0;

  // Off-support part counted at threshold τ, so err_supp = 0 forces the
  // mass ratios to 0 as well.
  double off_count = 0.0, off_l2 = 0.0, off_l1 = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double v = std::abs(alpha1[j]);
    if (on_support[static_cast<std::size_t>(j)] || v <= tau) continue;
    off_count += 1.0;
    off_l2 += v * v;
    off_l1 += v;
  }
  e.err_supp = ratio(off_count, static_cast<double>(alpha1.l0(tau)), e.degenerate);
  e.err_supp_l2 = ratio(std::sqrt(off_l2), alpha1.l2(), e.degenerate);
  e.err_supp_l1 = ratio(off_l1, alpha1.l1(), e.degenerate);
  return e;
}

ResidualSummary class_residual_summary(const std::vector<ClassDecision>& decisions, int truth_class) {
  if (decisions.empty()) throw Error(ErrorCode::InvalidArgument, "no decisions to summarise");
  ResidualSummary s;
  for (const auto& d : decisions) {
    if (truth_class < 1 || truth_class > static_cast<int>(d.residuals.size())) {
      throw Error(ErrorCode::InvalidArgument, "truth class out of range");
    }
    double other = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < d.residuals.size(); ++l) {
      if (static_cast<int>(l) + 1 != truth_class) other = std::min(other, d.residuals[l]);
    }
    s.err_truth += d.residuals[static_cast<std::size_t>(truth_class - 1)];
    s.min_other += std::isfinite(other) ? other : 0.0;
  }
  s.err_truth /= static_cast<double>(decisions.size());
  s.min_other /= static_cast<double>(decisions.size());
  return s;
}

SweepPoint kernel_sweep_point(double sigma, const std::vector<KernelTrialOutcome>& trials,
                              const std::vector<int>& labels, double tau) {
  if (trials.empty()) throw Error(ErrorCode::InvalidArgument, "sweep point needs at least one trial");
  const double n_train = static_cast<double>(labels.size());
  std::vector<double> sparsity, accuracy, supp_l2, supp_l1, corr_gt, corr_other;
  for (const auto& t : trials) {
    if (t.decisions.empty() || t.decisions.size() != t.truth.size()) {
      throw Error(ErrorCode::InvalidArgument, "trial without matching decisions and labels");
    }
    std::vector<double> sp, acc, s2, s1;
    for (std::size_t i = 0; i < t.decisions.size(); ++i) {
      const ClassDecision& d = t.decisions[i];
      const CoefVector& a = d.coef;
      if (static_cast<std::size_t>(a.size()) != labels.size()) {
        throw Error(ErrorCode::DimensionMismatch, "coefficients differ from label count");
      }
      sp.push_back(static_cast<double>(a.l0(tau)) / n_train);
      acc.push_back(d.label == t.truth[i] ? 1.0 : 0.0);
      double in2 = 0.0, in1 = 0.0;
      for (Eigen::Index j = 0; j < a.size(); ++j) {
        if (labels[static_cast<std::size_t>(j)] != t.truth[i]) continue;
        in2 += a[j] * a[j];
        in1 += std::abs(a[j]);
      }
      bool unused = false;
      s2.push_back(ratio(std::sqrt(in2), a.l2(), unused));
      s1.push_back(ratio(in1, a.l1(), unused));
    }
    sparsity.push_back(median(sp));
    accuracy.push_back(mean(acc));
    supp_l2.push_back(mean(s2));
    supp_l1.push_back(mean(s1));
    corr_gt.push_back(t.corr_gt);
    corr_other.push_back(t.corr_other);
  }
  return {sigma, mean(sparsity), mean(accuracy), mean(supp_l2), mean(supp_l1), mean(corr_gt), mean(corr_other)};
}

Correlations correlation_diagnostics(const KernelModel& k, const std::vector<KernelTestSample>& tests) {
  if (tests.empty()) throw Error(ErrorCode::InvalidArgument, "no test samples");
  std::vector<std::vector<Eigen::Index>> blocks;
  for (int l = 1; l <= k.num_classes; ++l) blocks.push_back(k.class_columns(l));
  std::vector<double> same, other;
  for (const auto& t : tests) {
    const Vec kc = k.gram * t.coefs.entries;
    for (int l = 1; l <= k.num_classes; ++l) {
      const auto& cols = blocks[static_cast<std::size_t>(l - 1)];
      if (l == t.label) {
        for (Eigen::Index j : cols) same.push_back(kc[j]);
      } else {
        std::vector<double> v;
        for (Eigen::Index j : cols) v.push_back(kc[j]);
        other.push_back(median(std::move(v)));
      }
    }
  }
  Correlations c;
  c.corr_gt = median(same);
  // A single class has no "other" block; fall back to the same-class value.
  c.corr_other = other.empty() ? c.corr_gt : median(other);
  return c;
}

ContributionProfile class_contribution_profile(const std::vector<std::vector<CoefVector>>& batch,
                                               const std::vector<int>& labels) {
  if (batch.empty()) throw Error(ErrorCode::InvalidArgument, "empty coefficient batch");
  const Eigen::Index n = static_cast<Eigen::Index>(labels.size());
  Vec total = Vec::Zero(n);
  for (const auto& trial : batch) {
    if (trial.empty()) throw Error(ErrorCode::InvalidArgument, "trial without test samples");
    Vec acc = Vec::Zero(n);
    for (const auto& a : trial) {
      if (a.size() != n) throw Error(ErrorCode::DimensionMismatch, "coefficients differ from label count");
      acc += a.entries.cwiseAbs();
    }
    total += acc / static_cast<double>(trial.size());
  }
  total /= static_cast<double>(batch.size());
  ContributionProfile p;
  const double s = total.sum();
  p.profile = s > 0.0 ? Vec(total / s) : total;
  const int classes = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
  p.class_sums.assign(static_cast<std::size_t>(std::max(classes, 0)), 0.0);
  for (Eigen::Index j = 0; j < n; ++j) p.class_sums[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)] - 1)] += p.profile[j];
  return p;
}

double sparsity_cap(double mu) {
  return mu <= 0.0 ? std::numeric_limits<double>::infinity() : 0.5 * (1.0 + 1.0 / mu);
}

namespace {

void require_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty sigma grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma values must be positive");
    if (i && !(grid[i] > grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "sigma grid must be ascending");
  }
}

}  // namespace

SigmaSearchResult sigma_mc_search(const std::vector<double>& grid,
                                  const std::vector<std::vector<KernelTrialOutcome>>& per_sigma, double confidence,
                                  double tau) {
  require_grid(grid);
  if (per_sigma.size() != grid.size()) throw Error(ErrorCode::DimensionMismatch, "one trial batch per sigma needed");
  if (grid.back() >= kernel_sigma_cap()) {
    throw Error(ErrorCode::InvalidArgument, "sigma_mc grid must stay below 2/sqrt(ln 3)");
  }
  SigmaSearchResult r{grid.front(), 0, true};
  for (std::size_t s = 0; s < grid.size(); ++s) {
    std::size_t ok = 0, total = 0;
    for (const auto& t : per_sigma[s]) {
      const double cap = sparsity_cap(t.mu_kernel);
      for (const auto& d : t.decisions) {
        ok += static_cast<double>(d.coef.l0(tau)) < cap;
        ++total;
      }
    }
    if (total == 0) throw Error(ErrorCode::InvalidArgument, "sigma point without test samples");
    if (static_cast<double>(ok) >= confidence * static_cast<double>(total)) r = {grid[s], s, false};
  }
  return r;
}

SigmaSearchResult sigma_acc_search(const std::vector<double>& grid, const std::vector<double>& accuracy, double tol) {
  require_grid(grid);
  if (accuracy.size() != grid.size()) throw Error(ErrorCode::DimensionMismatch, "one accuracy per sigma needed");
  const double best = *std::max_element(accuracy.begin(), accuracy.end());
  SigmaSearchResult r{grid.front(), 0, false};
  for (std::size_t s = 0; s < grid.size(); ++s) {
    if (accuracy[s] >= best - tol) r = {grid[s], s, false};
  }
  return r;
}

std::vector<double> geometric_grid(double start, double factor, std::size_t count) {
  if (!(start > 0.0) || !(factor > 1.0)) throw Error(ErrorCode::InvalidArgument, "grid needs start > 0, factor > 1");
  std::vector<double> g(count);
  double v = start;
  for (std::size_t i = 0; i < count; ++i, v *= factor) g[i] = v;
  return g;
}

}  // namespace sparselab
