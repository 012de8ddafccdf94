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

#ifndef SPARSELAB_SOLVERS_HPP
#define SPARSELAB_SOLVERS_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "sparselab/dictionary.hpp"

namespace sparselab {

/// Default support cutoff wherever ‖·‖₀ is reported.
inline constexpr double kSupportThreshold = 1e-10;

/// λ used for the equality-constrained problem.
inline constexpr double kBasisPursuitLambda = 1e-10;

/// Coefficients over dictionary columns plus the cutoff that defines support.
struct CoefVector {
  Vec entries;
  double threshold = kSupportThreshold;

  CoefVector() = default;
  explicit CoefVector(Vec e, double tau = kSupportThreshold) : entries(std::move(e)), threshold(tau) {}

  Eigen::Index size() const { return entries.size(); }
  double operator[](Eigen::Index i) const { return entries[i]; }

  /// Indices with |entry| > threshold, ascending.
  std::vector<Eigen::Index> support() const { return support(threshold); }
  std::vector<Eigen::Index> support(double tau) const;
  std::size_t l0() const { return l0(threshold); }
  std::size_t l0(double tau) const;
  double l1() const { return entries.lpNorm<1>(); }
  double l2() const { return entries.norm(); }
};

enum class SolveMode {
  BasisPursuit,  ///< min ‖α‖₁ s.t. Xα = y (homotopy at λ = 1e-10)
  Lasso,         ///< min ½‖y − Xα‖² + λ‖α‖₁
  Bpdn,          ///< min ‖α‖₁ s.t. ‖y − Xα‖₂ <= ε
};

struct SolverConfig {
  SolveMode mode = SolveMode::BasisPursuit;
  double lambda = kBasisPursuitLambda;
  double epsilon = 0.0;
  std::size_t max_iters = 100000;
  double conv_tol = 1e-8;
  double support_threshold = kSupportThreshold;

  static SolverConfig basis_pursuit() { return {}; }
  static SolverConfig lasso(double lambda) {
    SolverConfig c;
    c.mode = SolveMode::Lasso;
    c.lambda = lambda;
    return c;
  }
  static SolverConfig bpdn(double epsilon) {
    SolverConfig c;
    c.mode = SolveMode::Bpdn;
    c.epsilon = epsilon;
    return c;
  }
};

struct SolverResult {
  CoefVector alpha;
  std::size_t iterations = 0;
  /// ‖y − Xα‖₂.
  double residual = 0.0;
  /// λ at which the returned point sits on the regularisation path.
  double lambda = 0.0;
  /// bpdn only: ε >= ‖y‖₂ so the zero vector was returned.
  bool trivial = false;
};

/// Piecewise-linear lasso regularisation path traced by homotopy.
///
/// Knots are stored from λ_max downwards. Between consecutive knots every
/// coefficient is affine in λ, so solution_at() is exact anywhere on the
/// traced range. At each knot the active-set system is re-solved by QR.
/// Simultaneous events (within 1e-12·λ) are resolved removal-first, then by
/// lowest column index.
class LassoPath {
 public:
  struct Knot {
    double lambda;
    Vec alpha;
  };

  /// Traces from λ_max = ‖Xᵀy‖∞ down to `lambda_min`, or until the residual
  /// drops to `stop_residual` when given. Throws PathStall when max_iters
  /// events are exceeded, DimensionMismatch on bad sizes.
  static LassoPath trace(const Mat& x, const Vec& y, double lambda_min, std::size_t max_iters,
                         std::optional<double> stop_residual = std::nullopt);

  const std::vector<Knot>& knots() const { return knots_; }
  double lambda_max() const { return knots_.front().lambda; }
  double lambda_end() const { return knots_.back().lambda; }
  std::size_t events() const { return events_; }

  /// α(λ) for λ in [lambda_end, ∞). Above λ_max the solution is zero.
  Vec solution_at(double lambda) const;

 private:
  std::vector<Knot> knots_;
  std::size_t events_ = 0;
};

/// Lasso by homotopy. Verifies ‖Xᵀ(y − Xα)‖∞ <= λ + conv_tol on return
/// (PathStall otherwise).
SolverResult lasso_homotopy(const Dictionary& d, const Vec& y, double lambda, const SolverConfig& cfg = {});
SolverResult lasso_homotopy(const Mat& x, const Vec& y, double lambda, const SolverConfig& cfg = {});

/// Equality-constrained ℓ1 minimisation. Throws Infeasible when y is not in
/// the column span (least-squares residual > 1e-8·‖y‖) or when the
/// homotopy endpoint leaves a residual above 1e-6·‖y‖.
SolverResult basis_pursuit(const Dictionary& d, const Vec& y, const SolverConfig& cfg = {});
SolverResult basis_pursuit(const Mat& x, const Vec& y, const SolverConfig& cfg = {});

/// min ‖α‖₁ s.t. ‖y − Xα‖₂ <= ε by bisection on log λ over the homotopy
/// path (at most 60 steps, stop when |residual − ε| <= conv_tol). Returns
/// the zero vector with `trivial` set when ε >= ‖y‖₂.
SolverResult bpdn_constrained(const Dictionary& d, const Vec& y, double epsilon, const SolverConfig& cfg = {});
SolverResult bpdn_constrained(const Mat& x, const Vec& y, double epsilon, const SolverConfig& cfg = {});

struct SignalErrorResult {
  SolverResult alpha;
  /// Sparse error term, y = Xα + z.
  Vec z;
};

/// min ‖α‖₁ + ‖z‖₁ s.t. y = Xα + z, solved as basis pursuit over [X | I].
SignalErrorResult signal_error_bp(const Dictionary& d, const Vec& y, const SolverConfig& cfg = {});

/// Exhaustive ℓ0 search: smallest k <= k_cap and lexicographically first
/// support of size k whose least-squares fit leaves residual <= res_tol·‖y‖₂.
/// Throws CombinatorialBlowup when C(N, k_cap) > 1e6, NoSolution otherwise.
CoefVector l0_oracle(const Dictionary& d, const Vec& y, std::size_t k_cap, double res_tol = 1e-8);

/// Zeroes entries with |α_j| < τ, then refits by least squares on the
/// surviving columns. Throws EmptySupport when nothing survives.
CoefVector threshold_and_refit(const Dictionary& d, const Vec& y, const CoefVector& alpha, double tau);

/// ‖y − Xα‖₂.
double residual_norm(const Mat& x, const Vec& y, const Vec& alpha);

}  // namespace sparselab

#endif  // SPARSELAB_SOLVERS_HPP
