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

#include "sparselab/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparselab/coherence.hpp"
#include "sparselab/error.hpp"

namespace sparselab {

std::vector<Eigen::Index> CoefVector::support(double tau) const {
  std::vector<Eigen::Index> s;
  for (Eigen::Index i = 0; i < entries.size(); ++i) {
    if (std::abs(entries[i]) > tau) s.push_back(i);
  }
  return s;
}

std::size_t CoefVector::l0(double tau) const {
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < entries.size(); ++i) n += std::abs(entries[i]) > tau;
  return n;
}

double residual_norm(const Mat& x, const Vec& y, const Vec& alpha) { return (y - x * alpha).norm(); }

namespace {

// Relative width inside which two path events count as simultaneous.
constexpr double kTieTol = 1e-12;

Mat gather_columns(const Mat& x, const std::vector<Eigen::Index>& cols) {
  Mat out(x.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = x.col(cols[i]);
  return out;
}

struct ActiveSolve {
  Vec alpha_ls;   // least-squares coefficients on the active set
  Vec direction;  // (X_AᵀX_A)⁻¹ s
};

// X_A P = QR; both systems share the factorisation.
ActiveSolve solve_active(const Eigen::ColPivHouseholderQR<Mat>& qr, const Vec& y, const Vec& signs) {
  const Eigen::Index k = qr.cols();
  const auto r = qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const auto& perm = qr.colsPermutation().indices();

  Vec qty = y;
  qty.applyOnTheLeft(qr.householderQ().setLength(k).adjoint());
  const Vec v_ls = r.solve(qty.head(k));

  Vec t(k);
  for (Eigen::Index i = 0; i < k; ++i) t[i] = signs[perm[i]];
  const Vec w = r.transpose().solve(t);
  const Vec v_d = r.solve(w);

  ActiveSolve out{Vec(k), Vec(k)};
  for (Eigen::Index i = 0; i < k; ++i) {
    out.alpha_ls[perm[i]] = v_ls[i];
    out.direction[perm[i]] = v_d[i];
  }
  return out;
}

void check_dims(const Mat& x, const Vec& y) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "dictionary has " + std::to_string(x.rows()) + " rows, sample has " + std::to_string(y.size()));
  }
  require_finite(y, "sample");
}

enum class EventKind { None, Removal, Activation };

}  // namespace

LassoPath LassoPath::trace(const Mat& x, const Vec& y, double lambda_min, std::size_t max_iters,
                           std::optional<double> stop_residual) {
  check_dims(x, y);
  if (!(lambda_min > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  const Eigen::Index n = x.cols();
  LassoPath path;

  const Vec c0 = x.transpose() * y;
  Eigen::Index j0 = 0;
  const double lam_max = n ? c0.cwiseAbs().maxCoeff(&j0) : 0.0;
  if (lam_max <= lambda_min || (stop_residual && y.norm() <= *stop_residual)) {
    path.knots_.push_back({std::max(lam_max, lambda_min), Vec::Zero(n)});
    return path;
  }
  path.knots_.push_back({lam_max, Vec::Zero(n)});

  // 0 inactive, 1 active, 2 excluded (would make X_A rank-deficient).
  std::vector<char> state(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> active{j0};
  std::vector<double> signs{c0[j0] > 0 ? 1.0 : -1.0};
  state[static_cast<std::size_t>(j0)] = 1;
  Eigen::Index last_added = j0;
  Eigen::Index last_removed = -1;
  double lam = lam_max;
  Vec alpha = Vec::Zero(n);

  for (;;) {
    if (path.events_ >= max_iters) {
      throw Error(ErrorCode::PathStall, "homotopy exceeded " + std::to_string(max_iters) + " events");
    }
    if (active.empty()) throw Error(ErrorCode::PathStall, "active set emptied below lambda_max");

    const Mat xa = gather_columns(x, active);
    Eigen::ColPivHouseholderQR<Mat> qr(xa);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() < static_cast<Eigen::Index>(active.size())) {
      throw Error(ErrorCode::PathStall, "active set became rank-deficient");
    }
    const Vec s = Eigen::Map<const Vec>(signs.data(), static_cast<Eigen::Index>(signs.size()));
    const ActiveSolve as = solve_active(qr, y, s);
    const Vec r_ls = y - xa * as.alpha_ls;
    const Vec b = xa * as.direction;
    const Vec p = x.transpose() * r_ls;
    const Vec q = x.transpose() * b;

    // Step γ = lam − λ' to the next event.
    double best = lam - lambda_min;
    EventKind kind = EventKind::None;
    Eigen::Index who = -1;
    double new_sign = 0.0;
    const double tie = kTieTol * lam;

    struct Candidate {
      double gamma;
      EventKind kind;
      Eigen::Index index;
      double sign;
    };
    std::vector<Candidate> cands;

    for (std::size_t a = 0; a < active.size(); ++a) {
      const Eigen::Index i = active[a];
      if (i == last_added) continue;
      const double di = as.direction[static_cast<Eigen::Index>(a)];
      if (di == 0.0) continue;
      const double v = as.alpha_ls[static_cast<Eigen::Index>(a)] - lam * di;
      const double g = v / di;  // α_i(lam − γ) = v + γ·d_i
      if (-g > 0.0) cands.push_back({-g, EventKind::Removal, i, 0.0});
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (state[static_cast<std::size_t>(j)] != 0) continue;
      const double cj = p[j] + lam * q[j];
      double g = std::numeric_limits<double>::infinity();
      double sg = 0.0;
      if (1.0 - q[j] != 0.0) {
        const double g1 = (lam - cj) / (1.0 - q[j]);
        if (g1 > -tie && g1 < g) {
          g = g1;
          sg = 1.0;
        }
      }
      if (1.0 + q[j] != 0.0) {
        const double g2 = (lam + cj) / (1.0 + q[j]);
        if (g2 > -tie && g2 < g) {
          g = g2;
          sg = -1.0;
        }
      }
      if (!std::isfinite(g)) continue;
      if (j == last_removed && g <= tie) continue;
      cands.push_back({std::max(g, 0.0), EventKind::Activation, j, sg});
    }

    double gmin = std::numeric_limits<double>::infinity();
    for (const auto& c : cands) gmin = std::min(gmin, c.gamma);
    if (gmin <= best) {
      // Among simultaneous events: removals first, then lowest index.
      for (const auto& c : cands) {
        if (c.gamma > gmin + tie) continue;
        const bool better = kind == EventKind::None ||
                            (c.kind == EventKind::Removal && kind == EventKind::Activation) ||
                            (c.kind == kind && c.index < who);
        if (better) {
          kind = c.kind;
          who = c.index;
          new_sign = c.sign;
        }
      }
      best = gmin;
    }

    const double lam_next = (kind == EventKind::None) ? lambda_min : std::max(lam - best, lambda_min);
    alpha.setZero();
    for (std::size_t a = 0; a < active.size(); ++a) {
      alpha[active[a]] =
          as.alpha_ls[static_cast<Eigen::Index>(a)] - lam_next * as.direction[static_cast<Eigen::Index>(a)];
    }
    if (kind == EventKind::Removal) alpha[who] = 0.0;
    path.knots_.push_back({lam_next, alpha});

    if (kind == EventKind::None || lam_next <= lambda_min) break;
    if (stop_residual && residual_norm(x, y, alpha) <= *stop_residual) break;

    ++path.events_;
    lam = lam_next;
    if (kind == EventKind::Removal) {
      const auto it = std::find(active.begin(), active.end(), who);
      const auto pos = static_cast<std::size_t>(it - active.begin());
      active.erase(it);
      signs.erase(signs.begin() + static_cast<std::ptrdiff_t>(pos));
      state[static_cast<std::size_t>(who)] = 0;
      last_removed = who;
      last_added = -1;
    } else {
      std::vector<Eigen::Index> trial = active;
      trial.push_back(who);
      Eigen::ColPivHouseholderQR<Mat> check(gather_columns(x, trial));
      check.setThreshold(kRankTolerance);
      if (check.rank() < static_cast<Eigen::Index>(trial.size())) {
        state[static_cast<std::size_t>(who)] = 2;
        continue;
      }
      active.push_back(who);
      signs.push_back(new_sign);
      state[static_cast<std::size_t>(who)] = 1;
      last_added = who;
      last_removed = -1;
    }
  }
  return path;
}

Vec LassoPath::solution_at(double lambda) const {
  if (lambda >= knots_.front().lambda) return knots_.front().alpha;
  if (lambda < knots_.back().lambda) {
    throw Error(ErrorCode::InvalidArgument, "lambda below the traced range");
  }
  for (std::size_t k = 0; k + 1 < knots_.size(); ++k) {
    const Knot& hi = knots_[k];
    const Knot& lo = knots_[k + 1];
    if (lambda <= hi.lambda && lambda >= lo.lambda) {
      const double span = hi.lambda - lo.lambda;
      if (span <= 0.0) return lo.alpha;
      const double t = (hi.lambda - lambda) / span;
      return hi.alpha + t * (lo.alpha - hi.alpha);
    }
  }
  return knots_.back().alpha;
}

SolverResult lasso_homotopy(const Mat& x, const Vec& y, double lambda, const SolverConfig& cfg) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lasso requires lambda > 0");
  const LassoPath path = LassoPath::trace(x, y, lambda, cfg.max_iters);
  SolverResult res;
  res.alpha = CoefVector(path.solution_at(lambda), cfg.support_threshold);
  res.iterations = path.events();
  res.lambda = lambda;
  const Vec r = y - x * res.alpha.entries;
  res.residual = r.norm();
  const double kkt = x.cols() ? (x.transpose() * r).cwiseAbs().maxCoeff() : 0.0;
  if (kkt > lambda + cfg.conv_tol) {
    throw Error(ErrorCode::PathStall, "KKT check failed: |X^T r|_inf = " + std::to_string(kkt));
  }
  return res;
}

SolverResult lasso_homotopy(const Dictionary& d, const Vec& y, double lambda, const SolverConfig& cfg) {
  return lasso_homotopy(d.data(), y, lambda, cfg);
}

SolverResult basis_pursuit(const Mat& x, const Vec& y, const SolverConfig& cfg) {
  check_dims(x, y);
  const double ynorm = y.norm();
  if (ynorm == 0.0) {
    SolverResult res;
    res.alpha = CoefVector(Vec::Zero(x.cols()), cfg.support_threshold);
    res.lambda = kBasisPursuitLambda;
    return res;
  }
  const Vec ls = least_squares(x, y);
  const double ls_res = residual_norm(x, y, ls);
  if (ls_res > 1e-8 * ynorm) {
    throw Error(ErrorCode::Infeasible, "sample is outside the column span (residual " + std::to_string(ls_res) + ")");
  }
  SolverResult res = lasso_homotopy(x, y, kBasisPursuitLambda, cfg);
  if (res.residual > 1e-6 * ynorm) {
    throw Error(ErrorCode::Infeasible, "homotopy endpoint residual " + std::to_string(res.residual));
  }
  return res;
}

SolverResult basis_pursuit(const Dictionary& d, const Vec& y, const SolverConfig& cfg) {
  return basis_pursuit(d.data(), y, cfg);
}

SolverResult bpdn_constrained(const Mat& x, const Vec& y, double epsilon, const SolverConfig& cfg) {
  check_dims(x, y);
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "bpdn requires epsilon > 0");
  SolverResult res;
  res.alpha = CoefVector(Vec::Zero(x.cols()), cfg.support_threshold);
  const double ynorm = y.norm();
  if (epsilon >= ynorm) {
    res.trivial = true;
    res.residual = ynorm;
    res.lambda = x.cols() ? (x.transpose() * y).cwiseAbs().maxCoeff() : 0.0;
    return res;
  }
  const LassoPath path = LassoPath::trace(x, y, kBasisPursuitLambda, cfg.max_iters, epsilon);
  res.iterations = path.events();
  const auto& knots = path.knots();
  const double end_res = residual_norm(x, y, knots.back().alpha);
  if (end_res > epsilon + cfg.conv_tol) {
    throw Error(ErrorCode::Infeasible, "residual " + std::to_string(end_res) + " never reaches epsilon");
  }
  // Residual is monotone in λ: bracket [lo, hi] with res(lo) <= ε < res(hi).
  double lo = knots.back().lambda;
  double hi = knots.size() > 1 ? knots[knots.size() - 2].lambda : path.lambda_max();
  Vec best = knots.back().alpha;
  double best_lambda = lo;
  double best_gap = std::abs(end_res - epsilon);
  for (int it = 0; it < 60 && best_gap > cfg.conv_tol; ++it) {
    const double mid = std::sqrt(lo * hi);
    const Vec a = path.solution_at(mid);
    const double r = residual_norm(x, y, a);
    if (std::abs(r - epsilon) < best_gap) {
      best_gap = std::abs(r - epsilon);
      best = a;
      best_lambda = mid;
    }
    if (r > epsilon) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  res.alpha = CoefVector(best, cfg.support_threshold);
  res.lambda = best_lambda;
  res.residual = residual_norm(x, y, best);
  return res;
}

SolverResult bpdn_constrained(const Dictionary& d, const Vec& y, double epsilon, const SolverConfig& cfg) {
  return bpdn_constrained(d.data(), y, epsilon, cfg);
}

SignalErrorResult signal_error_bp(const Dictionary& d, const Vec& y, const SolverConfig& cfg) {
  check_dims(d.data(), y);
  const Eigen::Index m = d.rows();
  const Eigen::Index n = d.cols();
  Mat aug(m, n + m);
  aug.leftCols(n) = d.data();
  aug.rightCols(m) = Mat::Identity(m, m);
  const SolverResult full = basis_pursuit(aug, y, cfg);
  SignalErrorResult out;
  out.alpha = full;
  out.alpha.alpha = CoefVector(full.alpha.entries.head(n), cfg.support_threshold);
  out.z = full.alpha.entries.tail(m);
  return out;
}

CoefVector l0_oracle(const Dictionary& d, const Vec& y, std::size_t k_cap, double res_tol) {
  check_dims(d.data(), y);
  const auto n = static_cast<std::size_t>(d.cols());
  k_cap = std::min(k_cap, n);
  if (binomial(n, k_cap) > kMaxEnumeration) {
    throw Error(ErrorCode::CombinatorialBlowup,
                "C(" + std::to_string(n) + "," + std::to_string(k_cap) + ") exceeds the enumeration limit");
  }
  const double ynorm = y.norm();
  if (ynorm == 0.0) return CoefVector(Vec::Zero(d.cols()));
  const double tol = res_tol * ynorm;
  const Mat& x = d.data();
  for (std::size_t k = 1; k <= k_cap; ++k) {
    std::vector<Eigen::Index> subset(k);
    for (std::size_t i = 0; i < k; ++i) subset[i] = static_cast<Eigen::Index>(i);
    for (;;) {
      const Mat xs = gather_columns(x, subset);
      const Vec beta = least_squares(xs, y);
      if ((y - xs * beta).norm() <= tol) {
        Vec full = Vec::Zero(d.cols());
        for (std::size_t i = 0; i < k; ++i) full[subset[i]] = beta[static_cast<Eigen::Index>(i)];
        return CoefVector(full);
      }
      std::size_t pos = k;
      while (pos > 0 && subset[pos - 1] == static_cast<Eigen::Index>(n - k + pos - 1)) --pos;
      if (pos == 0) break;
      ++subset[pos - 1];
      for (std::size_t i = pos; i < k; ++i) subset[i] = subset[i - 1] + 1;
    }
  }
  throw Error(ErrorCode::NoSolution, "no representation with at most " + std::to_string(k_cap) + " columns");
}

CoefVector threshold_and_refit(const Dictionary& d, const Vec& y, const CoefVector& alpha, double tau) {
  check_dims(d.data(), y);
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be positive");
  if (alpha.size() != d.cols()) throw Error(ErrorCode::DimensionMismatch, "coefficient length differs from N");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (std::abs(alpha[i]) >= tau) keep.push_back(i);
  }
  if (keep.empty()) throw Error(ErrorCode::EmptySupport, "every coefficient is below the threshold");
  const Vec beta = least_squares(gather_columns(d.data(), keep), y);
  Vec full = Vec::Zero(d.cols());
  for (std::size_t i = 0; i < keep.size(); ++i) full[keep[i]] = beta[static_cast<Eigen::Index>(i)];
  return CoefVector(full, alpha.threshold);
}

}  // namespace sparselab
