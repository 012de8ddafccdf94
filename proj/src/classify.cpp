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

#include "sparselab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sparselab/error.hpp"

namespace sparselab {
namespace {

void require_labeled(const Dictionary& d) {
  if (!d.labeled()) throw Error(ErrorCode::InvalidArgument, "classification needs a labelled dictionary");
}

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
}

KernelModel empty_model(const Dictionary& d, double sigma) {
  require_labeled(d);
  require_sigma(sigma);
  KernelModel k;
  k.sigma = sigma;
  k.labels = d.labels();
  k.num_classes = d.num_classes();
  return k;
}

}  // namespace

double KernelModel::mu_kernel() const {
  const Eigen::Index n = gram.rows();
  if (n < 2) throw Error(ErrorCode::TooFewColumns, "kernel coherence needs at least two columns");
  double mu = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) mu = std::max(mu, gram(i, j));
  }
  return mu;
}

std::vector<Eigen::Index> KernelModel::class_columns(int l) const {
  std::vector<Eigen::Index> cols;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] == l) cols.push_back(static_cast<Eigen::Index>(j));
  }
  return cols;
}

KernelModel gaussian_gram(const Dictionary& d, double sigma) {
  KernelModel k = empty_model(d, sigma);
  const Eigen::Index n = d.cols();
  const double s2 = sigma * sigma;
  k.gram.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    k.gram(j, j) = 1.0;
    for (Eigen::Index i = 0; i < j; ++i) {
      const double v = std::exp(-(d.column(i) - d.column(j)).squaredNorm() / s2);
      k.gram(i, j) = v;
      k.gram(j, i) = v;
    }
  }
  return k;
}

KernelModel gaussian_gram_from_inner(const Dictionary& d, double sigma) {
  KernelModel k = empty_model(d, sigma);
  const Mat g = gram(d.data());
  const double s2 = sigma * sigma;
  k.gram = ((2.0 * g.array() - 2.0) / s2).exp().matrix();
  k.gram.diagonal().setOnes();
  return k;
}

double kernel_sigma_cap() { return 2.0 / std::sqrt(std::log(3.0)); }

KernelBound kernel_coherence_bound(double sigma) {
  require_sigma(sigma);
  const double cap = kernel_sigma_cap();
  return {sigma < cap, cap};
}

double KernelTestSample::self_inner(const KernelModel& k) const {
  return coefs.entries.dot(k.gram * coefs.entries);
}

KcdResult kcd_lasso(const KernelModel& k, const KernelTestSample& t, double lambda, const KcdConfig& cfg) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  const Eigen::Index n = k.size();
  if (t.coefs.size() != n) throw Error(ErrorCode::DimensionMismatch, "test coefficients differ from N");
  // g = Kc − Kα, so the unit-diagonal update target is g_j + α_j.
  Vec g = k.gram * t.coefs.entries;
  Vec alpha = Vec::Zero(n);
  KcdResult res;
  res.converged = false;
  double* gp = g.data();
  double* ap = alpha.data();
  while (res.sweeps < cfg.max_sweeps) {
    double change = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double next = soft_threshold(gp[j] + ap[j], lambda);
      const double delta = next - ap[j];
      if (delta != 0.0) {
        const double* kj = k.gram.data() + j * n;
        for (Eigen::Index i = 0; i < n; ++i) gp[i] -= delta * kj[i];
        ap[j] = next;
        change = std::max(change, std::abs(delta));
      }
    }
    ++res.sweeps;
    if (change <= cfg.conv_tol) {
      res.converged = true;
      break;
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::abs(alpha[j]) <= cfg.support_threshold) alpha[j] = 0.0;
  }
  res.alpha = CoefVector(std::move(alpha), cfg.support_threshold);
  return res;
}

int argmin_class(const std::vector<double>& residuals) {
  if (residuals.empty()) throw Error(ErrorCode::InvalidArgument, "no class residuals");
  return static_cast<int>(std::min_element(residuals.begin(), residuals.end()) - residuals.begin()) + 1;
}

ClassDecision decide_from_coefficients(const Dictionary& d, const Vec& y, CoefVector alpha) {
  require_labeled(d);
  if (alpha.size() != d.cols() || y.size() != d.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficients or sample do not match the dictionary");
  }
  ClassDecision out;
  out.residuals.assign(static_cast<std::size_t>(d.num_classes()), 0.0);
  for (int l = 1; l <= d.num_classes(); ++l) {
    Vec r = y;
    for (Eigen::Index j : d.class_columns(l)) {
      if (alpha[j] != 0.0) r.noalias() -= alpha[j] * d.column(j);
    }
    out.residuals[static_cast<std::size_t>(l - 1)] = r.norm();
  }
  out.label = argmin_class(out.residuals);
  out.coef = std::move(alpha);
  return out;
}

ClassDecision src_classify(const Dictionary& d, const Vec& y, const SolverConfig& cfg) {
  require_labeled(d);
  SolverResult sol;
  switch (cfg.mode) {
    case SolveMode::BasisPursuit: sol = basis_pursuit(d, y, cfg); break;
    case SolveMode::Lasso: sol = lasso_homotopy(d, y, cfg.lambda, cfg); break;
    case SolveMode::Bpdn: sol = bpdn_constrained(d, y, cfg.epsilon, cfg); break;
  }
  return decide_from_coefficients(d, y, std::move(sol.alpha));
}

ClassDecision ksrc_classify(const KernelModel& k, const KernelTestSample& t, double lambda, const KcdConfig& cfg) {
  KcdResult fit = kcd_lasso(k, t, lambda, cfg);
  const Vec kc = k.gram * t.coefs.entries;
  const double self = t.coefs.entries.dot(kc);
  ClassDecision out;
  out.residuals.assign(static_cast<std::size_t>(k.num_classes), 0.0);
  for (int l = 1; l <= k.num_classes; ++l) {
    const auto cols = k.class_columns(l);
    double cross = 0.0;
    double quad = 0.0;
    for (Eigen::Index a : cols) {
      const double va = fit.alpha[a];
      if (va == 0.0) continue;
      cross += va * kc[a];
      for (Eigen::Index b : cols) quad += va * fit.alpha[b] * k.gram(a, b);
    }
    out.residuals[static_cast<std::size_t>(l - 1)] = std::sqrt(std::max(0.0, self - 2.0 * cross + quad));
  }
  out.label = argmin_class(out.residuals);
  out.coef = std::move(fit.alpha);
  out.converged = fit.converged;
  return out;
}

}  // namespace sparselab
