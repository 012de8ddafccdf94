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

#include "sparselab/datagen.hpp"

#include <cmath>
#include <numeric>

#include "sparselab/rng.hpp"

namespace sparselab {
namespace {

Vec normal_vector(CounterRng& rng, Eigen::Index n, double sd) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = sd * rng.normal();
  return v;
}

// Rescale to norm `target`; a zero target leaves the zero vector.
Vec rescaled(const Vec& v, double target) {
  if (target == 0.0) return Vec::Zero(v.size());
  return v * (target / v.norm());
}

}  // namespace

StageParams stage_params(int stage) {
  if (stage < 1 || stage > kNumStages) {
    throw Error(ErrorCode::InvalidArgument, "stage must lie in [1, 11], got " + std::to_string(stage));
  }
  return {(stage - 1) / 10.0, 2.0 / stage};
}

void StagedDatabaseSpec::validate() const {
  if (n0 < 1 || m < 1 || L < 1) throw Error(ErrorCode::InvalidArgument, "N0, m and L must be positive");
  if (n0 * L <= m) {
    throw Error(ErrorCode::InvalidArgument, "N0*L = " + std::to_string(n0 * L) + " must exceed m = " +
                                                std::to_string(m));
  }
  stage_params(stage);
}

StagedDatabaseSpec database_spec(std::string_view id) {
  StagedDatabaseSpec s;
  if (id == "DB-1") {
    s.n0 = 5, s.m = 50, s.L = 20;
  } else if (id == "DB-2") {
    s.n0 = 10, s.m = 50, s.L = 10;
  } else if (id == "DB-3") {
    s.n0 = 10, s.m = 50, s.L = 50;
  } else if (id == "DB-4") {
    s.n0 = 5, s.m = 200, s.L = 50;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown database '" + std::string(id) + "'");
  }
  return s;
}

std::vector<std::string> database_ids() { return {"DB-1", "DB-2", "DB-3", "DB-4"}; }

GeneratedInstance gen_staged(const StagedDatabaseSpec& spec, std::optional<int> k) {
  spec.validate();
  if (k && (*k < 1 || *k > spec.n0)) {
    throw Error(ErrorCode::InvalidArgument, "k must lie in [1, N0]");
  }
  const StageParams p = spec.params();
  const Eigen::Index m = spec.m;
  const double spread = p.eta_i / std::sqrt(static_cast<double>(m));

  CounterRng rng(derive_seed(spec.seed, 0, 0, "dictionary"));
  const Vec cone = rescaled(normal_vector(rng, m, 1.0), p.mu_i);
  Mat raw(m, spec.n_train());
  std::vector<int> labels(static_cast<std::size_t>(spec.n_train()));
  for (int l = 0; l < spec.L; ++l) {
    const Vec mean = rescaled(cone + normal_vector(rng, m, spread), p.mu_i);
    for (int s = 0; s < spec.n0; ++s) {
      const int j = l * spec.n0 + s;
      raw.col(j) = mean + normal_vector(rng, m, spread / spec.L);
      labels[static_cast<std::size_t>(j)] = l + 1;
    }
  }

  GeneratedInstance inst;
  inst.dictionary = Dictionary::normalized(raw, std::move(labels));
  CounterRng coef_rng(derive_seed(spec.seed, 0, 0, "alpha0"));
  Vec alpha = Vec::Zero(spec.n_train());
  const int active = k.value_or(spec.n0);
  for (int j = 0; j < active; ++j) alpha[j] = coef_rng.uniform();
  inst.y0 = inst.dictionary.data() * alpha;
  inst.alpha0 = CoefVector(std::move(alpha));
  return inst;
}

GeneratedInstance add_noise(GeneratedInstance inst, double zeta, std::uint64_t seed) {
  if (!(zeta > 0.0)) throw Error(ErrorCode::InvalidArgument, "zeta must be positive");
  CounterRng rng(derive_seed(seed, 0, 0, "noise"));
  const Eigen::Index m = inst.y0.size();
  inst.y = inst.y0 + normal_vector(rng, m, zeta / (2.0 * std::sqrt(static_cast<double>(m))));
  inst.zeta = zeta;
  return inst;
}

StagedDatabaseSpec scale_spec(const StagedDatabaseSpec& spec, int m_new) {
  spec.validate();
  if (m_new < spec.m) throw Error(ErrorCode::InvalidArgument, "m_new must be at least m");
  // r1·r2 = m/L², so m_new/(r1 r2) = m_new·L²/m.
  const double target = static_cast<double>(spec.L) * std::sqrt(static_cast<double>(m_new) / spec.m);
  const int g = std::gcd(spec.n0, spec.L);
  const int num = spec.n0 / g;  // r2 = num/den in lowest terms
  const int den = spec.L / g;

  StagedDatabaseSpec out = spec;
  out.m = m_new;
  const long L_new = std::lround(target);
  if (L_new % den == 0) {
    out.L = static_cast<int>(L_new);
    out.n0 = static_cast<int>(L_new / den * num);
    return out;
  }
  const double lower = std::floor(target / den) * den;
  const double upper = lower + den;
  const double pick = (target - lower <= upper - target && lower > 0) ? lower : upper;
  StagedDatabaseSpec nearest = out;
  nearest.L = static_cast<int>(pick);
  nearest.n0 = nearest.L / den * num;
  throw ScalingError("N0' = " + std::to_string(static_cast<double>(L_new) * num / den) +
                         " is not an integer; nearest valid spec has L = " + std::to_string(nearest.L) +
                         ", N0 = " + std::to_string(nearest.n0),
                     nearest);
}

StagedDatabaseSpec scale_spec_nearest(const StagedDatabaseSpec& spec, int m_new) {
  try {
    return scale_spec(spec, m_new);
  } catch (const ScalingError& e) {
    return e.nearest();
  }
}

Dictionary gen_toy_kernel_db(int n0, int m, int L, double eta, std::uint64_t seed) {
  if (n0 < 1 || L < 1 || m < L) throw Error(ErrorCode::InvalidArgument, "toy database needs m >= L >= 1, N0 >= 1");
  if (!(eta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "eta must be nonnegative");
  CounterRng rng(derive_seed(seed, 0, 0, "toy"));
  Mat raw(m, n0 * L);
  std::vector<int> labels(static_cast<std::size_t>(n0 * L));
  for (int l = 0; l < L; ++l) {
    for (int s = 0; s < n0; ++s) {
      const int j = l * n0 + s;
      raw.col(j) = normal_vector(rng, m, eta);
      raw(l, j) += 1.0;
      labels[static_cast<std::size_t>(j)] = l + 1;
    }
  }
  return Dictionary::normalized(raw, std::move(labels));
}

std::vector<KernelTestSample> gen_kernel_test_samples(const KernelModel& k, int per_class, std::uint64_t seed,
                                                      bool normalize) {
  if (per_class < 1) throw Error(ErrorCode::InvalidArgument, "per_class must be at least 1");
  CounterRng rng(derive_seed(seed, 0, 0, "kernel-tests"));
  std::vector<KernelTestSample> out;
  for (int l = 1; l <= k.num_classes; ++l) {
    const auto cols = k.class_columns(l);
    for (int s = 0; s < per_class; ++s) {
      Vec c = Vec::Zero(k.size());
      for (Eigen::Index j : cols) c[j] = rng.uniform();
      KernelTestSample t{CoefVector(std::move(c)), l};
      if (normalize) t.coefs.entries /= std::sqrt(t.self_inner(k));
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace sparselab
