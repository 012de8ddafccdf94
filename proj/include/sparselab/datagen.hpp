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

#ifndef SPARSELAB_DATAGEN_HPP
#define SPARSELAB_DATAGEN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparselab/classify.hpp"
#include "sparselab/dictionary.hpp"
#include "sparselab/error.hpp"
#include "sparselab/solvers.hpp"

namespace sparselab {

inline constexpr int kNumStages = 11;

/// Cone-mean norm and class spread at one stage.
struct StageParams {
  double mu_i = 0.0;   ///< (stage − 1)/10
  double eta_i = 2.0;  ///< 2/stage
};

StageParams stage_params(int stage);

/// Size and stage of a bouquet database. N0 samples in each of L classes,
/// ambient dimension m.
struct StagedDatabaseSpec {
  int n0 = 5;
  int m = 50;
  int L = 20;
  int stage = 1;
  std::uint64_t seed = 0;

  int n_train() const { return n0 * L; }
  StageParams params() const { return stage_params(stage); }
  /// Throws InvalidArgument unless N0·L > m, all sizes positive and
  /// 1 <= stage <= 11.
  void validate() const;
};

/// (N0, m, L) of the named databases DB-1 .. DB-4. Throws InvalidArgument
/// for other names.
StagedDatabaseSpec database_spec(std::string_view id);
std::vector<std::string> database_ids();

struct GeneratedInstance {
  Dictionary dictionary;
  CoefVector alpha0;
  Vec y0;
  /// Noisy sample, present after add_noise.
  std::optional<Vec> y;
  double zeta = 0.0;

  /// y when noisy, y0 otherwise.
  const Vec& sample() const { return y ? *y : y0; }
};

/// Draws one database and one class-1 test sample. With `k` set, α0 is
/// supported on the first k class-1 columns only (k <= N0).
GeneratedInstance gen_staged(const StagedDatabaseSpec& spec, std::optional<int> k = std::nullopt);

/// y = y0 + z with z_i ~ N(0, (ζ/(2√m))²) drawn from `seed`.
GeneratedInstance add_noise(GeneratedInstance inst, double zeta, std::uint64_t seed);

/// Raised by scale_spec when r2·L' is fractional. `nearest` is the valid
/// spec whose L' is closest to the unrounded target (ties to the smaller L').
class ScalingError : public Error {
 public:
  ScalingError(const std::string& what, StagedDatabaseSpec nearest)
      : Error(ErrorCode::NonIntegerScaling, what), nearest_(nearest) {}
  const StagedDatabaseSpec& nearest() const { return nearest_; }

 private:
  StagedDatabaseSpec nearest_;
};

/// Grows m to m_new keeping r1 = m/N_tr and r2 = N0/L:
/// L' = round(√(m_new/(r1 r2))), N0' = r2·L'.
StagedDatabaseSpec scale_spec(const StagedDatabaseSpec& spec, int m_new);

/// scale_spec, falling back to the nearest valid spec on NonIntegerScaling.
StagedDatabaseSpec scale_spec_nearest(const StagedDatabaseSpec& spec, int m_new);

/// Class l holds N0 noisy copies of e_l (entries + N(0, η²)), unit-normalised.
Dictionary gen_toy_kernel_db(int n0, int m, int L, double eta, std::uint64_t seed);

/// For every class, `per_class` implicit samples φ(y) = Φc with c ~ Unif(0,1)
/// on that class's columns. With `normalize`, c is divided by √(cᵀKc).
std::vector<KernelTestSample> gen_kernel_test_samples(const KernelModel& k, int per_class, std::uint64_t seed,
                                                      bool normalize = false);

}  // namespace sparselab

#endif  // SPARSELAB_DATAGEN_HPP
