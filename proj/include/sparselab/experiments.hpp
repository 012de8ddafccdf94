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

#ifndef SPARSELAB_EXPERIMENTS_HPP
#define SPARSELAB_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sparselab/classify.hpp"
#include "sparselab/csv_io.hpp"
#include "sparselab/datagen.hpp"
#include "sparselab/metrics.hpp"
#include "sparselab/solvers.hpp"

namespace sparselab {

enum class Study { NoiseFree, Asymptotic, VaryK, Threshold, Noisy, KernelSweep, SigmaSearch, L0Crosscheck };

std::string_view to_string(Study s);
/// Accepts noise_free, asymptotic, vary_k, threshold, noisy, kernel_sweep,
/// sigma_search, l0_crosscheck.
Study parse_study(std::string_view name);

struct ExperimentConfig {
  Study study = Study::NoiseFree;
  /// Named database; ignored when n0, m and L are all set explicitly.
  std::string db = "DB-1";
  int n0 = 0;
  int m = 0;
  int L = 0;
  std::vector<int> stages{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  std::size_t trials = 200;
  std::uint64_t master_seed = 0;
  SolverConfig solver;

  // noisy
  double zeta = 0.01;
  double C = 5.0;
  // threshold
  std::vector<double> taus{1e-5};
  // vary_k (0 means N0) and l0_crosscheck planted sparsity
  int k = 0;
  // l0_crosscheck enumeration cap (0 means N0)
  int k_cap = 0;
  // asymptotic
  std::vector<int> m_values{50, 100, 200, 400};

  // kernel studies: toy database sizes, η, σ grid and KCD settings
  int toy_n0 = 5;
  int toy_m = 50;
  int toy_L = 20;
  double eta = 0.1;
  std::vector<double> sigma_grid;
  double kcd_lambda = 1e-10;
  KcdConfig kcd;
  /// Test samples per class (0 means N0).
  int per_class = 0;
  bool normalize_tests = false;
  /// Class whose contribution profile is reported (0 means L).
  int profile_class = 0;
  double confidence = 0.95;
  double acc_tol = 0.005;

  std::size_t workers = 1;
  bool raw = false;
  std::string out_dir = ".";

  /// Database sizes with the stage and seed left at their defaults.
  StagedDatabaseSpec base_spec() const;
  /// Throws InvalidArgument on out-of-range settings.
  void validate() const;
};

/// Sets one option from its flag name (without dashes) and textual value,
/// the form shared by command-line flags and key=value config files.
void apply_option(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// "a..b" ranges and comma lists, e.g. "1..11" or "2,3,7".
std::vector<int> parse_int_list(std::string_view text);
/// "start:factor:count" geometric grids or comma lists.
std::vector<double> parse_sigma_grid(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);

struct NamedTable {
  std::string file;
  CsvTable table;
};

struct StudyResult {
  std::vector<NamedTable> tables;
  /// Trials whose solver raised, summed over the study.
  std::size_t failed_trials = 0;
  /// Kernel studies: test samples whose KCD run hit the sweep limit.
  std::size_t not_converged = 0;

  const CsvTable& table(std::string_view file) const;
  /// Writes every table into `dir` (created if missing).
  void write(const std::string& dir) const;
};

StudyResult run_noise_free(const ExperimentConfig& cfg);
StudyResult run_asymptotic(const ExperimentConfig& cfg);
StudyResult run_vary_k(const ExperimentConfig& cfg);
StudyResult run_threshold_study(const ExperimentConfig& cfg);
StudyResult run_noisy(const ExperimentConfig& cfg);
StudyResult run_kernel_sweep(const ExperimentConfig& cfg);
StudyResult run_sigma_search(const ExperimentConfig& cfg);
StudyResult run_l0_crosscheck(const ExperimentConfig& cfg);

/// Dispatches on cfg.study.
StudyResult run_study(const ExperimentConfig& cfg);

/// Per-σ kernel SRC outcomes on the toy database: result[s][t] is trial t at
/// grid[s]. Training set and test coefficients of trial t are shared by all σ.
std::vector<std::vector<KernelTrialOutcome>> kernel_grid_outcomes(const ExperimentConfig& cfg,
                                                                  const std::vector<double>& grid);

/// Runs fn(i) for i in [0, n) on `workers` threads. Results must be written
/// by index; the first exception is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace sparselab

#endif  // SPARSELAB_EXPERIMENTS_HPP
