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

#include "sparselab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include "sparselab/coherence.hpp"
#include "sparselab/error.hpp"
#include "sparselab/rng.hpp"

namespace sparselab {

std::string_view to_string(Study s) {
  switch (s) {
    case Study::NoiseFree: return "noise_free";
    case Study::Asymptotic: return "asymptotic";
    case Study::VaryK: return "vary_k";
    case Study::Threshold: return "threshold";
    case Study::Noisy: return "noisy";
    case Study::KernelSweep: return "kernel_sweep";
    case Study::SigmaSearch: return "sigma_search";
    case Study::L0Crosscheck: return "l0_crosscheck";
  }
  return "unknown";
}

Study parse_study(std::string_view name) {
  for (Study s : {Study::NoiseFree, Study::Asymptotic, Study::VaryK, Study::Threshold, Study::Noisy,
                  Study::KernelSweep, Study::SigmaSearch, Study::L0Crosscheck}) {
    if (name == to_string(s)) return s;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown study '" + std::string(name) + "'");
}

StagedDatabaseSpec ExperimentConfig::base_spec() const {
  if (n0 > 0 && m > 0 && L > 0) {
    StagedDatabaseSpec s;
    s.n0 = n0;
    s.m = m;
    s.L = L;
    return s;
  }
  return database_spec(db);
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  if (stages.empty()) throw Error(ErrorCode::InvalidArgument, "no stages selected");
  for (int s : stages) stage_params(s);
  if (workers < 1) throw Error(ErrorCode::InvalidArgument, "workers must be at least 1");
  base_spec().validate();
}

// ---------------------------------------------------------------------------
// option parsing

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\"'");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\"'");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(std::string_view text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) throw Error(ErrorCode::InvalidArgument, "not a number: '" + t + "'");
  return v;
}

long long to_int(std::string_view text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) throw Error(ErrorCode::InvalidArgument, "not an integer: '" + t + "'");
  return v;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(sep, start);
    const auto end = pos == std::string_view::npos ? text.size() : pos;
    std::string item = trim(text.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool to_bool(std::string_view text) {
  const std::string t = trim(text);
  if (t == "1" || t == "true" || t == "yes" || t == "on" || t.empty()) return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw Error(ErrorCode::InvalidArgument, "not a boolean: '" + t + "'");
}

}  // namespace

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(static_cast<int>(to_int(item)));
      continue;
    }
    const auto lo = to_int(item.substr(0, dots));
    const auto hi = to_int(item.substr(dots + 2));
    if (hi < lo) throw Error(ErrorCode::InvalidArgument, "empty range '" + item + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty integer list");
  return out;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(item));
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty list");
  return out;
}

std::vector<double> parse_sigma_grid(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const auto count = to_int(parts[2]);
    if (count < 1) throw Error(ErrorCode::InvalidArgument, "grid needs at least one point");
    return geometric_grid(to_double(parts[0]), to_double(parts[1]), static_cast<std::size_t>(count));
  }
  if (parts.size() != 1) throw Error(ErrorCode::InvalidArgument, "grid must be start:factor:count or a list");
  auto g = parse_double_list(text);
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(g[i] > g[i - 1])) throw Error(ErrorCode::InvalidArgument, "sigma grid must be ascending");
  }
  return g;
}

void apply_option(ExperimentConfig& cfg, std::string_view key_in, std::string_view value) {
  std::string key = trim(key_in);
  std::replace(key.begin(), key.end(), '_', '-');
  while (!key.empty() && key.front() == '-') key.erase(key.begin());
  const auto as_count = [&](long long lo) {
    const auto v = to_int(value);
    if (v < lo) throw Error(ErrorCode::InvalidArgument, key + " must be at least " + std::to_string(lo));
    return v;
  };

  if (key == "study") {
    cfg.study = parse_study(trim(value));
  } else if (key == "db") {
    cfg.db = trim(value);
    database_spec(cfg.db);
  } else if (key == "n0") {
    cfg.n0 = static_cast<int>(as_count(1));
  } else if (key == "m") {
    cfg.m = static_cast<int>(as_count(1));
  } else if (key == "L" || key == "l") {
    cfg.L = static_cast<int>(as_count(1));
  } else if (key == "stages") {
    cfg.stages = parse_int_list(value);
  } else if (key == "trials") {
    cfg.trials = static_cast<std::size_t>(as_count(1));
  } else if (key == "seed") {
    cfg.master_seed = std::stoull(trim(value));
  } else if (key == "max-iters") {
    cfg.solver.max_iters = static_cast<std::size_t>(as_count(1));
  } else if (key == "support-threshold") {
    cfg.solver.support_threshold = to_double(value);
  } else if (key == "zeta") {
    cfg.zeta = to_double(value);
  } else if (key == "C" || key == "c") {
    cfg.C = to_double(value);
  } else if (key == "tau" || key == "taus") {
    cfg.taus = parse_double_list(value);
  } else if (key == "k") {
    cfg.k = static_cast<int>(as_count(0));
  } else if (key == "kcap") {
    cfg.k_cap = static_cast<int>(as_count(0));
  } else if (key == "m-values") {
    cfg.m_values = parse_int_list(value);
  } else if (key == "toy-n0") {
    cfg.toy_n0 = static_cast<int>(as_count(1));
  } else if (key == "toy-m") {
    cfg.toy_m = static_cast<int>(as_count(1));
  } else if (key == "toy-L" || key == "toy-l") {
    cfg.toy_L = static_cast<int>(as_count(1));
  } else if (key == "eta") {
    cfg.eta = to_double(value);
  } else if (key == "sigma-grid") {
    cfg.sigma_grid = parse_sigma_grid(value);
  } else if (key == "kcd-lambda") {
    cfg.kcd_lambda = to_double(value);
  } else if (key == "kcd-tol") {
    cfg.kcd.conv_tol = to_double(value);
  } else if (key == "kcd-max-sweeps") {
    cfg.kcd.max_sweeps = static_cast<std::size_t>(as_count(1));
  } else if (key == "per-class") {
    cfg.per_class = static_cast<int>(as_count(0));
  } else if (key == "normalize-tests") {
    cfg.normalize_tests = to_bool(value);
  } else if (key == "profile-class") {
    cfg.profile_class = static_cast<int>(as_count(0));
  } else if (key == "confidence") {
    cfg.confidence = to_double(value);
  } else if (key == "acc-tol") {
    cfg.acc_tol = to_double(value);
  } else if (key == "workers") {
    cfg.workers = static_cast<std::size_t>(as_count(1));
  } else if (key == "raw") {
    cfg.raw = to_bool(value);
  } else if (key == "o" || key == "out") {
    cfg.out_dir = trim(value);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown option '" + key + "'");
  }
}

// ---------------------------------------------------------------------------
// plumbing

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first) first = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

const CsvTable& StudyResult::table(std::string_view file) const {
  for (const auto& t : tables) {
    if (t.file == file) return t.table;
  }
  throw Error(ErrorCode::InvalidArgument, "no table '" + std::string(file) + "'");
}

void StudyResult::write(const std::string& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create directory '" + dir + "': " + ec.message());
  for (const auto& t : tables) t.table.write((std::filesystem::path(dir) / t.file).string());
}

namespace {

const std::vector<std::string> kRecoveryHeader{"stage", "err_l2", "err_supp", "err_supp_l2", "err_supp_l1", "mu"};
const std::vector<std::string> kRawHeader{"stage", "trial", "err_l2", "err_supp", "err_supp_l2",
                                          "err_supp_l1", "mu", "error"};

// One Monte-Carlo recovery trial.
struct RecoveryRecord {
  bool ok = false;
  std::string error;
  RecoveryErrors errors;
  double err_linf = 0.0;
  ResidualSummary residuals;
};

std::vector<bool> class_mask(const Dictionary& d, int cls) {
  std::vector<bool> mask(static_cast<std::size_t>(d.cols()), false);
  for (Eigen::Index j : d.class_columns(cls)) mask[static_cast<std::size_t>(j)] = true;
  return mask;
}

template <typename Fn>
std::vector<RecoveryRecord> run_trials(const ExperimentConfig& cfg, Fn&& trial) {
  std::vector<RecoveryRecord> out(cfg.trials);
  parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
    RecoveryRecord& r = out[t];
    try {
      trial(t, r);
      r.ok = true;
    } catch (const Error& e) {
      r.ok = false;
      r.error = std::string(to_string(e.code()));
    }
  });
  return out;
}

struct Means {
  std::size_t ok = 0;
  double err_l2 = 0, err_supp = 0, err_supp_l2 = 0, err_supp_l1 = 0, mu = 0, err_linf = 0;
  double err_truth = 0, min_other = 0;
};

// Arithmetic means over successful trials, accumulated in trial order.
Means average(const std::vector<RecoveryRecord>& recs) {
  Means m;
  for (const auto& r : recs) {
    if (!r.ok) continue;
    ++m.ok;
    m.err_l2 += r.errors.err_l2;
    m.err_supp += r.errors.err_supp;
    m.err_supp_l2 += r.errors.err_supp_l2;
    m.err_supp_l1 += r.errors.err_supp_l1;
    m.mu += r.errors.mu;
    m.err_linf += r.err_linf;
    m.err_truth += r.residuals.err_truth;
    m.min_other += r.residuals.min_other;
  }
  if (m.ok) {
    const double n = static_cast<double>(m.ok);
    for (double* v : {&m.err_l2, &m.err_supp, &m.err_supp_l2, &m.err_supp_l1, &m.mu, &m.err_linf, &m.err_truth,
                      &m.min_other}) {
      *v /= n;
    }
  } else {
    const double nan = std::nan("");
    m.err_l2 = m.err_supp = m.err_supp_l2 = m.err_supp_l1 = m.mu = m.err_linf = m.err_truth = m.min_other = nan;
  }
  return m;
}

std::size_t count_failed(const std::vector<RecoveryRecord>& recs) {
  return static_cast<std::size_t>(std::count_if(recs.begin(), recs.end(), [](const auto& r) { return !r.ok; }));
}

void add_raw_rows(CsvTable& raw, const std::string& key, const std::vector<RecoveryRecord>& recs) {
  for (std::size_t t = 0; t < recs.size(); ++t) {
    const auto& r = recs[t];
    const auto& e = r.errors;
    std::vector<std::string> row{key, std::to_string(t)};
    for (double v : {e.err_l2, e.err_supp, e.err_supp_l2, e.err_supp_l1, e.mu}) {
      row.push_back(r.ok ? format_double(v) : "nan");
    }
    row.push_back(r.ok ? "" : r.error);
    raw.add_row(row);
  }
}

std::string study_file(const ExperimentConfig& cfg, std::string_view suffix = "") {
  return std::string(to_string(cfg.study)) + std::string(suffix) + ".csv";
}

// Basis pursuit on a fresh staged instance, errors against α0.
RecoveryRecord recovery_trial(const ExperimentConfig& cfg, StagedDatabaseSpec spec, std::optional<int> k) {
  RecoveryRecord r;
  const GeneratedInstance inst = gen_staged(spec, k);
  const SolverResult sol = basis_pursuit(inst.dictionary, inst.y0, cfg.solver);
  r.errors = recovery_errors(sol.alpha, inst.alpha0, class_mask(inst.dictionary, 1),
                             mutual_coherence(inst.dictionary), cfg.solver.support_threshold);
  return r;
}

StudyResult recovery_sweep(const ExperimentConfig& cfg, std::optional<int> k) {
  cfg.validate();
  StudyResult res;
  CsvTable table(kRecoveryHeader);
  CsvTable raw(kRawHeader);
  for (int stage : cfg.stages) {
    StagedDatabaseSpec spec = cfg.base_spec();
    spec.stage = stage;
    const auto recs = run_trials(cfg, [&](std::size_t t, RecoveryRecord& r) {
      StagedDatabaseSpec s = spec;
      s.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(stage), t, "trial");
      r = recovery_trial(cfg, s, k);
    });
    const Means m = average(recs);
    table.add_row({static_cast<double>(stage), m.err_l2, m.err_supp, m.err_supp_l2, m.err_supp_l1, m.mu});
    if (cfg.raw) add_raw_rows(raw, std::to_string(stage), recs);
    res.failed_trials += count_failed(recs);
  }
  res.tables.push_back({study_file(cfg), std::move(table)});
  if (cfg.raw) res.tables.push_back({study_file(cfg, "_raw"), std::move(raw)});
  return res;
}

}  // namespace

// ---------------------------------------------------------------------------
// recovery studies

StudyResult run_noise_free(const ExperimentConfig& cfg) { return recovery_sweep(cfg, std::nullopt); }

StudyResult run_vary_k(const ExperimentConfig& cfg) {
  const int n0 = cfg.base_spec().n0;
  const int k = cfg.k == 0 ? n0 : cfg.k;
  if (k > n0) throw Error(ErrorCode::InvalidArgument, "k must not exceed N0");
  return recovery_sweep(cfg, k);
}

StudyResult run_asymptotic(const ExperimentConfig& cfg) {
  cfg.validate();
  StudyResult res;
  CsvTable table({"m", "n0", "L", "stage", "err_l2", "err_supp", "err_supp_l2", "err_supp_l1", "mu"});
  CsvTable raw(kRawHeader);
  const StagedDatabaseSpec base = cfg.base_spec();
  for (int m_new : cfg.m_values) {
    for (int stage : cfg.stages) {
      StagedDatabaseSpec spec = scale_spec_nearest(base, m_new);
      spec.stage = stage;
      const std::string tag = "asymptotic-" + std::to_string(m_new);
      const auto recs = run_trials(cfg, [&](std::size_t t, RecoveryRecord& r) {
        StagedDatabaseSpec s = spec;
        s.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(stage), t, tag);
        r = recovery_trial(cfg, s, std::nullopt);
      });
      const Means m = average(recs);
      table.add_row({static_cast<double>(spec.m), static_cast<double>(spec.n0), static_cast<double>(spec.L),
                     static_cast<double>(stage), m.err_l2, m.err_supp, m.err_supp_l2, m.err_supp_l1, m.mu});
      if (cfg.raw) add_raw_rows(raw, std::to_string(m_new) + ":" + std::to_string(stage), recs);
      res.failed_trials += count_failed(recs);
    }
  }
  res.tables.push_back({study_file(cfg), std::move(table)});
  if (cfg.raw) res.tables.push_back({study_file(cfg, "_raw"), std::move(raw)});
  return res;
}

StudyResult run_threshold_study(const ExperimentConfig& cfg) {
  cfg.validate();
  for (double tau : cfg.taus) {
    if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "thresholds must be positive");
  }
  StudyResult res;
  CsvTable table({"tau", "stage", "err_l2", "err_supp", "err_supp_l2", "err_supp_l1", "mu", "err_linf"});
  CsvTable raw(kRawHeader);
  for (double tau : cfg.taus) {
    for (int stage : cfg.stages) {
      StagedDatabaseSpec spec = cfg.base_spec();
      spec.stage = stage;
      const auto recs = run_trials(cfg, [&](std::size_t t, RecoveryRecord& r) {
        StagedDatabaseSpec s = spec;
        s.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(stage), t, "trial");
        const GeneratedInstance inst = gen_staged(s);
        const SolverResult sol = basis_pursuit(inst.dictionary, inst.y0, cfg.solver);
        const CoefVector refit = threshold_and_refit(inst.dictionary, inst.y0, sol.alpha, tau);
        r.errors = recovery_errors(refit, inst.alpha0, class_mask(inst.dictionary, 1),
                                   mutual_coherence(inst.dictionary), cfg.solver.support_threshold);
        r.err_linf = (refit.entries - inst.alpha0.entries).lpNorm<Eigen::Infinity>();
      });
      const Means m = average(recs);
      table.add_row({tau, static_cast<double>(stage), m.err_l2, m.err_supp, m.err_supp_l2, m.err_supp_l1, m.mu,
                     m.err_linf});
      if (cfg.raw) add_raw_rows(raw, format_double(tau) + ":" + std::to_string(stage), recs);
      res.failed_trials += count_failed(recs);
    }
  }
  res.tables.push_back({study_file(cfg), std::move(table)});
  if (cfg.raw) res.tables.push_back({study_file(cfg, "_raw"), std::move(raw)});
  return res;
}

StudyResult run_noisy(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!(cfg.zeta > 0.0) || !(cfg.C > 0.0)) throw Error(ErrorCode::InvalidArgument, "zeta and C must be positive");
  const double eps = cfg.C * cfg.zeta;
  StudyResult res;
  CsvTable table(kRecoveryHeader);
  CsvTable residuals({"db", "stage", "err_truth", "min_other"});
  CsvTable raw({"stage", "trial", "err_l2", "err_supp", "err_supp_l2", "err_supp_l1", "mu", "err_truth",
                "min_other", "error"});
  const std::string db_name = (cfg.n0 > 0 && cfg.m > 0 && cfg.L > 0)
                                  ? std::to_string(cfg.n0) + "x" + std::to_string(cfg.m) + "x" + std::to_string(cfg.L)
                                  : cfg.db;
  for (int stage : cfg.stages) {
    StagedDatabaseSpec spec = cfg.base_spec();
    spec.stage = stage;
    const auto st = static_cast<std::uint64_t>(stage);
    const auto recs = run_trials(cfg, [&](std::size_t t, RecoveryRecord& r) {
      StagedDatabaseSpec s = spec;
      s.seed = derive_seed(cfg.master_seed, st, t, "trial");
      const GeneratedInstance inst = add_noise(gen_staged(s), cfg.zeta, derive_seed(cfg.master_seed, st, t, "noise"));
      const SolverResult sol = bpdn_constrained(inst.dictionary, inst.sample(), eps, cfg.solver);
      r.errors = recovery_errors(sol.alpha, inst.alpha0, class_mask(inst.dictionary, 1),
                                 mutual_coherence(inst.dictionary), cfg.solver.support_threshold);
      const ClassDecision dec = decide_from_coefficients(inst.dictionary, inst.sample(), sol.alpha);
      r.residuals = class_residual_summary({dec}, 1);
    });
    const Means m = average(recs);
    table.add_row({static_cast<double>(stage), m.err_l2, m.err_supp, m.err_supp_l2, m.err_supp_l1, m.mu});
    residuals.add_row(std::vector<std::string>{db_name, std::to_string(stage), format_double(m.err_truth),
                                               format_double(m.min_other)});
    if (cfg.raw) {
      for (std::size_t t = 0; t < recs.size(); ++t) {
        const auto& r = recs[t];
        const auto& e = r.errors;
        std::vector<std::string> row{std::to_string(stage), std::to_string(t)};
        for (double v : {e.err_l2, e.err_supp, e.err_supp_l2, e.err_supp_l1, e.mu, r.residuals.err_truth,
                         r.residuals.min_other}) {
          row.push_back(r.ok ? format_double(v) : "nan");
        }
        row.push_back(r.ok ? "" : r.error);
        raw.add_row(row);
      }
    }
    res.failed_trials += count_failed(recs);
  }
  res.tables.push_back({study_file(cfg), std::move(table)});
  res.tables.push_back({"residuals.csv", std::move(residuals)});
  if (cfg.raw) res.tables.push_back({study_file(cfg, "_raw"), std::move(raw)});
  return res;
}

StudyResult run_l0_crosscheck(const ExperimentConfig& cfg) {
  cfg.validate();
  const StagedDatabaseSpec base = cfg.base_spec();
  const int k = cfg.k == 0 ? base.n0 : cfg.k;
  const int k_cap = cfg.k_cap == 0 ? base.n0 : cfg.k_cap;
  if (k > base.n0) throw Error(ErrorCode::InvalidArgument, "k must not exceed N0");
  if (binomial(static_cast<std::size_t>(base.n_train()), static_cast<std::size_t>(k_cap)) > kMaxEnumeration) {
    throw Error(ErrorCode::CombinatorialBlowup, "instance too large for the l0 oracle");
  }
  StudyResult res;
  CsvTable table({"stage", "trials", "agreement", "certified", "certified_agreement"});
  CsvTable raw({"stage", "trial", "l0_bp", "l0_oracle", "agree", "certified", "error"});
  for (int stage : cfg.stages) {
    StagedDatabaseSpec spec = base;
    spec.stage = stage;
    struct Rec {
      bool ok = false;
      std::string error;
      std::size_t l0_bp = 0, l0_oracle = 0;
      bool agree = false, certified = false;
    };
    std::vector<Rec> recs(cfg.trials);
    parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
      Rec& r = recs[t];
      try {
        StagedDatabaseSpec s = spec;
        s.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(stage), t, "trial");
        const GeneratedInstance inst = gen_staged(s, k);
        const SolverResult bp = basis_pursuit(inst.dictionary, inst.y0, cfg.solver);
        const CoefVector oracle = l0_oracle(inst.dictionary, inst.y0, static_cast<std::size_t>(k_cap));
        r.l0_bp = bp.alpha.l0();
        r.l0_oracle = oracle.l0();
        r.agree = bp.alpha.support() == oracle.support();
        r.certified = certificate(inst.dictionary).verdict_noiseless(static_cast<double>(r.l0_bp));
        r.ok = true;
      } catch (const Error& e) {
        r.error = std::string(to_string(e.code()));
      }
    });
    double ok = 0, agree = 0, cert = 0, cert_agree = 0;
    for (std::size_t t = 0; t < recs.size(); ++t) {
      const Rec& r = recs[t];
      if (r.ok) {
        ok += 1;
        agree += r.agree;
        cert += r.certified;
        cert_agree += r.certified && r.agree;
      } else {
        ++res.failed_trials;
      }
      if (cfg.raw) {
        raw.add_row(std::vector<std::string>{std::to_string(stage), std::to_string(t), std::to_string(r.l0_bp),
                                             std::to_string(r.l0_oracle), r.agree ? "1" : "0",
                                             r.certified ? "1" : "0", r.error});
      }
    }
    const double nan = std::nan("");
    table.add_row({static_cast<double>(stage), ok, ok ? agree / ok : nan, ok ? cert / ok : nan,
                   cert ? cert_agree / cert : nan});
  }
  res.tables.push_back({study_file(cfg), std::move(table)});
  if (cfg.raw) res.tables.push_back({study_file(cfg, "_raw"), std::move(raw)});
  return res;
}

// ---------------------------------------------------------------------------
// kernel studies

std::vector<std::vector<KernelTrialOutcome>> kernel_grid_outcomes(const ExperimentConfig& cfg,
                                                                  const std::vector<double>& grid) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty sigma grid");
  if (cfg.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  const int per_class = cfg.per_class == 0 ? cfg.toy_n0 : cfg.per_class;
  std::vector<std::vector<KernelTrialOutcome>> out(grid.size(), std::vector<KernelTrialOutcome>(cfg.trials));
  parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
    const Dictionary d =
        gen_toy_kernel_db(cfg.toy_n0, cfg.toy_m, cfg.toy_L, cfg.eta, derive_seed(cfg.master_seed, 0, t, "toy"));
    // Coefficients do not depend on σ; draw them once per trial.
    const std::uint64_t test_seed = derive_seed(cfg.master_seed, 0, t, "tests");
    const std::vector<KernelTestSample> raw_tests = gen_kernel_test_samples(gaussian_gram(d, grid.front()),
                                                                            per_class, test_seed);
    for (std::size_t s = 0; s < grid.size(); ++s) {
      const KernelModel k = gaussian_gram(d, grid[s]);
      std::vector<KernelTestSample> tests = raw_tests;
      if (cfg.normalize_tests) {
        for (auto& x : tests) x.coefs.entries /= std::sqrt(x.self_inner(k));
      }
      KernelTrialOutcome& o = out[s][t];
      o.mu_kernel = k.mu_kernel();
      for (const auto& x : tests) {
        ClassDecision dec = ksrc_classify(k, x, cfg.kcd_lambda, cfg.kcd);
        o.not_converged += !dec.converged;
        o.truth.push_back(x.label);
        o.decisions.push_back(std::move(dec));
      }
      const Correlations c = correlation_diagnostics(k, tests);
      o.corr_gt = c.corr_gt;
      o.corr_other = c.corr_other;
    }
  });
  return out;
}

namespace {

std::vector<int> toy_labels(const ExperimentConfig& cfg) {
  std::vector<int> labels;
  for (int l = 1; l <= cfg.toy_L; ++l) labels.insert(labels.end(), static_cast<std::size_t>(cfg.toy_n0), l);
  return labels;
}

std::vector<double> kernel_grid(const ExperimentConfig& cfg) {
  return cfg.sigma_grid.empty() ? geometric_grid(0.2, 1.15, 20) : cfg.sigma_grid;
}

struct SigmaSummary {
  SigmaSearchResult mc;
  bool mc_defined = false;
  SigmaSearchResult acc;
  double max_accuracy = 0.0;
};

SigmaSummary summarize(const ExperimentConfig& cfg, const std::vector<double>& grid,
                       const std::vector<std::vector<KernelTrialOutcome>>& outcomes,
                       const std::vector<SweepPoint>& points) {
  SigmaSummary s;
  std::vector<double> accuracy;
  for (const auto& p : points) accuracy.push_back(p.accuracy);
  s.acc = sigma_acc_search(grid, accuracy, cfg.acc_tol);
  s.max_accuracy = *std::max_element(accuracy.begin(), accuracy.end());
  std::vector<double> below;
  std::vector<std::vector<KernelTrialOutcome>> below_out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < kernel_sigma_cap()) {
      below.push_back(grid[i]);
      below_out.push_back(outcomes[i]);
    }
  }
  if (!below.empty()) {
    s.mc = sigma_mc_search(below, below_out, cfg.confidence, cfg.kcd.support_threshold);
    s.mc_defined = true;
  }
  return s;
}

CsvTable summary_table(const ExperimentConfig& cfg, const SigmaSummary& s) {
  CsvTable t({"eta", "sigma_mc", "sigma_mc_flag", "sigma_acc", "max_accuracy"});
  t.add_row(std::vector<std::string>{format_double(cfg.eta), s.mc_defined ? format_double(s.mc.sigma) : "nan",
                                     (!s.mc_defined || s.mc.no_qualifying_sigma) ? "1" : "0",
                                     format_double(s.acc.sigma), format_double(s.max_accuracy)});
  return t;
}

}  // namespace

StudyResult run_kernel_sweep(const ExperimentConfig& cfg) {
  const std::vector<double> grid = kernel_grid(cfg);
  const auto outcomes = kernel_grid_outcomes(cfg, grid);
  const std::vector<int> labels = toy_labels(cfg);
  const int target = cfg.profile_class == 0 ? cfg.toy_L : cfg.profile_class;
  if (target < 1 || target > cfg.toy_L) throw Error(ErrorCode::InvalidArgument, "profile class out of range");

  StudyResult res;
  CsvTable table({"sigma", "sparsity", "accuracy", "supp_l2", "supp_l1", "corr_gt", "corr_other"});
  CsvTable profile({"sigma", "class", "share"});
  CsvTable raw({"sigma", "trial", "mu_kernel", "sparsity", "accuracy", "supp_l2", "supp_l1", "corr_gt",
                "corr_other", "not_converged"});
  std::vector<SweepPoint> points;
  for (std::size_t s = 0; s < grid.size(); ++s) {
    const SweepPoint p = kernel_sweep_point(grid[s], outcomes[s], labels, cfg.kcd.support_threshold);
    points.push_back(p);
    table.add_row({p.sigma_or_stage, p.sparsity, p.accuracy, p.supp_l2, p.supp_l1, p.corr_gt, p.corr_other});

    std::vector<std::vector<CoefVector>> batch;
    for (const auto& o : outcomes[s]) {
      std::vector<CoefVector> trial;
      for (std::size_t i = 0; i < o.decisions.size(); ++i) {
        if (o.truth[i] == target) trial.push_back(o.decisions[i].coef);
      }
      batch.push_back(std::move(trial));
    }
    const ContributionProfile prof = class_contribution_profile(batch, labels);
    for (std::size_t l = 0; l < prof.class_sums.size(); ++l) {
      profile.add_row({grid[s], static_cast<double>(l + 1), prof.class_sums[l]});
    }
    for (std::size_t t = 0; t < outcomes[s].size(); ++t) {
      const auto& o = outcomes[s][t];
      const SweepPoint q = kernel_sweep_point(grid[s], {o}, labels, cfg.kcd.support_threshold);
      raw.add_row({grid[s], static_cast<double>(t), o.mu_kernel, q.sparsity, q.accuracy, q.supp_l2, q.supp_l1,
                   q.corr_gt, q.corr_other, static_cast<double>(o.not_converged)});
      res.not_converged += o.not_converged;
    }
  }
  res.tables.push_back({"kernel_sweep.csv", std::move(table)});
  res.tables.push_back({"kernel_summary.csv", summary_table(cfg, summarize(cfg, grid, outcomes, points))});
  res.tables.push_back({"kernel_profile.csv", std::move(profile)});
  if (cfg.raw) res.tables.push_back({"kernel_sweep_raw.csv", std::move(raw)});
  return res;
}

StudyResult run_sigma_search(const ExperimentConfig& cfg) {
  const std::vector<double> grid = kernel_grid(cfg);
  const auto outcomes = kernel_grid_outcomes(cfg, grid);
  const std::vector<int> labels = toy_labels(cfg);
  std::vector<SweepPoint> points;
  StudyResult res;
  for (std::size_t s = 0; s < grid.size(); ++s) {
    points.push_back(kernel_sweep_point(grid[s], outcomes[s], labels, cfg.kcd.support_threshold));
    for (const auto& o : outcomes[s]) res.not_converged += o.not_converged;
  }
  res.tables.push_back({"sigma_search.csv", summary_table(cfg, summarize(cfg, grid, outcomes, points))});
  return res;
}

StudyResult run_study(const ExperimentConfig& cfg) {
  switch (cfg.study) {
    case Study::NoiseFree: return run_noise_free(cfg);
    case Study::Asymptotic: return run_asymptotic(cfg);
    case Study::VaryK: return run_vary_k(cfg);
    case Study::Threshold: return run_threshold_study(cfg);
    case Study::Noisy: return run_noisy(cfg);
    case Study::KernelSweep: return run_kernel_sweep(cfg);
    case Study::SigmaSearch: return run_sigma_search(cfg);
    case Study::L0Crosscheck: return run_l0_crosscheck(cfg);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown study");
}

}  // namespace sparselab
