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

// Command-line front end: coherence certificates, solvers, generators,
// classifiers and the experiment studies.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sparselab/classify.hpp"
#include "sparselab/coherence.hpp"
#include "sparselab/csv_io.hpp"
#include "sparselab/datagen.hpp"
#include "sparselab/error.hpp"
#include "sparselab/experiments.hpp"
#include "sparselab/rng.hpp"
#include "sparselab/solvers.hpp"

namespace sl = sparselab;

namespace {

sl::Dictionary load_dictionary(const std::string& x_path, const std::string& labels_path, bool normalize) {
  const sl::Mat raw = sl::read_matrix(x_path);
  if (labels_path.empty()) return normalize ? sl::Dictionary::normalized(raw) : sl::Dictionary(raw);
  auto labels = sl::read_labels(labels_path);
  return normalize ? sl::Dictionary::normalized(raw, std::move(labels)) : sl::Dictionary(raw, std::move(labels));
}

std::string fmt(double v) { return sl::format_double(v); }

void print_vector_csv(std::ostream& os, const sl::Vec& v) { sl::write_matrix(os, sl::Mat(v)); }

std::string out_path(const std::string& dir, const char* file) {
  return (std::filesystem::path(dir) / file).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw sl::Error(sl::ErrorCode::Io, "cannot create " + dir + ": " + ec.message());
}

// ---- coherence -------------------------------------------------------------

struct CoherenceArgs {
  std::string x, labels, y;
  std::optional<int> k;
  bool normalize = false;
  std::optional<int> scan_k;
};

int cmd_coherence(const CoherenceArgs& a) {
  const sl::Dictionary d = load_dictionary(a.x, a.labels, a.normalize);
  const sl::RecoveryCertificate c = sl::certificate(d);
  std::cout << "m," << d.rows() << "\nN," << d.cols() << "\nmu," << fmt(c.mu) << '\n';
  if (c.welch_bound) std::cout << "welch_bound," << fmt(*c.welch_bound) << "\nslack," << fmt(*c.slack()) << '\n';
  std::cout << "k_max_noiseless," << fmt(c.k_max_noiseless) << "\nk_max_noisy," << fmt(c.k_max_noisy) << '\n';
  if (a.k) {
    std::cout << "verdict_noiseless," << (c.verdict_noiseless(*a.k) ? "certified" : "not_certified") << '\n';
    std::cout << "verdict_noisy," << (c.verdict_noisy(*a.k) ? "certified" : "not_certified") << '\n';
    const sl::StabilityConstants s = sl::stability_constants(std::min(c.mu, 1.0), static_cast<std::size_t>(*a.k));
    std::cout << "beta," << fmt(s.beta) << '\n';
    if (s.gamma) std::cout << "gamma," << fmt(*s.gamma) << "\nC," << fmt(*s.C) << '\n';
    std::cout << "error_bound_defined," << (s.error_bound_defined() ? 1 : 0) << '\n';
  }
  if (!a.y.empty()) {
    sl::Vec y = sl::read_vector(a.y);
    y /= y.norm();
    const auto aug = sl::coherence_with_test(d, y);
    std::cout << "mu_with_test," << fmt(aug.mu_aug) << "\ncoherence_increased," << (aug.increased ? 1 : 0) << '\n';
  }
  if (a.scan_k) {
    const auto v = sl::spark_violation_scan(d, static_cast<std::size_t>(*a.scan_k), 1);
    std::cout << "spark_violation_at_k," << (v.empty() ? 0 : 1) << '\n';
    if (!v.empty()) {
      std::cout << "violating_support,";
      for (std::size_t i = 0; i < v[0].support.size(); ++i) std::cout << (i ? ";" : "") << v[0].support[i];
      std::cout << "\nspanned_column," << v[0].spanned_column << '\n';
    }
  }
  return 0;
}

// ---- solve -----------------------------------------------------------------

struct SolveArgs {
  std::string x, y, mode = "bp", out;
  double lambda = 0.0, eps = 0.0, tau = sl::kSupportThreshold;
  int kcap = 3;
  bool normalize = false;
  std::size_t max_iters = 100000;
};

int cmd_solve(const SolveArgs& a) {
  const sl::Dictionary d = load_dictionary(a.x, "", a.normalize);
  const sl::Vec y = sl::read_vector(a.y);
  sl::SolverConfig cfg;
  cfg.support_threshold = a.tau;
  cfg.max_iters = a.max_iters;
  sl::Vec alpha;
  std::size_t iters = 0;
  std::optional<sl::Vec> z;
  if (a.mode == "bp") {
    const auto r = sl::basis_pursuit(d, y, cfg);
    alpha = r.alpha.entries;
    iters = r.iterations;
  } else if (a.mode == "lasso") {
    const auto r = sl::lasso_homotopy(d, y, a.lambda, cfg);
    alpha = r.alpha.entries;
    iters = r.iterations;
  } else if (a.mode == "bpdn") {
    const auto r = sl::bpdn_constrained(d, y, a.eps, cfg);
    alpha = r.alpha.entries;
    iters = r.iterations;
    if (r.trivial) std::cerr << "note: eps >= ||y||, returning the zero vector\n";
  } else if (a.mode == "sigerr") {
    const auto r = sl::signal_error_bp(d, y, cfg);
    alpha = r.alpha.alpha.entries;
    iters = r.alpha.iterations;
    z = r.z;
  } else if (a.mode == "oracle") {
    alpha = sl::l0_oracle(d, y, static_cast<std::size_t>(a.kcap)).entries;
  } else {
    throw sl::Error(sl::ErrorCode::InvalidArgument, "unknown mode '" + a.mode + "'");
  }
  const sl::CoefVector c(alpha, a.tau);
  sl::Vec fit = d.data() * alpha;
  if (z) fit += *z;
  std::ostream* diag = &std::cerr;
  if (!a.out.empty()) {
    sl::write_vector(a.out, alpha);
    if (z) sl::write_vector(a.out + ".z.csv", *z);
    diag = &std::cout;
  } else {
    print_vector_csv(std::cout, alpha);
  }
  *diag << "residual=" << fmt((y - fit).norm()) << " l1=" << fmt(c.l1()) << " l0=" << c.l0()
        << " iterations=" << iters << '\n';
  return 0;
}

// ---- gen -------------------------------------------------------------------

struct GenStagedArgs {
  int n0 = 5, m = 50, L = 20, stage = 1, k = 0;
  std::uint64_t seed = 0;
  double zeta = 0.0;
  std::string db, out = ".";
};

int cmd_gen_staged(const GenStagedArgs& a) {
  sl::StagedDatabaseSpec s;
  if (!a.db.empty()) s = sl::database_spec(a.db);
  else s.n0 = a.n0, s.m = a.m, s.L = a.L;
  s.stage = a.stage;
  s.seed = a.seed;
  sl::GeneratedInstance inst = sl::gen_staged(s, a.k > 0 ? std::optional<int>(a.k) : std::nullopt);
  if (a.zeta > 0.0) inst = sl::add_noise(std::move(inst), a.zeta, a.seed);
  ensure_dir(a.out);
  sl::write_matrix(out_path(a.out, "X_tr.csv"), inst.dictionary.data());
  sl::write_labels(out_path(a.out, "labels.csv"), inst.dictionary.labels());
  sl::write_vector(out_path(a.out, "alpha0.csv"), inst.alpha0.entries);
  sl::write_vector(out_path(a.out, "y0.csv"), inst.y0);
  sl::write_vector(out_path(a.out, "y.csv"), inst.sample());
  std::cout << "wrote " << inst.dictionary.rows() << "x" << inst.dictionary.cols() << " stage-" << s.stage
            << " instance to " << a.out << '\n';
  return 0;
}

struct GenToyArgs {
  int n0 = 5, m = 50, L = 20, per_class = 0;
  double eta = 0.1;
  std::uint64_t seed = 0;
  std::string out = ".";
};

int cmd_gen_toy(const GenToyArgs& a) {
  const sl::Dictionary d = sl::gen_toy_kernel_db(a.n0, a.m, a.L, a.eta, a.seed);
  ensure_dir(a.out);
  sl::write_matrix(out_path(a.out, "X_tr.csv"), d.data());
  sl::write_labels(out_path(a.out, "labels.csv"), d.labels());
  if (a.per_class > 0) {
    // Coefficients do not depend on σ; any width gives the same draws.
    const auto tests = sl::gen_kernel_test_samples(sl::gaussian_gram(d, 1.0), a.per_class, a.seed);
    sl::Mat t(static_cast<Eigen::Index>(tests.size()), d.cols() + 1);
    for (std::size_t i = 0; i < tests.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      t.row(r).head(d.cols()) = tests[i].coefs.entries.transpose();
      t(r, d.cols()) = tests[i].label;
    }
    sl::write_matrix(out_path(a.out, "tests.csv"), t);
  }
  std::cout << "wrote toy database " << d.rows() << "x" << d.cols() << " to " << a.out << '\n';
  return 0;
}

// ---- src / ksrc ------------------------------------------------------------

struct SrcArgs {
  std::string x, labels, y;
  std::optional<double> lambda, eps;
  bool normalize = false;
};

void print_decision(const sl::ClassDecision& dec) {
  std::cout << "label," << dec.label << "\nclass,residual\n";
  for (std::size_t l = 0; l < dec.residuals.size(); ++l) std::cout << l + 1 << ',' << fmt(dec.residuals[l]) << '\n';
}

int cmd_src(const SrcArgs& a) {
  const sl::Dictionary d = load_dictionary(a.x, a.labels, a.normalize);
  const sl::Vec y = sl::read_vector(a.y);
  sl::SolverConfig cfg;
  if (a.lambda) cfg = sl::SolverConfig::lasso(*a.lambda);
  if (a.eps) cfg = sl::SolverConfig::bpdn(*a.eps);
  print_decision(sl::src_classify(d, y, cfg));
  return 0;
}

struct KsrcArgs {
  std::string x, labels, tests;
  double sigma = 1.0, lambda = 1e-10;
  bool normalize = false, normalize_tests = false;
  std::size_t max_sweeps = 100000;
};

int cmd_ksrc(const KsrcArgs& a) {
  const sl::Dictionary d = load_dictionary(a.x, a.labels, a.normalize);
  const sl::KernelModel k = sl::gaussian_gram(d, a.sigma);
  const sl::Mat t = sl::read_matrix(a.tests);
  if (t.cols() != d.cols() + 1) {
    throw sl::Error(sl::ErrorCode::DimensionMismatch, "tests.csv needs N coefficient columns plus a label column");
  }
  sl::KcdConfig kcfg;
  kcfg.max_sweeps = a.max_sweeps;
  std::cout << "test,truth,label,l0,converged\n";
  std::size_t correct = 0;
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    sl::KernelTestSample s{sl::CoefVector(t.row(i).head(d.cols()).transpose()),
                           static_cast<int>(std::lround(t(i, d.cols())))};
    if (a.normalize_tests) s.coefs.entries /= std::sqrt(s.self_inner(k));
    const sl::ClassDecision dec = sl::ksrc_classify(k, s, a.lambda, kcfg);
    correct += dec.label == s.label;
    std::cout << i << ',' << s.label << ',' << dec.label << ',' << dec.coef.l0() << ',' << (dec.converged ? 1 : 0)
              << '\n';
  }
  std::cerr << "mu_kernel=" << fmt(k.mu_kernel()) << " accuracy=" << fmt(double(correct) / double(t.rows()))
            << " sigma_cap=" << fmt(sl::kernel_sigma_cap()) << '\n';
  return 0;
}

// ---- exp -------------------------------------------------------------------

int cmd_exp(const std::string& study, const std::map<std::string, std::string>& opts) {
  sl::ExperimentConfig cfg;
  cfg.study = sl::parse_study(study);
  if (cfg.study == sl::Study::Asymptotic) cfg.stages = {1};
  for (const auto& [key, value] : opts) sl::apply_option(cfg, key, value);
  const sl::StudyResult r = sl::run_study(cfg);
  r.write(cfg.out_dir);
  for (const auto& t : r.tables) std::cout << "wrote " << out_path(cfg.out_dir, t.file.c_str()) << '\n';
  if (r.failed_trials) std::cerr << r.failed_trials << " trial(s) failed; see the raw dump for error codes\n";
  if (r.not_converged) std::cerr << r.not_converged << " KCD run(s) hit the sweep limit\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparselab: coherence certificates, l1 solvers and SRC experiments"};
  app.require_subcommand(1);

  CoherenceArgs coh;
  auto* c = app.add_subcommand("coherence", "mutual coherence, Welch bound and recovery certificate");
  c->add_option("X", coh.x, "dictionary CSV")->required()->check(CLI::ExistingFile);
  c->add_option("--labels", coh.labels, "labels CSV");
  c->add_option("--k", coh.k, "sparsity level to certify");
  c->add_option("--test", coh.y, "test sample CSV for the augmented coherence");
  c->add_option("--scan", coh.scan_k, "run the spark-violation scan at this k");
  c->add_flag("--normalize", coh.normalize, "normalise columns first");

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "l1 solvers and the l0 oracle");
  s->add_option("X", sol.x, "dictionary CSV")->required()->check(CLI::ExistingFile);
  s->add_option("y", sol.y, "sample CSV")->required()->check(CLI::ExistingFile);
  s->add_option("--mode", sol.mode, "bp | lasso | bpdn | sigerr | oracle")
      ->check(CLI::IsMember({"bp", "lasso", "bpdn", "sigerr", "oracle"}));
  s->add_option("--lambda", sol.lambda, "lasso trade-off");
  s->add_option("--eps", sol.eps, "bpdn residual tolerance");
  s->add_option("--tau", sol.tau, "support threshold");
  s->add_option("--kcap", sol.kcap, "oracle sparsity cap");
  s->add_option("--max-iters", sol.max_iters, "homotopy event limit");
  s->add_option("-o,--out", sol.out, "coefficient CSV (stdout when omitted)");
  s->add_flag("--normalize", sol.normalize, "normalise columns first");

  auto* g = app.add_subcommand("gen", "synthetic databases");
  g->require_subcommand(1);
  GenStagedArgs gs;
  auto* gst = g->add_subcommand("staged", "staged bouquet database with a class-1 test sample");
  gst->add_option("--db", gs.db, "DB-1 .. DB-4 (overrides --n0/--m/--L)");
  gst->add_option("--n0", gs.n0);
  gst->add_option("--m", gs.m);
  gst->add_option("--L", gs.L);
  gst->add_option("--stage", gs.stage)->check(CLI::Range(1, 11));
  gst->add_option("--k", gs.k, "support only the first k class-1 columns");
  gst->add_option("--seed", gs.seed);
  gst->add_option("--zeta", gs.zeta, "noise level (0 = noiseless)");
  gst->add_option("-o,--out", gs.out);
  GenToyArgs gt;
  auto* gto = g->add_subcommand("toy", "toy database for the kernel experiments");
  gto->add_option("--n0", gt.n0);
  gto->add_option("--m", gt.m);
  gto->add_option("--L", gt.L);
  gto->add_option("--eta", gt.eta);
  gto->add_option("--seed", gt.seed);
  gto->add_option("--tests-per-class", gt.per_class, "also write tests.csv");
  gto->add_option("-o,--out", gt.out);

  SrcArgs sa;
  auto* sr = app.add_subcommand("src", "sparse representation-based classification");
  sr->add_option("X", sa.x)->required()->check(CLI::ExistingFile);
  sr->add_option("labels", sa.labels)->required()->check(CLI::ExistingFile);
  sr->add_option("y", sa.y)->required()->check(CLI::ExistingFile);
  auto* lam = sr->add_option("--lambda", sa.lambda, "lasso instead of basis pursuit");
  auto* eps = sr->add_option("--eps", sa.eps, "bpdn instead of basis pursuit");
  sr->add_flag("--bp", "basis pursuit (default)")->excludes(lam)->excludes(eps);
  lam->excludes(eps);
  sr->add_flag("--normalize", sa.normalize, "normalise columns first");

  KsrcArgs ka;
  auto* ks = app.add_subcommand("ksrc", "kernel SRC with the Gaussian kernel");
  ks->add_option("X", ka.x)->required()->check(CLI::ExistingFile);
  ks->add_option("labels", ka.labels)->required()->check(CLI::ExistingFile);
  ks->add_option("--sigma", ka.sigma)->required();
  ks->add_option("--lambda", ka.lambda);
  ks->add_option("--tests", ka.tests, "rows of coefficients c plus a trailing label")->required();
  ks->add_option("--max-sweeps", ka.max_sweeps);
  ks->add_flag("--normalize", ka.normalize, "normalise columns first");
  ks->add_flag("--normalize-tests", ka.normalize_tests, "scale each c to unit feature-space norm");

  std::string study;
  std::map<std::string, std::string> exp_opts;
  auto* e = app.add_subcommand("exp", "run a study and write CSV files");
  e->add_option("study", study,
                "noise_free | asymptotic | vary_k | threshold | noisy | kernel_sweep | sigma_search | l0_crosscheck")
      ->required();
  e->set_config("--config", "", "key=value file mirroring the flags");
  const std::vector<std::pair<std::string, std::string>> exp_flags{
      {"--db", "DB-1 .. DB-4"}, {"--n0", "explicit N0"}, {"--m", "explicit m"}, {"--L", "explicit L"},
      {"--stages", "e.g. 1..11 or 2,3"}, {"--trials", "trials per point"}, {"--seed", "master seed"},
      {"--zeta", "noise level"}, {"--C", "eps = C*zeta"}, {"--tau", "thresholds (comma list)"},
      {"--k", "planted sparsity"}, {"--kcap", "oracle cap"}, {"--m-values", "asymptotic m list"},
      {"--toy-n0", "toy N0"}, {"--toy-m", "toy m"}, {"--toy-L", "toy L"}, {"--eta", "toy noise"},
      {"--sigma-grid", "start:factor:count or list"}, {"--kcd-lambda", "KCD lambda"},
      {"--kcd-tol", "KCD tolerance"}, {"--kcd-max-sweeps", "KCD sweep limit"},
      {"--per-class", "kernel tests per class"}, {"--profile-class", "profile target class"},
      {"--confidence", "sigma_mc confidence"}, {"--acc-tol", "sigma_acc tolerance"},
      {"--max-iters", "homotopy event limit"}, {"--support-threshold", "support cutoff"},
      {"--workers", "worker threads"}, {"-o,--out", "output directory"}};
  for (const auto& [flag, help] : exp_flags) {
    const std::string key = flag.rfind("-o,", 0) == 0 ? "out" : flag.substr(2);
    e->add_option_function<std::string>(flag, [&exp_opts, key](const std::string& v) { exp_opts[key] = v; }, help);
  }
  e->add_flag_function("--raw", [&exp_opts](std::int64_t) { exp_opts["raw"] = "1"; }, "also dump per-trial rows");
  e->add_flag_function("--normalize-tests", [&exp_opts](std::int64_t) { exp_opts["normalize-tests"] = "1"; },
                       "scale kernel tests to unit feature-space norm");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  }

  try {
    if (c->parsed()) return cmd_coherence(coh);
    if (s->parsed()) return cmd_solve(sol);
    if (gst->parsed()) return cmd_gen_staged(gs);
    if (gto->parsed()) return cmd_gen_toy(gt);
    if (sr->parsed()) return cmd_src(sa);
    if (ks->parsed()) return cmd_ksrc(ka);
    if (e->parsed()) return cmd_exp(study, exp_opts);
  } catch (const sl::Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 1;
}
