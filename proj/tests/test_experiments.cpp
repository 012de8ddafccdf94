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


#include <atomic>
#include <sstream>
#include <string>

#include "sparselab/experiments.hpp"
#include "test_util.hpp"

using namespace sparselab;
using sparselab::test::throws_code;

namespace {

// Small DB-1 style configuration that runs in well under a second.
ExperimentConfig small_config(Study s) {
  ExperimentConfig c;
  c.study = s;
  c.n0 = 3;
  c.m = 12;
  c.L = 6;
  c.stages = {2, 9};
  c.trials = 6;
  c.master_seed = 42;
  return c;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("study names") {
  for (Study s : {Study::NoiseFree, Study::Asymptotic, Study::VaryK, Study::Threshold, Study::Noisy,
                  Study::KernelSweep, Study::SigmaSearch, Study::L0Crosscheck}) {
    CHECK(parse_study(to_string(s)) == s);
  }
  CHECK(throws_code([] { parse_study("nope"); }, ErrorCode::InvalidArgument));
}

TEST_CASE("list and grid parsers") {
  CHECK(parse_int_list("1..4") == std::vector<int>{1, 2, 3, 4});
  CHECK(parse_int_list("3,5, 7") == std::vector<int>{3, 5, 7});
  CHECK(parse_double_list("0.5,1e-3") == std::vector<double>{0.5, 1e-3});
  const auto g = parse_sigma_grid("0.2:1.15:20");
  CHECK(g.size() == 20);
  CHECK(g.front() == 0.2);
  CHECK(parse_sigma_grid("1,2,3").size() == 3);
  CHECK(throws_code([] { parse_sigma_grid("3,2"); }, ErrorCode::InvalidArgument));
  CHECK(throws_code([] { parse_int_list("a"); }, ErrorCode::InvalidArgument));
}

TEST_CASE("configuration keys") {
  ExperimentConfig c;
  apply_option(c, "trials", "17");
  apply_option(c, "--sigma_grid", "0.5,1");
  apply_option(c, "db", "DB-3");
  apply_option(c, "raw", "true");
  CHECK(c.trials == 17);
  CHECK(c.sigma_grid.size() == 2);
  CHECK(c.db == "DB-3");
  CHECK(c.raw);
  CHECK(throws_code([&] { apply_option(c, "bogus", "1"); }, ErrorCode::InvalidArgument));
  CHECK(throws_code([&] { apply_option(c, "trials", "0"); }, ErrorCode::InvalidArgument));
  c.stages = {12};
  CHECK(throws_code([&] { c.validate(); }, ErrorCode::InvalidArgument));
}

TEST_CASE("parallel_for visits every index and propagates errors") {
  std::vector<std::atomic<int>> seen(50);
  parallel_for(50, 4, [&](std::size_t i) { seen[i]++; });
  for (const auto& s : seen) CHECK(s.load() == 1);
  CHECK(throws_code([] { parallel_for(10, 3, [](std::size_t i) {
                      if (i == 7) throw Error(ErrorCode::NoSolution, "x");
                    }); },
                    ErrorCode::NoSolution));
}

TEST_CASE("noise-free study output does not depend on the worker count") {
  ExperimentConfig c = small_config(Study::NoiseFree);
  const StudyResult one = run_study(c);
  c.workers = 3;
  const StudyResult three = run_study(c);
  CHECK(one.table("noise_free.csv").str() == three.table("noise_free.csv").str());
  CHECK(one.table("noise_free.csv").rows() == 2);
  CHECK(one.failed_trials == 0);
}

TEST_CASE("raw dumps are consistent with the summary") {
  ExperimentConfig c = small_config(Study::NoiseFree);
  c.stages = {5};
  c.raw = true;
  const StudyResult r = run_study(c);
  const auto raw = lines(r.table("noise_free_raw.csv").str());
  CHECK(raw.size() == c.trials + 1);
  const auto summary = lines(r.table("noise_free.csv").str());
  REQUIRE(summary.size() == 2);
  double sum = 0.0;
  for (std::size_t i = 1; i < raw.size(); ++i) {
    std::istringstream is(raw[i]);
    std::string cell;
    std::getline(is, cell, ',');
    std::getline(is, cell, ',');
    std::getline(is, cell, ',');
    sum += std::stod(cell);
  }
  std::istringstream is(summary[1]);
  std::string cell;
  std::getline(is, cell, ',');
  std::getline(is, cell, ',');
  CHECK(std::stod(cell) == doctest::Approx(sum / static_cast<double>(c.trials)).epsilon(1e-12));
}

TEST_CASE("vary_k with k = N0 matches the noise-free study") {
  ExperimentConfig a = small_config(Study::NoiseFree);
  ExperimentConfig b = small_config(Study::VaryK);
  b.k = 3;
  CHECK(run_study(a).table("noise_free.csv").str() == run_study(b).table("vary_k.csv").str());
  b.k = 4;
  CHECK(throws_code([&] { run_study(b); }, ErrorCode::InvalidArgument));
}

TEST_CASE("threshold, noisy and l0 studies produce their tables") {
  ExperimentConfig t = small_config(Study::Threshold);
  t.taus = {1e-5, 1e-3};
  CHECK(run_study(t).table("threshold.csv").rows() == 4);

  ExperimentConfig n = small_config(Study::Noisy);
  const StudyResult nr = run_study(n);
  CHECK(nr.table("noisy.csv").rows() == 2);
  CHECK(nr.table("residuals.csv").rows() == 2);

  ExperimentConfig l = small_config(Study::L0Crosscheck);
  l.k = 2;
  l.stages = {1};
  const auto rows = lines(run_study(l).table("l0_crosscheck.csv").str());
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].rfind("1,6,", 0) == 0);
}

TEST_CASE("kernel sweep on a single sigma") {
  ExperimentConfig c;
  c.study = Study::KernelSweep;
  c.toy_n0 = 2;
  c.toy_m = 8;
  c.toy_L = 4;
  c.trials = 2;
  c.sigma_grid = {0.4};
  c.per_class = 1;
  const StudyResult r = run_study(c);
  CHECK(r.table("kernel_sweep.csv").rows() == 1);
  CHECK(r.table("kernel_summary.csv").rows() == 1);
  CHECK(r.table("kernel_profile.csv").rows() == 4);
  CHECK(r.not_converged == 0);
  CHECK(throws_code([&] { r.table("missing.csv"); }, ErrorCode::InvalidArgument));
}
