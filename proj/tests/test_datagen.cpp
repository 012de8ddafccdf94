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


#include <cmath>

#include "sparselab/classify.hpp"
#include "sparselab/coherence.hpp"
#include "sparselab/datagen.hpp"
#include "test_util.hpp"

using namespace sparselab;
using sparselab::test::throws_code;

TEST_CASE("stage parameters") {
  CHECK(stage_params(1).mu_i == 0.0);
  CHECK(stage_params(1).eta_i == 2.0);
  CHECK(stage_params(11).mu_i == doctest::Approx(1.0));
  CHECK(stage_params(4).eta_i == doctest::Approx(0.5));
  CHECK(throws_code([] { stage_params(0); }, ErrorCode::InvalidArgument));
  CHECK(throws_code([] { stage_params(12); }, ErrorCode::InvalidArgument));
}

TEST_CASE("named databases") {
  CHECK(database_ids().size() == 4);
  const StagedDatabaseSpec s = database_spec("DB-1");
  CHECK(s.n0 == 5);
  CHECK(s.m == 50);
  CHECK(s.L == 20);
  for (const auto& id : database_ids()) {
    const StagedDatabaseSpec x = database_spec(id);
    CHECK(x.n_train() > x.m);
  }
  CHECK(throws_code([] { database_spec("DB-9"); }, ErrorCode::InvalidArgument));
  StagedDatabaseSpec bad = s;
  bad.L = 5;
  bad.n0 = 5;
  bad.m = 50;
  CHECK(throws_code([&] { bad.validate(); }, ErrorCode::InvalidArgument));
}

TEST_CASE("staged generation is deterministic and consistent") {
  StagedDatabaseSpec s = database_spec("DB-1");
  s.stage = 6;
  s.seed = 123;
  const GeneratedInstance a = gen_staged(s);
  const GeneratedInstance b = gen_staged(s);
  CHECK(a.dictionary.data() == b.dictionary.data());
  CHECK(a.alpha0.entries == b.alpha0.entries);
  CHECK((a.dictionary.data() * a.alpha0.entries - a.y0).norm() < 1e-12);
  CHECK(a.dictionary.cols() == 100);
  CHECK(a.dictionary.num_classes() == 20);
  for (Eigen::Index j : a.alpha0.support()) CHECK(a.dictionary.label(j) == 1);
  CHECK(a.alpha0.l0() == 5);
  s.seed = 124;
  CHECK(gen_staged(s).dictionary.data() != a.dictionary.data());

  const GeneratedInstance k2 = gen_staged(s, 2);
  CHECK(k2.alpha0.support() == std::vector<Eigen::Index>{0, 1});
  CHECK(throws_code([&] { gen_staged(s, 6); }, ErrorCode::InvalidArgument));
}

TEST_CASE("stage controls dictionary coherence") {
  StagedDatabaseSpec s = database_spec("DB-1");
  s.seed = 9;
  s.stage = 1;
  const Mat g1 = gram(gen_staged(s).dictionary.data());
  const double mean_off = (g1.sum() - g1.trace()) / static_cast<double>(g1.size() - g1.rows());
  CHECK(std::abs(mean_off) < 0.02);
  s.stage = 11;
  CHECK(mutual_coherence(gen_staged(s).dictionary) >= 0.9);
}

TEST_CASE("additive noise") {
  StagedDatabaseSpec s = database_spec("DB-2");
  s.seed = 4;
  const GeneratedInstance a = gen_staged(s);
  const GeneratedInstance n = add_noise(a, 0.01, 77);
  REQUIRE(n.y.has_value());
  CHECK(&n.sample() == &*n.y);
  CHECK(n.zeta == 0.01);
  CHECK((*n.y - a.y0).norm() <= 0.01);
  CHECK(add_noise(a, 0.01, 77).y.value() == *n.y);
  CHECK(throws_code([&] { add_noise(a, -1.0, 1); }, ErrorCode::InvalidArgument));

  // The noise vector has norm at most zeta with high probability.
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    inside += (*add_noise(a, 0.01, seed).y - a.y0).norm() <= 0.01;
  }
  CHECK(inside >= 190);
}

TEST_CASE("dimension scaling") {
  const StagedDatabaseSpec s = database_spec("DB-1");
  const StagedDatabaseSpec s100 = scale_spec(s, 100);
  CHECK(s100.m == 100);
  CHECK(s100.L == 28);
  CHECK(s100.n0 == 7);
  const StagedDatabaseSpec s200 = scale_spec(s, 200);
  CHECK(s200.L == 40);
  CHECK(s200.n0 == 10);

  try {
    scale_spec(s, 400);
    FAIL("expected ScalingError");
  } catch (const ScalingError& e) {
    CHECK(e.code() == ErrorCode::NonIntegerScaling);
    CHECK(e.nearest().m == 400);
    CHECK(e.nearest().L == 56);
    CHECK(e.nearest().n0 == 14);
  }
  CHECK(scale_spec_nearest(s, 400).L == 56);
  CHECK(scale_spec_nearest(s, 200).L == 40);
}

TEST_CASE("toy kernel database") {
  const Dictionary d = gen_toy_kernel_db(5, 50, 20, 0.1, 3);
  CHECK(d.cols() == 100);
  CHECK(d.num_classes() == 20);
  // Each class clusters around its own basis direction.
  for (int l = 1; l <= 20; ++l) {
    for (Eigen::Index j : d.class_columns(l)) {
      Eigen::Index top = 0;
      d.column(j).head(20).maxCoeff(&top);
      CHECK(top == l - 1);
    }
  }
  // Vanishing noise collapses classes onto their basis vectors.
  const Dictionary t = gen_toy_kernel_db(3, 10, 4, 1e-9, 3);
  CHECK(mutual_coherence(t) > 1.0 - 1e-12);
  CHECK(throws_code([] { gen_toy_kernel_db(5, 10, 20, 0.1, 1); }, ErrorCode::InvalidArgument));
}

TEST_CASE("kernel test samples") {
  const Dictionary d = gen_toy_kernel_db(5, 50, 20, 0.1, 8);
  const KernelModel k = gaussian_gram(d, 1.0);
  const auto tests = gen_kernel_test_samples(k, 2, 5);
  CHECK(tests.size() == 40);
  for (const auto& t : tests) {
    for (Eigen::Index j : t.coefs.support()) CHECK(k.labels[static_cast<std::size_t>(j)] == t.label);
    CHECK(t.coefs.l0() == 5);
  }
  const auto norm = gen_kernel_test_samples(k, 1, 5, true);
  for (const auto& t : norm) CHECK(t.self_inner(k) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gen_kernel_test_samples(k, 2, 5)[7].coefs.entries == tests[7].coefs.entries);
}
