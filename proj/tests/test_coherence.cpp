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
#include <numbers>

#include "sparselab/coherence.hpp"
#include "sparselab/datagen.hpp"
#include "test_util.hpp"

using namespace sparselab;
using sparselab::test::random_unit_columns;
using sparselab::test::throws_code;

namespace {

// Three unit vectors 120 degrees apart: an equiangular tight frame in R².
Mat mercedes() {
  Mat x(2, 3);
  for (int j = 0; j < 3; ++j) {
    const double t = 2.0 * std::numbers::pi * j / 3.0;
    x(0, j) = std::cos(t);
    x(1, j) = std::sin(t);
  }
  return x;
}

}  // namespace

TEST_CASE("coherence of orthonormal and two-vector dictionaries") {
  CHECK(mutual_coherence(Dictionary(Mat::Identity(4, 4))) == 0.0);
  Mat x(2, 2);
  const double t = 0.3;
  x << 1, std::cos(t), 0, std::sin(t);
  CHECK(mutual_coherence(Dictionary(x)) == doctest::Approx(std::cos(t)).epsilon(1e-15));
  CHECK(throws_code([] { mutual_coherence(Dictionary(Mat::Identity(3, 1))); }, ErrorCode::TooFewColumns));
}

TEST_CASE("coherence distinguishes near-duplicate columns from exact ones") {
  Mat x(3, 3);
  const double d = 1e-9;
  x.col(0) << 1, 0, 0;
  x.col(1) << std::cos(d), std::sin(d), 0;
  x.col(2) << 0, 0, 1;
  const double mu = mutual_coherence(Dictionary(normalize_columns(x)));
  CHECK(mu <= 1.0);
  CHECK(mu == doctest::Approx(std::cos(d)).epsilon(1e-15));
}

TEST_CASE("Welch bound values and an equiangular frame that attains it") {
  CHECK(welch_bound(2, 3) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mutual_coherence(Dictionary(mercedes())) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(welch_bound(50, 100) == doctest::Approx(std::sqrt(50.0 / (50.0 * 99.0))).epsilon(1e-15));
  CHECK(throws_code([] { welch_bound(5, 5); }, ErrorCode::NotUnderdetermined));
  CHECK(throws_code([] { welch_bound(5, 3); }, ErrorCode::NotUnderdetermined));
}

TEST_CASE("Welch bound holds on random dictionaries") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Eigen::Index m = 3 + static_cast<Eigen::Index>(s % 7);
    const Eigen::Index n = m + 1 + static_cast<Eigen::Index>(s % 11);
    const Dictionary d(random_unit_columns(m, n, s));
    CHECK(mutual_coherence(d) >= welch_bound(m, n) - 1e-12);
  }
}

TEST_CASE("certificate bounds and verdict strictness") {
  const RecoveryCertificate c = certificate_from_mu(1.0 / 3.0);
  CHECK(c.k_max_noiseless == doctest::Approx(2.0));
  CHECK(c.k_max_noisy == doctest::Approx(1.0));
  CHECK(c.verdict_noiseless(1));
  CHECK_FALSE(c.verdict_noiseless(2));  // strict inequality
  CHECK(c.verdict_noisy(1));            // non-strict
  CHECK_FALSE(c.verdict_noisy(2));

  const RecoveryCertificate z = certificate_from_mu(0.0);
  CHECK(std::isinf(z.k_max_noiseless));
  CHECK(z.verdict_noiseless(1e9));

  const RecoveryCertificate e = certificate(Dictionary(mercedes()));
  REQUIRE(e.welch_bound.has_value());
  CHECK(std::abs(*e.slack()) < 1e-14);
  CHECK_FALSE(certificate(Dictionary(Mat::Identity(3, 3))).welch_bound.has_value());
}

TEST_CASE("stability constants") {
  const StabilityConstants s = stability_constants(0.1, 2);
  CHECK(s.beta == doctest::Approx(0.2));
  REQUIRE(s.gamma.has_value());
  CHECK(*s.gamma == doctest::Approx(std::sqrt(0.8) / 0.6).epsilon(1e-14));
  CHECK(*s.gamma == doctest::Approx(1.4907).epsilon(1e-4));
  CHECK(*s.C == doctest::Approx(2.108).epsilon(1e-3));
  CHECK(s.error_bound_defined());
  CHECK(*s.error_bound(0.05, 0.01) == doctest::Approx(0.06 * 0.06 / 0.3));

  const StabilityConstants big = stability_constants(0.3, 2);
  CHECK_FALSE(big.stability_defined());
  CHECK_FALSE(big.error_bound_defined());
  CHECK_FALSE(big.error_bound(0.1, 0.1).has_value());
  CHECK(throws_code([] { stability_constants(0.1, 0); }, ErrorCode::InvalidArgument));
  CHECK(throws_code([] { stability_constants(1.5, 1); }, ErrorCode::InvalidArgument));
}

TEST_CASE("coherence with a test sample") {
  const Dictionary d(Mat::Identity(3, 3));
  Vec y(3);
  y << 1, 1, 0;
  y.normalize();
  const AugmentedCoherence a = coherence_with_test(d, y);
  CHECK(a.mu_aug == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(a.increased);
  CHECK(throws_code([&] { coherence_with_test(d, 2.0 * y); }, ErrorCode::NotNormalized));
  Mat x(3, 2);
  x << 1, 0, 0, 1, 0, 0;
  CHECK_FALSE(coherence_with_test(Dictionary(x), Vec::Unit(3, 2)).increased);
}

TEST_CASE("coherence is invariant under column sign flips") {
  const Dictionary d(random_unit_columns(6, 10, 77));
  const double mu = mutual_coherence(d);
  for (Eigen::Index j = 0; j < d.cols(); ++j) CHECK(mutual_coherence(d.with_column_negated(j)) == mu);
}

TEST_CASE("spark violation scan") {
  // Any 3 independent columns of a 3x6 dictionary span the others.
  const Dictionary d(random_unit_columns(3, 6, 5));
  const auto v = spark_violation_scan(d, 3);
  CHECK(v.size() == 20 * 3);
  for (const auto& s : v) {
    Mat b(3, 3);
    for (int i = 0; i < 3; ++i) b.col(i) = d.column(s.support[static_cast<std::size_t>(i)]);
    const Vec r = d.column(s.spanned_column) - b * least_squares(b, d.column(s.spanned_column));
    CHECK(r.norm() < 1e-8);
  }
  // Generic pairs span nothing else in R³.
  CHECK(spark_violation_scan(d, 2).empty());
  CHECK(spark_violation_scan(d, 3, 1).size() == 1);

  // A planted dependency: column 4 = normalised sum of columns 0 and 1.
  Mat x = random_unit_columns(5, 5, 8);
  x.col(4) = (x.col(0) + x.col(1)).normalized();
  const auto w = spark_violation_scan(Dictionary(x), 2);
  REQUIRE(w.size() >= 1);
  CHECK(w[0].support == std::vector<Eigen::Index>{0, 1});
  CHECK(w[0].spanned_column == 4);

  StagedDatabaseSpec s = database_spec("DB-1");
  s.stage = 11;
  const Dictionary big = gen_staged(s).dictionary;
  CHECK(throws_code([&] { spark_violation_scan(big, 5); }, ErrorCode::CombinatorialBlowup));
  CHECK(throws_code([&] { spark_violation_scan(d, 0); }, ErrorCode::InvalidArgument));
}

TEST_CASE("binomial and class surplus") {
  CHECK(binomial(5, 2) == 10.0);
  CHECK(binomial(100, 5) == 75287520.0);
  CHECK(binomial(3, 5) == 0.0);
  CHECK(class_surplus(3, 5));
  CHECK_FALSE(class_surplus(5, 5));
}

TEST_CASE("toy coherence examples in two and three dimensions") {
  using std::cos, std::sin;
  const double e = 0.2, pi = std::numbers::pi;
  Mat x2(2, 4);
  x2 << 1, cos(pi / 4 - e), 0, cos(3 * pi / 4 - e), 0, sin(pi / 4 - e), 1, sin(3 * pi / 4 - e);
  CHECK(mutual_coherence(Dictionary(x2)) == doctest::Approx(0.8335).epsilon(5e-4));

  const double t1 = pi / 4 - e, t2 = pi / 4 + e, p1 = 3 * pi / 4, p2 = pi / 4;
  Mat x3(3, 4);
  x3 << 1, cos(t1) * sin(p1), 0, cos(t2) * sin(p2), 0, sin(t1) * sin(p1), 1, sin(t2) * sin(p2), 0, cos(p1), 0,
      cos(p2);
  CHECK(mutual_coherence(Dictionary(x3)) == doctest::Approx(0.5894).epsilon(5e-4));
}
