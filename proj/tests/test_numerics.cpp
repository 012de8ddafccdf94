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
#include <cstdio>
#include <filesystem>
#include <limits>
#include <set>
#include <sstream>

#include "sparselab/csv_io.hpp"
#include "sparselab/dictionary.hpp"
#include "test_util.hpp"

using namespace sparselab;
using sparselab::test::random_matrix;
using sparselab::test::throws_code;

TEST_CASE("normalize_columns gives unit columns and rejects zero columns") {
  const Mat m = random_matrix(7, 5, 1) * 3.0;
  const Mat n = normalize_columns(m);
  for (Eigen::Index j = 0; j < n.cols(); ++j) CHECK(n.col(j).norm() == doctest::Approx(1.0).epsilon(1e-15));
  // Directions are kept.
  CHECK((n.col(2) * m.col(2).norm() - m.col(2)).norm() < 1e-12);

  Mat z = m;
  z.col(3).setZero();
  CHECK(throws_code([&] { normalize_columns(z); }, ErrorCode::ZeroColumn));
}

TEST_CASE("gram of a 2x2 matrix") {
  Mat m(2, 2);
  m << 1, 1, 1, 0;
  const Mat g = gram(m);
  CHECK(g(0, 0) == 2.0);
  CHECK(g(0, 1) == 1.0);
  CHECK(g(1, 0) == 1.0);
  CHECK(g(1, 1) == 1.0);
}

TEST_CASE("least_squares solves square systems and zeroes dependent columns") {
  Mat a(3, 3);
  a << 2, 1, 0, 1, 3, 1, 0, 1, 4;
  Vec beta(3);
  beta << 1, -2, 0.5;
  CHECK((least_squares(a, a * beta) - beta).norm() < 1e-13);

  // Third column duplicates the first: pivoting keeps one copy.
  Mat d(4, 3);
  d.col(0) << 1, 0, 0, 1;
  d.col(1) << 0, 1, 1, 0;
  d.col(2) = d.col(0);
  Vec y(4);
  y << 1, 2, 3, 4;
  const Vec b = least_squares(d, y);
  const int zeros = (b.array() == 0.0).count();
  CHECK(zeros == 1);
  // Normal equations hold on the fitted residual.
  CHECK((d.transpose() * (y - d * b)).norm() < 1e-12);
}

TEST_CASE("least_squares overdetermined fit matches the normal equations") {
  const Mat a = random_matrix(12, 4, 3);
  const Vec y = random_matrix(12, 1, 4).col(0);
  const Vec b = least_squares(a, y);
  const Vec ref = (a.transpose() * a).ldlt().solve(a.transpose() * y);
  CHECK((b - ref).norm() < 1e-12);
}

TEST_CASE("soft_threshold") {
  CHECK(soft_threshold(3.0, 1.0) == 2.0);
  CHECK(soft_threshold(-3.0, 1.0) == -2.0);
  CHECK(soft_threshold(0.5, 1.0) == 0.0);
  CHECK(soft_threshold(-1.0, 1.0) == 0.0);
  Vec v(3);
  v << -2, 0.1, 5;
  const Vec s = soft_threshold(v, 0.5);
  CHECK(s[0] == -1.5);
  CHECK(s[1] == 0.0);
  CHECK(s[2] == 4.5);
}

TEST_CASE("numerical_rank") {
  Mat m = random_matrix(6, 4, 9);
  CHECK(numerical_rank(m) == 4);
  m.col(3) = m.col(0) + 2 * m.col(1);
  CHECK(numerical_rank(m) == 3);
}

TEST_CASE("dot_extended survives cancellation") {
  const double a[] = {1e16, 1.0, -1e16};
  const double b[] = {1.0, 1.0, 1.0};
  CHECK(static_cast<double>(dot_extended(a, b, 3)) == 1.0);
}

TEST_CASE("require_finite flags NaN") {
  Mat m = Mat::Ones(2, 2);
  m(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(all_finite(m));
  CHECK(throws_code([&] { require_finite(m, "m"); }, ErrorCode::NonFinite));
}

TEST_CASE("counter rng is deterministic and stream-separated") {
  CounterRng a(derive_seed(1, 2, 3, "x"));
  CounterRng b(derive_seed(1, 2, 3, "x"));
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(derive_seed(1, 2, 3, "x") != derive_seed(1, 2, 3, "y"));
  CHECK(derive_seed(1, 2, 3, "x") != derive_seed(1, 2, 4, "x"));
  CHECK(derive_seed(1, 2, 3, "x") != derive_seed(1, 3, 3, "x"));
  CHECK(derive_seed(1, 2, 3, "x") != derive_seed(2, 2, 3, "x"));
}

TEST_CASE("counter rng moments") {
  CounterRng r(42);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, lo = 1, hi = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    su += u;
    const double z = r.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("csv round trip is exact") {
  const Mat m = random_matrix(3, 4, 5);
  std::stringstream ss;
  write_matrix(ss, m);
  CHECK(read_matrix(ss) == m);

  const auto dir = std::filesystem::temp_directory_path() / "sparselab_csv_test";
  std::filesystem::create_directories(dir);
  const std::string lp = (dir / "labels.csv").string();
  write_labels(lp, {1, 1, 2, 3});
  CHECK(read_labels(lp) == std::vector<int>{1, 1, 2, 3});
  const std::string vp = (dir / "v.csv").string();
  const Vec v = m.col(1);
  write_vector(vp, v);
  CHECK(read_vector(vp) == v);
  std::filesystem::remove_all(dir);

  std::stringstream bad("2,2\n1,2\n3\n");
  CHECK(throws_code([&] { read_matrix(bad); }, ErrorCode::Io));
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("CsvTable formatting") {
  CsvTable t({"a", "b"});
  t.add_row({1.0, 0.25});
  t.add_row(std::vector<std::string>{"x", "y"});
  CHECK(t.str() == "a,b\n1,0.25\nx,y\n");
}

TEST_CASE("Dictionary validation") {
  const Mat u = normalize_columns(random_matrix(4, 6, 2));
  CHECK_NOTHROW(Dictionary(u));
  CHECK(throws_code([&] { Dictionary(u * 2.0); }, ErrorCode::NotNormalized));
  CHECK(throws_code([&] { Dictionary(u, {1, 1, 2}); }, ErrorCode::DimensionMismatch));
  CHECK(throws_code([&] { Dictionary(u, {1, 1, 3, 3, 3, 3}); }, ErrorCode::InvalidArgument));
  CHECK(throws_code([&] { Dictionary(u, {0, 1, 1, 1, 1, 1}); }, ErrorCode::InvalidArgument));
  const Dictionary d(u, {1, 1, 2, 2, 3, 3});
  CHECK(d.num_classes() == 3);
  CHECK(d.class_columns(2) == std::vector<Eigen::Index>{2, 3});
  const Dictionary f = d.with_column_negated(4);
  CHECK(f.column(4) == -d.column(4));
  CHECK(f.labels() == d.labels());
}
