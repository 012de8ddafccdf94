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

#include "sparselab/coherence.hpp"
#include "sparselab/solvers.hpp"
#include "test_util.hpp"

using namespace sparselab;
using sparselab::test::random_matrix;
using sparselab::test::random_unit_columns;
using sparselab::test::throws_code;

namespace {

Vec sparse_vec(Eigen::Index n, std::vector<std::pair<Eigen::Index, double>> entries) {
  Vec v = Vec::Zero(n);
  for (auto [i, x] : entries) v[i] = x;
  return v;
}

double lasso_objective(const Mat& x, const Vec& y, const Vec& a, double lambda) {
  return 0.5 * (y - x * a).squaredNorm() + lambda * a.lpNorm<1>();
}

}  // namespace

TEST_CASE("lasso on an orthonormal dictionary is soft thresholding") {
  const Mat q = Eigen::HouseholderQR<Mat>(random_matrix(6, 6, 3)).householderQ();
  const Vec y = random_matrix(6, 1, 4).col(0);
  for (double lambda : {0.05, 0.3, 0.9}) {
    const SolverResult r = lasso_homotopy(q, y, lambda);
    const Vec expect = soft_threshold(q.transpose() * y, lambda);
    CHECK((r.alpha.entries - expect).norm() < 1e-12);
  }
}

TEST_CASE("lasso above lambda_max returns zero") {
  const Mat x = random_unit_columns(8, 15, 1);
  const Vec y = random_matrix(8, 1, 2).col(0);
  const double lmax = (x.transpose() * y).lpNorm<Eigen::Infinity>();
  CHECK(lasso_homotopy(x, y, lmax).alpha.l0() == 0);
  CHECK(lasso_homotopy(x, y, 2 * lmax).alpha.l0() == 0);
  CHECK(lasso_homotopy(x, y, 0.99 * lmax).alpha.l0() == 1);
}

TEST_CASE("lasso satisfies its optimality conditions") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Mat x = random_unit_columns(12, 30, 10 + s);
    const Vec y = random_matrix(12, 1, 50 + s).col(0);
    const double lambda = 0.1 * (x.transpose() * y).lpNorm<Eigen::Infinity>();
    const Vec a = lasso_homotopy(x, y, lambda).alpha.entries;
    const Vec g = x.transpose() * (y - x * a);
    CHECK(g.lpNorm<Eigen::Infinity>() <= lambda + 1e-8);
    for (Eigen::Index j = 0; j < a.size(); ++j) {
      if (a[j] != 0.0) CHECK(g[j] == doctest::Approx(lambda * (a[j] > 0 ? 1.0 : -1.0)).epsilon(1e-8));
    }
    // No small perturbation of the support lowers the objective.
    const double f = lasso_objective(x, y, a, lambda);
    for (Eigen::Index j = 0; j < a.size(); j += 3) {
      Vec b = a;
      b[j] += 1e-4;
      CHECK(lasso_objective(x, y, b, lambda) >= f - 1e-12);
    }
  }
}

TEST_CASE("lasso path interpolates linearly between knots") {
  const Mat x = random_unit_columns(10, 20, 21);
  const Vec y = random_matrix(10, 1, 22).col(0);
  const LassoPath p = LassoPath::trace(x, y, 1e-3, 10000);
  REQUIRE(p.knots().size() >= 3);
  const auto& k = p.knots();
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    CHECK(k[i].lambda >= k[i + 1].lambda);
    const double mid = 0.5 * (k[i].lambda + k[i + 1].lambda);
    const Vec direct = lasso_homotopy(x, y, mid).alpha.entries;
    CHECK((p.solution_at(mid) - direct).norm() < 1e-9);
  }
  CHECK(p.solution_at(2 * p.lambda_max()).isZero());
}

TEST_CASE("lasso solution is sign-equivariant under column flips") {
  const Mat x = random_unit_columns(10, 25, 31);
  const Vec y = random_matrix(10, 1, 32).col(0);
  const Vec a = lasso_homotopy(x, y, 0.05).alpha.entries;
  Mat xf = x;
  xf.col(7) *= -1.0;
  const Vec b = lasso_homotopy(xf, y, 0.05).alpha.entries;
  Vec af = a;
  af[7] *= -1.0;
  CHECK((b - af).norm() < 1e-10);
}

TEST_CASE("basis pursuit recovers sparse vectors and matches the l0 oracle") {
  const Dictionary d(random_unit_columns(20, 40, 41));
  const Vec a0 = sparse_vec(40, {{3, 1.0}, {17, -0.5}, {29, 2.0}});
  const Vec y = d.data() * a0;
  const SolverResult r = basis_pursuit(d, y);
  CHECK((r.alpha.entries - a0).norm() < 1e-8);
  CHECK(r.residual < 1e-8);
  const CoefVector o = l0_oracle(d, y, 3);
  CHECK(o.support() == std::vector<Eigen::Index>{3, 17, 29});
  CHECK(o.support() == r.alpha.support());

  const Vec single = 0.7 * d.column(11);
  CHECK(basis_pursuit(d, single).alpha.support() == std::vector<Eigen::Index>{11});
  CHECK(basis_pursuit(d, Vec::Zero(20)).alpha.l0() == 0);
}

TEST_CASE("basis pursuit reports infeasible systems") {
  Mat x(3, 4);
  x << 1, 0, 1, 1, 0, 1, 1, -1, 0, 0, 0, 0;
  const Dictionary d = Dictionary::normalized(x);
  CHECK(throws_code([&] { basis_pursuit(d, Vec::Unit(3, 2)); }, ErrorCode::Infeasible));
  CHECK(throws_code([&] { basis_pursuit(d, Vec::Ones(4)); }, ErrorCode::DimensionMismatch));
}

TEST_CASE("constrained denoising") {
  const Dictionary d(random_unit_columns(15, 30, 51));
  const Vec y = d.data() * sparse_vec(30, {{2, 1.0}, {9, -1.0}}) + 0.01 * random_matrix(15, 1, 52).col(0);

  const SolverResult t = bpdn_constrained(d, y, y.norm() * 1.01);
  CHECK(t.trivial);
  CHECK(t.alpha.l0() == 0);

  const SolverResult r = bpdn_constrained(d, y, 0.05);
  CHECK_FALSE(r.trivial);
  CHECK(r.residual == doctest::Approx(0.05).epsilon(1e-6));

  const Vec exact = d.data() * sparse_vec(30, {{2, 1.0}, {9, -1.0}});
  const SolverResult bp = basis_pursuit(d, exact);
  const SolverResult tiny = bpdn_constrained(d, exact, 1e-9);
  CHECK((tiny.alpha.entries - bp.alpha.entries).norm() < 1e-6);
  CHECK(throws_code([&] { bpdn_constrained(d, y, -1.0); }, ErrorCode::InvalidArgument));
}

TEST_CASE("signal plus sparse error decomposition") {
  const Dictionary d(random_unit_columns(30, 40, 61));
  const Vec a0 = sparse_vec(40, {{5, 1.0}, {20, -1.0}});
  Vec y = d.data() * a0;
  y[4] += 3.0;
  const SignalErrorResult r = signal_error_bp(d, y);
  CHECK((r.alpha.alpha.entries - a0).norm() < 1e-6);
  CHECK(r.z[4] == doctest::Approx(3.0).epsilon(1e-6));
  CHECK((d.data() * r.alpha.alpha.entries + r.z - y).norm() < 1e-8);
}

TEST_CASE("l0 oracle edge cases") {
  const Dictionary d(random_unit_columns(4, 8, 71));
  CHECK(l0_oracle(d, Vec::Zero(4), 2).l0() == 0);
  const Vec y = d.data() * sparse_vec(8, {{0, 1.0}, {1, 1.0}, {2, 1.0}});
  CHECK(throws_code([&] { l0_oracle(d, y, 2); }, ErrorCode::NoSolution));
  const Dictionary big(random_unit_columns(10, 60, 72));
  CHECK(throws_code([&] { l0_oracle(big, Vec::Ones(10), 6); }, ErrorCode::CombinatorialBlowup));
}

TEST_CASE("threshold and refit") {
  const Dictionary d(random_unit_columns(12, 20, 81));
  const Vec a0 = sparse_vec(20, {{1, 1.0}, {6, -2.0}});
  const Vec y = d.data() * a0;
  Vec noisy = a0;
  noisy[10] = 1e-4;
  noisy[1] = 0.9;
  const CoefVector r = threshold_and_refit(d, y, CoefVector(noisy), 1e-3);
  CHECK(r.support() == std::vector<Eigen::Index>{1, 6});
  CHECK((r.entries - a0).norm() < 1e-10);
  CHECK(throws_code([&] { threshold_and_refit(d, y, CoefVector(Vec::Constant(20, 1e-6)), 1e-3); },
                    ErrorCode::EmptySupport));
}

TEST_CASE("coefficient vector support helpers") {
  const CoefVector c(sparse_vec(5, {{0, 1e-11}, {2, -3.0}, {4, 2e-10}}));
  CHECK(c.support() == std::vector<Eigen::Index>{2, 4});
  CHECK(c.l0(1e-9) == 1);
  CHECK(c.l1() == doctest::Approx(3.0 + 1e-11 + 2e-10));
}
