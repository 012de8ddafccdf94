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

#ifndef SPARSELAB_TESTS_TEST_UTIL_HPP
#define SPARSELAB_TESTS_TEST_UTIL_HPP

#include <cstdint>
#include <functional>

#include "doctest.h"
#include "sparselab/error.hpp"
#include "sparselab/numerics.hpp"
#include "sparselab/rng.hpp"

namespace sparselab::test {

inline Mat random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  CounterRng rng(derive_seed(seed, 0, 0, "test-matrix"));
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

inline Mat random_unit_columns(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  return normalize_columns(random_matrix(rows, cols, seed));
}

// Runs fn and reports the library error code it raised (if any).
inline bool throws_code(const std::function<void()>& fn, ErrorCode code) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace sparselab::test

#endif  // SPARSELAB_TESTS_TEST_UTIL_HPP
