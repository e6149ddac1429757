// Copyright 2026 The Deq Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "deq/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "test_util.hpp"

using namespace deq;

TEST_CASE("sdr basics") {
  std::mt19937_64 rng(31);
  std::vector<double> u = test::random_signal(128, rng);
  std::vector<double> half(u.size()), zero(u.size(), 0.0);
  for (std::size_t n = 0; n < u.size(); ++n) half[n] = 0.5 * u[n];

  CHECK(std::isinf(sdr(u, u)));
  CHECK(sdr(u, half) == doctest::Approx(10.0 * std::log10(4.0)).epsilon(1e-12));
  CHECK(sdr(u, zero) == doctest::Approx(0.0));

  CHECK_THROWS_AS(sdr(u, std::vector<double>(u.size() - 1, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(sdr(zero, u), std::invalid_argument);
}

TEST_CASE("sdr is scale invariant") {
  std::mt19937_64 rng(32);
  std::vector<double> u = test::random_signal(64, rng);
  std::vector<double> v = test::random_signal(64, rng);
  std::vector<double> au(64), av(64);
  for (std::size_t n = 0; n < 64; ++n) {
    au[n] = -2.75 * u[n];
    av[n] = -2.75 * v[n];
  }
  CHECK(sdr(au, av) == doctest::Approx(sdr(u, v)).epsilon(1e-12));
}

TEST_CASE("delta_sdr") {
  std::mt19937_64 rng(33);
  std::vector<double> orig = test::random_signal(64, rng);
  std::vector<double> quant(64), closer(64);
  for (std::size_t n = 0; n < 64; ++n) {
    quant[n] = orig[n] + 0.1;
    closer[n] = orig[n] + 0.05;
  }
  CHECK(delta_sdr(orig, quant, quant) == 0.0);
  CHECK(std::isinf(delta_sdr(orig, quant, orig)));
  CHECK(delta_sdr(orig, quant, closer) > 0.0);
  // antisymmetric under swapping the two candidates
  CHECK(delta_sdr(orig, quant, closer) ==
        doctest::Approx(-delta_sdr(orig, closer, quant)).epsilon(1e-12));
}

TEST_CASE("linf_violation") {
  QuantizedSignal q{{0.125, -0.375}, 3, 0.25, 16000};
  CHECK(linf_violation(q.samples, q) == 0.0);
  CHECK(linf_violation(std::vector<double>{0.25, -0.25}, q) == 0.0);  // boundary
  CHECK(linf_violation(std::vector<double>{0.375, -0.375}, q) ==
        doctest::Approx(0.125));
  CHECK_THROWS_AS(linf_violation(std::vector<double>{0.0}, q), std::invalid_argument);
}
