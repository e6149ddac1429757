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

#include "deq/frame.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "deq/errors.hpp"
#include "test_util.hpp"

using namespace deq;

namespace {

void check_tight_and_reconstructing(const Frame& frame, std::mt19937_64& rng) {
  const std::vector<double> x = test::random_signal(frame.signal_length(), rng);
  const double nx = test::l2(x);

  CoefficientVector c = frame.analyze(x);
  CHECK(std::abs(test::l2(c.values) * test::l2(c.values) - nx * nx) <= 1e-10 * nx * nx);

  std::vector<double> back = frame.synthesize(c);
  double err = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    err += (back[n] - x[n]) * (back[n] - x[n]);
  }
  CHECK(std::sqrt(err) <= 1e-10 * nx);
}

void check_adjoint(const Frame& frame, std::mt19937_64& rng) {
  const std::vector<double> x = test::random_signal(frame.signal_length(), rng);
  CoefficientVector c = frame.zero_coefficients();
  for (auto& z : c.values) z = {test::sym_rand(rng), test::sym_rand(rng)};

  CoefficientVector ax = frame.analyze(x);
  std::vector<double> dc = frame.synthesize(c);

  // <Ax, c> under the real inner product on coefficients
  double lhs = 0.0;
  for (std::size_t k = 0; k < c.values.size(); ++k) {
    lhs += (ax.values[k] * std::conj(c.values[k])).real();
  }
  double rhs = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) rhs += x[n] * dc[n];

  const double scale = test::l2(x) * test::l2(c.values);
  CHECK(std::abs(lhs - rhs) <= 1e-8 * scale);
}

}  // namespace

TEST_CASE("dgt matches the direct-summation oracle on a tiny frame") {
  Frame frame = make_dgt_frame(4, 4, 2, 8);
  CHECK(frame.rows() == 3);
  CHECK(frame.cols() == 4);
  CHECK(frame.redundancy() == 2.0);

  auto matrix = test::dense_analysis_matrix(frame);
  std::mt19937_64 rng(11);

  // impulse columns
  for (std::size_t l = 0; l < 8; ++l) {
    std::vector<double> impulse(8, 0.0);
    impulse[l] = 1.0;
    CoefficientVector c = frame.analyze(impulse);
    for (std::size_t k = 0; k < c.values.size(); ++k) {
      CHECK(std::abs(c.values[k] - matrix[k][l]) < 1e-12);
    }
  }

  // random input, both directions
  const std::vector<double> x = test::random_signal(8, rng);
  CoefficientVector cx = frame.analyze(x);
  auto expect = test::apply_dense_analysis(matrix, x);
  for (std::size_t k = 0; k < expect.size(); ++k) {
    CHECK(std::abs(cx.values[k] - expect[k]) < 1e-12);
  }

  CoefficientVector c = frame.zero_coefficients();
  for (auto& z : c.values) z = {test::sym_rand(rng), test::sym_rand(rng)};
  std::vector<double> synth = frame.synthesize(c);
  std::vector<double> oracle = test::apply_dense_synthesis(matrix, c.values, 8);
  for (std::size_t n = 0; n < 8; ++n) {
    CHECK(std::abs(synth[n] - oracle[n]) < 1e-12);
  }
}

TEST_CASE("wmdct matches the direct-summation oracle on tiny frames") {
  std::mt19937_64 rng(12);
  for (std::size_t channels : {2u, 4u, 8u}) {
    Frame frame = make_wmdct_frame(channels, channels, 4 * channels);
    CHECK(frame.coeff_count() == frame.signal_length());

    auto matrix = test::dense_analysis_matrix(frame);
    const std::vector<double> x = test::random_signal(frame.signal_length(), rng);
    CoefficientVector cx = frame.analyze(x);
    auto expect = test::apply_dense_analysis(matrix, x);
    for (std::size_t k = 0; k < expect.size(); ++k) {
      CHECK(std::abs(cx.values[k] - expect[k]) < 1e-12);
      CHECK(cx.values[k].imag() == 0.0);  // WMDCT coefficients are real
    }

    CoefficientVector c = frame.zero_coefficients();
    for (auto& z : c.values) z = {test::sym_rand(rng), 0.0};
    std::vector<double> synth = frame.synthesize(c);
    std::vector<double> oracle =
        test::apply_dense_synthesis(matrix, c.values, frame.signal_length());
    for (std::size_t n = 0; n < synth.size(); ++n) {
      CHECK(std::abs(synth[n] - oracle[n]) < 1e-12);
    }
  }
}

TEST_CASE("tightness, reconstruction and adjoint on tiny geometries") {
  std::mt19937_64 rng(13);
  Frame dgt = make_dgt_frame(4, 4, 2, 8);
  Frame dgt_odd = make_dgt_frame(5, 7, 3, 12);  // odd channel count, non radix-2
  Frame wmdct = make_wmdct_frame(4, 4, 16);
  Frame wmdct_tiny = make_wmdct_frame(2, 2, 16);
  for (const Frame* f : {&dgt, &dgt_odd, &wmdct, &wmdct_tiny}) {
    check_tight_and_reconstructing(*f, rng);
    check_adjoint(*f, rng);
  }
}

TEST_CASE("tightness, reconstruction and adjoint at production scale") {
  std::mt19937_64 rng(14);
  Frame dgt = make_dgt_frame(1024, 1024, 256, 16384);
  CHECK(dgt.rows() == 513);
  CHECK(dgt.cols() == 64);
  CHECK(dgt.redundancy() == 4.0);
  Frame wmdct = make_wmdct_frame(1024, 1024, 16384);
  CHECK(wmdct.coeff_count() == 16384);
  for (const Frame* f : {&dgt, &wmdct}) {
    check_tight_and_reconstructing(*f, rng);
    check_adjoint(*f, rng);
  }
}

TEST_CASE("linearity and zero input") {
  std::mt19937_64 rng(15);
  Frame frame = make_dgt_frame(4, 6, 2, 12);
  const std::vector<double> x = test::random_signal(12, rng);
  const std::vector<double> y = test::random_signal(12, rng);
  std::vector<double> combo(12);
  for (std::size_t n = 0; n < 12; ++n) combo[n] = 0.75 * x[n] - 1.5 * y[n];

  CoefficientVector cx = frame.analyze(x);
  CoefficientVector cy = frame.analyze(y);
  CoefficientVector cc = frame.analyze(combo);
  for (std::size_t k = 0; k < cc.values.size(); ++k) {
    CHECK(std::abs(cc.values[k] - (0.75 * cx.values[k] - 1.5 * cy.values[k])) < 1e-12);
  }

  CoefficientVector zeros = frame.analyze(std::vector<double>(12, 0.0));
  for (const auto& z : zeros.values) CHECK(std::abs(z) == 0.0);
  std::vector<double> silent = frame.synthesize(frame.zero_coefficients());
  for (double v : silent) CHECK(v == 0.0);
}

TEST_CASE("half-spectrum storage keeps self-conjugate rows real") {
  std::mt19937_64 rng(16);
  Frame frame = make_dgt_frame(8, 8, 4, 32);
  CoefficientVector c = frame.analyze(test::random_signal(32, rng));
  for (std::size_t n = 0; n < c.cols; ++n) {
    CHECK(c.values[n * c.rows].imag() == 0.0);            // DC row
    CHECK(c.values[n * c.rows + c.rows - 1].imag() == 0.0);  // Nyquist row
  }
}

TEST_CASE("weighted l1 equals the full-spectrum l1") {
  std::mt19937_64 rng(17);
  Frame frame = make_dgt_frame(4, 6, 2, 12);
  const std::vector<double> x = test::random_signal(12, rng);
  CoefficientVector c = frame.analyze(x);

  // Full spectrum by direct summation over all channel rows.
  const std::size_t channels = frame.channels();
  double full_l1 = 0.0;
  for (std::size_t col = 0; col < frame.cols(); ++col) {
    for (std::size_t m = 0; m < channels; ++m) {
      std::complex<double> acc = 0.0;
      for (std::size_t j = 0; j < frame.window_length(); ++j) {
        const std::size_t l = (col * frame.hop() + j) % frame.signal_length();
        const double arg = -2.0 * std::numbers::pi * static_cast<double>(j * m) /
                           static_cast<double>(channels);
        acc += x[l] * frame.window()[j] *
               std::complex<double>{std::cos(arg), std::sin(arg)};
      }
      full_l1 += std::abs(acc);
    }
  }
  CHECK(l1_norm(c) == doctest::Approx(full_l1).epsilon(1e-12));
}

TEST_CASE("operator norm is 1 and matches the dense-matrix singular value") {
  Frame frame = make_dgt_frame(4, 4, 2, 8);
  CHECK(frame.operator_norm() == 1.0);
  CHECK(std::abs(estimate_operator_norm(frame) - 1.0) <= 1e-6);

  // Independent route: power iteration on the explicitly assembled matrix.
  auto matrix = test::dense_analysis_matrix(frame);
  std::mt19937_64 rng(18);
  std::vector<double> v = test::random_signal(8, rng);
  double norm_estimate = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double nv = test::l2(v);
    for (double& u : v) u /= nv;
    auto av = test::apply_dense_analysis(matrix, v);
    norm_estimate = test::l2(av);
    v = test::apply_dense_synthesis(matrix, av, 8);
  }
  CHECK(std::abs(norm_estimate - 1.0) <= 1e-6);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(make_dgt_frame(8, 4, 2, 8), UnsupportedError);       // non-painless
  CHECK_THROWS_AS(make_dgt_frame(4, 4, 2, 9), std::invalid_argument);  // hop | L fails
  CHECK_THROWS_AS(make_dgt_frame(2, 4, 3, 12), std::invalid_argument);  // hop > window
  CHECK_THROWS_AS(make_wmdct_frame(1024, 1000, 16384), std::invalid_argument);
  CHECK_THROWS_AS(make_wmdct_frame(4, 4, 18), std::invalid_argument);
  CHECK_THROWS_AS(make_wmdct_frame(1, 4, 16), UnsupportedError);  // dead overlap pair
  CHECK_THROWS_AS(make_dgt_frame(4, 4, 2, 0), std::invalid_argument);
}

TEST_CASE("analyze and synthesize validate dimensions") {
  Frame frame = make_dgt_frame(4, 4, 2, 8);
  CHECK_THROWS_AS(frame.analyze(std::vector<double>(7, 0.0)), std::invalid_argument);
  CoefficientVector c;
  c.rows = 2;
  c.cols = 2;
  c.values.resize(4);
  CHECK_THROWS_AS(frame.synthesize(c), std::invalid_argument);
}

TEST_CASE("padded_length rounds up to the grid") {
  CHECK(padded_length(FrameKind::kDgtReal, 1024, 1024, 256, 16384) == 16384);
  CHECK(padded_length(FrameKind::kDgtReal, 1024, 1024, 256, 16385) == 16640);
  CHECK(padded_length(FrameKind::kDgtReal, 1024, 1024, 256, 100) == 1024);
  CHECK(padded_length(FrameKind::kWmdct, 1024, 1024, 512, 33000) == 33792);
}
