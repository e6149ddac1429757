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

#include "deq/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "deq/audio_io.hpp"
#include "deq/errors.hpp"
#include "deq/metrics.hpp"
#include "test_util.hpp"

using namespace deq;

namespace {

// Optimum of min ||c||_1 s.t. ||c - analyze(q)||_inf <= delta/2, separable
// per coordinate: the interval point nearest zero. Equals the solver target
// when the basis maps the sample box onto the coefficient box, which holds
// for the two-channel WMDCT (a signed delay).
double separable_oracle(const Frame& frame, const QuantizedSignal& q) {
  CoefficientVector c = frame.analyze(q.samples);
  double acc = 0.0;
  for (const auto& z : c.values) {
    acc += std::max(0.0, std::abs(z) - 0.5 * q.delta);
  }
  return acc;
}

QuantizedSignal tiny_instance(std::size_t n, int word_length, std::mt19937_64& rng) {
  Signal x{test::random_signal(n, rng), 16000};
  x = peak_normalize(x);
  return quantize(x, word_length);
}

SolverConfig dr_config(double gamma, int max_iter = 400, int min_iter = 50) {
  SolverConfig cfg;
  cfg.algorithm = Algorithm::kDouglasRachford;
  cfg.gamma = gamma;
  cfg.max_iter = max_iter;
  cfg.min_iter = min_iter;
  return cfg;
}

SolverConfig cp_config(double zeta, int max_iter = 400, int min_iter = 50) {
  SolverConfig cfg;
  cfg.algorithm = Algorithm::kChambollePock;
  cfg.zeta = zeta;
  cfg.max_iter = max_iter;
  cfg.min_iter = min_iter;
  return cfg;
}

}  // namespace

TEST_CASE("step parameter presets") {
  CHECK(default_params(Algorithm::kDouglasRachford, FrameKind::kDgtReal, 2).value == 0.0073);
  CHECK(default_params(Algorithm::kDouglasRachford, FrameKind::kDgtReal, 8).value == 0.0000066);
  CHECK(default_params(Algorithm::kDouglasRachford, FrameKind::kWmdct, 5).value == 0.00035);
  CHECK(default_params(Algorithm::kDouglasRachford, FrameKind::kWmdct, 8).value == 0.0000099);
  CHECK(default_params(Algorithm::kChambollePock, FrameKind::kDgtReal, 5).value == 0.00017);
  CHECK(default_params(Algorithm::kChambollePock, FrameKind::kDgtReal, 2).value == 0.0055);
  CHECK(default_params(Algorithm::kChambollePock, FrameKind::kWmdct, 3).value == 0.0110);
  CHECK(default_params(Algorithm::kChambollePock, FrameKind::kWmdct, 8).value == 0.0000075);
  for (int w = 2; w <= 8; ++w) {
    CHECK(default_params(Algorithm::kDouglasRachford, FrameKind::kDgtReal, w).from_table);
  }
}

TEST_CASE("step parameter fallback outside the tuned range") {
  const ParamLookup p9 = default_params(Algorithm::kDouglasRachford, FrameKind::kDgtReal, 9);
  CHECK(!p9.from_table);
  CHECK(p9.value > 0.0);
  CHECK(p9.value < 0.0000066);  // keeps decaying past the table edge
  const ParamLookup p1 = default_params(Algorithm::kChambollePock, FrameKind::kWmdct, 1);
  CHECK(!p1.from_table);
  CHECK(p1.value > 0.0213);  // keeps growing below the table edge
}

TEST_CASE("stopping rule honors the iteration caps") {
  SolverConfig cfg;
  cfg.min_iter = 50;
  cfg.max_iter = 400;
  cfg.stop_tol = 1e-6;
  CHECK(!stopping_check(49, 0.0, cfg));          // never before min_iter
  CHECK(stopping_check(400, 1.0, cfg));          // always at max_iter
  CHECK(stopping_check(120, 1e-9, cfg));         // stagnation between the caps
  CHECK(stopping_check(50, 1e-9, cfg));
  CHECK(!stopping_check(120, 1e-3, cfg));
}

TEST_CASE("dr with a vanishing threshold returns the quantized signal") {
  std::mt19937_64 rng(51);
  Frame frame = make_wmdct_frame(4, 4, 16);
  QuantizedSignal q = tiny_instance(16, 3, rng);
  SolverConfig cfg = dr_config(1e-15, /*max_iter=*/1, /*min_iter=*/1);
  SolverRun run = solve_synthesis_dr(q, frame, cfg);
  CHECK(run.iterations_used == 1);
  for (std::size_t n = 0; n < q.samples.size(); ++n) {
    CHECK(std::abs(run.restored.samples[n] - q.samples[n]) < 1e-12);
  }
}

TEST_CASE("both solvers reach the separable optimum on the signed-delay basis") {
  std::mt19937_64 rng(52);
  Frame frame = make_wmdct_frame(2, 2, 16);
  QuantizedSignal q = tiny_instance(16, 2, rng);
  const double oracle = separable_oracle(frame, q);
  REQUIRE(oracle > 0.0);

  SolverRun dr = solve_synthesis_dr(q, frame, dr_config(0.0204));
  CHECK(std::abs(dr.final_l1 - oracle) <= 1e-4 * oracle);
  CHECK(dr.iterations_used <= 400);
  CHECK(is_consistent(dr.restored, q, 1e-9));

  SolverRun cp = solve_analysis_cp(q, frame, cp_config(0.0213));
  CHECK(std::abs(cp.final_l1 - oracle) <= 1e-4 * oracle);
  CHECK(is_consistent(cp.restored, q, 1e-9));
}

TEST_CASE("dr and cp agree on an orthonormal lapped basis") {
  // Synthesis and analysis problems coincide for an orthonormal basis, so
  // two unrelated algorithms must land on the same objective value.
  std::mt19937_64 rng(53);
  Frame frame = make_wmdct_frame(4, 4, 16);
  QuantizedSignal q = tiny_instance(16, 2, rng);

  SolverRun dr = solve_synthesis_dr(q, frame, dr_config(0.0204, 4000));
  SolverRun cp = solve_analysis_cp(q, frame, cp_config(0.0213, 4000));
  const double scale = std::max(dr.final_l1, cp.final_l1);
  CHECK(std::abs(dr.final_l1 - cp.final_l1) <= 1e-4 * scale);

  // neither does worse than the trivial feasible point
  const double trivial = l1_norm(frame.analyze(q.samples));
  CHECK(dr.final_l1 <= trivial + 1e-9);
  CHECK(cp.final_l1 <= trivial + 1e-9);
}

TEST_CASE("outputs are consistent and deterministic") {
  std::mt19937_64 rng(54);
  Frame frame = make_dgt_frame(8, 8, 4, 64);
  QuantizedSignal q = tiny_instance(64, 3, rng);

  SolverConfig cfg = dr_config(0.004, 120, 20);
  cfg.trace_metrics = true;
  SolverRun a = solve_synthesis_dr(q, frame, cfg);
  SolverRun b = solve_synthesis_dr(q, frame, cfg);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].l1_objective == b.trace[i].l1_objective);
    CHECK(a.trace[i].linf_violation == b.trace[i].linf_violation);
  }
  for (std::size_t n = 0; n < q.samples.size(); ++n) {
    CHECK(a.restored.samples[n] == b.restored.samples[n]);
  }
  CHECK(a.final_linf_violation <= 1e-9);
  CHECK(is_consistent(a.restored, q, 1e-9));
  CHECK(a.iterations_used >= 20);
  CHECK(a.iterations_used <= 120);

  SolverConfig ccfg = cp_config(0.003, 120, 20);
  ccfg.trace_metrics = true;
  SolverRun c = solve_analysis_cp(q, frame, ccfg);
  SolverRun d = solve_analysis_cp(q, frame, ccfg);
  REQUIRE(c.trace.size() == d.trace.size());
  for (std::size_t i = 0; i < c.trace.size(); ++i) {
    CHECK(c.trace[i].l1_objective == d.trace[i].l1_objective);
  }
  CHECK(c.final_linf_violation <= 1e-9);
  CHECK(is_consistent(c.restored, q, 1e-9));
}

TEST_CASE("cp warns on the convergence boundary") {
  std::mt19937_64 rng(55);
  Frame frame = make_wmdct_frame(4, 4, 16);
  QuantizedSignal q = tiny_instance(16, 3, rng);

  SolverRun boundary = solve_analysis_cp(q, frame, cp_config(0.01, 60, 10));
  REQUIRE(boundary.warnings.size() == 1);  // sigma defaults to 1/zeta

  SolverConfig safe = cp_config(0.01, 60, 10);
  safe.sigma = 50.0;  // zeta * sigma = 0.5 < 1
  CHECK(solve_analysis_cp(q, frame, safe).warnings.empty());

  SolverConfig relaxed = cp_config(0.01, 60, 10);
  relaxed.rho = 0.5;  // boundary condition only applies at rho = 1
  CHECK(solve_analysis_cp(q, frame, relaxed).warnings.empty());
}

TEST_CASE("solver validation and failure paths") {
  std::mt19937_64 rng(56);
  Frame frame = make_wmdct_frame(4, 4, 16);
  QuantizedSignal q = tiny_instance(16, 3, rng);

  CHECK_THROWS_AS(solve_synthesis_dr(q, frame, dr_config(0.0)), std::invalid_argument);
  CHECK_THROWS_AS(solve_synthesis_dr(q, frame, cp_config(0.1)), std::invalid_argument);
  CHECK_THROWS_AS(solve_analysis_cp(q, frame, dr_config(0.1)), std::invalid_argument);
  CHECK_THROWS_AS(solve_analysis_cp(q, frame, cp_config(-1.0)), std::invalid_argument);

  SolverConfig bad_relax = dr_config(0.1);
  bad_relax.lambda_relax = 2.5;
  CHECK_THROWS_AS(solve_synthesis_dr(q, frame, bad_relax), std::invalid_argument);

  SolverConfig bad_rho = cp_config(0.1);
  bad_rho.rho = 1.5;
  CHECK_THROWS_AS(solve_analysis_cp(q, frame, bad_rho), std::invalid_argument);

  SolverConfig bad_iters = dr_config(0.1);
  bad_iters.min_iter = 10;
  bad_iters.max_iter = 5;
  CHECK_THROWS_AS(solve_synthesis_dr(q, frame, bad_iters), std::invalid_argument);

  QuantizedSignal wrong_len = q;
  wrong_len.samples.pop_back();
  CHECK_THROWS_AS(solve_synthesis_dr(wrong_len, frame, dr_config(0.1)),
                  std::invalid_argument);

  QuantizedSignal poisoned = q;
  poisoned.samples[3] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(solve_synthesis_dr(poisoned, frame, dr_config(0.1, 10, 1)),
                  NumericalError);
}

TEST_CASE("dr regression: sum of four sinusoids at w=4") {
  const int n = 16384;
  const int rate = 16000;
  Signal x{std::vector<double>(n), rate};
  const double freqs[] = {313.3, 831.7, 1570.1, 2753.9};
  const double amps[] = {1.0, 0.7, 0.5, 0.35};
  const double phases[] = {0.3, 1.7, 2.9, 4.1};
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    for (int k = 0; k < 4; ++k) {
      v += amps[k] * std::sin(2.0 * std::numbers::pi * freqs[k] * i / rate + phases[k]);
    }
    x.samples[i] = v;
  }
  x = peak_normalize(x);
  QuantizedSignal q = quantize(x, 4);
  Frame frame = make_dgt_frame(1024, 1024, 256, n);

  SolverConfig cfg = dr_config(0.0015);
  cfg.reference = x.samples;
  SolverRun run = solve_synthesis_dr(q, frame, cfg);
  const double gain = delta_sdr(x.samples, q.samples, run.restored.samples);
  CHECK(gain > 0.0);
  CHECK(gain == doctest::Approx(15.1912623).epsilon(1e-6));  // golden, first build
  CHECK(run.final_l1 <= l1_norm(frame.analyze(q.samples)) + 1e-9);
  CHECK(is_consistent(run.restored, q, 1e-9));
  CHECK(run.iterations_used >= 50);
  CHECK(run.iterations_used <= 400);
}

TEST_CASE("cp regression: speech-like clip at w=2") {
  AudioFile audio = read_wav(std::string(DEQ_DATA_DIR) + "/vowels.wav");
  audio.signal.samples.resize(16384);  // first second of the clip
  Signal x = peak_normalize(audio.signal);
  QuantizedSignal q = quantize(x, 2);
  Frame frame = make_dgt_frame(1024, 1024, 256, 16384);

  SolverRun run = solve_analysis_cp(q, frame, cp_config(0.0055));
  const double gain = delta_sdr(x.samples, q.samples, run.restored.samples);
  CHECK(gain > 0.0);
  CHECK(gain == doctest::Approx(7.1912623).epsilon(1e-6));  // golden, first build
  CHECK(run.final_l1 < l1_norm(frame.analyze(q.samples)));
  CHECK(is_consistent(run.restored, q, 1e-9));
}
