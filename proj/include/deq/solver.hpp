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

#pragma once

#include <span>
#include <string>
#include <vector>

#include "deq/frame.hpp"
#include "deq/quantizer.hpp"

namespace deq {

enum class Algorithm {
  kDouglasRachford,  // synthesis (sparse) model
  kChambollePock,    // analysis (cosparse) model
};

struct SolverConfig {
  Algorithm algorithm = Algorithm::kDouglasRachford;

  double gamma = 0.0;         // DR soft-threshold level, > 0
  double lambda_relax = 1.0;  // DR relaxation, in (0, 2]

  double zeta = 0.0;   // CP primal step, > 0
  double sigma = 0.0;  // CP dual step; <= 0 selects 1/zeta
  double rho = 1.0;    // CP extrapolation, in [0, 1]

  int max_iter = 400;
  int min_iter = 50;
  double stop_tol = 1e-6;  // relative iterate change between the caps

  bool trace_metrics = false;
  // Optional clean reference for SDR traces. reference_length limits the
  // metric support (0 means the full padded length).
  std::span<const double> reference;
  std::size_t reference_length = 0;
};

struct TraceRow {
  int iteration = 0;
  double l1_objective = 0.0;
  double linf_violation = 0.0;
  bool has_sdr = false;
  double sdr = 0.0;        // dB, vs reference
  double delta_sdr = 0.0;  // dB, vs reference
};

struct SolverRun {
  Signal restored;                 // consistent with the quantized input
  CoefficientVector coefficients;  // final projected/analyzed coefficients
  int iterations_used = 0;
  double final_l1 = 0.0;
  double final_linf_violation = 0.0;
  std::vector<TraceRow> trace;
  std::vector<std::string> warnings;
};

// Douglas-Rachford iteration on the synthesis model: project the coefficient
// iterate onto the consistency set, soft-threshold the reflected point, relax.
// Starts from analyze(q); the restored signal is the synthesis of the final
// projected iterate, so consistency holds at any stopping time.
SolverRun solve_synthesis_dr(const QuantizedSignal& q, const Frame& frame,
                             const SolverConfig& cfg);

// Chambolle-Pock primal-dual iteration on the analysis model: dual clip,
// primal box projection, extrapolation. Starts from the quantized signal;
// the restored signal is the (already projected) final primal iterate.
SolverRun solve_analysis_cp(const QuantizedSignal& q, const Frame& frame,
                            const SolverConfig& cfg);

struct ParamLookup {
  double value = 0.0;
  bool from_table = true;  // false when extrapolated outside the tuned range
};

// Tuned step parameter (DR gamma / CP zeta) per transform and word length.
// Word lengths outside [2, 8] fall back to log-linear extrapolation of the
// nearest tuned pair and are flagged.
ParamLookup default_params(Algorithm algorithm, FrameKind transform, int word_length);

// Stop at max_iter, never before min_iter, and between the caps once the
// relative iterate change falls below cfg.stop_tol.
bool stopping_check(int iteration, double relative_change, const SolverConfig& cfg);

}  // namespace deq
