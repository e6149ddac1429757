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

#include <cmath>
#include <complex>
#include <stdexcept>

#include "deq/errors.hpp"
#include "deq/metrics.hpp"
#include "deq/proximal.hpp"

namespace deq {
namespace {

void validate_common(const QuantizedSignal& q, const Frame& frame,
                     const SolverConfig& cfg) {
  if (q.samples.size() != frame.signal_length()) {
    throw std::invalid_argument("solver: quantized signal length does not match frame");
  }
  if (!(q.delta > 0.0)) {
    throw std::invalid_argument("solver: quantization step must be positive");
  }
  if (cfg.min_iter < 1 || cfg.max_iter < cfg.min_iter) {
    throw std::invalid_argument("solver: need 1 <= min_iter <= max_iter");
  }
  if (!(cfg.stop_tol >= 0.0)) {
    throw std::invalid_argument("solver: stop_tol must be non-negative");
  }
}

// SDR of a candidate against the reference, restricted to the metric support.
struct TraceContext {
  std::span<const double> reference;
  std::size_t support = 0;
  double sdr_quantized = 0.0;
  bool active = false;
};

TraceContext make_trace_context(const QuantizedSignal& q, const SolverConfig& cfg) {
  TraceContext ctx;
  if (cfg.reference.empty()) return ctx;
  ctx.support = cfg.reference_length ? cfg.reference_length : cfg.reference.size();
  if (ctx.support > cfg.reference.size() || ctx.support > q.samples.size()) {
    throw std::invalid_argument("solver: reference support exceeds signal length");
  }
  ctx.reference = cfg.reference;
  ctx.sdr_quantized = sdr(ctx.reference.first(ctx.support),
                          std::span<const double>(q.samples).first(ctx.support));
  ctx.active = true;
  return ctx;
}

TraceRow make_trace_row(int iteration, double l1, double linf,
                        std::span<const double> candidate, const TraceContext& ctx) {
  TraceRow row;
  row.iteration = iteration;
  row.l1_objective = l1;
  row.linf_violation = linf;
  if (ctx.active) {
    row.has_sdr = true;
    row.sdr = sdr(ctx.reference.first(ctx.support), candidate.first(ctx.support));
    row.delta_sdr = row.sdr - ctx.sdr_quantized;
  }
  return row;
}

}  // namespace

bool stopping_check(int iteration, double relative_change, const SolverConfig& cfg) {
  if (iteration >= cfg.max_iter) return true;
  if (iteration < cfg.min_iter) return false;
  return relative_change < cfg.stop_tol;
}

SolverRun solve_synthesis_dr(const QuantizedSignal& q, const Frame& frame,
                             const SolverConfig& cfg) {
  if (cfg.algorithm != Algorithm::kDouglasRachford) {
    throw std::invalid_argument("solve_synthesis_dr: config built for another algorithm");
  }
  validate_common(q, frame, cfg);
  if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) {
    throw std::invalid_argument("solve_synthesis_dr: gamma must be positive");
  }
  if (!(cfg.lambda_relax > 0.0) || cfg.lambda_relax > 2.0) {
    throw std::invalid_argument("solve_synthesis_dr: relaxation must be in (0, 2]");
  }

  const BoxSet box = BoxSet::around(q);
  const TraceContext ctx = make_trace_context(q, cfg);
  SolverRun run;

  CoefficientVector c = frame.analyze(q.samples);
  CoefficientVector projected;
  std::vector<double> candidate;
  const double lambda = cfg.lambda_relax;

  int iteration = 0;
  while (true) {
    ++iteration;
    projected = project_coeff_set(c, frame, box, &candidate);

    // c += lambda * (soft(2*projected - c) - projected)
    double step2 = 0.0;
    double base2 = 0.0;
    for (std::size_t n = 0; n < c.cols; ++n) {
      std::complex<double>* cv = &c.values[n * c.rows];
      const std::complex<double>* pv = &projected.values[n * c.rows];
      for (std::size_t m = 0; m < c.rows; ++m) {
        const double g = cfg.gamma * c.weight(m);
        std::complex<double> reflected = 2.0 * pv[m] - cv[m];
        const double mag = std::abs(reflected);
        reflected = (mag <= g) ? std::complex<double>{0.0, 0.0}
                               : reflected * (1.0 - g / mag);
        const std::complex<double> step = lambda * (reflected - pv[m]);
        base2 += std::norm(cv[m]);
        step2 += std::norm(step);
        cv[m] += step;
      }
    }
    if (!std::isfinite(step2) || !std::isfinite(base2)) {
      throw NumericalError("solve_synthesis_dr: iterate diverged at iteration " +
                           std::to_string(iteration));
    }
    if (cfg.trace_metrics) {
      run.trace.push_back(make_trace_row(iteration, l1_norm(projected),
                                         linf_violation(candidate, q), candidate, ctx));
    }
    const double rel = std::sqrt(step2) / std::max(std::sqrt(base2), 1e-300);
    if (stopping_check(iteration, rel, cfg)) break;
  }

  // Return the projection of the final iterate, not the iterate itself, so
  // the output is consistent regardless of where the loop stopped.
  projected = project_coeff_set(c, frame, box, &candidate);
  run.iterations_used = iteration;
  run.final_l1 = l1_norm(projected);
  run.final_linf_violation = linf_violation(candidate, q);
  run.restored = Signal{std::move(candidate), q.sample_rate};
  run.coefficients = std::move(projected);
  return run;
}

SolverRun solve_analysis_cp(const QuantizedSignal& q, const Frame& frame,
                            const SolverConfig& cfg) {
  if (cfg.algorithm != Algorithm::kChambollePock) {
    throw std::invalid_argument("solve_analysis_cp: config built for another algorithm");
  }
  validate_common(q, frame, cfg);
  if (!(cfg.zeta > 0.0) || !std::isfinite(cfg.zeta)) {
    throw std::invalid_argument("solve_analysis_cp: zeta must be positive");
  }
  const double sigma = (cfg.sigma > 0.0) ? cfg.sigma : 1.0 / cfg.zeta;
  if (!std::isfinite(sigma)) {
    throw std::invalid_argument("solve_analysis_cp: sigma must be finite");
  }
  if (cfg.rho < 0.0 || cfg.rho > 1.0) {
    throw std::invalid_argument("solve_analysis_cp: rho must be in [0, 1]");
  }

  const BoxSet box = BoxSet::around(q);
  const TraceContext ctx = make_trace_context(q, cfg);
  SolverRun run;

  const double op_norm = frame.operator_norm();
  if (cfg.rho == 1.0 && cfg.zeta * sigma * op_norm * op_norm >= 1.0 - 1e-12) {
    run.warnings.push_back(
        "step sizes sit on or beyond the guaranteed-convergence boundary "
        "(zeta * sigma * ||A||^2 >= 1 with rho = 1)");
  }

  const std::size_t n_samples = q.samples.size();
  std::vector<double> primal = q.samples;  // feasible starting point
  std::vector<double> primal_bar = primal;
  CoefficientVector dual = frame.zero_coefficients();

  int iteration = 0;
  while (true) {
    ++iteration;

    CoefficientVector analyzed = frame.analyze(primal_bar);
    for (std::size_t n = 0; n < dual.cols; ++n) {
      std::complex<double>* dv = &dual.values[n * dual.rows];
      const std::complex<double>* av = &analyzed.values[n * dual.rows];
      for (std::size_t m = 0; m < dual.rows; ++m) {
        std::complex<double> z = dv[m] + sigma * av[m];
        const double radius = dual.weight(m);
        const double mag = std::abs(z);
        if (mag > radius) z *= radius / mag;
        dv[m] = z;
      }
    }

    std::vector<double> descent = frame.synthesize(dual);
    double step2 = 0.0;
    double base2 = 0.0;
    for (std::size_t n = 0; n < n_samples; ++n) {
      const double lo = box.center[n] - box.half_width;
      const double hi = box.center[n] + box.half_width;
      const double next = std::min(std::max(primal[n] - cfg.zeta * descent[n], lo), hi);
      base2 += primal[n] * primal[n];
      const double d = next - primal[n];
      step2 += d * d;
      primal_bar[n] = next + cfg.rho * d;
      primal[n] = next;
    }
    if (!std::isfinite(step2) || !std::isfinite(base2)) {
      throw NumericalError("solve_analysis_cp: iterate diverged at iteration " +
                           std::to_string(iteration));
    }
    if (cfg.trace_metrics) {
      run.trace.push_back(make_trace_row(iteration, l1_norm(frame.analyze(primal)),
                                         linf_violation(primal, q), primal, ctx));
    }
    const double rel = std::sqrt(step2) / std::max(std::sqrt(base2), 1e-300);
    if (stopping_check(iteration, rel, cfg)) break;
  }

  run.iterations_used = iteration;
  run.coefficients = frame.analyze(primal);
  run.final_l1 = l1_norm(run.coefficients);
  run.final_linf_violation = linf_violation(primal, q);
  run.restored = Signal{std::move(primal), q.sample_rate};
  return run;
}

namespace {

// Tuned per-word-length step sizes; rows are {DGT, WMDCT}, columns w = 2..8.
constexpr double kDrGamma[2][7] = {
    {0.0073, 0.0040, 0.0015, 0.00025, 0.000049, 0.000017, 0.0000066},
    {0.0204, 0.0123, 0.0055, 0.00035, 0.000084, 0.000028, 0.0000099},
};
constexpr double kCpZeta[2][7] = {
    {0.0055, 0.0031, 0.0013, 0.00017, 0.000041, 0.000015, 0.0000057},
    {0.0213, 0.0110, 0.0053, 0.00023, 0.000066, 0.000022, 0.0000075},
};

}  // namespace

ParamLookup default_params(Algorithm algorithm, FrameKind transform, int word_length) {
  const auto& table =
      (algorithm == Algorithm::kDouglasRachford) ? kDrGamma : kCpZeta;
  const int t = (transform == FrameKind::kDgtReal) ? 0 : 1;
  if (word_length >= 2 && word_length <= 8) {
    return ParamLookup{table[t][word_length - 2], true};
  }
  // Log-linear extrapolation from the nearest tuned pair; the values decay
  // roughly geometrically in w and only affect convergence speed.
  const int lo = (word_length < 2) ? 2 : 7;
  const double va = table[t][lo - 2];
  const double vb = table[t][lo - 1];
  const double log_step = std::log(vb) - std::log(va);
  const double value = std::exp(std::log(va) + log_step * (word_length - lo));
  return ParamLookup{value, false};
}

}  // namespace deq
