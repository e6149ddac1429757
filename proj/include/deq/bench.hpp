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

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "deq/frame.hpp"
#include "deq/solver.hpp"

namespace deq {

enum class Model {
  kSynthesis,  // Douglas-Rachford on coefficients
  kAnalysis,   // Chambolle-Pock on samples
};

const char* to_string(Model model);
const char* to_string(FrameKind kind);

struct ExperimentConfig {
  std::vector<std::string> inputs;  // WAV files or directories of WAVs
  std::vector<int> word_lengths = {2, 3, 4, 5, 6, 7, 8};
  std::vector<FrameKind> transforms = {FrameKind::kDgtReal, FrameKind::kWmdct};
  std::vector<Model> models = {Model::kSynthesis, Model::kAnalysis};

  std::optional<double> gamma_override;
  std::optional<double> zeta_override;
  int max_iter = 400;
  int min_iter = 50;

  std::string out_dir = "dequant_out";
  bool emit_trace = false;
  bool emit_audio = false;
  int jobs = 1;
};

// Frame geometry used by the pipeline: 1024-tap Hann window, 1024 channels,
// hop 256 for the Gabor transform (redundancy 4).
inline constexpr std::size_t kPipelineWindow = 1024;
inline constexpr std::size_t kPipelineChannels = 1024;
inline constexpr std::size_t kPipelineHop = 256;

struct ResultRow {
  std::string file;
  int word_length = 0;
  FrameKind transform = FrameKind::kDgtReal;
  Model model = Model::kSynthesis;

  bool ok = false;
  std::string error;

  int iterations = 0;
  double sdr_quantized = 0.0;
  double sdr_restored = 0.0;
  double delta_sdr = 0.0;
  double l1_objective = 0.0;
  double linf_violation = 0.0;
  double wall_time_ms = 0.0;
};

struct SummaryCell {
  int word_length = 0;
  FrameKind transform = FrameKind::kDgtReal;
  Model model = Model::kSynthesis;
  int count = 0;
  double mean_delta_sdr = 0.0;
  double std_delta_sdr = 0.0;
  double mean_sdr_quantized = 0.0;
  double mean_sdr_restored = 0.0;
  double mean_iterations = 0.0;
};

struct SweepResult {
  std::vector<ResultRow> rows;       // sorted by (file, w, transform, model)
  std::vector<SummaryCell> summary;  // sorted by (w, transform, model)
  int failures = 0;
};

// One pipeline execution: read, peak-normalize, quantize, pad, solve, strip,
// evaluate. Emits restored audio and iteration traces per config. Errors are
// captured in the returned row instead of propagating.
ResultRow run_single(const ExperimentConfig& cfg, const std::string& file,
                     int word_length, FrameKind transform, Model model);

// Full grid over inputs x word lengths x transforms x models, executed by a
// bounded worker pool. Writes results.csv and summary.csv under cfg.out_dir.
// Rows are sorted, so output bytes do not depend on cfg.jobs.
SweepResult run_sweep(const ExperimentConfig& cfg);

// Writes the per-iteration trace of a solver run as CSV. Throws
// std::invalid_argument when the run was made without trace_metrics.
void emit_trace(const SolverRun& run, const std::string& path);

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void write_summary_csv(const std::vector<SummaryCell>& cells, std::ostream& out);
void print_summary_table(const std::vector<SummaryCell>& cells, std::ostream& out);

// Expands directories to their .wav contents (sorted); files pass through.
std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs);

}  // namespace deq
