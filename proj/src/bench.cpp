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

#include "deq/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "deq/audio_io.hpp"
#include "deq/errors.hpp"
#include "deq/metrics.hpp"

namespace deq {
namespace {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

std::string row_stem(const ResultRow& row) {
  return fs::path(row.file).stem().string() + "_w" + std::to_string(row.word_length) +
         "_" + to_string(row.transform) + "_" + to_string(row.model);
}

// Extends a quantized signal to the padded length. The fill is the quantizer
// output for a zero sample, so the padded observation equals what quantizing
// the zero-padded original would have produced.
QuantizedSignal pad_quantized(const QuantizedSignal& q, std::size_t target) {
  QuantizedSignal padded = q;
  padded.samples.resize(target, 0.5 * q.delta);
  return padded;
}

ResultRow run_single_impl(const ExperimentConfig& cfg, const std::string& file,
                          int word_length, FrameKind transform, Model model) {
  ResultRow row;
  row.file = file;
  row.word_length = word_length;
  row.transform = transform;
  row.model = model;

  const AudioFile audio = read_wav(file);
  const Signal original = peak_normalize(audio.signal);
  const QuantizedSignal q = quantize(original, word_length);

  const std::size_t n0 = original.samples.size();
  const std::size_t padded_len =
      padded_length(transform, kPipelineWindow, kPipelineChannels, kPipelineHop, n0);
  const QuantizedSignal q_padded = pad_quantized(q, padded_len);
  std::vector<double> original_padded = original.samples;
  original_padded.resize(padded_len, 0.0);

  const Frame frame =
      (transform == FrameKind::kDgtReal)
          ? make_dgt_frame(kPipelineWindow, kPipelineChannels, kPipelineHop, padded_len)
          : make_wmdct_frame(kPipelineWindow, kPipelineChannels, padded_len);

  SolverConfig solver_cfg;
  solver_cfg.max_iter = cfg.max_iter;
  solver_cfg.min_iter = cfg.min_iter;
  solver_cfg.trace_metrics = cfg.emit_trace;
  solver_cfg.reference = original_padded;
  solver_cfg.reference_length = n0;

  SolverRun run;
  if (model == Model::kSynthesis) {
    solver_cfg.algorithm = Algorithm::kDouglasRachford;
    solver_cfg.gamma = cfg.gamma_override
                           ? *cfg.gamma_override
                           : default_params(solver_cfg.algorithm, transform, word_length).value;
    run = solve_synthesis_dr(q_padded, frame, solver_cfg);
  } else {
    solver_cfg.algorithm = Algorithm::kChambollePock;
    solver_cfg.zeta = cfg.zeta_override
                          ? *cfg.zeta_override
                          : default_params(solver_cfg.algorithm, transform, word_length).value;
    run = solve_analysis_cp(q_padded, frame, solver_cfg);
  }

  // Metrics on the original support only; padding is an implementation detail.
  std::span<const double> restored(run.restored.samples.data(), n0);
  row.iterations = run.iterations_used;
  row.sdr_quantized = sdr(original.samples, q.samples);
  row.sdr_restored = sdr(original.samples, restored);
  row.delta_sdr = row.sdr_restored - row.sdr_quantized;
  row.l1_objective = run.final_l1;
  row.linf_violation = linf_violation(restored, q);
  row.ok = true;

  if (cfg.emit_audio) {
    Signal out{std::vector<double>(restored.begin(), restored.end()), q.sample_rate};
    write_wav((fs::path(cfg.out_dir) / (row_stem(row) + "_restored.wav")).string(), out,
              WavEncoding::kPcm16);
  }
  if (cfg.emit_trace) {
    emit_trace(run, (fs::path(cfg.out_dir) / (row_stem(row) + "_trace.csv")).string());
  }
  return row;
}

bool row_order(const ResultRow& a, const ResultRow& b) {
  return std::tie(a.file, a.word_length, a.transform, a.model) <
         std::tie(b.file, b.word_length, b.transform, b.model);
}

std::vector<SummaryCell> summarize(const std::vector<ResultRow>& rows) {
  std::vector<SummaryCell> cells;
  for (const ResultRow& row : rows) {
    if (!row.ok) continue;
    auto it = std::find_if(cells.begin(), cells.end(), [&](const SummaryCell& c) {
      return c.word_length == row.word_length && c.transform == row.transform &&
             c.model == row.model;
    });
    if (it == cells.end()) {
      cells.push_back(SummaryCell{row.word_length, row.transform, row.model,
                                  0, 0.0, 0.0, 0.0, 0.0, 0.0});
      it = std::prev(cells.end());
    }
    ++it->count;
    it->mean_delta_sdr += row.delta_sdr;
    it->std_delta_sdr += row.delta_sdr * row.delta_sdr;
    it->mean_sdr_quantized += row.sdr_quantized;
    it->mean_sdr_restored += row.sdr_restored;
    it->mean_iterations += row.iterations;
  }
  for (SummaryCell& c : cells) {
    const double n = c.count;
    c.mean_delta_sdr /= n;
    c.mean_sdr_quantized /= n;
    c.mean_sdr_restored /= n;
    c.mean_iterations /= n;
    const double var =
        (c.count > 1)
            ? std::max(0.0, (c.std_delta_sdr - n * c.mean_delta_sdr * c.mean_delta_sdr) /
                                (n - 1.0))
            : 0.0;
    c.std_delta_sdr = std::sqrt(var);
  }
  std::sort(cells.begin(), cells.end(), [](const SummaryCell& a, const SummaryCell& b) {
    return std::tie(a.word_length, a.transform, a.model) <
           std::tie(b.word_length, b.transform, b.model);
  });
  return cells;
}

}  // namespace

const char* to_string(Model model) {
  return model == Model::kSynthesis ? "synthesis" : "analysis";
}

const char* to_string(FrameKind kind) {
  return kind == FrameKind::kDgtReal ? "dgt" : "wmdct";
}

std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const std::string& input : inputs) {
    fs::path p(input);
    if (fs::is_directory(p)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".wav") {
          found.push_back(entry.path().string());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(input);
    }
  }
  return files;
}

ResultRow run_single(const ExperimentConfig& cfg, const std::string& file,
                     int word_length, FrameKind transform, Model model) {
  const auto start = std::chrono::steady_clock::now();
  ResultRow row;
  try {
    row = run_single_impl(cfg, file, word_length, transform, model);
  } catch (const std::exception& e) {
    row.file = file;
    row.word_length = word_length;
    row.transform = transform;
    row.model = model;
    row.ok = false;
    row.error = e.what();
  }
  row.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return row;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  const std::vector<std::string> files = expand_inputs(cfg.inputs);
  if (files.empty()) {
    throw std::invalid_argument("run_sweep: no input files");
  }
  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
  }

  struct Task {
    std::string file;
    int word_length;
    FrameKind transform;
    Model model;
  };
  std::vector<Task> tasks;
  for (const std::string& file : files) {
    for (int w : cfg.word_lengths) {
      for (FrameKind tf : cfg.transforms) {
        for (Model model : cfg.models) {
          tasks.push_back({file, w, tf, model});
        }
      }
    }
  }

  SweepResult result;
  result.rows.resize(tasks.size());
  const int jobs = std::max(1, cfg.jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      result.rows[i] = run_single(cfg, t.file, t.word_length, t.transform, t.model);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  std::sort(result.rows.begin(), result.rows.end(), row_order);
  for (const ResultRow& row : result.rows) {
    if (!row.ok) ++result.failures;
  }
  result.summary = summarize(result.rows);

  if (!cfg.out_dir.empty()) {
    std::ofstream results_out(fs::path(cfg.out_dir) / "results.csv");
    write_results_csv(result.rows, results_out);
    std::ofstream summary_out(fs::path(cfg.out_dir) / "summary.csv");
    write_summary_csv(result.summary, summary_out);
    if (!results_out || !summary_out) {
      throw IoError("run_sweep: failed to write CSV output under '" + cfg.out_dir + "'");
    }
  }
  return result;
}

void emit_trace(const SolverRun& run, const std::string& path) {
  if (run.trace.empty()) {
    throw std::invalid_argument(
        "emit_trace: run has no trace; enable trace_metrics (--trace) when solving");
  }
  std::ofstream out(path);
  if (!out) {
    throw IoError("emit_trace: cannot open '" + path + "'");
  }
  out << "# dequant trace schema v1\n";
  out << "iteration,l1_objective,linf_violation,sdr_db,delta_sdr_db\n";
  for (const TraceRow& row : run.trace) {
    out << row.iteration << ',' << format_double(row.l1_objective) << ','
        << format_double(row.linf_violation) << ',';
    if (row.has_sdr) {
      out << format_double(row.sdr) << ',' << format_double(row.delta_sdr);
    } else {
      out << ',';
    }
    out << '\n';
  }
  if (!out) {
    throw IoError("emit_trace: short write to '" + path + "'");
  }
}

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << "# dequant results schema v1\n";
  out << "file,word_length,transform,model,status,iterations,sdr_quantized_db,"
         "sdr_restored_db,delta_sdr_db,l1_objective,linf_violation,wall_time_ms\n";
  for (const ResultRow& row : rows) {
    out << sanitize(row.file) << ',' << row.word_length << ',' << to_string(row.transform)
        << ',' << to_string(row.model) << ',';
    if (row.ok) {
      out << "ok," << row.iterations << ',' << format_double(row.sdr_quantized) << ','
          << format_double(row.sdr_restored) << ',' << format_double(row.delta_sdr) << ','
          << format_double(row.l1_objective) << ',' << format_double(row.linf_violation);
    } else {
      out << "error: " << sanitize(row.error) << ",,,,,,";
    }
    out << ',' << format_double(row.wall_time_ms) << '\n';
  }
}

void write_summary_csv(const std::vector<SummaryCell>& cells, std::ostream& out) {
  out << "# dequant summary schema v1\n";
  out << "word_length,transform,model,n,mean_delta_sdr_db,std_delta_sdr_db,"
         "mean_sdr_quantized_db,mean_sdr_restored_db,mean_iterations\n";
  for (const SummaryCell& c : cells) {
    out << c.word_length << ',' << to_string(c.transform) << ',' << to_string(c.model) << ','
        << c.count << ',' << format_double(c.mean_delta_sdr) << ','
        << format_double(c.std_delta_sdr) << ',' << format_double(c.mean_sdr_quantized)
        << ',' << format_double(c.mean_sdr_restored) << ','
        << format_double(c.mean_iterations) << '\n';
  }
}

void print_summary_table(const std::vector<SummaryCell>& cells, std::ostream& out) {
  out << "  w  transform  model       n   mean dSDR   std dSDR   mean iters\n";
  for (const SummaryCell& c : cells) {
    out << std::setw(3) << c.word_length << "  " << std::setw(9) << std::left
        << to_string(c.transform) << "  " << std::setw(10) << to_string(c.model)
        << std::right << std::setw(4) << c.count << "  " << std::setw(10) << std::fixed
        << std::setprecision(3) << c.mean_delta_sdr << "  " << std::setw(9)
        << c.std_delta_sdr << "  " << std::setw(11) << std::setprecision(1)
        << c.mean_iterations << '\n';
  }
  out.unsetf(std::ios::fixed);
  out << std::setprecision(6);
}

}  // namespace deq
