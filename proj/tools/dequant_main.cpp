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

#include <CLI11.hpp>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "deq/bench.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{
      "dequant - restores uniformly quantized audio by l1 minimization over "
      "time-frequency frames (Douglas-Rachford / Chambolle-Pock)"};
  app.set_config("--config", "", "Flat key=value config file; flags override");

  deq::ExperimentConfig cfg;
  std::vector<std::string> inputs;
  std::vector<int> bits = {2, 3, 4, 5, 6, 7, 8};
  std::string transform = "both";
  std::string model = "both";
  double gamma = 0.0;
  double zeta = 0.0;

  app.add_option("--input", inputs, "Input WAV file(s) or directories")
      ->required()
      ->expected(-1);
  app.add_option("--out", cfg.out_dir, "Output directory")
      ->capture_default_str();
  app.add_option("--bits", bits, "Word lengths to test (bits per sample)")
      ->delimiter(',')
      ->check(CLI::Range(2, 16));
  app.add_option("--transform", transform, "dgt|wmdct|both")
      ->check(CLI::IsMember({"dgt", "wmdct", "both"}))
      ->capture_default_str();
  app.add_option("--model", model, "synthesis|analysis|both")
      ->check(CLI::IsMember({"synthesis", "analysis", "both"}))
      ->capture_default_str();
  app.add_option("--gamma", gamma, "Override the Douglas-Rachford threshold");
  app.add_option("--zeta", zeta, "Override the Chambolle-Pock primal step");
  app.add_option("--max-iter", cfg.max_iter, "Iteration cap")->capture_default_str();
  app.add_option("--min-iter", cfg.min_iter, "Minimum iterations before stopping")
      ->capture_default_str();
  app.add_flag("--trace", cfg.emit_trace, "Write per-iteration trace CSVs");
  app.add_flag("--emit-audio", cfg.emit_audio, "Write restored WAV files");
  app.add_option("--jobs", cfg.jobs, "Parallel worker count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion") {
      return app.exit(e);
    }
    app.exit(e);
    return 2;
  }

  cfg.inputs = inputs;
  cfg.word_lengths = bits;
  std::sort(cfg.word_lengths.begin(), cfg.word_lengths.end());
  cfg.word_lengths.erase(
      std::unique(cfg.word_lengths.begin(), cfg.word_lengths.end()),
      cfg.word_lengths.end());
  if (transform == "dgt") {
    cfg.transforms = {deq::FrameKind::kDgtReal};
  } else if (transform == "wmdct") {
    cfg.transforms = {deq::FrameKind::kWmdct};
  }
  if (model == "synthesis") {
    cfg.models = {deq::Model::kSynthesis};
  } else if (model == "analysis") {
    cfg.models = {deq::Model::kAnalysis};
  }
  if (gamma > 0.0) cfg.gamma_override = gamma;
  if (zeta > 0.0) cfg.zeta_override = zeta;
  if (cfg.min_iter < 1 || cfg.max_iter < cfg.min_iter) {
    std::cerr << "dequant: need 1 <= min-iter <= max-iter\n";
    return 2;
  }

  deq::SweepResult result;
  try {
    result = deq::run_sweep(cfg);
  } catch (const std::exception& e) {
    std::cerr << "dequant: " << e.what() << '\n';
    return 2;
  }

  deq::print_summary_table(result.summary, std::cout);
  std::cout << result.rows.size() - result.failures << "/" << result.rows.size()
            << " runs succeeded; results under '" << cfg.out_dir << "'\n";

  if (result.failures > 0) {
    std::set<std::string> messages;
    for (const auto& row : result.rows) {
      if (!row.ok) messages.insert(row.error);
    }
    for (const auto& msg : messages) {
      std::cerr << "dequant: " << msg << '\n';
    }
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
