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

#include "deq/quantizer.hpp"

namespace deq {

struct EvaluationReport {
  double sdr_quantized = 0.0;   // dB
  double sdr_restored = 0.0;    // dB
  double delta_sdr = 0.0;       // dB, sdr_restored - sdr_quantized
  double linf_violation = 0.0;  // amplitude beyond the half-step
  double l1_objective = 0.0;
};

// 10*log10(||u||^2 / ||u - v||^2) in dB. Returns +infinity when u == v
// exactly; throws std::invalid_argument on length mismatch or ||u|| == 0.
double sdr(std::span<const double> u, std::span<const double> v);

// sdr(original, restored) - sdr(original, quantized).
double delta_sdr(std::span<const double> original, std::span<const double> quantized,
                 std::span<const double> restored);

// max(0, max_n |restored_n - q_n| - delta/2).
double linf_violation(std::span<const double> restored, const QuantizedSignal& q);

}  // namespace deq
