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

#include <cstddef>
#include <vector>

namespace deq {

// Real-valued mono waveform, nominal amplitude range [-1, 1].
struct Signal {
  std::vector<double> samples;
  int sample_rate = 0;
};

// Output of the mid-riser uniform quantizer. Every sample sits on the
// lattice {+-delta*(k + 1/2)} with magnitude <= 1 - delta/2, and
// delta == 2^(1 - word_length).
struct QuantizedSignal {
  std::vector<double> samples;
  int word_length = 0;
  double delta = 0.0;
  int sample_rate = 0;
};

inline constexpr int kMinWordLength = 2;
inline constexpr int kMaxWordLength = 16;

// Step of the w-bit mid-riser quantizer: 2^(1-w). Throws
// std::invalid_argument for w outside [2, 16].
double quantization_step(int word_length);

// Mid-riser rule: sgn+(x) * delta * (floor(|x|/delta) + 1/2), with
// sgn+(0) = +1. Outputs beyond the representable range are clamped to
// +-(1 - delta/2). Throws std::invalid_argument on non-finite samples.
QuantizedSignal quantize(const Signal& x, int word_length);

struct SampleBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Per-sample feasibility interval [q_n - delta/2, q_n + delta/2].
std::vector<SampleBounds> feasibility_bounds(const QuantizedSignal& q);

// True iff max_n |restored_n - q_n| <= delta/2 + tol.
bool is_consistent(const Signal& restored, const QuantizedSignal& q,
                   double tol = 1e-9);

}  // namespace deq
