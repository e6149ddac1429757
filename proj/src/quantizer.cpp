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

#include "deq/quantizer.hpp"

#include <cmath>
#include <stdexcept>

namespace deq {

double quantization_step(int word_length) {
  if (word_length < kMinWordLength || word_length > kMaxWordLength) {
    throw std::invalid_argument("quantization_step: word length must be in [2, 16], got " +
                                std::to_string(word_length));
  }
  return std::ldexp(1.0, 1 - word_length);  // exact power of two
}

QuantizedSignal quantize(const Signal& x, int word_length) {
  const double delta = quantization_step(word_length);
  if (x.samples.empty()) {
    throw std::invalid_argument("quantize: empty signal");
  }
  const double peak = 1.0 - 0.5 * delta;  // largest representable level
  QuantizedSignal q;
  q.samples.resize(x.samples.size());
  q.word_length = word_length;
  q.delta = delta;
  q.sample_rate = x.sample_rate;
  for (std::size_t n = 0; n < x.samples.size(); ++n) {
    const double v = x.samples[n];
    if (!std::isfinite(v)) {
      throw std::invalid_argument("quantize: non-finite sample at index " + std::to_string(n));
    }
    const double sign = (v >= 0.0) ? 1.0 : -1.0;
    double level = sign * delta * (std::floor(std::abs(v) / delta) + 0.5);
    if (level > peak) level = peak;
    if (level < -peak) level = -peak;
    q.samples[n] = level;
  }
  return q;
}

std::vector<SampleBounds> feasibility_bounds(const QuantizedSignal& q) {
  const double h = 0.5 * q.delta;
  std::vector<SampleBounds> bounds(q.samples.size());
  for (std::size_t n = 0; n < q.samples.size(); ++n) {
    bounds[n] = {q.samples[n] - h, q.samples[n] + h};
  }
  return bounds;
}

bool is_consistent(const Signal& restored, const QuantizedSignal& q, double tol) {
  if (restored.samples.size() != q.samples.size()) {
    throw std::invalid_argument("is_consistent: length mismatch");
  }
  const double limit = 0.5 * q.delta + tol;
  for (std::size_t n = 0; n < q.samples.size(); ++n) {
    if (std::abs(restored.samples[n] - q.samples[n]) > limit) return false;
  }
  return true;
}

}  // namespace deq
