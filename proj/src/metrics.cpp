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

#include "deq/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace deq {

double sdr(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("sdr: length mismatch");
  }
  double signal = 0.0;
  double error = 0.0;
  for (std::size_t n = 0; n < u.size(); ++n) {
    signal += u[n] * u[n];
    const double d = u[n] - v[n];
    error += d * d;
  }
  if (signal == 0.0) {
    throw std::invalid_argument("sdr: reference signal has zero energy");
  }
  if (error == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(signal / error);
}

double delta_sdr(std::span<const double> original, std::span<const double> quantized,
                 std::span<const double> restored) {
  return sdr(original, restored) - sdr(original, quantized);
}

double linf_violation(std::span<const double> restored, const QuantizedSignal& q) {
  if (restored.size() != q.samples.size()) {
    throw std::invalid_argument("linf_violation: length mismatch");
  }
  double worst = 0.0;
  for (std::size_t n = 0; n < restored.size(); ++n) {
    worst = std::max(worst, std::abs(restored[n] - q.samples[n]));
  }
  return std::max(0.0, worst - 0.5 * q.delta);
}

}  // namespace deq
