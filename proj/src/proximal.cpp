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

#include "deq/proximal.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace deq {

CoefficientVector soft_threshold(CoefficientVector c, double gamma) {
  if (!(gamma >= 0.0)) {
    throw std::invalid_argument("soft_threshold: gamma must be non-negative");
  }
  for (std::size_t n = 0; n < c.cols; ++n) {
    std::complex<double>* v = &c.values[n * c.rows];
    for (std::size_t m = 0; m < c.rows; ++m) {
      const double g = gamma * c.weight(m);
      const double mag = std::abs(v[m]);
      v[m] = (mag <= g) ? std::complex<double>{0.0, 0.0} : v[m] * (1.0 - g / mag);
    }
  }
  return c;
}

CoefficientVector clip_magnitude(CoefficientVector c, double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("clip_magnitude: lambda must be positive");
  }
  for (std::size_t n = 0; n < c.cols; ++n) {
    std::complex<double>* v = &c.values[n * c.rows];
    for (std::size_t m = 0; m < c.rows; ++m) {
      const double radius = lambda * c.weight(m);
      const double mag = std::abs(v[m]);
      if (mag > radius) v[m] *= radius / mag;
    }
  }
  return c;
}

std::vector<double> project_time_box(std::span<const double> y, const BoxSet& box) {
  if (y.size() != box.center.size()) {
    throw std::invalid_argument("project_time_box: length mismatch");
  }
  std::vector<double> out(y.size());
  for (std::size_t n = 0; n < y.size(); ++n) {
    const double lo = box.center[n] - box.half_width;
    const double hi = box.center[n] + box.half_width;
    out[n] = std::min(std::max(y[n], lo), hi);
  }
  return out;
}

CoefficientVector project_coeff_set(const CoefficientVector& z, const Frame& frame,
                                    const BoxSet& box,
                                    std::vector<double>* projected_signal) {
  if (z.rows != frame.rows() || z.cols != frame.cols()) {
    throw std::invalid_argument("project_coeff_set: coefficient grid does not match frame");
  }
  if (box.center.size() != frame.signal_length()) {
    throw std::invalid_argument("project_coeff_set: box length does not match frame");
  }
  std::vector<double> synth = frame.synthesize(z);
  std::vector<double> inside = project_time_box(synth, box);
  for (std::size_t n = 0; n < synth.size(); ++n) synth[n] -= inside[n];
  CoefficientVector residual = frame.analyze(synth);
  CoefficientVector out = z;
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    out.values[k] -= residual.values[k];
  }
  if (projected_signal) *projected_signal = std::move(inside);
  return out;
}

}  // namespace deq
