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
#include <vector>

#include "deq/frame.hpp"
#include "deq/quantizer.hpp"

namespace deq {

// Per-sample box [center_n - half_width, center_n + half_width], the set of
// signals consistent with a quantized observation. Holds a view; the caller
// keeps the underlying samples alive.
struct BoxSet {
  std::span<const double> center;
  double half_width = 0.0;

  static BoxSet around(const QuantizedSignal& q) {
    return BoxSet{q.samples, 0.5 * q.delta};
  }
};

// Prox of the (weighted) l1 norm: phase-preserving magnitude shrinkage by
// gamma times the entry weight. gamma == 0 is the identity.
CoefficientVector soft_threshold(CoefficientVector c, double gamma);

// Projection onto the (weighted) l-infinity ball of radius lambda: entries
// beyond the radius are rescaled onto it, phases preserved.
CoefficientVector clip_magnitude(CoefficientVector c, double lambda);

// Euclidean projection onto the box: values inside pass through, values
// outside map to the nearest bound.
std::vector<double> project_time_box(std::span<const double> y, const BoxSet& box);

// Projection onto {c : synthesize(c) in box} for Parseval-tight frames:
// z - analyze(synthesize(z) - project_time_box(synthesize(z))). When
// projected_signal is non-null it receives project_time_box(synthesize(z)),
// which equals synthesize of the result.
CoefficientVector project_coeff_set(const CoefficientVector& z, const Frame& frame,
                                    const BoxSet& box,
                                    std::vector<double>* projected_signal = nullptr);

}  // namespace deq
