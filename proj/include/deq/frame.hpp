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

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace deq {

enum class FrameKind {
  kDgtReal,  // real-valued discrete Gabor transform, half spectrum stored
  kWmdct,    // windowed MDCT, critically sampled, real coefficients
};

// Time-frequency coefficients on a (rows x cols) grid, stored column-major
// (one analysis frame per column). WMDCT coefficients are real and carry a
// zero imaginary part. row_weights, when set, holds the per-row factor that
// makes the stored half spectrum equivalent to the full spectrum: the weight
// doubles as the l1 weight of each entry (sqrt(2) on rows whose conjugate
// mirror is not stored, 1 elsewhere).
struct CoefficientVector {
  std::vector<std::complex<double>> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::shared_ptr<const std::vector<double>> row_weights;

  std::size_t size() const { return values.size(); }
  double weight(std::size_t row) const {
    return row_weights ? (*row_weights)[row] : 1.0;
  }
};

// Weighted l1 norm of the stored coefficients; equals the l1 norm of the
// full (conjugate-symmetric) spectrum for half-spectrum storage.
double l1_norm(const CoefficientVector& c);

// A Parseval-tight analysis/synthesis pair over a fixed signal length. The
// window is normalized at construction so that synthesize(analyze(x)) == x
// and ||analyze(x)||_2 == ||x||_2. Immutable after construction; analyze and
// synthesize are safe to call concurrently from multiple threads.
class Frame {
 public:
  FrameKind kind() const;
  std::size_t signal_length() const;
  std::size_t window_length() const;
  std::size_t channels() const;
  std::size_t hop() const;  // DGT time hop; WMDCT half-window advance
  std::size_t rows() const;
  std::size_t cols() const;
  std::size_t coeff_count() const { return rows() * cols(); }
  double redundancy() const;

  // Normalized window taps (DGT: window_length; WMDCT: full atom length).
  const std::vector<double>& window() const;
  std::shared_ptr<const std::vector<double>> l1_weights() const;

  CoefficientVector analyze(std::span<const double> x) const;
  std::vector<double> synthesize(const CoefficientVector& c) const;

  // Coefficient grid matching this frame, all zeros.
  CoefficientVector zero_coefficients() const;

  // Operator norm ||A||. 1 by construction; debug builds verify by power
  // iteration before returning.
  double operator_norm() const;

  struct Impl;
  explicit Frame(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

// Painless-case real Gabor frame: Hann-derived window of window_length taps,
// tight-normalized, hop <= window_length <= channels, hop | signal_length.
// Stores channels/2 + 1 frequency rows. Redundancy channels/hop.
Frame make_dgt_frame(std::size_t window_length, std::size_t channels,
                     std::size_t hop, std::size_t signal_length);

// Critically sampled windowed MDCT: channels/2 cosine bands advancing by
// channels/2 samples, atoms of window_length <= channels samples. The window
// is normalized to the half-overlap power-complementary condition, so the
// frame is an orthonormal basis with coeff_count == signal_length.
Frame make_wmdct_frame(std::size_t window_length, std::size_t channels,
                       std::size_t signal_length);

// Power-iteration estimate of ||A|| (largest singular value), used to verify
// tightness independently of the closed-form normalization.
double estimate_operator_norm(const Frame& frame, int iterations = 30,
                              unsigned seed = 1);

// Smallest supported padded length >= n for the given geometry (multiple of
// hop for the DGT, of channels for the WMDCT, and at least window_length).
std::size_t padded_length(FrameKind kind, std::size_t window_length,
                          std::size_t channels, std::size_t hop, std::size_t n);

}  // namespace deq
