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

#include "deq/frame.hpp"

#include <fftw3.h>

#include <cassert>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "deq/errors.hpp"

namespace deq {
namespace {

// The FFTW planner is not thread-safe; plan execution on caller-owned
// buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Hann taps symmetric about the window center, strictly positive at the
// endpoints so every hop residue keeps nonzero energy.
std::vector<double> hann_window(std::size_t length) {
  std::vector<double> w(length);
  for (std::size_t j = 0; j < length; ++j) {
    const double s = std::sin(std::numbers::pi * (static_cast<double>(j) + 0.5) /
                              static_cast<double>(length));
    w[j] = s * s;
  }
  return w;
}

}  // namespace

struct Frame::Impl {
  FrameKind kind = FrameKind::kDgtReal;
  std::size_t window_length = 0;
  std::size_t channels = 0;
  std::size_t hop = 0;
  std::size_t signal_length = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t bands = 0;  // WMDCT cosine bands (= channels / 2)

  std::vector<double> window;                            // normalized taps
  std::shared_ptr<const std::vector<double>> l1_weights;  // DGT only
  std::vector<double> synth_row_scale;                   // DGT c2r input scale
  std::vector<double> cos_basis;  // WMDCT direct path (odd band counts)

  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  fftw_plan dct4 = nullptr;

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
    if (dct4) fftw_destroy_plan(dct4);
  }
};

namespace {

void analyze_dgt(const Frame::Impl& f, std::span<const double> x,
                 CoefficientVector& out) {
  const std::size_t m_count = f.rows;
  const std::size_t length = f.signal_length;
  std::vector<double> seg(f.channels, 0.0);
  std::vector<std::complex<double>> spec(m_count);
  const std::vector<double>& scale = *f.l1_weights;  // sqrt(multiplicity)
  for (std::size_t n = 0; n < f.cols; ++n) {
    const std::size_t base = n * f.hop;
    for (std::size_t j = 0; j < f.window_length; ++j) {
      std::size_t idx = base + j;
      if (idx >= length) idx -= length;
      seg[j] = x[idx] * f.window[j];
    }
    fftw_execute_dft_r2c(f.r2c, seg.data(),
                         reinterpret_cast<fftw_complex*>(spec.data()));
    std::complex<double>* dst = &out.values[n * m_count];
    for (std::size_t m = 0; m < m_count; ++m) dst[m] = spec[m] * scale[m];
  }
}

void synthesize_dgt(const Frame::Impl& f, const CoefficientVector& c,
                    std::vector<double>& out) {
  const std::size_t m_count = f.rows;
  const std::size_t length = f.signal_length;
  const bool even = (f.channels % 2 == 0);
  std::vector<std::complex<double>> spec(m_count);
  std::vector<double> seg(f.channels);
  for (std::size_t n = 0; n < f.cols; ++n) {
    const std::complex<double>* src = &c.values[n * m_count];
    for (std::size_t m = 0; m < m_count; ++m) {
      spec[m] = src[m] * f.synth_row_scale[m];
    }
    // Self-conjugate rows are real in the range of the analysis operator;
    // the adjoint annihilates their imaginary parts.
    spec[0] = {spec[0].real(), 0.0};
    if (even) spec[m_count - 1] = {spec[m_count - 1].real(), 0.0};
    fftw_execute_dft_c2r(f.c2r, reinterpret_cast<fftw_complex*>(spec.data()),
                         seg.data());
    const std::size_t base = n * f.hop;
    for (std::size_t j = 0; j < f.window_length; ++j) {
      std::size_t idx = base + j;
      if (idx >= length) idx -= length;
      out[idx] += f.window[j] * seg[j];
    }
  }
}

// Folds a windowed 2b-sample segment into the b-point DCT-IV input. Sign and
// index bookkeeping follows the cosine symmetries of the lapped transform;
// valid for even b.
void fold_mdct(std::span<const double> seg, std::span<double> folded) {
  const std::size_t b = folded.size();
  const std::size_t h = b / 2;
  for (std::size_t r = 0; r < h; ++r) {
    folded[r] = -seg[3 * h - 1 - r] - seg[3 * h + r];
  }
  for (std::size_t r = h; r < b; ++r) {
    folded[r] = seg[r - h] - seg[3 * h - 1 - r];
  }
}

void unfold_mdct(std::span<const double> v, std::span<double> seg) {
  const std::size_t b = v.size();
  const std::size_t h = b / 2;
  for (std::size_t j = 0; j < h; ++j) seg[j] = v[j + h];
  for (std::size_t j = h; j < 3 * h; ++j) seg[j] = -v[3 * h - 1 - j];
  for (std::size_t j = 3 * h; j < 2 * b; ++j) seg[j] = -v[j - 3 * h];
}

void analyze_wmdct(const Frame::Impl& f, std::span<const double> x,
                   CoefficientVector& out) {
  const std::size_t b = f.bands;
  const std::size_t atom = 2 * b;
  const std::size_t length = f.signal_length;
  const double scale = std::sqrt(2.0 / static_cast<double>(b));
  std::vector<double> seg(atom);
  std::vector<double> folded(b), bands(b);
  for (std::size_t n = 0; n < f.cols; ++n) {
    const std::size_t base = n * b;
    for (std::size_t j = 0; j < atom; ++j) {
      std::size_t idx = base + j;
      if (idx >= length) idx -= length;
      seg[j] = x[idx] * f.window[j];
    }
    std::complex<double>* dst = &out.values[n * b];
    if (f.dct4) {
      fold_mdct(seg, folded);
      fftw_execute_r2r(f.dct4, folded.data(), bands.data());
      for (std::size_t k = 0; k < b; ++k) dst[k] = 0.5 * scale * bands[k];
    } else {
      for (std::size_t k = 0; k < b; ++k) {
        double acc = 0.0;
        const double* basis = &f.cos_basis[k * atom];
        for (std::size_t j = 0; j < atom; ++j) acc += basis[j] * seg[j];
        dst[k] = acc;
      }
    }
  }
}

void synthesize_wmdct(const Frame::Impl& f, const CoefficientVector& c,
                      std::vector<double>& out) {
  const std::size_t b = f.bands;
  const std::size_t atom = 2 * b;
  const std::size_t length = f.signal_length;
  const double scale = std::sqrt(2.0 / static_cast<double>(b));
  std::vector<double> bands(b), v(b), seg(atom);
  for (std::size_t n = 0; n < f.cols; ++n) {
    const std::complex<double>* src = &c.values[n * b];
    if (f.dct4) {
      for (std::size_t k = 0; k < b; ++k) bands[k] = src[k].real();
      fftw_execute_r2r(f.dct4, bands.data(), v.data());
      for (std::size_t k = 0; k < b; ++k) v[k] *= 0.5 * scale;
      unfold_mdct(v, seg);
    } else {
      for (std::size_t j = 0; j < atom; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < b; ++k) {
          acc += f.cos_basis[k * atom + j] * src[k].real();
        }
        seg[j] = acc;
      }
    }
    const std::size_t base = n * b;
    for (std::size_t j = 0; j < atom; ++j) {
      std::size_t idx = base + j;
      if (idx >= length) idx -= length;
      out[idx] += f.window[j] * seg[j];
    }
  }
}

}  // namespace

double l1_norm(const CoefficientVector& c) {
  double acc = 0.0;
  if (c.row_weights) {
    const std::vector<double>& w = *c.row_weights;
    for (std::size_t n = 0; n < c.cols; ++n) {
      const std::complex<double>* v = &c.values[n * c.rows];
      for (std::size_t m = 0; m < c.rows; ++m) acc += w[m] * std::abs(v[m]);
    }
  } else {
    for (const auto& z : c.values) acc += std::abs(z);
  }
  return acc;
}

FrameKind Frame::kind() const { return impl_->kind; }
std::size_t Frame::signal_length() const { return impl_->signal_length; }
std::size_t Frame::window_length() const { return impl_->window_length; }
std::size_t Frame::channels() const { return impl_->channels; }
std::size_t Frame::hop() const { return impl_->hop; }
std::size_t Frame::rows() const { return impl_->rows; }
std::size_t Frame::cols() const { return impl_->cols; }
const std::vector<double>& Frame::window() const { return impl_->window; }
std::shared_ptr<const std::vector<double>> Frame::l1_weights() const {
  return impl_->l1_weights;
}

double Frame::redundancy() const {
  if (impl_->kind == FrameKind::kDgtReal) {
    return static_cast<double>(impl_->channels) / static_cast<double>(impl_->hop);
  }
  return 1.0;
}

CoefficientVector Frame::zero_coefficients() const {
  CoefficientVector c;
  c.rows = impl_->rows;
  c.cols = impl_->cols;
  c.row_weights = impl_->l1_weights;
  c.values.assign(c.rows * c.cols, {0.0, 0.0});
  return c;
}

CoefficientVector Frame::analyze(std::span<const double> x) const {
  if (x.size() != impl_->signal_length) {
    throw std::invalid_argument("analyze: signal length " + std::to_string(x.size()) +
                                " does not match frame length " +
                                std::to_string(impl_->signal_length));
  }
  CoefficientVector c = zero_coefficients();
  if (impl_->kind == FrameKind::kDgtReal) {
    analyze_dgt(*impl_, x, c);
  } else {
    analyze_wmdct(*impl_, x, c);
  }
  return c;
}

std::vector<double> Frame::synthesize(const CoefficientVector& c) const {
  if (c.values.size() != coeff_count() || c.rows != impl_->rows) {
    throw std::invalid_argument("synthesize: coefficient grid does not match frame");
  }
  std::vector<double> out(impl_->signal_length, 0.0);
  if (impl_->kind == FrameKind::kDgtReal) {
    synthesize_dgt(*impl_, c, out);
  } else {
    synthesize_wmdct(*impl_, c, out);
  }
  return out;
}

double Frame::operator_norm() const {
#ifndef NDEBUG
  const double est = estimate_operator_norm(*this);
  assert(std::abs(est - 1.0) <= 1e-6);
#endif
  return 1.0;
}

Frame make_dgt_frame(std::size_t window_length, std::size_t channels,
                     std::size_t hop, std::size_t signal_length) {
  if (window_length == 0 || channels == 0 || hop == 0 || signal_length == 0) {
    throw std::invalid_argument("make_dgt_frame: all sizes must be positive");
  }
  if (window_length > channels) {
    throw UnsupportedError("make_dgt_frame: window longer than channel count (non-painless)");
  }
  if (hop > window_length) {
    throw std::invalid_argument("make_dgt_frame: hop must not exceed window length");
  }
  if (signal_length % hop != 0) {
    throw std::invalid_argument("make_dgt_frame: hop must divide signal length");
  }
  if (signal_length < window_length) {
    throw std::invalid_argument("make_dgt_frame: signal shorter than window");
  }

  auto impl = std::make_shared<Frame::Impl>();
  impl->kind = FrameKind::kDgtReal;
  impl->window_length = window_length;
  impl->channels = channels;
  impl->hop = hop;
  impl->signal_length = signal_length;
  impl->rows = channels / 2 + 1;
  impl->cols = signal_length / hop;

  // Tight normalization: divide each tap by sqrt(channels * sum of squared
  // hop-translates through that tap), which makes the frame operator the
  // identity in the painless case.
  impl->window = hann_window(window_length);
  std::vector<double> translate_energy(hop, 0.0);
  for (std::size_t j = 0; j < window_length; ++j) {
    translate_energy[j % hop] += impl->window[j] * impl->window[j];
  }
  for (std::size_t j = 0; j < window_length; ++j) {
    impl->window[j] /= std::sqrt(static_cast<double>(channels) *
                                 translate_energy[j % hop]);
  }

  auto weights = std::make_shared<std::vector<double>>(impl->rows, std::numbers::sqrt2);
  (*weights)[0] = 1.0;
  if (channels % 2 == 0) (*weights)[impl->rows - 1] = 1.0;
  impl->l1_weights = weights;
  impl->synth_row_scale.resize(impl->rows);
  for (std::size_t m = 0; m < impl->rows; ++m) {
    impl->synth_row_scale[m] = 1.0 / (*weights)[m];
  }

  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    std::vector<double> tin(channels);
    std::vector<std::complex<double>> tout(impl->rows);
    impl->r2c = fftw_plan_dft_r2c_1d(static_cast<int>(channels), tin.data(),
                                     reinterpret_cast<fftw_complex*>(tout.data()),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    impl->c2r = fftw_plan_dft_c2r_1d(static_cast<int>(channels),
                                     reinterpret_cast<fftw_complex*>(tout.data()),
                                     tin.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!impl->r2c || !impl->c2r) {
      throw NumericalError("make_dgt_frame: FFT planning failed");
    }
  }
  return Frame(std::move(impl));
}

Frame make_wmdct_frame(std::size_t window_length, std::size_t channels,
                       std::size_t signal_length) {
  if (window_length == 0 || channels == 0 || signal_length == 0) {
    throw std::invalid_argument("make_wmdct_frame: all sizes must be positive");
  }
  if (signal_length % channels != 0) {
    throw std::invalid_argument("make_wmdct_frame: channels must divide signal length");
  }
  if (channels % 2 != 0) {
    throw std::invalid_argument("make_wmdct_frame: channel count must be even");
  }
  const std::size_t bands = channels / 2;
  const std::size_t atom = channels;
  if (window_length > atom) {
    throw std::invalid_argument("make_wmdct_frame: window longer than the atom length");
  }
  if (window_length < bands) {
    throw UnsupportedError("make_wmdct_frame: window too short to cover the lapped structure");
  }
  if ((atom - window_length) % 2 != 0) {
    throw std::invalid_argument("make_wmdct_frame: window cannot be centered symmetrically");
  }

  auto impl = std::make_shared<Frame::Impl>();
  impl->kind = FrameKind::kWmdct;
  impl->window_length = window_length;
  impl->channels = channels;
  impl->hop = bands;
  impl->signal_length = signal_length;
  impl->bands = bands;
  impl->rows = bands;
  impl->cols = signal_length / bands;

  // Center the Hann taps in the atom and normalize each half-overlap pair to
  // unit power, the tight condition of the lapped structure.
  impl->window.assign(atom, 0.0);
  {
    std::vector<double> base = hann_window(window_length);
    const std::size_t offset = (atom - window_length) / 2;
    for (std::size_t j = 0; j < window_length; ++j) impl->window[offset + j] = base[j];
  }
  for (std::size_t j = 0; j < bands; ++j) {
    const double pair = impl->window[j] * impl->window[j] +
                        impl->window[j + bands] * impl->window[j + bands];
    if (pair <= 0.0) {
      throw std::invalid_argument("make_wmdct_frame: window leaves a dead overlap pair");
    }
    const double norm = 1.0 / std::sqrt(pair);
    impl->window[j] *= norm;
    impl->window[j + bands] *= norm;
  }

  if (bands % 2 == 0) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    std::vector<double> tin(bands), tout(bands);
    impl->dct4 = fftw_plan_r2r_1d(static_cast<int>(bands), tin.data(), tout.data(),
                                  FFTW_REDFT11, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!impl->dct4) throw NumericalError("make_wmdct_frame: DCT planning failed");
  } else {
    // Odd band counts do not fold onto a DCT-IV grid; keep the explicit
    // cosine basis (only tiny geometries land here).
    impl->cos_basis.resize(bands * atom);
    const double scale = std::sqrt(2.0 / static_cast<double>(bands));
    for (std::size_t k = 0; k < bands; ++k) {
      for (std::size_t j = 0; j < atom; ++j) {
        const double arg = std::numbers::pi / static_cast<double>(bands) *
                           (static_cast<double>(j) + 0.5 + static_cast<double>(bands) / 2.0) *
                           (static_cast<double>(k) + 0.5);
        impl->cos_basis[k * atom + j] = scale * std::cos(arg);
      }
    }
  }
  return Frame(std::move(impl));
}

double estimate_operator_norm(const Frame& frame, int iterations, unsigned seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = frame.signal_length();
  std::vector<double> x(n);
  for (auto& v : x) {
    v = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  }
  double ratio = 0.0;
  for (int it = 0; it < iterations; ++it) {
    double nx = 0.0;
    for (double v : x) nx += v * v;
    nx = std::sqrt(nx);
    if (nx == 0.0) return 0.0;
    for (auto& v : x) v /= nx;
    CoefficientVector c = frame.analyze(x);
    double nc = 0.0;
    for (const auto& z : c.values) nc += std::norm(z);
    ratio = std::sqrt(nc);
    x = frame.synthesize(c);
  }
  return ratio;
}

std::size_t padded_length(FrameKind kind, std::size_t window_length,
                          std::size_t channels, std::size_t hop, std::size_t n) {
  const std::size_t block = (kind == FrameKind::kDgtReal) ? hop : channels;
  if (block == 0) throw std::invalid_argument("padded_length: zero block size");
  std::size_t target = std::max(n, window_length);
  return (target + block - 1) / block * block;
}

}  // namespace deq
