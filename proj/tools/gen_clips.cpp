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

// Regenerates the bundled demo clips under data/. All synthesis is
// deterministic, so reruns reproduce the committed files bit for bit.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "deq/audio_io.hpp"

namespace {

constexpr int kRate = 16000;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double unit_rand(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void normalize_peak(std::vector<double>& x, double peak) {
  double max_abs = 0.0;
  for (double v : x) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs > 0.0) {
    const double g = peak / max_abs;
    for (double& v : x) v *= g;
  }
}

// Smooth raised-cosine attack/release envelope.
double envelope(double t, double duration, double attack, double release) {
  if (t < 0.0 || t > duration) return 0.0;
  if (t < attack) return 0.5 - 0.5 * std::cos(std::numbers::pi * t / attack);
  if (t > duration - release) {
    return 0.5 - 0.5 * std::cos(std::numbers::pi * (duration - t) / release);
  }
  return 1.0;
}

struct Formant {
  double freq;
  double bandwidth;
  double gain;
};

// Lorentzian spectral envelope: a sum of resonance peaks plus a gentle
// low-pass tilt, evaluated at the harmonic frequency.
double formant_gain(const std::vector<Formant>& formants, double f) {
  double g = 0.0;
  for (const Formant& fm : formants) {
    const double d = (f - fm.freq) / fm.bandwidth;
    g += fm.gain / (1.0 + d * d);
  }
  return g / (1.0 + f / 3500.0);
}

struct Syllable {
  double f0_start;
  double f0_end;
  double duration;
  double amplitude;
  double pause_after;  // gap before the next syllable
  std::vector<Formant> formants;
};

// Utterance-like vowel sequence: harmonic source shaped by formant
// resonances. Syllables carry a single soft intensity hump and uneven
// levels, with word-like pauses in between, so the amplitude statistics
// resemble running speech (many low-level samples) rather than a sustained
// tone.
std::vector<double> make_vowels() {
  const std::vector<Formant> a = {{730, 90, 1.0}, {1090, 110, 0.50}, {2440, 160, 0.22}};
  const std::vector<Formant> e = {{530, 80, 1.0}, {1840, 120, 0.45}, {2480, 160, 0.25}};
  const std::vector<Formant> i = {{270, 60, 1.0}, {2290, 140, 0.35}, {3010, 180, 0.18}};
  const std::vector<Formant> o = {{570, 80, 1.0}, {840, 100, 0.55}, {2410, 160, 0.15}};
  const std::vector<Formant> u = {{300, 60, 1.0}, {870, 100, 0.45}, {2240, 160, 0.12}};

  const std::vector<Syllable> syllables = {
      {122, 132, 0.24, 0.95, 0.035, a}, {134, 118, 0.20, 0.55, 0.150, i},
      {116, 128, 0.28, 0.80, 0.030, o}, {130, 122, 0.18, 0.40, 0.200, e},
      {120, 138, 0.26, 0.90, 0.035, u}, {136, 116, 0.22, 0.50, 0.180, a},
      {114, 126, 0.30, 0.70, 0.030, e}, {128, 120, 0.20, 0.35, 0.220, i},
      {118, 134, 0.26, 0.85, 0.000, o},
  };

  std::mt19937_64 rng(20260809);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(3.0 * kRate));
  out.insert(out.end(), static_cast<std::size_t>(0.06 * kRate), 0.0);
  for (const Syllable& seg : syllables) {
    const int n_samples = static_cast<int>(seg.duration * kRate);
    const int n_harm = static_cast<int>(6800.0 / std::max(seg.f0_start, seg.f0_end));
    std::vector<double> phase(n_harm);
    for (double& p : phase) p = kTwoPi * unit_rand(rng);
    for (int n = 0; n < n_samples; ++n) {
      const double t = static_cast<double>(n) / kRate;
      const double u01 = t / seg.duration;
      double f0 = seg.f0_start + (seg.f0_end - seg.f0_start) * u01;
      f0 *= 1.0 + 0.012 * std::sin(kTwoPi * 5.1 * t);  // vibrato
      double v = 0.0;
      for (int k = 0; k < n_harm; ++k) {
        const double fk = f0 * (k + 1);
        if (fk > 7600.0) break;
        phase[k] += kTwoPi * fk / kRate;
        v += formant_gain(seg.formants, fk) * std::sin(phase[k]);
      }
      // one soft intensity hump per syllable
      const double hump = std::pow(std::sin(std::numbers::pi * u01), 1.6);
      v *= seg.amplitude * hump * envelope(t, seg.duration, 0.02, 0.03);
      out.push_back(v);
    }
    out.insert(out.end(), static_cast<std::size_t>(seg.pause_after * kRate), 0.0);
  }
  out.insert(out.end(), static_cast<std::size_t>(0.08 * kRate), 0.0);
  normalize_peak(out, 0.92);
  return out;
}

// Bell-like strikes: a few inharmonic partials with independent decay rates.
std::vector<double> make_bells() {
  const double duration = 2.25;
  const std::vector<double> notes = {440.0, 554.37, 659.25, 493.88, 587.33};
  const std::vector<double> onsets = {0.10, 0.55, 1.00, 1.45, 1.85};
  const double ratios[] = {1.0, 2.71, 5.15, 8.42};
  const double amps[] = {1.0, 0.55, 0.30, 0.16};
  const double taus[] = {0.85, 0.42, 0.22, 0.13};

  std::vector<double> out(static_cast<std::size_t>(duration * kRate), 0.0);
  for (std::size_t s = 0; s < notes.size(); ++s) {
    const int start = static_cast<int>(onsets[s] * kRate);
    for (std::size_t n = start; n < out.size(); ++n) {
      const double t = static_cast<double>(n - start) / kRate;
      double v = 0.0;
      for (int p = 0; p < 4; ++p) {
        const double f = notes[s] * ratios[p];
        if (f > 7800.0) continue;
        v += amps[p] * std::exp(-t / taus[p]) * std::sin(kTwoPi * f * t);
      }
      out[n] += v * std::min(1.0, t / 0.004);  // 4 ms attack
    }
  }
  normalize_peak(out, 0.92);
  return out;
}

// Plucked-string tones: harmonic combs with per-harmonic decay and slight
// inharmonic stretch.
std::vector<double> make_plucks() {
  const double duration = 2.15;
  const std::vector<double> notes = {220.0, 246.94, 293.66, 329.63, 220.0, 164.81};
  const std::vector<double> onsets = {0.05, 0.40, 0.75, 1.10, 1.45, 1.75};

  std::vector<double> out(static_cast<std::size_t>(duration * kRate), 0.0);
  for (std::size_t s = 0; s < notes.size(); ++s) {
    const int start = static_cast<int>(onsets[s] * kRate);
    for (std::size_t n = start; n < out.size(); ++n) {
      const double t = static_cast<double>(n - start) / kRate;
      double v = 0.0;
      for (int k = 1; k <= 14; ++k) {
        const double f = notes[s] * k * (1.0 + 3e-5 * k * k);
        if (f > 7600.0) break;
        const double tau = 0.55 / (1.0 + 0.14 * k);
        v += std::pow(k, -1.25) * std::exp(-t / tau) * std::sin(kTwoPi * f * t);
      }
      out[n] += v * std::min(1.0, t / 0.003);
    }
  }
  normalize_peak(out, 0.92);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out_dir = (argc > 1) ? argv[1] : "data";
  std::filesystem::create_directories(out_dir);

  const struct {
    const char* name;
    std::vector<double> samples;
  } clips[] = {
      {"vowels.wav", make_vowels()},
      {"bells.wav", make_bells()},
      {"plucks.wav", make_plucks()},
  };
  for (const auto& clip : clips) {
    const std::string path = out_dir + "/" + clip.name;
    deq::write_wav(path, deq::Signal{clip.samples, kRate}, deq::WavEncoding::kPcm16);
    std::printf("%s: %.2f s\n", path.c_str(),
                static_cast<double>(clip.samples.size()) / kRate);
  }
  return 0;
}
