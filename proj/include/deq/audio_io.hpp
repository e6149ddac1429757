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

#include <string>

#include "deq/quantizer.hpp"

namespace deq {

struct AudioFile {
  std::string path;
  Signal signal;
  int source_bit_depth = 0;
};

enum class WavEncoding {
  kPcm8,
  kPcm16,
  kPcm24,
  kPcm32,
  kFloat32,
};

// Reads a mono RIFF/WAVE file (integer PCM 8/16/24/32 or float 32) and maps
// samples to [-1, 1] by dividing by 2^(bits-1). Throws IoError on missing or
// malformed files and UnsupportedError on multichannel or compressed input.
AudioFile read_wav(const std::string& path);

// Writes a mono WAV file at the requested encoding. Samples outside [-1, 1]
// are hard-clipped with a warning on stderr. Round trips are exact for
// kFloat32 and within one LSB for the integer encodings.
void write_wav(const std::string& path, const Signal& signal, WavEncoding encoding);

// signal / max|signal|; peak magnitude becomes exactly 1. Throws
// std::invalid_argument for the all-zero signal.
Signal peak_normalize(const Signal& signal);

}  // namespace deq
