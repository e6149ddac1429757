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

#include "deq/audio_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <vector>

#include "deq/errors.hpp"

namespace deq {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void append_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

void append_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
}

void append_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct Encoding {
  std::uint16_t format = kFormatPcm;
  int bits = 16;
};

Encoding describe(WavEncoding e) {
  switch (e) {
    case WavEncoding::kPcm8: return {kFormatPcm, 8};
    case WavEncoding::kPcm16: return {kFormatPcm, 16};
    case WavEncoding::kPcm24: return {kFormatPcm, 24};
    case WavEncoding::kPcm32: return {kFormatPcm, 32};
    case WavEncoding::kFloat32: return {kFormatFloat, 32};
  }
  throw std::invalid_argument("write_wav: unknown encoding");
}

}  // namespace

AudioFile read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("read_wav: cannot open '" + path + "'");
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw IoError("read_wav: '" + path + "' is not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, n_channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      throw IoError("read_wav: truncated chunk in '" + path + "'");
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw IoError("read_wav: malformed fmt chunk");
      format = read_u16(bytes.data() + body);
      n_channels = read_u16(bytes.data() + body + 2);
      sample_rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size % 2);  // chunks are word-aligned
  }

  if (!have_fmt || data == nullptr) {
    throw IoError("read_wav: missing fmt or data chunk in '" + path + "'");
  }
  if (n_channels != 1) {
    throw UnsupportedError("read_wav: only mono input is supported (got " +
                           std::to_string(n_channels) + " channels)");
  }
  const bool pcm_ok = format == kFormatPcm &&
                      (bits == 8 || bits == 16 || bits == 24 || bits == 32);
  const bool float_ok = format == kFormatFloat && bits == 32;
  if (!pcm_ok && !float_ok) {
    throw UnsupportedError("read_wav: unsupported format tag " + std::to_string(format) +
                           " at " + std::to_string(bits) + " bits");
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t n_samples = data_size / bytes_per_sample;
  AudioFile file;
  file.path = path;
  file.source_bit_depth = bits;
  file.signal.sample_rate = static_cast<int>(sample_rate);
  file.signal.samples.resize(n_samples);

  for (std::size_t n = 0; n < n_samples; ++n) {
    const unsigned char* p = data + n * bytes_per_sample;
    double v = 0.0;
    if (format == kFormatFloat) {
      float f;
      std::memcpy(&f, p, 4);
      v = static_cast<double>(f);
    } else if (bits == 8) {
      v = (static_cast<int>(p[0]) - 128) / 128.0;
    } else if (bits == 16) {
      const auto s = static_cast<std::int16_t>(read_u16(p));
      v = s / 32768.0;
    } else if (bits == 24) {
      std::int32_t s = static_cast<std::int32_t>(p[0]) |
                       (static_cast<std::int32_t>(p[1]) << 8) |
                       (static_cast<std::int32_t>(p[2]) << 16);
      if (s & 0x800000) s |= 0xff000000u;  // sign extend
      v = s / 8388608.0;
    } else {
      const auto s = static_cast<std::int32_t>(read_u32(p));
      v = s / 2147483648.0;
    }
    file.signal.samples[n] = v;
  }
  return file;
}

void write_wav(const std::string& path, const Signal& signal, WavEncoding encoding) {
  const Encoding enc = describe(encoding);
  const std::size_t n = signal.samples.size();
  const std::size_t bytes_per_sample = enc.bits / 8;

  std::size_t clipped = 0;
  std::vector<unsigned char> payload;
  payload.reserve(n * bytes_per_sample);
  for (std::size_t i = 0; i < n; ++i) {
    double v = signal.samples[i];
    if (v > 1.0 || v < -1.0) {
      v = std::clamp(v, -1.0, 1.0);
      ++clipped;
    }
    if (enc.format == kFormatFloat) {
      const float f = static_cast<float>(v);
      std::uint32_t raw;
      std::memcpy(&raw, &f, 4);
      append_u32(payload, raw);
    } else {
      const double scale = std::ldexp(1.0, enc.bits - 1);
      const double max_code = scale - 1.0;
      double code = std::round(v * scale);
      code = std::clamp(code, -scale, max_code);
      auto s = static_cast<std::int32_t>(code);
      if (enc.bits == 8) {
        payload.push_back(static_cast<unsigned char>(s + 128));
      } else if (enc.bits == 16) {
        append_u16(payload, static_cast<std::uint16_t>(static_cast<std::int16_t>(s)));
      } else if (enc.bits == 24) {
        payload.push_back(static_cast<unsigned char>(s & 0xff));
        payload.push_back(static_cast<unsigned char>((s >> 8) & 0xff));
        payload.push_back(static_cast<unsigned char>((s >> 16) & 0xff));
      } else {
        append_u32(payload, static_cast<std::uint32_t>(s));
      }
    }
  }
  if (clipped > 0) {
    std::cerr << "write_wav: clipped " << clipped << " sample(s) outside [-1, 1] in '"
              << path << "'\n";
  }

  const bool is_float = enc.format == kFormatFloat;
  const std::uint32_t byte_rate =
      static_cast<std::uint32_t>(signal.sample_rate * bytes_per_sample);
  std::vector<unsigned char> out;
  append_tag(out, "RIFF");
  append_u32(out, 0);  // patched below
  append_tag(out, "WAVE");
  append_tag(out, "fmt ");
  append_u32(out, is_float ? 18 : 16);
  append_u16(out, enc.format);
  append_u16(out, 1);  // mono
  append_u32(out, static_cast<std::uint32_t>(signal.sample_rate));
  append_u32(out, byte_rate);
  append_u16(out, static_cast<std::uint16_t>(bytes_per_sample));
  append_u16(out, static_cast<std::uint16_t>(enc.bits));
  if (is_float) {
    append_u16(out, 0);  // cbSize
    append_tag(out, "fact");
    append_u32(out, 4);
    append_u32(out, static_cast<std::uint32_t>(n));
  }
  append_tag(out, "data");
  append_u32(out, static_cast<std::uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  if (payload.size() % 2 == 1) out.push_back(0);
  const std::uint32_t riff_size = static_cast<std::uint32_t>(out.size() - 8);
  out[4] = static_cast<unsigned char>(riff_size & 0xff);
  out[5] = static_cast<unsigned char>((riff_size >> 8) & 0xff);
  out[6] = static_cast<unsigned char>((riff_size >> 16) & 0xff);
  out[7] = static_cast<unsigned char>((riff_size >> 24) & 0xff);

  std::ofstream fout(path, std::ios::binary | std::ios::trunc);
  if (!fout) {
    throw IoError("write_wav: cannot open '" + path + "' for writing");
  }
  fout.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!fout) {
    throw IoError("write_wav: short write to '" + path + "'");
  }
}

Signal peak_normalize(const Signal& signal) {
  double peak = 0.0;
  for (double v : signal.samples) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) {
    throw std::invalid_argument("peak_normalize: all-zero signal");
  }
  Signal out = signal;
  for (double& v : out.samples) v /= peak;
  return out;
}

}  // namespace deq
