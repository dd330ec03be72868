// src/jnfkd/wav.cc

// Copyright 2026  The jnfkd Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "jnfkd/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace jnfkd {

static_assert(std::endian::native == std::endian::little,
              "wav i/o assumes a little-endian host");

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;

void put_u32(std::string &s, uint32_t v) { s.append(reinterpret_cast<const char *>(&v), 4); }
void put_u16(std::string &s, uint16_t v) { s.append(reinterpret_cast<const char *>(&v), 2); }

int16_t to_pcm16(double v) {
  double scaled = std::round(std::clamp(v, -1.0, 1.0) * 32767.0);
  return static_cast<int16_t>(scaled);
}

}  // namespace

void write_wav(const std::string &path, const MultichannelWaveform &x,
               WavFormat format) {
  x.check_rectangular();
  if (x.num_channels() == 0) throw std::invalid_argument("write_wav: no channels");

  const uint16_t channels = static_cast<uint16_t>(x.num_channels());
  const uint32_t rate = static_cast<uint32_t>(x.sample_rate);
  const uint16_t bytes_per_sample = format == WavFormat::kPcm16 ? 2 : 4;
  const uint16_t block_align = channels * bytes_per_sample;
  const uint64_t frames = x.num_samples();
  const uint64_t data_bytes = frames * block_align;
  if (data_bytes > 0xFFFFFFFFu - 44)
    throw std::invalid_argument("write_wav: signal too long for RIFF");

  std::string header;
  header.reserve(44);
  header += "RIFF";
  put_u32(header, static_cast<uint32_t>(36 + data_bytes));
  header += "WAVE";
  header += "fmt ";
  put_u32(header, 16);
  put_u16(header, format == WavFormat::kPcm16 ? kFormatPcm : kFormatFloat);
  put_u16(header, channels);
  put_u32(header, rate);
  put_u32(header, rate * block_align);
  put_u16(header, block_align);
  put_u16(header, static_cast<uint16_t>(8 * bytes_per_sample));
  header += "data";
  put_u32(header, static_cast<uint32_t>(data_bytes));

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_wav: cannot open " + path);
  f.write(header.data(), static_cast<std::streamsize>(header.size()));

  std::string body;
  body.reserve(data_bytes);
  for (uint64_t i = 0; i < frames; ++i) {
    for (int c = 0; c < channels; ++c) {
      const double v = x.channels[c][i];
      if (format == WavFormat::kPcm16) {
        int16_t s = to_pcm16(v);
        body.append(reinterpret_cast<const char *>(&s), 2);
      } else {
        float s = static_cast<float>(v);
        body.append(reinterpret_cast<const char *>(&s), 4);
      }
    }
  }
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw std::runtime_error("write_wav: write failed for " + path);
}

void write_wav(const std::string &path, const Waveform &x, WavFormat format) {
  MultichannelWaveform mc;
  mc.channels.push_back(x.samples);
  mc.sample_rate = x.sample_rate;
  write_wav(path, mc, format);
}

MultichannelWaveform read_wav(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_wav: cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());
  if (bytes.size() < 44 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0)
    throw std::runtime_error("read_wav: not a RIFF/WAVE file: " + path);

  auto u32 = [&](size_t off) {
    uint32_t v;
    std::memcpy(&v, bytes.data() + off, 4);
    return v;
  };
  auto u16 = [&](size_t off) {
    uint16_t v;
    std::memcpy(&v, bytes.data() + off, 2);
    return v;
  };

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t data_off = 0, data_len = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id = bytes.substr(pos, 4);
    const uint32_t len = u32(pos + 4);
    const size_t body = pos + 8;
    if (id == "fmt ") {
      if (len < 16) throw std::runtime_error("read_wav: short fmt chunk");
      format = u16(body);
      channels = u16(body + 2);
      rate = u32(body + 4);
      bits = u16(body + 14);
    } else if (id == "data") {
      data_off = body;
      data_len = std::min<size_t>(len, bytes.size() - body);
    }
    pos = body + len + (len % 2);  // chunks are word-aligned
  }
  if (channels == 0 || data_off == 0)
    throw std::runtime_error("read_wav: missing fmt/data chunk: " + path);

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool f32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !f32)
    throw std::runtime_error("read_wav: unsupported format (want 16-bit PCM "
                             "or 32-bit float): " + path);

  const size_t bytes_per_sample = pcm16 ? 2 : 4;
  const size_t frames = data_len / (bytes_per_sample * channels);

  MultichannelWaveform out;
  out.sample_rate = static_cast<int>(rate);
  out.channels.assign(channels, std::vector<double>(frames));
  const char *p = bytes.data() + data_off;
  for (size_t i = 0; i < frames; ++i) {
    for (int c = 0; c < channels; ++c) {
      if (pcm16) {
        int16_t v;
        std::memcpy(&v, p, 2);
        out.channels[c][i] = v / 32767.0;  // symmetric with the writer scale
      } else {
        float v;
        std::memcpy(&v, p, 4);
        out.channels[c][i] = v;
      }
      p += bytes_per_sample;
    }
  }
  return out;
}

MultichannelWaveform read_wav_checked(const std::string &path, int expected_rate) {
  MultichannelWaveform x = read_wav(path);
  if (x.sample_rate != expected_rate)
    throw std::runtime_error("sample-rate mismatch for " + path + ": got " +
                             std::to_string(x.sample_rate) + ", expected " +
                             std::to_string(expected_rate) +
                             " (resampling is not supported)");
  return x;
}

Waveform read_wav_mono(const std::string &path) {
  MultichannelWaveform x = read_wav(path);
  if (x.num_channels() != 1)
    throw std::runtime_error("read_wav_mono: " + path + " has " +
                             std::to_string(x.num_channels()) + " channels");
  return x.channel(0);
}

}  // namespace jnfkd
