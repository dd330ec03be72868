// src/jnfkd/types.h

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

#ifndef JNFKD_TYPES_H_
#define JNFKD_TYPES_H_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace jnfkd {

// Every signal in the pipeline runs at this rate; there is no resampling.
inline constexpr int kSampleRate = 16000;
inline constexpr double kSpeedOfSound = 343.0;  // m/s

/// Mono time-domain signal, amplitude nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  Waveform() = default;
  explicit Waveform(std::vector<double> s, int rate = kSampleRate)
      : samples(std::move(s)), sample_rate(rate) {}

  size_t num_samples() const { return samples.size(); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// M time-aligned channels of equal length.
struct MultichannelWaveform {
  std::vector<std::vector<double>> channels;
  int sample_rate = kSampleRate;

  int num_channels() const { return static_cast<int>(channels.size()); }
  size_t num_samples() const {
    return channels.empty() ? 0 : channels[0].size();
  }
  Waveform channel(int m) const { return Waveform(channels.at(m), sample_rate); }

  void check_rectangular() const {
    for (const auto &c : channels) {
      if (c.size() != num_samples())
        throw std::invalid_argument("multichannel waveform has ragged channels");
    }
  }
};

inline double signal_energy(const std::vector<double> &x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

inline bool all_finite(const std::vector<double> &x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace jnfkd

#endif  // JNFKD_TYPES_H_
