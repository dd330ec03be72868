// src/jnfkd/synthetic.cc

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

#include "jnfkd/synthetic.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jnfkd {

Waveform synth_speech(double seconds, Rng &rng) {
  if (seconds <= 0.0) throw std::invalid_argument("duration must be positive");
  const int n = static_cast<int>(std::lround(seconds * kSampleRate));
  const double f0_base = 100.0 + 80.0 * rng.uniform();   // 100..180 Hz
  const double glide_oct = 0.3 + 0.4 * rng.uniform();    // glide depth, octaves
  const double glide_rate = 0.2 + 0.3 * rng.uniform();   // Hz
  const double syllable_rate = 2.5 + 2.0 * rng.uniform();
  const double glide_phase = 2.0 * std::numbers::pi * rng.uniform();
  const double syllable_phase = 2.0 * std::numbers::pi * rng.uniform();

  const int num_harmonics = 24;
  std::vector<double> phase(num_harmonics, 0.0);
  Waveform out;
  out.samples.resize(n);
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kSampleRate;
    const double f0 =
        f0_base *
        std::pow(2.0, glide_oct * std::sin(2.0 * std::numbers::pi * glide_rate * t +
                                           glide_phase));
    double v = 0.0;
    for (int h = 0; h < num_harmonics; ++h) {
      const double fh = f0 * (h + 1);
      if (fh > 5500.0) break;  // keep well below Nyquist
      phase[h] += 2.0 * std::numbers::pi * fh / kSampleRate;
      v += std::sin(phase[h]) / (h + 1);
    }
    const double env =
        0.55 + 0.45 * std::sin(2.0 * std::numbers::pi * syllable_rate * t +
                               syllable_phase);
    out.samples[i] = v * env;
    sq += out.samples[i] * out.samples[i];
  }
  const double rms = std::sqrt(sq / n);
  const double gain = rms > 0.0 ? 0.05 / rms : 0.0;
  for (auto &v : out.samples) v *= gain;
  return out;
}

Waveform synth_noise(double seconds, Rng &rng, NoiseKind kind) {
  if (seconds <= 0.0) throw std::invalid_argument("duration must be positive");
  const int n = static_cast<int>(std::lround(seconds * kSampleRate));
  Waveform out;
  out.samples.resize(n);
  if (kind == NoiseKind::kWhite) {
    for (auto &v : out.samples) v = 0.05 * rng.gaussian();
    return out;
  }
  // pink: parallel first-order sections approximating a -3 dB/octave slope
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  for (auto &v : out.samples) {
    const double w = rng.gaussian();
    b0 = 0.99765 * b0 + w * 0.0990460;
    b1 = 0.96300 * b1 + w * 0.2965164;
    b2 = 0.57000 * b2 + w * 1.0526913;
    v = 0.01 * (b0 + b1 + b2 + w * 0.1848);
  }
  return out;
}

RoomImpulseResponse synth_rir(int num_mics, Rng &rng, int num_echoes,
                              int max_lag, double decay_time_s) {
  if (num_mics <= 0 || num_echoes < 0 || max_lag < 1 || decay_time_s <= 0.0)
    throw std::invalid_argument("bad room response parameters");
  const double tau = decay_time_s * kSampleRate;
  RoomImpulseResponse rir;
  rir.taps.assign(num_mics, std::vector<double>(max_lag + 1, 0.0));
  for (int m = 0; m < num_mics; ++m) {
    rir.taps[m][0] = 1.0;  // unit direct tap keeps free-field timing intact
    for (int e = 0; e < num_echoes; ++e) {
      const uint64_t lag = 40 + rng.uniform_int(max_lag - 40 + 1);
      const double amp = 0.5 * rng.gaussian() * std::exp(-static_cast<double>(lag) / tau);
      rir.taps[m][lag] += amp;
    }
  }
  return rir;
}

}  // namespace jnfkd
