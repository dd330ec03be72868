// src/jnfkd/scene.cc

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

#include "jnfkd/scene.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jnfkd {

namespace {

constexpr int kDelayTaps = 65;  // half length 32
constexpr double kKaiserBeta = 8.0;

double bessel_i0(double x) {
  // power series; converges quickly for the argument range used here
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= (x / (2.0 * k)) * (x / (2.0 * k));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

/// Kaiser-windowed sinc interpolator for a fractional offset f in [0, 1).
std::vector<double> fractional_delay_taps(double f) {
  const int half = kDelayTaps / 2;
  std::vector<double> h(kDelayTaps);
  const double denom = bessel_i0(kKaiserBeta);
  for (int i = 0; i < kDelayTaps; ++i) {
    const double t = static_cast<double>(i - half) - f;
    const double u = (i - f - half) / (half + 0.5);  // window tracks the shifted sinc
    const double wu = std::abs(u) >= 1.0 ? 0.0
                                         : bessel_i0(kKaiserBeta * std::sqrt(1.0 - u * u)) / denom;
    h[i] = sinc(t) * wu;
  }
  return h;
}

/// Delays x by `delay` samples (>= 0, fractional), same output length.
std::vector<double> delay_signal(const std::vector<double> &x, double delay) {
  const int n = static_cast<int>(x.size());
  const int half = kDelayTaps / 2;
  const double di = std::floor(delay);
  const int D = static_cast<int>(di);
  const auto h = fractional_delay_taps(delay - di);

  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    // out[i] = sum_j h[j] * x[i - D + half - j], zero outside the support
    const int base = i - D + half;
    const int j_lo = std::max(0, base - (n - 1));
    const int j_hi = std::min(kDelayTaps - 1, base);
    for (int j = j_lo; j <= j_hi; ++j) acc += h[j] * x[base - j];
    out[i] = acc;
  }
  return out;
}

}  // namespace

RoomImpulseResponse RoomImpulseResponse::identity(int num_mics) {
  RoomImpulseResponse r;
  r.taps.assign(num_mics, {1.0});
  return r;
}

void RoomImpulseResponse::validate() const {
  if (taps.empty()) throw std::invalid_argument("room response has no channels");
  for (const auto &t : taps) {
    if (t.empty()) throw std::invalid_argument("room response channel is empty");
    if (!all_finite(t)) throw std::invalid_argument("room response has non-finite taps");
  }
}

MultichannelWaveform propagate_free_field(const Waveform &s,
                                          const SourcePosition &pos,
                                          const ArrayGeometry &geom,
                                          bool distance_attenuation) {
  geom.validate();
  if (s.samples.empty()) throw std::invalid_argument("empty source signal");
  const Point3 src = pos.to_cartesian();

  MultichannelWaveform out;
  out.sample_rate = s.sample_rate;
  out.channels.resize(geom.num_mics());
  for (int m = 0; m < geom.num_mics(); ++m) {
    const double dist = point_distance(src, geom.mic_positions[m]);
    if (dist < 1e-6)
      throw std::invalid_argument("source coincides with a microphone");
    const double delay = dist / kSpeedOfSound * s.sample_rate;
    out.channels[m] = delay_signal(s.samples, delay);
    if (distance_attenuation) {
      const double a = 1.0 / dist;
      for (auto &v : out.channels[m]) v *= a;
    }
  }
  return out;
}

MultichannelWaveform apply_rir(const MultichannelWaveform &x,
                               const RoomImpulseResponse &rir) {
  x.check_rectangular();
  rir.validate();
  if (x.num_channels() != rir.num_channels())
    throw std::invalid_argument("room response channel count does not match signal");
  if (x.sample_rate != rir.sample_rate)
    throw std::invalid_argument("room response sample rate does not match signal");

  const int n = static_cast<int>(x.num_samples());
  MultichannelWaveform out;
  out.sample_rate = x.sample_rate;
  out.channels.assign(x.num_channels(), std::vector<double>(n, 0.0));
  for (int m = 0; m < x.num_channels(); ++m) {
    // room responses are often sparse; convolve only the nonzero taps
    const auto &h = rir.taps[m];
    for (size_t lag = 0; lag < h.size(); ++lag) {
      const double a = h[lag];
      if (a == 0.0) continue;
      for (size_t i = lag; i < static_cast<size_t>(n); ++i)
        out.channels[m][i] += a * x.channels[m][i - lag];
    }
  }
  return out;
}

MixtureExample mix_at_snr(const MultichannelWaveform &x,
                          const MultichannelWaveform &v, double snr_db,
                          const ArrayGeometry &geom) {
  x.check_rectangular();
  v.check_rectangular();
  if (x.num_channels() != v.num_channels() || x.num_samples() != v.num_samples())
    throw std::invalid_argument("speech and noise shapes do not match");

  const double ex = signal_energy(x.channels[geom.front_index]);
  const double ev = signal_energy(v.channels[geom.front_index]);
  if (ex <= 0.0 || ev <= 0.0)
    throw std::runtime_error("degenerate input: zero energy at the front microphone");

  const double g = std::sqrt(ex / (ev * std::pow(10.0, snr_db / 10.0)));

  MixtureExample ex_out;
  ex_out.x = x;
  ex_out.y.sample_rate = x.sample_rate;
  ex_out.y.channels.resize(x.num_channels());
  for (int m = 0; m < x.num_channels(); ++m) {
    ex_out.y.channels[m].resize(x.num_samples());
    for (size_t i = 0; i < x.num_samples(); ++i)
      ex_out.y.channels[m][i] = x.channels[m][i] + g * v.channels[m][i];
  }
  ex_out.snr_db = snr_db;
  return ex_out;
}

MixtureExample make_example(const Waveform &speech, const Waveform &noise,
                            const RoomImpulseResponse &rir, double snr_db,
                            Rng &rng, const ArrayGeometry &geom,
                            const SceneOptions &options) {
  if (noise.samples.size() < speech.samples.size())
    throw std::invalid_argument("noise shorter than speech");
  const SourcePosition talker = sample_talker_position(rng);
  const SourcePosition noise_pos = sample_noise_position(rng, options.noise_distance_m);

  MultichannelWaveform x_ff =
      propagate_free_field(speech, talker, geom, options.distance_attenuation);
  // clean target: direct-path arrival at the center microphone, taken before
  // the room response so it stays anechoic
  Waveform s = x_ff.channel(geom.center_index);

  MultichannelWaveform x = apply_rir(x_ff, rir);

  Waveform noise_trimmed = noise;
  noise_trimmed.samples.resize(speech.samples.size());
  MultichannelWaveform v = propagate_free_field(noise_trimmed, noise_pos, geom,
                                                options.distance_attenuation);
  if (options.reverberate_noise) v = apply_rir(v, rir);

  MixtureExample ex;
  if (options.noise_gain_override) {
    const double g = *options.noise_gain_override;
    ex.x = x;
    ex.y.sample_rate = x.sample_rate;
    ex.y.channels.resize(x.num_channels());
    for (int m = 0; m < x.num_channels(); ++m) {
      ex.y.channels[m].resize(x.num_samples());
      for (size_t i = 0; i < x.num_samples(); ++i)
        ex.y.channels[m][i] = x.channels[m][i] + g * v.channels[m][i];
    }
    ex.snr_db = snr_db;
  } else {
    ex = mix_at_snr(x, v, snr_db, geom);
  }
  ex.s = std::move(s);
  ex.talker_pos = talker;
  ex.noise_pos = noise_pos;
  return ex;
}

}  // namespace jnfkd
