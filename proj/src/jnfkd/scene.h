// src/jnfkd/scene.h

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

#ifndef JNFKD_SCENE_H_
#define JNFKD_SCENE_H_

#include <optional>

#include "jnfkd/geometry.h"
#include "jnfkd/types.h"

namespace jnfkd {

/// Per-microphone impulse responses from one source position.
struct RoomImpulseResponse {
  std::vector<std::vector<double>> taps;  // one sequence per microphone
  int sample_rate = kSampleRate;

  static RoomImpulseResponse identity(int num_mics);
  int num_channels() const { return static_cast<int>(taps.size()); }
  void validate() const;
};

/// One simulated training/evaluation item. y = x + v holds exactly, where v
/// is the scaled noise component; s is the clean anechoic target aligned to
/// the center microphone's direct-path arrival.
struct MixtureExample {
  MultichannelWaveform y;  // noisy mixture, M channels
  MultichannelWaveform x;  // speech component, M channels
  Waveform s;              // clean target, 1 channel
  double snr_db = 0.0;
  SourcePosition talker_pos;
  SourcePosition noise_pos;
  uint64_t seed = 0;
};

struct SceneOptions {
  // The source wording for room acoustics covers the talker path; applying
  // the same room response to the noise path is selectable.
  bool reverberate_noise = false;
  bool distance_attenuation = true;
  double noise_distance_m = 2.0;
  // Test hook: fixed noise gain instead of SNR calibration.
  std::optional<double> noise_gain_override;
};

/// Delays s to each microphone by distance/c with a 65-tap windowed-sinc
/// fractional-delay filter, scaling each channel by 1/distance when
/// distance_attenuation is on. Output has the input's length.
MultichannelWaveform propagate_free_field(const Waveform &s,
                                          const SourcePosition &pos,
                                          const ArrayGeometry &geom,
                                          bool distance_attenuation = true);

/// Per-channel linear convolution with the room response, truncated to the
/// input length.
MultichannelWaveform apply_rir(const MultichannelWaveform &x,
                               const RoomImpulseResponse &rir);

/// Scales v so that the front-microphone SNR is exactly snr_db and forms
/// y = x + g*v. Fails on zero energy at the front microphone.
MixtureExample mix_at_snr(const MultichannelWaveform &x,
                          const MultichannelWaveform &v, double snr_db,
                          const ArrayGeometry &geom);

/// Full scene pipeline: sample positions, propagate speech, apply the room
/// response, propagate noise, calibrate SNR. The rng drives only the two
/// position draws, so a derived per-example stream gives order-independent
/// datasets.
MixtureExample make_example(const Waveform &speech, const Waveform &noise,
                            const RoomImpulseResponse &rir, double snr_db,
                            Rng &rng, const ArrayGeometry &geom,
                            const SceneOptions &options = SceneOptions());

}  // namespace jnfkd

#endif  // JNFKD_SCENE_H_
