// src/jnfkd/synthetic.h

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

#ifndef JNFKD_SYNTHETIC_H_
#define JNFKD_SYNTHETIC_H_

#include "jnfkd/rng.h"
#include "jnfkd/scene.h"
#include "jnfkd/types.h"

namespace jnfkd {

// Corpus-free stand-ins for desk-scale runs: a harmonic glide for speech, a
// colored-noise generator, and sparse exponentially decaying room responses.
// All are fully determined by the rng stream.

/// Harmonic glide with syllabic amplitude modulation, band-limited well below
/// Nyquist so fractional-delay filtering stays accurate. RMS about 0.05.
Waveform synth_speech(double seconds, Rng &rng);

enum class NoiseKind { kWhite, kPink };

Waveform synth_noise(double seconds, Rng &rng, NoiseKind kind = NoiseKind::kWhite);

/// Sparse room response per microphone: a unit direct tap at lag 0 plus
/// `num_echoes` echoes with exponentially decaying amplitudes, echo lags up
/// to max_lag samples.
RoomImpulseResponse synth_rir(int num_mics, Rng &rng, int num_echoes = 48,
                              int max_lag = 3200, double decay_time_s = 0.05);

}  // namespace jnfkd

#endif  // JNFKD_SYNTHETIC_H_
