// src/jnfkd/metrics.h

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

#ifndef JNFKD_METRICS_H_
#define JNFKD_METRICS_H_

#include <optional>
#include <string>
#include <vector>

#include "jnfkd/stft.h"
#include "jnfkd/types.h"

namespace jnfkd {

/// Middle order statistic; the mean of the two middle values for even sizes.
double median(std::vector<double> values);

/// Population variance (normalized by N, not N-1).
double population_variance(const std::vector<double> &values);

/// Scale-invariant signal-to-distortion ratio in dB, capped at +60 dB so a
/// perfect (or perfectly scaled) estimate stays finite. The reference must
/// carry energy.
double si_sdr(const Waveform &estimate, const Waveform &reference);
inline constexpr double kSiSdrCapDb = 60.0;

/// Combined time-domain and STFT-magnitude L1 distance; lower is better.
double spectral_l1(const Waveform &estimate, const Waveform &reference,
                   const StftConfig &cfg);

// External speech-quality scorer. The adapter executable is invoked once per
// pair as `command <reference.wav> <estimate.wav>` and must print a single
// decimal score in [-0.5, 4.5] on stdout.
struct PesqAdapter {
  std::string command;
};

/// Runs the adapter on one pair. Returns the score, or std::nullopt with
/// *error filled in when the invocation or parse fails; failures never throw.
std::optional<double> run_pesq_adapter(const PesqAdapter &adapter,
                                       const Waveform &reference,
                                       const Waveform &estimate,
                                       std::string *error = nullptr);

}  // namespace jnfkd

#endif  // JNFKD_METRICS_H_
