// src/jnfkd/wav.h

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

#ifndef JNFKD_WAV_H_
#define JNFKD_WAV_H_

#include <string>

#include "jnfkd/types.h"

namespace jnfkd {

// Minimal RIFF/WAVE reader and writer. Supports 16-bit PCM and 32-bit float,
// mono or interleaved multichannel. There is no resampling anywhere in the
// pipeline: callers that require 16 kHz must check the returned rate (or use
// read_wav_checked).

enum class WavFormat { kPcm16, kFloat32 };

void write_wav(const std::string &path, const MultichannelWaveform &x,
               WavFormat format = WavFormat::kFloat32);
void write_wav(const std::string &path, const Waveform &x,
               WavFormat format = WavFormat::kFloat32);

MultichannelWaveform read_wav(const std::string &path);

/// Errors if the file's sample rate differs from expected_rate.
MultichannelWaveform read_wav_checked(const std::string &path, int expected_rate);

/// Errors if the file has more than one channel.
Waveform read_wav_mono(const std::string &path);

}  // namespace jnfkd

#endif  // JNFKD_WAV_H_
