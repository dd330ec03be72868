// src/jnfkd/stft.h

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

#ifndef JNFKD_STFT_H_
#define JNFKD_STFT_H_

#include <Eigen/Dense>
#include <vector>

#include "jnfkd/types.h"

namespace jnfkd {

/// Square-root of the periodic Hann window: w[n] = sin(pi*n/N), n = 0..N-1.
/// Its elementwise square is the periodic Hann window, whose shifted sum at
/// 50% overlap is exactly 1.
std::vector<double> build_sqrt_hann(int frame_length);

// Analysis/synthesis configuration. Both windows are the square-root Hann,
// so analysis+synthesis weighting overlap-adds to unity at 50% shift.
//
// Edge policy: the input is zero-padded by frame_shift samples at both ends
// before framing, and the same amount is trimmed after overlap-add. With the
// 50% shift every original sample is covered by the full overlap pattern, so
// the round trip is exact up to floating-point rounding.
struct StftConfig {
  int frame_length = 512;  // 32 ms at 16 kHz
  int frame_shift = 256;   // 16 ms
  std::vector<double> window;

  StftConfig() : window(build_sqrt_hann(frame_length)) {}
  StftConfig(int length, int shift)
      : frame_length(length), frame_shift(shift), window(build_sqrt_hann(length)) {
    validate();
  }

  void validate() const;
  int num_bins() const { return frame_length / 2 + 1; }
  /// Frames covering a signal of n samples under the edge policy above.
  int num_frames(size_t n) const {
    return static_cast<int>((n - 1) / frame_shift) + 2;
  }
};

/// One-sided complex STFT grid, K bins x L frames.
struct Spectrogram {
  Eigen::MatrixXcd coefficients;  // (K, L)
  // Length of the analyzed waveform; carried so that synthesis can trim to
  // the original support. 0 means unknown.
  int num_samples = 0;

  int num_bins() const { return static_cast<int>(coefficients.rows()); }
  int num_frames() const { return static_cast<int>(coefficients.cols()); }
};

Spectrogram stft(const Waveform &x, const StftConfig &cfg);

/// Overlap-add synthesis. Reconstructs num_samples samples when the
/// spectrogram carries that length, else (L-1)*frame_shift samples.
Waveform istft(const Spectrogram &S, const StftConfig &cfg);

// Adjoint operators of the two linear maps above, treating each complex bin
// as an independent (Re, Im) pair. Used to pull loss gradients across the
// transform; verified against <Ax, y> == <x, A^T y> in the tests.

/// grad wrt waveform given grad wrt stft output. num_samples of the original.
Waveform stft_adjoint(const Spectrogram &grad_spec, int num_samples,
                      const StftConfig &cfg);

/// grad wrt spectrogram given grad wrt istft output.
Spectrogram istft_adjoint(const Waveform &grad_wave, int num_frames,
                          const StftConfig &cfg);

std::vector<Spectrogram> stft_all_channels(const MultichannelWaveform &x,
                                           const StftConfig &cfg);

}  // namespace jnfkd

#endif  // JNFKD_STFT_H_
