// src/jnfkd/stft.cc

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

#include "jnfkd/stft.h"

#include <cmath>
#include <numbers>

#include "jnfkd/fft.h"

namespace jnfkd {

std::vector<double> build_sqrt_hann(int frame_length) {
  if (frame_length < 2 || frame_length % 2 != 0)
    throw std::invalid_argument("build_sqrt_hann: frame_length must be even and >= 2");
  std::vector<double> w(frame_length);
  for (int n = 0; n < frame_length; ++n)
    w[n] = std::sin(std::numbers::pi * n / frame_length);
  return w;
}

void StftConfig::validate() const {
  if (frame_length < 2 || frame_length % 2 != 0)
    throw std::invalid_argument("StftConfig: frame_length must be even and >= 2");
  if (frame_shift * 2 != frame_length)
    throw std::invalid_argument("StftConfig: frame_shift must be frame_length/2");
  if (static_cast<int>(window.size()) != frame_length)
    throw std::invalid_argument("StftConfig: window length mismatch");
}

Spectrogram stft(const Waveform &x, const StftConfig &cfg) {
  cfg.validate();
  if (x.samples.empty()) throw std::invalid_argument("stft: empty input");
  if (!all_finite(x.samples))
    throw std::invalid_argument("stft: input contains NaN/Inf");

  const int N = cfg.frame_length;
  const int shift = cfg.frame_shift;
  const int K = cfg.num_bins();
  const size_t n = x.samples.size();
  const int L = cfg.num_frames(n);

  // Zero-pad: shift samples in front, and enough at the back so the last
  // frame is complete.
  std::vector<double> padded(static_cast<size_t>(L - 1) * shift + N, 0.0);
  std::copy(x.samples.begin(), x.samples.end(), padded.begin() + shift);

  Spectrogram S;
  S.coefficients.resize(K, L);
  S.num_samples = static_cast<int>(n);

  std::vector<double> frame(N);
  std::vector<std::complex<double>> bins(K);
  for (int l = 0; l < L; ++l) {
    const double *src = padded.data() + static_cast<size_t>(l) * shift;
    for (int i = 0; i < N; ++i) frame[i] = src[i] * cfg.window[i];
    rfft(frame.data(), N, bins.data());
    for (int k = 0; k < K; ++k) S.coefficients(k, l) = bins[k];
  }
  return S;
}

namespace {

void check_shape(const Spectrogram &S, const StftConfig &cfg) {
  cfg.validate();
  if (S.num_bins() != cfg.num_bins())
    throw std::invalid_argument("spectrogram bin count does not match config");
  if (S.num_frames() < 1)
    throw std::invalid_argument("spectrogram has no frames");
}

int output_length(const Spectrogram &S, const StftConfig &cfg) {
  const int L = S.num_frames();
  if (S.num_samples > 0) {
    if (cfg.num_frames(S.num_samples) != L)
      throw std::invalid_argument("istft: num_samples inconsistent with frame count");
    return S.num_samples;
  }
  return (L - 1) * cfg.frame_shift;
}

}  // namespace

Waveform istft(const Spectrogram &S, const StftConfig &cfg) {
  check_shape(S, cfg);
  const int N = cfg.frame_length;
  const int shift = cfg.frame_shift;
  const int K = cfg.num_bins();
  const int L = S.num_frames();
  const int out_len = output_length(S, cfg);

  std::vector<double> acc(static_cast<size_t>(L - 1) * shift + N, 0.0);
  std::vector<double> frame(N);
  std::vector<std::complex<double>> bins(K);
  for (int l = 0; l < L; ++l) {
    for (int k = 0; k < K; ++k) bins[k] = S.coefficients(k, l);
    irfft(bins.data(), N, frame.data());
    double *dst = acc.data() + static_cast<size_t>(l) * shift;
    for (int i = 0; i < N; ++i) dst[i] += frame[i] * cfg.window[i];
  }

  Waveform out;
  out.samples.assign(acc.begin() + shift, acc.begin() + shift + out_len);
  return out;
}

Waveform stft_adjoint(const Spectrogram &grad_spec, int num_samples,
                      const StftConfig &cfg) {
  check_shape(grad_spec, cfg);
  const int N = cfg.frame_length;
  const int shift = cfg.frame_shift;
  const int K = cfg.num_bins();
  const int L = grad_spec.num_frames();
  if (cfg.num_frames(num_samples) != L)
    throw std::invalid_argument("stft_adjoint: num_samples inconsistent with frames");

  std::vector<double> acc(static_cast<size_t>(L - 1) * shift + N, 0.0);
  std::vector<double> frame(N);
  std::vector<std::complex<double>> bins(K);
  for (int l = 0; l < L; ++l) {
    // Adjoint of the one-sided rfft row map: scaled inverse transform with
    // halved interior bins (each interior bin is a single output of the
    // forward map, not a Hermitian pair).
    for (int k = 0; k < K; ++k) {
      std::complex<double> g = grad_spec.coefficients(k, l);
      if (k == 0 || k == K - 1)
        bins[k] = std::complex<double>(g.real(), 0.0);
      else
        bins[k] = 0.5 * g;
    }
    irfft(bins.data(), N, frame.data());
    double *dst = acc.data() + static_cast<size_t>(l) * shift;
    for (int i = 0; i < N; ++i) dst[i] += frame[i] * N * cfg.window[i];
  }

  Waveform out;
  out.samples.assign(acc.begin() + shift, acc.begin() + shift + num_samples);
  return out;
}

Spectrogram istft_adjoint(const Waveform &grad_wave, int num_frames,
                          const StftConfig &cfg) {
  cfg.validate();
  const int N = cfg.frame_length;
  const int shift = cfg.frame_shift;
  const int K = cfg.num_bins();
  const int L = num_frames;
  if (L < 1) throw std::invalid_argument("istft_adjoint: need at least one frame");

  std::vector<double> padded(static_cast<size_t>(L - 1) * shift + N, 0.0);
  const size_t n = grad_wave.samples.size();
  if (n + cfg.frame_shift > padded.size())
    throw std::invalid_argument("istft_adjoint: gradient longer than synthesis span");
  std::copy(grad_wave.samples.begin(), grad_wave.samples.end(),
            padded.begin() + shift);

  Spectrogram G;
  G.coefficients.resize(K, L);
  G.num_samples = static_cast<int>(n);

  std::vector<double> frame(N);
  std::vector<std::complex<double>> bins(K);
  for (int l = 0; l < L; ++l) {
    const double *src = padded.data() + static_cast<size_t>(l) * shift;
    for (int i = 0; i < N; ++i) frame[i] = src[i] * cfg.window[i];
    rfft(frame.data(), N, bins.data());
    // Adjoint of irfft: forward transform scaled by 2/N on interior bins and
    // 1/N on the (real-valued) edge bins.
    for (int k = 0; k < K; ++k) {
      if (k == 0 || k == K - 1)
        G.coefficients(k, l) = std::complex<double>(bins[k].real() / N, 0.0);
      else
        G.coefficients(k, l) = bins[k] * (2.0 / N);
    }
  }
  return G;
}

std::vector<Spectrogram> stft_all_channels(const MultichannelWaveform &x,
                                           const StftConfig &cfg) {
  x.check_rectangular();
  std::vector<Spectrogram> out;
  out.reserve(x.num_channels());
  for (int m = 0; m < x.num_channels(); ++m)
    out.push_back(stft(x.channel(m), cfg));
  return out;
}

}  // namespace jnfkd
