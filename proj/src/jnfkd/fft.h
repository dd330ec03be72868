// src/jnfkd/fft.h

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

#ifndef JNFKD_FFT_H_
#define JNFKD_FFT_H_

#include <complex>

namespace jnfkd {

// One-sided real FFT pair, FFTW-backed. Conventions:
//   forward   X[k] = sum_n x[n] exp(-2*pi*i*k*n/N),  k = 0..N/2   (unnormalized)
//   inverse   x[n] = (1/N) * full-spectrum inverse under Hermitian symmetry
// Plans are cached per size (FFTW_ESTIMATE, so planning is deterministic);
// execution is serialized internally and safe to call from multiple threads.

/// x: n real samples -> X: n/2+1 bins. n must be even and >= 2.
void rfft(const double *x, int n, std::complex<double> *X);

/// X: n/2+1 bins -> x: n real samples. Imaginary parts of the DC and Nyquist
/// bins are ignored (they are identically zero for real signals).
void irfft(const std::complex<double> *X, int n, double *x);

}  // namespace jnfkd

#endif  // JNFKD_FFT_H_
