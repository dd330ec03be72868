// src/jnfkd/fft.cc

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

#include "jnfkd/fft.h"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace jnfkd {

namespace {

// One cached plan pair per transform size, with its own aligned scratch
// buffers. FFTW planning is not thread-safe and c2r destroys its input, so
// all access goes through the cache mutex.
struct PlanEntry {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  double *real_buf = nullptr;
  fftw_complex *cplx_buf = nullptr;
  int n = 0;

  explicit PlanEntry(int size) : n(size) {
    real_buf = fftw_alloc_real(n);
    cplx_buf = fftw_alloc_complex(n / 2 + 1);
    fwd = fftw_plan_dft_r2c_1d(n, real_buf, cplx_buf, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(n, cplx_buf, real_buf, FFTW_ESTIMATE);
    if (fwd == nullptr || inv == nullptr)
      throw std::runtime_error("fftw plan creation failed");
  }
  ~PlanEntry() {
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
    if (real_buf) fftw_free(real_buf);
    if (cplx_buf) fftw_free(cplx_buf);
  }
  PlanEntry(const PlanEntry &) = delete;
  PlanEntry &operator=(const PlanEntry &) = delete;
};

std::mutex g_plan_mutex;

PlanEntry &plan_for(int n) {
  static std::map<int, PlanEntry *> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, new PlanEntry(n)).first;
  return *it->second;
}

void check_size(int n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("fft size must be even and >= 2");
}

}  // namespace

void rfft(const double *x, int n, std::complex<double> *X) {
  check_size(n);
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  PlanEntry &p = plan_for(n);
  std::memcpy(p.real_buf, x, sizeof(double) * n);
  fftw_execute(p.fwd);
  const int bins = n / 2 + 1;
  for (int k = 0; k < bins; ++k)
    X[k] = std::complex<double>(p.cplx_buf[k][0], p.cplx_buf[k][1]);
}

void irfft(const std::complex<double> *X, int n, double *x) {
  check_size(n);
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  PlanEntry &p = plan_for(n);
  const int bins = n / 2 + 1;
  for (int k = 0; k < bins; ++k) {
    p.cplx_buf[k][0] = X[k].real();
    p.cplx_buf[k][1] = X[k].imag();
  }
  // Force the Hermitian edge bins; FFTW's c2r would otherwise fold any stray
  // imaginary component into the output.
  p.cplx_buf[0][1] = 0.0;
  p.cplx_buf[bins - 1][1] = 0.0;
  fftw_execute(p.inv);
  const double scale = 1.0 / n;
  for (int i = 0; i < n; ++i) x[i] = p.real_buf[i] * scale;
}

}  // namespace jnfkd
