// tests/oracles.h

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

// Brute-force reference computations for the test suites. Everything here is
// deliberately slow and direct -- independent of the library's own transform,
// convolution, and gradient paths.

#ifndef JNFKD_TESTS_ORACLES_H_
#define JNFKD_TESTS_ORACLES_H_

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace oracles {

/// Direct-summation DFT of a real frame: X[k] = sum_n x[n] e^{-2pi i k n / N},
/// one-sided bins k = 0..N/2.
inline std::vector<std::complex<double>> naive_dft(const std::vector<double> &x) {
  const int n = static_cast<int>(x.size());
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
      const double theta = -2.0 * std::numbers::pi * k * i / n;
      acc += x[i] * std::complex<double>(std::cos(theta), std::sin(theta));
    }
    out[k] = acc;
  }
  return out;
}

/// O(N*T) direct linear convolution, truncated to the input length.
inline std::vector<double> naive_convolve_truncated(const std::vector<double> &x,
                                                    const std::vector<double> &h) {
  std::vector<double> y(x.size(), 0.0);
  for (size_t n = 0; n < x.size(); ++n) {
    double acc = 0.0;
    for (size_t t = 0; t < h.size() && t <= n; ++t) acc += h[t] * x[n - t];
    y[n] = acc;
  }
  return y;
}

/// Cross-correlation delay estimate of b relative to a (positive = b lags a),
/// refined with parabolic interpolation around the integer peak.
inline double xcorr_delay(const std::vector<double> &a, const std::vector<double> &b,
                          int max_lag) {
  auto corr_at = [&](int lag) {
    double acc = 0.0;
    for (size_t n = 0; n < a.size(); ++n) {
      const long long m = static_cast<long long>(n) + lag;
      if (m >= 0 && m < static_cast<long long>(b.size())) acc += a[n] * b[m];
    }
    return acc;
  };
  int best_lag = -max_lag;
  double best = -1e300;
  std::vector<double> c(2 * max_lag + 1);
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    c[lag + max_lag] = corr_at(lag);
    if (c[lag + max_lag] > best) {
      best = c[lag + max_lag];
      best_lag = lag;
    }
  }
  if (best_lag == -max_lag || best_lag == max_lag) return best_lag;
  const double y0 = c[best_lag + max_lag - 1];
  const double y1 = c[best_lag + max_lag];
  const double y2 = c[best_lag + max_lag + 1];
  const double denom = y0 - 2.0 * y1 + y2;
  if (denom == 0.0) return best_lag;
  return best_lag + 0.5 * (y0 - y2) / denom;
}

/// Central finite-difference gradient of f at x, step h per coordinate.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double> &)> &f,
                                       std::vector<double> x, double h = 1e-4) {
  std::vector<double> g(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double fp = f(x);
    x[i] = orig - h;
    const double fm = f(x);
    x[i] = orig;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline double rel_l2_error(const std::vector<double> &ref, const std::vector<double> &got) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < ref.size(); ++i) {
    const double d = got[i] - ref[i];
    num += d * d;
    den += ref[i] * ref[i];
  }
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

/// Plateau/early-stop rule simulator: walks a validation-loss sequence and
/// returns, per epoch, the learning rate in force after that epoch and
/// whether the early-stop flag is set. Written as a literal transcription of
/// the rule: strict improvement over the best seen resets the streak; the LR
/// halves at every 3rd consecutive non-improvement; the stop flag rises at
/// the 6th.
struct SchedSimStep {
  double lr;
  bool stopped;
};
inline std::vector<SchedSimStep> simulate_plateau_rule(const std::vector<double> &val_losses,
                                                       double lr_init,
                                                       int plateau_patience = 3,
                                                       int early_stop_patience = 6) {
  std::vector<SchedSimStep> out;
  double best = std::numeric_limits<double>::infinity();
  double lr = lr_init;
  int streak = 0;
  bool stopped = false;
  for (double v : val_losses) {
    if (v < best) {
      best = v;
      streak = 0;
    } else {
      ++streak;
      if (streak % plateau_patience == 0) lr *= 0.5;
      if (streak >= early_stop_patience) stopped = true;
    }
    out.push_back({lr, stopped});
  }
  return out;
}

}  // namespace oracles

#endif  // JNFKD_TESTS_ORACLES_H_
