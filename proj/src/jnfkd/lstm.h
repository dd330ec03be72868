// src/jnfkd/lstm.h

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

#ifndef JNFKD_LSTM_H_
#define JNFKD_LSTM_H_

#include <Eigen/Dense>
#include <vector>

#include "jnfkd/rng.h"

namespace jnfkd {

/// Snaps every entry to the nearest 32-bit float. Parameters are kept on the
/// f32 grid at all times so the f32 container round-trips bit-exactly while
/// the arithmetic stays in double.
void snap_to_f32(Eigen::MatrixXd &m);
void snap_to_f32(Eigen::VectorXd &v);

// Gate rows are ordered [input; forget; cell; output], each block of size h.
// Weights act on row-vector states: pre = x*w_x^T + h*w_h^T + b_ih + b_hh.
struct LstmParams {
  Eigen::MatrixXd w_x;   // (4h, input)
  Eigen::MatrixXd w_h;   // (4h, h)
  Eigen::VectorXd b_ih;  // (4h)
  Eigen::VectorXd b_hh;  // (4h)

  int input_size() const { return static_cast<int>(w_x.cols()); }
  int hidden_size() const { return static_cast<int>(w_h.cols()); }
  long long num_params() const {
    return w_x.size() + w_h.size() + b_ih.size() + b_hh.size();
  }

  void resize(int input, int hidden);
  /// Uniform +-1/sqrt(h) for all weights and biases, then +1 on the forget
  /// gate's b_ih block; snapped to f32.
  void init(int input, int hidden, Rng &rng);
};

struct LstmGrads {
  Eigen::MatrixXd w_x, w_h;
  Eigen::VectorXd b_ih, b_hh;

  void resize_like(const LstmParams &p);
  void set_zero();
};

/// Step-indexed activations kept for backpropagation through time. Each entry
/// is (S, h) for S sequences advanced in lockstep, except x which is (S, in).
struct LstmCache {
  std::vector<Eigen::MatrixXd> x, gi, gf, gg, go, c, h;
  void clear();
};

/// Runs T steps over S parallel sequences with zero initial state. x[t] is
/// (S, input); the result is one (S, hidden) output per step. When cache is
/// non-null every intermediate needed by lstm_backward is retained.
std::vector<Eigen::MatrixXd> lstm_forward(const LstmParams &p,
                                          const std::vector<Eigen::MatrixXd> &x,
                                          LstmCache *cache);

/// BPTT. d_h[t] is the loss gradient wrt the step-t output (zero matrices
/// allowed). Accumulates into grads; returns per-step input gradients when
/// want_dx is set (empty vector otherwise).
std::vector<Eigen::MatrixXd> lstm_backward(const LstmParams &p,
                                           const LstmCache &cache,
                                           const std::vector<Eigen::MatrixXd> &d_h,
                                           LstmGrads *grads, bool want_dx);

}  // namespace jnfkd

#endif  // JNFKD_LSTM_H_
