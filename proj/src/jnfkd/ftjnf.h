// src/jnfkd/ftjnf.h

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

#ifndef JNFKD_FTJNF_H_
#define JNFKD_FTJNF_H_

#include <string>

#include "jnfkd/lstm.h"
#include "jnfkd/model_config.h"
#include "jnfkd/stft.h"

namespace jnfkd {

// Mask estimator: an LSTM scanning the frequency axis (one sequence per
// frame, state reset between frames), a causal LSTM scanning the time axis
// (one sequence per frequency bin), and a linear head squashed by tanh into a
// complex mask. Intermediate layer outputs are exposed as flattened grids
// with one row per TF bin, row index l*K + k (frame-major).

struct IntermediateTaps {
  Eigen::MatrixXd z_f;    // (K*L, f_hidden)
  Eigen::MatrixXd z_t;    // (K*L, t_hidden)
  Eigen::MatrixXd z_lin;  // (K*L, 2), before tanh
  Eigen::MatrixXcd mask;  // (K, L), |Re| and |Im| bounded by 1
};

/// Loss gradients flowing into any subset of the taps; empty matrices mean
/// no contribution. d_mask is taken wrt the post-tanh complex mask.
struct TapGrads {
  Eigen::MatrixXcd d_mask;
  Eigen::MatrixXd d_zlin;
  Eigen::MatrixXd d_zt;
  Eigen::MatrixXd d_zf;
};

struct FTJNFParams {
  LstmParams f;      // frequency axis (forward direction)
  LstmParams f_rev;  // frequency axis reverse direction (bidirectional only)
  LstmParams t;      // time axis
  Eigen::MatrixXd w_lin;  // (2, t_hidden)
  Eigen::VectorXd b_lin;  // (2)
};

struct FTJNFGrads {
  LstmGrads f, f_rev, t;
  Eigen::MatrixXd w_lin;
  Eigen::VectorXd b_lin;

  void resize_like(const FTJNFParams &p, bool bidirectional);
  void set_zero();
};

/// Per-pass activations retained for backward.
struct ForwardCache {
  int K = 0, L = 0;
  LstmCache f_cache, f_rev_cache, t_cache;
};

class FTJNF {
 public:
  explicit FTJNF(const ModelConfig &cfg);

  void init(Rng &rng);
  const ModelConfig &config() const { return cfg_; }
  FTJNFParams &params() { return params_; }
  const FTJNFParams &params() const { return params_; }
  long long num_params() const;

  /// features is (K*L, 2*num_mics) frame-major. Taps are captured on every
  /// pass; pass a cache to enable backward.
  IntermediateTaps forward(const Eigen::MatrixXd &features, int K, int L,
                           ForwardCache *cache = nullptr) const;

  /// Accumulates parameter gradients for the given tap gradients.
  void backward(const IntermediateTaps &taps, const TapGrads &grad,
                const ForwardCache &cache, FTJNFGrads *grads) const;

 private:
  ModelConfig cfg_;
  FTJNFParams params_;
};

/// Stacks Re/Im of all microphones: column order
/// [Re mic0, Im mic0, ..., Re mic4, Im mic4], row l*K + k.
Eigen::MatrixXd featurize(const std::vector<Spectrogram> &mics);

/// Inverse of featurize; exact.
std::vector<Spectrogram> defeaturize(const Eigen::MatrixXd &features, int K, int L);

/// S_hat(k,l) = W(k,l) * Y_ref(k,l).
Spectrogram apply_mask(const Eigen::MatrixXcd &mask, const Spectrogram &y_ref);

// Versioned container: magic, config JSON, then named little-endian f32
// blobs. Parameters sit on the f32 grid in memory, so the round trip is
// bit-exact.
void save_model(const FTJNF &model, const std::string &path);
FTJNF load_model(const std::string &path, const ModelConfig *expected = nullptr);

}  // namespace jnfkd

#endif  // JNFKD_FTJNF_H_
