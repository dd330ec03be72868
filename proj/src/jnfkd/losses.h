// src/jnfkd/losses.h

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

#ifndef JNFKD_LOSSES_H_
#define JNFKD_LOSSES_H_

#include <string>
#include <vector>

#include "jnfkd/ftjnf.h"
#include "jnfkd/stft.h"

namespace jnfkd {

// All L1 losses are mean-normalized (averaged over entries), so values are
// comparable across model widths and utterance lengths.

/// Supervised loss: time-domain L1 plus L1 over STFT magnitudes of the
/// re-analyzed signals. Zero iff the signals are identical.
double hard_loss(const Waveform &s_hat, const Waveform &s, const StftConfig &cfg,
                 std::vector<double> *grad_s_hat = nullptr);

/// Same objective evaluated through the mask path: s_hat = istft(mask * y_ref).
/// d_mask, when given, receives the gradient wrt the complex mask.
double hard_loss_mask(const Eigen::MatrixXcd &mask, const Spectrogram &y_ref,
                      const Waveform &s, const StftConfig &cfg,
                      Eigen::MatrixXcd *d_mask = nullptr);

/// Elementwise mean L1 between same-shape tap grids (teacher, student).
double soft_loss_direct(const Eigen::MatrixXd &z_teacher,
                        const Eigen::MatrixXd &z_student,
                        Eigen::MatrixXd *grad_student = nullptr);

// The full Gram over all K*L rows of a long utterance is quadratic in K*L
// and infeasible; the default policy chunks rows into one block per time
// frame (K rows each). The full single-block mode exists for small instances
// and oracle tests.
struct BlockPolicy {
  int rows_per_block = 0;  // 0 = one block spanning all rows

  static BlockPolicy full() { return BlockPolicy{0}; }
  static BlockPolicy per_frame(int num_bins) { return BlockPolicy{num_bins}; }
};

/// G = Z * Z^T over one block of rows.
Eigen::MatrixXd gram(const Eigen::MatrixXd &z);

/// Row ranges [begin, end) induced by the policy.
std::vector<std::pair<Eigen::Index, Eigen::Index>> block_ranges(Eigen::Index rows,
                                                                const BlockPolicy &policy);

/// Mean L1 between per-block Gram matrices, averaged over blocks. Row counts
/// must match; widths may differ.
double soft_loss_selfsim(const Eigen::MatrixXd &z_teacher,
                         const Eigen::MatrixXd &z_student, const BlockPolicy &policy,
                         Eigen::MatrixXd *grad_student = nullptr);

/// Sum of self-similarity losses over the F-LSTM, T-LSTM and linear taps.
double soft_loss_multi(const IntermediateTaps &teacher, const IntermediateTaps &student,
                       const BlockPolicy &policy, TapGrads *grad_student = nullptr);

/// alpha * hard + (1 - alpha) * soft.
double combined_loss(double hard, double soft, double alpha);

// Distillation method table: which taps feed the soft loss and how they fuse.
//   Mask   -> direct L1 on the complex mask (2-channel real view)
//   Linear -> direct L1 on the linear output
//   F-LSTM -> self-similarity on the F-LSTM output
//   T-LSTM -> self-similarity on the T-LSTM output
//   Multi  -> self-similarity on F-LSTM + T-LSTM + linear outputs, summed
enum class KDMethod { kNone, kMask, kLinear, kFLstm, kTLstm, kMulti };

struct KDMethodSpec {
  bool uses_mask = false;
  bool uses_zlin = false;
  bool uses_zt = false;
  bool uses_zf = false;
  bool self_similarity = false;  // false = direct L1
};

KDMethodSpec kd_method_spec(KDMethod method);
std::string to_string(KDMethod method);
KDMethod parse_kd_method(const std::string &name);

/// Records which taps a soft-loss evaluation actually read and the fusion it
/// applied; used to assert the dispatch table.
struct SoftLossProbe {
  bool read_mask = false;
  bool read_zlin = false;
  bool read_zt = false;
  bool read_zf = false;
  bool used_direct = false;
  bool used_selfsim = false;
};

/// (K*L, 2) real view of a complex mask, row l*K + k.
Eigen::MatrixXd mask_as_real(const Eigen::MatrixXcd &mask);

/// Soft loss for one method. grad_student, when given, accumulates tap
/// gradients for the student.
double kd_soft_loss(KDMethod method, const IntermediateTaps &teacher,
                    const IntermediateTaps &student, const BlockPolicy &policy,
                    TapGrads *grad_student = nullptr, SoftLossProbe *probe = nullptr);

}  // namespace jnfkd

#endif  // JNFKD_LOSSES_H_
