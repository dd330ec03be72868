// src/jnfkd/losses.cc

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

#include "jnfkd/losses.h"

#include <cmath>
#include <stdexcept>

namespace jnfkd {

namespace {
inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }
}  // namespace

double hard_loss(const Waveform &s_hat, const Waveform &s, const StftConfig &cfg,
                 std::vector<double> *grad_s_hat) {
  if (s_hat.samples.size() != s.samples.size())
    throw std::invalid_argument("hard_loss: length mismatch");
  const size_t n = s.samples.size();
  if (n == 0) throw std::invalid_argument("hard_loss: empty signals");

  double time_term = 0.0;
  for (size_t i = 0; i < n; ++i)
    time_term += std::abs(s_hat.samples[i] - s.samples[i]);
  time_term /= static_cast<double>(n);

  Spectrogram S_hat = stft(s_hat, cfg);
  Spectrogram S = stft(s, cfg);
  const Eigen::Index bins = S.coefficients.size();

  double mag_term = 0.0;
  Spectrogram d_spec;
  if (grad_s_hat) d_spec.coefficients = Eigen::MatrixXcd::Zero(S.num_bins(), S.num_frames());
  for (Eigen::Index j = 0; j < S.coefficients.cols(); ++j)
    for (Eigen::Index i = 0; i < S.coefficients.rows(); ++i) {
      const double mh = std::abs(S_hat.coefficients(i, j));
      const double mt = std::abs(S.coefficients(i, j));
      mag_term += std::abs(mh - mt);
      if (grad_s_hat && mh > 0.0) {
        const double w = sign(mh - mt) / static_cast<double>(bins);
        d_spec.coefficients(i, j) = w * S_hat.coefficients(i, j) / mh;
      }
    }
  mag_term /= static_cast<double>(bins);

  if (grad_s_hat) {
    Waveform g = stft_adjoint(d_spec, static_cast<int>(n), cfg);
    grad_s_hat->resize(n);
    for (size_t i = 0; i < n; ++i)
      (*grad_s_hat)[i] =
          sign(s_hat.samples[i] - s.samples[i]) / static_cast<double>(n) + g.samples[i];
  }
  return time_term + mag_term;
}

double hard_loss_mask(const Eigen::MatrixXcd &mask, const Spectrogram &y_ref,
                      const Waveform &s, const StftConfig &cfg,
                      Eigen::MatrixXcd *d_mask) {
  Spectrogram masked = apply_mask(mask, y_ref);
  if (masked.num_samples == 0)
    throw std::invalid_argument("hard_loss_mask: y_ref does not carry its length");
  Waveform s_hat = istft(masked, cfg);
  s_hat.sample_rate = s.sample_rate;

  std::vector<double> d_wave;
  const double loss = hard_loss(s_hat, s, cfg, d_mask ? &d_wave : nullptr);
  if (d_mask) {
    Waveform gw;
    gw.samples = std::move(d_wave);
    Spectrogram d_masked = istft_adjoint(gw, masked.num_frames(), cfg);
    // complex product rule: d mask = d S_hat * conj(y_ref)
    *d_mask = d_masked.coefficients.cwiseProduct(y_ref.coefficients.conjugate());
  }
  return loss;
}

double soft_loss_direct(const Eigen::MatrixXd &z_teacher,
                        const Eigen::MatrixXd &z_student,
                        Eigen::MatrixXd *grad_student) {
  if (z_teacher.rows() != z_student.rows() || z_teacher.cols() != z_student.cols())
    throw std::invalid_argument(
        "soft_loss_direct: shape mismatch (direct fusion needs identical shapes)");
  if (z_teacher.size() == 0) throw std::invalid_argument("soft_loss_direct: empty taps");

  const double count = static_cast<double>(z_teacher.size());
  const Eigen::MatrixXd diff = z_student - z_teacher;
  if (grad_student)
    *grad_student = diff.unaryExpr([](double v) { return sign(v); }) / count;
  return diff.cwiseAbs().sum() / count;
}

Eigen::MatrixXd gram(const Eigen::MatrixXd &z) {
  if (z.rows() < 1 || z.cols() < 1) throw std::invalid_argument("gram: empty tap");
  return z * z.transpose();
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> block_ranges(Eigen::Index rows,
                                                                const BlockPolicy &policy) {
  if (rows < 1) throw std::invalid_argument("block_ranges: no rows");
  if (policy.rows_per_block < 0)
    throw std::invalid_argument("block_ranges: negative block size");
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  if (policy.rows_per_block == 0) {
    out.emplace_back(0, rows);
    return out;
  }
  for (Eigen::Index b = 0; b < rows; b += policy.rows_per_block)
    out.emplace_back(b, std::min<Eigen::Index>(rows, b + policy.rows_per_block));
  return out;
}

double soft_loss_selfsim(const Eigen::MatrixXd &z_teacher,
                         const Eigen::MatrixXd &z_student, const BlockPolicy &policy,
                         Eigen::MatrixXd *grad_student) {
  if (z_teacher.rows() != z_student.rows())
    throw std::invalid_argument("soft_loss_selfsim: row-count mismatch");
  if (z_teacher.size() == 0 || z_student.size() == 0)
    throw std::invalid_argument("soft_loss_selfsim: empty taps");

  const auto ranges = block_ranges(z_teacher.rows(), policy);
  const double num_blocks = static_cast<double>(ranges.size());
  if (grad_student) grad_student->setZero(z_student.rows(), z_student.cols());

  double total = 0.0;
  for (const auto &[begin, end] : ranges) {
    const Eigen::Index rows = end - begin;
    const auto zt = z_teacher.middleRows(begin, rows);
    const auto zs = z_student.middleRows(begin, rows);
    const Eigen::MatrixXd gt = zt * zt.transpose();
    const Eigen::MatrixXd gs = zs * zs.transpose();
    const double entries = static_cast<double>(rows) * rows;

    const Eigen::MatrixXd diff = gs - gt;
    total += diff.cwiseAbs().sum() / entries;
    if (grad_student) {
      const Eigen::MatrixXd d =
          diff.unaryExpr([](double v) { return sign(v); }) / (entries * num_blocks);
      grad_student->middleRows(begin, rows).noalias() += (d + d.transpose()) * zs;
    }
  }
  return total / num_blocks;
}

double soft_loss_multi(const IntermediateTaps &teacher, const IntermediateTaps &student,
                       const BlockPolicy &policy, TapGrads *grad_student) {
  double total = 0.0;
  total += soft_loss_selfsim(teacher.z_f, student.z_f, policy,
                             grad_student ? &grad_student->d_zf : nullptr);
  total += soft_loss_selfsim(teacher.z_t, student.z_t, policy,
                             grad_student ? &grad_student->d_zt : nullptr);
  total += soft_loss_selfsim(teacher.z_lin, student.z_lin, policy,
                             grad_student ? &grad_student->d_zlin : nullptr);
  return total;
}

double combined_loss(double hard, double soft, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("combined_loss: alpha must lie in [0, 1]");
  if (!std::isfinite(hard) || !std::isfinite(soft))
    throw std::invalid_argument("combined_loss: non-finite inputs");
  return alpha * hard + (1.0 - alpha) * soft;
}

KDMethodSpec kd_method_spec(KDMethod method) {
  KDMethodSpec s;
  switch (method) {
    case KDMethod::kNone:
      break;
    case KDMethod::kMask:
      s.uses_mask = true;
      s.self_similarity = false;
      break;
    case KDMethod::kLinear:
      s.uses_zlin = true;
      s.self_similarity = false;
      break;
    case KDMethod::kFLstm:
      s.uses_zf = true;
      s.self_similarity = true;
      break;
    case KDMethod::kTLstm:
      s.uses_zt = true;
      s.self_similarity = true;
      break;
    case KDMethod::kMulti:
      s.uses_zf = s.uses_zt = s.uses_zlin = true;
      s.self_similarity = true;
      break;
  }
  return s;
}

std::string to_string(KDMethod method) {
  switch (method) {
    case KDMethod::kNone: return "none";
    case KDMethod::kMask: return "mask";
    case KDMethod::kLinear: return "linear";
    case KDMethod::kFLstm: return "flstm";
    case KDMethod::kTLstm: return "tlstm";
    case KDMethod::kMulti: return "multi";
  }
  throw std::logic_error("unknown KD method");
}

KDMethod parse_kd_method(const std::string &name) {
  if (name == "none") return KDMethod::kNone;
  if (name == "mask") return KDMethod::kMask;
  if (name == "linear") return KDMethod::kLinear;
  if (name == "flstm") return KDMethod::kFLstm;
  if (name == "tlstm") return KDMethod::kTLstm;
  if (name == "multi") return KDMethod::kMulti;
  throw std::runtime_error("unknown KD method '" + name +
                           "' (expected none|mask|linear|flstm|tlstm|multi)");
}

Eigen::MatrixXd mask_as_real(const Eigen::MatrixXcd &mask) {
  const Eigen::Index K = mask.rows(), L = mask.cols();
  Eigen::MatrixXd out(K * L, 2);
  for (Eigen::Index l = 0; l < L; ++l)
    for (Eigen::Index k = 0; k < K; ++k) {
      out(l * K + k, 0) = mask(k, l).real();
      out(l * K + k, 1) = mask(k, l).imag();
    }
  return out;
}

double kd_soft_loss(KDMethod method, const IntermediateTaps &teacher,
                    const IntermediateTaps &student, const BlockPolicy &policy,
                    TapGrads *grad_student, SoftLossProbe *probe) {
  switch (method) {
    case KDMethod::kNone:
      return 0.0;
    case KDMethod::kMask: {
      if (probe) {
        probe->read_mask = true;
        probe->used_direct = true;
      }
      Eigen::MatrixXd g;
      const double loss = soft_loss_direct(mask_as_real(teacher.mask),
                                           mask_as_real(student.mask),
                                           grad_student ? &g : nullptr);
      if (grad_student) {
        const Eigen::Index K = student.mask.rows(), L = student.mask.cols();
        grad_student->d_mask.resize(K, L);
        for (Eigen::Index l = 0; l < L; ++l)
          for (Eigen::Index k = 0; k < K; ++k)
            grad_student->d_mask(k, l) =
                std::complex<double>(g(l * K + k, 0), g(l * K + k, 1));
      }
      return loss;
    }
    case KDMethod::kLinear:
      if (probe) {
        probe->read_zlin = true;
        probe->used_direct = true;
      }
      return soft_loss_direct(teacher.z_lin, student.z_lin,
                              grad_student ? &grad_student->d_zlin : nullptr);
    case KDMethod::kFLstm:
      if (probe) {
        probe->read_zf = true;
        probe->used_selfsim = true;
      }
      return soft_loss_selfsim(teacher.z_f, student.z_f, policy,
                               grad_student ? &grad_student->d_zf : nullptr);
    case KDMethod::kTLstm:
      if (probe) {
        probe->read_zt = true;
        probe->used_selfsim = true;
      }
      return soft_loss_selfsim(teacher.z_t, student.z_t, policy,
                               grad_student ? &grad_student->d_zt : nullptr);
    case KDMethod::kMulti:
      if (probe) {
        probe->read_zf = probe->read_zt = probe->read_zlin = true;
        probe->used_selfsim = true;
      }
      return soft_loss_multi(teacher, student, policy, grad_student);
  }
  throw std::logic_error("unknown KD method");
}

}  // namespace jnfkd
