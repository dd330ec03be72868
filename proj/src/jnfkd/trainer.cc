// src/jnfkd/trainer.cc

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

#include "jnfkd/trainer.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "jnfkd/adam.h"

namespace jnfkd {

void TrainConfig::validate() const {
  if (!(lr_init > 0.0) || !std::isfinite(lr_init))
    throw std::invalid_argument("train config: lr_init must be positive");
  if (batch_size < 1) throw std::invalid_argument("train config: batch_size must be positive");
  if (!(crop_seconds > 0.0))
    throw std::invalid_argument("train config: crop_seconds must be positive");
  if (max_epochs < 1) throw std::invalid_argument("train config: max_epochs must be positive");
  if (plateau_patience < 1 || plateau_patience >= early_stop_patience)
    throw std::invalid_argument(
        "train config: need 0 < plateau_patience < early_stop_patience");
  if (reference_mic < 0)
    throw std::invalid_argument("train config: reference_mic must be non-negative");
}

void StageSpec::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("stage: alpha must lie in [0, 1]");
  if (alpha < 1.0) {
    if (teacher == nullptr)
      throw std::invalid_argument("stage: soft-loss training needs a teacher");
    if (method == KDMethod::kNone)
      throw std::invalid_argument("stage: soft-loss training needs a KD method");
  } else {
    if (teacher != nullptr || method != KDMethod::kNone)
      throw std::invalid_argument(
          "stage: supervised training takes neither a teacher nor a KD method");
  }
}

namespace {

long crop_length_samples(double crop_seconds, int sample_rate) {
  return std::lround(crop_seconds * sample_rate);
}

MixtureExample crop_example(const MixtureExample &ex, size_t offset, size_t len) {
  MixtureExample out;
  out.snr_db = ex.snr_db;
  out.talker_pos = ex.talker_pos;
  out.noise_pos = ex.noise_pos;
  out.seed = ex.seed;
  out.y.sample_rate = ex.y.sample_rate;
  out.x.sample_rate = ex.x.sample_rate;
  out.s.sample_rate = ex.s.sample_rate;
  for (const auto &ch : ex.y.channels)
    out.y.channels.emplace_back(ch.begin() + offset, ch.begin() + offset + len);
  for (const auto &ch : ex.x.channels)
    out.x.channels.emplace_back(ch.begin() + offset, ch.begin() + offset + len);
  out.s.samples.assign(ex.s.samples.begin() + offset, ex.s.samples.begin() + offset + len);
  return out;
}

std::vector<size_t> eligible_indices(const std::vector<MixtureExample> &examples,
                                     long crop_len, const char *what) {
  std::vector<size_t> eligible;
  for (size_t i = 0; i < examples.size(); ++i)
    if (static_cast<long>(examples[i].y.num_samples()) >= crop_len) eligible.push_back(i);
  if (eligible.size() < examples.size())
    std::cerr << "warning: skipping " << examples.size() - eligible.size() << " " << what
              << " examples shorter than the crop\n";
  if (eligible.empty())
    throw std::invalid_argument(
        std::string("no ") + what + " example is at least crop_seconds long");
  return eligible;
}

void axpy(Eigen::MatrixXd &dst, double w, const Eigen::MatrixXd &src) {
  if (src.size() == 0) return;
  if (dst.size() == 0)
    dst = w * src;
  else
    dst += w * src;
}

void axpy(Eigen::MatrixXcd &dst, double w, const Eigen::MatrixXcd &src) {
  if (src.size() == 0) return;
  if (dst.size() == 0)
    dst = w * src;
  else
    dst += w * src;
}

/// Combined stage loss of one example. When grads is non-null the tap
/// gradients (scaled by grad_scale) are backpropagated into it.
double example_loss(const FTJNF &student, const StageSpec &stage,
                    const MixtureExample &ex, const StftConfig &stft,
                    int reference_mic, double grad_scale, FTJNFGrads *grads) {
  if (reference_mic >= ex.y.num_channels())
    throw std::invalid_argument("trainer: reference_mic out of range");
  const std::vector<Spectrogram> Ys = stft_all_channels(ex.y, stft);
  const int K = stft.num_bins();
  const int L = Ys[0].num_frames();
  const Eigen::MatrixXd feats = featurize(Ys);

  ForwardCache cache;
  const IntermediateTaps taps = student.forward(feats, K, L, grads ? &cache : nullptr);

  TapGrads tg;
  double loss = 0.0;
  if (stage.alpha > 0.0) {
    Eigen::MatrixXcd d_mask;
    const double hard = hard_loss_mask(taps.mask, Ys[reference_mic], ex.s, stft,
                                       grads ? &d_mask : nullptr);
    loss += stage.alpha * hard;
    if (grads) axpy(tg.d_mask, stage.alpha * grad_scale, d_mask);
  }
  if (stage.alpha < 1.0) {
    const IntermediateTaps teacher_taps = stage.teacher->forward(feats, K, L);
    TapGrads sg;
    const double soft = kd_soft_loss(stage.method, teacher_taps, taps, stage.policy,
                                     grads ? &sg : nullptr);
    loss += (1.0 - stage.alpha) * soft;
    if (grads) {
      const double w = (1.0 - stage.alpha) * grad_scale;
      axpy(tg.d_mask, w, sg.d_mask);
      axpy(tg.d_zlin, w, sg.d_zlin);
      axpy(tg.d_zt, w, sg.d_zt);
      axpy(tg.d_zf, w, sg.d_zf);
    }
  }
  if (grads) student.backward(taps, tg, cache, grads);
  return loss;
}

}  // namespace

std::vector<MixtureExample> crop_batch(const std::vector<MixtureExample> &examples,
                                       double crop_seconds, int batch_size, Rng &rng) {
  if (examples.empty()) throw std::invalid_argument("crop_batch: no examples");
  if (batch_size < 1) throw std::invalid_argument("crop_batch: batch_size must be positive");
  const long crop_len = crop_length_samples(crop_seconds, examples[0].y.sample_rate);
  if (crop_len < 1) throw std::invalid_argument("crop_batch: crop too short");
  const std::vector<size_t> eligible = eligible_indices(examples, crop_len, "batch");

  std::vector<MixtureExample> out;
  out.reserve(batch_size);
  for (int b = 0; b < batch_size; ++b) {
    const MixtureExample &ex = examples[eligible[rng.uniform_int(eligible.size())]];
    const size_t span = ex.y.num_samples() - static_cast<size_t>(crop_len) + 1;
    out.push_back(crop_example(ex, rng.uniform_int(span), crop_len));
  }
  return out;
}

double stage_loss(const FTJNF &student, const StageSpec &stage,
                  const MixtureExample &ex, const StftConfig &stft,
                  int reference_mic) {
  return example_loss(student, stage, ex, stft, reference_mic, 0.0, nullptr);
}

CheckpointWriter::CheckpointWriter(const std::string &run_dir) : run_dir_(run_dir) {
  if (run_dir_.empty())
    throw std::invalid_argument("checkpoints: run directory must be non-empty");
  std::filesystem::create_directories(run_dir_);
}

void CheckpointWriter::begin_stage(int stage_id) {
  stage_dir_ = run_dir_ + "/stage" + std::to_string(stage_id);
  std::filesystem::create_directories(stage_dir_);
  if (metrics_.is_open()) metrics_.close();
  metrics_.open(stage_dir_ + "/metrics.jsonl", std::ios::trunc);
  if (!metrics_) throw std::runtime_error("checkpoints: cannot open metrics log");
}

void CheckpointWriter::record_epoch(const EpochRecord &rec, const FTJNF &model) {
  if (stage_dir_.empty())
    throw std::logic_error("checkpoints: record_epoch before begin_stage");
  nlohmann::json j{{"stage", rec.stage},
                   {"epoch", rec.epoch},
                   {"train_loss", rec.train_loss},
                   {"val_loss", rec.val_loss},
                   {"lr", rec.lr}};
  metrics_ << j.dump() << "\n";
  metrics_.flush();
  if (rec.improved) {
    char name[32];
    std::snprintf(name, sizeof(name), "epoch_%04d.jnfm", rec.epoch);
    save_model(model, stage_dir_ + "/" + name);
    nlohmann::json best{{"container", name}, {"epoch", rec.epoch}, {"val_loss", rec.val_loss}};
    std::ofstream out(stage_dir_ + "/best.json", std::ios::trunc);
    out << best.dump() << "\n";
    if (!out) throw std::runtime_error("checkpoints: cannot write best pointer");
  }
}

std::vector<EpochRecord> run_stage(FTJNF &model, const TrainData &data,
                                   const StageSpec &stage, const TrainConfig &cfg,
                                   const StftConfig &stft, int stage_id,
                                   CheckpointWriter *ckpt) {
  cfg.validate();
  stage.validate();
  if (data.train.empty()) throw std::invalid_argument("trainer: training split is empty");
  if (data.val.empty()) throw std::invalid_argument("trainer: validation split is empty");

  const long crop_len = crop_length_samples(cfg.crop_seconds, kSampleRate);
  const std::vector<size_t> eligible = eligible_indices(data.train, crop_len, "training");

  Adam opt(model.params());
  FTJNFGrads grads;
  grads.resize_like(model.params(), model.config().f_bidirectional);
  const SchedulerConfig scfg = cfg.scheduler_config();
  SchedulerState sched = make_scheduler(scfg);

  FTJNFParams best_params = model.params();
  std::vector<EpochRecord> history;
  if (ckpt && ckpt->active()) ckpt->begin_stage(stage_id);

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    Rng erng = Rng::derive(cfg.seed, "trainer-epoch",
                           static_cast<uint64_t>(stage_id) << 32 |
                               static_cast<uint64_t>(epoch));
    const std::vector<size_t> perm = erng.permutation(eligible.size());

    double loss_sum = 0.0;
    for (size_t pos = 0; pos < perm.size(); pos += cfg.batch_size) {
      const size_t batch_n = std::min<size_t>(cfg.batch_size, perm.size() - pos);
      grads.set_zero();
      double batch_loss = 0.0;
      for (size_t b = 0; b < batch_n; ++b) {
        const MixtureExample &ex = data.train[eligible[perm[pos + b]]];
        const size_t span = ex.y.num_samples() - static_cast<size_t>(crop_len) + 1;
        const MixtureExample crop = crop_example(ex, erng.uniform_int(span), crop_len);
        batch_loss += example_loss(model, stage, crop, stft, cfg.reference_mic,
                                   1.0 / static_cast<double>(batch_n), &grads);
      }
      batch_loss /= static_cast<double>(batch_n);
      if (!std::isfinite(batch_loss))
        throw std::runtime_error("trainer: non-finite training loss at stage " +
                                 std::to_string(stage_id) + " epoch " +
                                 std::to_string(epoch));
      opt.step(model.params(), grads, sched.lr);
      loss_sum += batch_loss * static_cast<double>(batch_n);
    }
    const double train_loss = loss_sum / static_cast<double>(perm.size());

    double val_loss = 0.0;
    for (const MixtureExample &ex : data.val)
      val_loss += stage_loss(model, stage, ex, stft, cfg.reference_mic);
    val_loss /= static_cast<double>(data.val.size());
    if (!std::isfinite(val_loss))
      throw std::runtime_error("trainer: non-finite validation loss at stage " +
                               std::to_string(stage_id) + " epoch " +
                               std::to_string(epoch));

    EpochRecord rec;
    rec.stage = stage_id;
    rec.epoch = epoch;
    rec.train_loss = train_loss;
    rec.val_loss = val_loss;
    rec.lr = sched.lr;
    rec.improved = val_loss < sched.best;
    scheduler_step(sched, val_loss, scfg);
    if (rec.improved) best_params = model.params();
    history.push_back(rec);
    if (ckpt && ckpt->active()) ckpt->record_epoch(rec, model);
    if (sched.stop) break;
  }

  model.params() = best_params;
  return history;
}

TrainOutcome train_teacher(const ModelConfig &model_cfg, const TrainData &data,
                           const TrainConfig &cfg, const StftConfig &stft,
                           CheckpointWriter *ckpt) {
  model_cfg.validate();
  FTJNF model(model_cfg);
  Rng init_rng = Rng::derive(cfg.seed, "teacher-init");
  model.init(init_rng);
  StageSpec stage;
  stage.alpha = 1.0;
  std::vector<EpochRecord> history = run_stage(model, data, stage, cfg, stft, 1, ckpt);
  return TrainOutcome{std::move(model), std::move(history)};
}

TrainOutcome run_two_stage_kd(const FTJNF &teacher, const ModelConfig &student_cfg,
                              KDMethod method, const TrainData &data,
                              const TrainConfig &cfg, const StftConfig &stft,
                              CheckpointWriter *ckpt) {
  if (method == KDMethod::kNone)
    throw std::invalid_argument("distillation needs a KD method");
  student_cfg.validate();
  if (student_cfg.num_mics != teacher.config().num_mics)
    throw std::invalid_argument(
        "distillation: teacher and student must read the same microphones");

  FTJNF student(student_cfg);
  Rng init_rng = Rng::derive(cfg.seed, "student-init");
  student.init(init_rng);

  StageSpec soft_stage;
  soft_stage.alpha = 0.0;
  soft_stage.method = method;
  soft_stage.teacher = &teacher;
  soft_stage.policy = BlockPolicy::per_frame(stft.num_bins());
  std::vector<EpochRecord> history =
      run_stage(student, data, soft_stage, cfg, stft, 1, ckpt);

  // Stage 2 starts from the stage-1 best checkpoint; run_stage builds a fresh
  // optimizer and scheduler, which realizes the LR and moment reset.
  StageSpec hard_stage;
  hard_stage.alpha = 1.0;
  std::vector<EpochRecord> h2 = run_stage(student, data, hard_stage, cfg, stft, 2, ckpt);
  history.insert(history.end(), h2.begin(), h2.end());
  return TrainOutcome{std::move(student), std::move(history)};
}

}  // namespace jnfkd
