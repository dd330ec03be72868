// src/jnfkd/trainer.h

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

#ifndef JNFKD_TRAINER_H_
#define JNFKD_TRAINER_H_

#include <fstream>
#include <string>
#include <vector>

#include "jnfkd/ftjnf.h"
#include "jnfkd/losses.h"
#include "jnfkd/scene.h"
#include "jnfkd/scheduler.h"

namespace jnfkd {

struct TrainConfig {
  double lr_init = 5e-4;
  int batch_size = 4;
  double crop_seconds = 4.0;
  int max_epochs = 100;
  int plateau_patience = 3;   // epochs without improvement before halving LR
  int early_stop_patience = 6;
  uint64_t seed = 0;
  int reference_mic = 4;  // mask-application channel (array center)

  void validate() const;
  SchedulerConfig scheduler_config() const {
    return SchedulerConfig{lr_init, plateau_patience, early_stop_patience};
  }
};

/// One optimization phase. alpha = 1 trains against clean speech only;
/// alpha = 0 trains against frozen teacher taps only.
struct StageSpec {
  double alpha = 1.0;
  KDMethod method = KDMethod::kNone;
  const FTJNF *teacher = nullptr;
  BlockPolicy policy = BlockPolicy::full();  // self-similarity blocking

  void validate() const;
};

struct EpochRecord {
  int stage = 0;
  int epoch = 0;  // 1-based within the stage
  double train_loss = 0.0;
  double val_loss = 0.0;
  double lr = 0.0;  // rate the epoch trained at
  bool improved = false;
};

struct TrainData {
  std::vector<MixtureExample> train;
  std::vector<MixtureExample> val;
};

/// Writes one run directory: per-stage subdirectories holding epoch-stamped
/// model containers (written on improvement), a best-pointer file, and a
/// metrics log with one JSON record per epoch. Contents are a pure function
/// of the training trajectory; no timestamps.
class CheckpointWriter {
 public:
  CheckpointWriter() = default;  // inert
  explicit CheckpointWriter(const std::string &run_dir);

  void begin_stage(int stage_id);
  void record_epoch(const EpochRecord &rec, const FTJNF &model);

  bool active() const { return !run_dir_.empty(); }
  const std::string &run_dir() const { return run_dir_; }

 private:
  std::string run_dir_;
  std::string stage_dir_;
  std::ofstream metrics_;
};

/// Aligned random crop of batch_size items; examples shorter than the crop
/// are never selected (one warning per call when any are skipped).
std::vector<MixtureExample> crop_batch(const std::vector<MixtureExample> &examples,
                                       double crop_seconds, int batch_size,
                                       Rng &rng);

/// Mean stage loss of one example at full length, no gradients.
double stage_loss(const FTJNF &student, const StageSpec &stage,
                  const MixtureExample &ex, const StftConfig &stft,
                  int reference_mic);

/// Runs one stage to early stop or max_epochs. The model is left at the
/// best-validation parameters. Epoch ordering and crops are a pure function
/// of (cfg.seed, stage_id, epoch).
std::vector<EpochRecord> run_stage(FTJNF &model, const TrainData &data,
                                   const StageSpec &stage, const TrainConfig &cfg,
                                   const StftConfig &stft, int stage_id,
                                   CheckpointWriter *ckpt = nullptr);

struct TrainOutcome {
  FTJNF model;
  std::vector<EpochRecord> history;
};

/// Supervised training from a fresh initialization.
TrainOutcome train_teacher(const ModelConfig &model_cfg, const TrainData &data,
                           const TrainConfig &cfg, const StftConfig &stft,
                           CheckpointWriter *ckpt = nullptr);

/// Stage 1 minimizes the soft loss against the frozen teacher (validation is
/// the soft loss); stage 2 continues from the stage-1 best with the learning
/// rate back at lr_init, fresh optimizer moments, and the clean-speech loss.
TrainOutcome run_two_stage_kd(const FTJNF &teacher, const ModelConfig &student_cfg,
                              KDMethod method, const TrainData &data,
                              const TrainConfig &cfg, const StftConfig &stft,
                              CheckpointWriter *ckpt = nullptr);

}  // namespace jnfkd

#endif  // JNFKD_TRAINER_H_
