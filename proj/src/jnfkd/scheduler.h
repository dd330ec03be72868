// src/jnfkd/scheduler.h

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

#ifndef JNFKD_SCHEDULER_H_
#define JNFKD_SCHEDULER_H_

#include <limits>

namespace jnfkd {

// Plateau rule. Improvement means strictly lower validation loss than the
// best seen this stage; ties count as non-improvement. The plateau and
// early-stop counters run on the same non-improvement streak, so an LR
// halving does not grant extra early-stop budget.
struct SchedulerConfig {
  double lr_init = 5e-4;
  int plateau_patience = 3;
  int early_stop_patience = 6;

  void validate() const;
};

struct SchedulerState {
  double lr = 0.0;
  double best = std::numeric_limits<double>::infinity();
  int streak = 0;
  bool stop = false;
};

SchedulerState make_scheduler(const SchedulerConfig &cfg);

/// Consumes one epoch's validation loss. The LR is halved exactly when the
/// streak reaches a multiple of plateau_patience; the stop flag is raised at
/// early_stop_patience and stays raised.
void scheduler_step(SchedulerState &state, double val_loss,
                    const SchedulerConfig &cfg);

}  // namespace jnfkd

#endif  // JNFKD_SCHEDULER_H_
