// src/jnfkd/scheduler.cc

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

#include "jnfkd/scheduler.h"

#include <cmath>
#include <stdexcept>

namespace jnfkd {

void SchedulerConfig::validate() const {
  if (!(lr_init > 0.0) || !std::isfinite(lr_init))
    throw std::invalid_argument("scheduler: lr_init must be positive");
  if (plateau_patience < 1)
    throw std::invalid_argument("scheduler: plateau_patience must be positive");
  if (plateau_patience >= early_stop_patience)
    throw std::invalid_argument(
        "scheduler: plateau_patience must be smaller than early_stop_patience");
}

SchedulerState make_scheduler(const SchedulerConfig &cfg) {
  cfg.validate();
  SchedulerState s;
  s.lr = cfg.lr_init;
  return s;
}

void scheduler_step(SchedulerState &state, double val_loss,
                    const SchedulerConfig &cfg) {
  if (val_loss < state.best) {
    state.best = val_loss;
    state.streak = 0;
    return;
  }
  ++state.streak;
  if (state.streak % cfg.plateau_patience == 0) state.lr *= 0.5;
  if (state.streak >= cfg.early_stop_patience) state.stop = true;
}

}  // namespace jnfkd
