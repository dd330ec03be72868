// src/jnfkd/commands.h

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

#ifndef JNFKD_COMMANDS_H_
#define JNFKD_COMMANDS_H_

#include <iosfwd>
#include <string>

#include "jnfkd/runconfig.h"
#include "jnfkd/scene.h"

namespace jnfkd {

// Subcommand bodies. Preconditions fail with ConfigError; anything that goes
// wrong mid-run surfaces as a plain exception. Each command is idempotent: a
// completed output is skipped on rerun unless the config says overwrite.

void cmd_simulate(const RunConfig &cfg);
void cmd_train_teacher(const RunConfig &cfg);
void cmd_distill(const RunConfig &cfg);
void cmd_evaluate(const RunConfig &cfg);
void cmd_report(const RunConfig &cfg);
void cmd_count(const RunConfig &cfg, std::ostream &os);

/// One synthetic scene, a pure function of (cfg.seed, index). Indices number
/// the train split first, then the validation split.
MixtureExample render_synthetic_example(const RunConfig &cfg, uint64_t index);

/// Loads the best checkpoint of a finished run (stage 2 when present).
FTJNF load_best_model(const std::string &run_dir);

}  // namespace jnfkd

#endif  // JNFKD_COMMANDS_H_
