// src/jnfkd/runconfig.h

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

#ifndef JNFKD_RUNCONFIG_H_
#define JNFKD_RUNCONFIG_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jnfkd/evalproto.h"
#include "jnfkd/geometry.h"
#include "jnfkd/losses.h"
#include "jnfkd/stft.h"
#include "jnfkd/trainer.h"

namespace jnfkd {

/// Faults the caller can fix before anything runs: bad flag values, malformed
/// config files, missing declared inputs. Mapped to its own exit status.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything a run needs, resolved once at startup and serialized into the
// run's output directory, so any artifact can be regenerated from its stored
// copy plus the inputs it names.
struct RunConfig {
  // inputs and outputs
  std::string manifest;      // dataset manifest (JSONL); optional with synthetic
  std::string out_dir = "run";
  std::string data_dir;      // rendered example root (a simulate run's examples/)
  std::string teacher_dir;   // finished train-teacher run directory
  std::vector<std::string> student_dirs;  // finished distill run directories
  std::string pesq_adapter;  // external scorer command; empty disables the metric

  uint64_t seed = 0;  // sole randomness root; expanded per purpose downstream
  bool synthetic = false;
  bool overwrite = false;  // redo completed outputs instead of skipping

  // scene rendering
  int train_examples = 20;
  int val_examples = 5;
  double example_seconds = 4.0;
  double snr_min_db = -5.0;  // training mixtures draw uniformly from this range
  double snr_max_db = 15.0;

  // model selection: the preset the subcommand builds (teacher or student)
  char preset = 'A';
  KDMethod kd = KDMethod::kNone;
  bool taps_enabled = true;  // distillation reads intermediate activations

  StftConfig stft;
  ArrayGeometry geometry = ArrayGeometry::default_array();
  TrainConfig train;
  EvalProtocol protocol;

  /// Pushes the top-level seed and the geometry's reference channel into the
  /// nested configs; call after the override chain is applied.
  void normalize();
  void validate() const;  // throws ConfigError
};

void save_run_config(const RunConfig &cfg, const std::string &path);
RunConfig load_run_config(const std::string &path);

/// Overlays a (possibly partial) JSON document; unknown keys are errors.
void apply_config_json(RunConfig &cfg, const std::string &json_text,
                       const std::string &origin);

// One optional per overridable field. The same set is exposed as CLI flags
// and as JNFKD_-prefixed environment variables.
struct RunOverrides {
  std::optional<uint64_t> seed;
  std::optional<char> preset;
  std::optional<KDMethod> kd;
  std::optional<bool> synthetic;
  std::optional<bool> overwrite;
  std::optional<std::string> pesq_adapter;
  std::optional<std::string> out_dir;
  std::optional<std::string> manifest;
  std::optional<std::string> data_dir;
  std::optional<std::string> teacher_dir;
  std::optional<std::vector<std::string>> student_dirs;
  std::optional<int> max_epochs;
  std::optional<int> train_examples;
  std::optional<int> val_examples;
  std::optional<double> example_seconds;
  std::optional<int> examples_per_snr;
};

void apply_overrides(RunConfig &cfg, const RunOverrides &ov);

/// Reads JNFKD_SEED, JNFKD_PRESET, JNFKD_KD, JNFKD_SYNTHETIC, JNFKD_OVERWRITE,
/// JNFKD_PESQ_ADAPTER, JNFKD_OUT, JNFKD_MANIFEST, JNFKD_DATA, JNFKD_TEACHER,
/// JNFKD_STUDENT (comma separated), JNFKD_EPOCHS, JNFKD_TRAIN_EXAMPLES,
/// JNFKD_VAL_EXAMPLES, JNFKD_SECONDS, JNFKD_EXAMPLES_PER_SNR.
RunOverrides overrides_from_env();

/// Config file path: the flag wins over JNFKD_CONFIG; empty when neither set.
std::string resolve_config_path(const std::string &flag_value);

/// Full precedence chain: defaults < config file < CLI flags < environment.
RunConfig resolve_run_config(const std::string &config_flag, const RunOverrides &cli);

char parse_preset_label(const std::string &s);  // single letter from the ladder

}  // namespace jnfkd

#endif  // JNFKD_RUNCONFIG_H_
