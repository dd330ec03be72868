// src/jnfkd/model_config.cc

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

#include "jnfkd/model_config.h"

#include <stdexcept>

namespace jnfkd {

void ModelConfig::validate() const {
  if (f_hidden <= 0 || t_hidden <= 0)
    throw std::invalid_argument("hidden sizes must be positive");
  if (num_mics != 5)
    throw std::invalid_argument("the model family is defined for 5 microphones");
  if (f_bidirectional && f_hidden % 2 != 0)
    throw std::invalid_argument("bidirectional F-LSTM needs an even f_hidden");
}

const std::vector<PresetInfo> &preset_table() {
  static const std::vector<PresetInfo> table = {
      {'A', 512, 256, 1400.0, 34.7, 9.64},
      {'B', 256, 64, 364.9, 8.9, 3.49},
      {'C', 128, 32, 92.7, 2.3, 1.44},
      {'D', 88, 40, 56.4, 1.4, 1.1},
      {'E', 80, 32, 44.4, 1.1, 0.95},
      {'F', 72, 24, 33.9, 0.85, 0.65},
      {'G', 64, 16, 24.9, 0.63, 0.64},
      {'H', 56, 8, 17.4, 0.44, 0.55},
      {'I', 48, 8, 13.4, 0.34, 0.48},
  };
  return table;
}

const PresetInfo &preset_info(char label) {
  for (const auto &p : preset_table())
    if (p.label == label) return p;
  throw std::invalid_argument(std::string("unknown preset '") + label + "'");
}

ModelConfig preset_config(char label) {
  const PresetInfo &p = preset_info(label);
  ModelConfig cfg;
  cfg.f_hidden = p.f_hidden;
  cfg.t_hidden = p.t_hidden;
  cfg.size_label = std::string(1, p.label);
  cfg.validate();
  return cfg;
}

namespace {
long long lstm_params(long long input, long long hidden) {
  return 4 * hidden * (input + hidden + 2);
}
}  // namespace

long long count_params(const ModelConfig &cfg) {
  cfg.validate();
  const long long in = cfg.input_width();
  long long total = 0;
  if (cfg.f_bidirectional) {
    const long long half = cfg.f_hidden / 2;
    total += 2 * lstm_params(in, half);
  } else {
    total += lstm_params(in, cfg.f_hidden);
  }
  total += lstm_params(cfg.f_hidden, cfg.t_hidden);
  total += static_cast<long long>(cfg.t_hidden) * 2 + 2;
  return total;
}

long long count_macs_per_frame(const ModelConfig &cfg, int num_bins) {
  cfg.validate();
  if (num_bins < 1) throw std::invalid_argument("num_bins must be >= 1");
  const long long in = cfg.input_width();
  long long per_bin = 0;
  if (cfg.f_bidirectional) {
    const long long half = cfg.f_hidden / 2;
    per_bin += 2 * 4 * half * (in + half);
  } else {
    per_bin += 4LL * cfg.f_hidden * (in + cfg.f_hidden);
  }
  per_bin += 4LL * cfg.t_hidden * (cfg.f_hidden + cfg.t_hidden);
  per_bin += 2LL * cfg.t_hidden;  // linear head
  return per_bin * num_bins;
}

}  // namespace jnfkd
