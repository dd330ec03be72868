// src/jnfkd/evalproto.h

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

#ifndef JNFKD_EVALPROTO_H_
#define JNFKD_EVALPROTO_H_

#include <functional>
#include <string>
#include <vector>

#include "jnfkd/ftjnf.h"
#include "jnfkd/losses.h"
#include "jnfkd/metrics.h"
#include "jnfkd/scene.h"
#include "jnfkd/synthetic.h"

namespace jnfkd {

/// Synthesis in the STFT domain from an explicit mask.
Waveform apply_enhancement(const Eigen::MatrixXcd &mask, const Spectrogram &y_ref,
                           const StftConfig &cfg);

/// Full enhancement path: multichannel analysis, mask estimation, masking of
/// the reference channel, synthesis. Output length equals the input length.
Waveform enhance(const FTJNF &model, const MixtureExample &ex,
                 const StftConfig &cfg, int reference_mic);

/// Test items are a pure function of (snr_db, index), which is what keeps
/// every model under comparison on identical audio.
using ExampleSource = std::function<MixtureExample(double snr_db, int index)>;

/// Corpus-free source: synthetic talker and noise through a sparse random
/// room response on the speech path.
ExampleSource synthetic_source(uint64_t seed, double seconds,
                               const ArrayGeometry &geom, bool reverberant = true);

struct EvalProtocol {
  std::vector<double> snr_grid_db = {-5.0, 0.0, 5.0, 10.0, 15.0};
  int examples_per_snr = 20;
  int reference_mic = 4;
  uint64_t seed = 0;
};

struct NamedModel {
  std::string label;
  const FTJNF *model = nullptr;
};

extern const char kNoisyBaselineLabel[];  // "noisy"

struct MetricResult {
  std::string metric;       // "si_sdr" | "spectral_l1" | "pesq"
  std::string model_label;  // kNoisyBaselineLabel for the unprocessed row
  double snr_db = 0.0;
  std::vector<double> values;  // per-example, in example order
  double median_value = 0.0;
  double variance_value = 0.0;  // population variance
  int error_count = 0;          // adapter failures (pesq only)

  void finalize();  // recomputes median/variance from values
};

struct SnrReport {
  std::vector<MetricResult> rows;
};

/// Per-(model, snr) metrics over shared examples, with the unprocessed
/// reference channel as the "noisy" baseline row. Rows are ordered
/// snr-major, then baseline and models, then metric.
SnrReport run_snr_sweep(const std::vector<NamedModel> &models,
                        const EvalProtocol &protocol, const ExampleSource &source,
                        const StftConfig &cfg, const PesqAdapter *pesq = nullptr);

/// One trained student per (preset, method) cell; a null model marks the
/// cell absent (reported, not fatal).
struct SizeSweepCell {
  char preset = 'I';
  KDMethod method = KDMethod::kNone;
  const FTJNF *model = nullptr;
};

struct SizeRow {
  std::string model_label;
  char preset = 0;             // 0 for the teacher row
  std::string method_label;
  long long macs_per_frame = 0;
  bool absent = false;
  std::vector<MetricResult> metrics;
};

struct SizeReport {
  double snr_db = 0.0;
  std::vector<SizeRow> rows;  // teacher first, then cells in input order
};

/// Quality versus compute at one SNR; the teacher is the reference row.
SizeReport run_size_sweep(const NamedModel &teacher,
                          const std::vector<SizeSweepCell> &cells, double snr_db,
                          int examples_per_snr, int reference_mic,
                          const ExampleSource &source, const StftConfig &cfg,
                          const PesqAdapter *pesq = nullptr);

}  // namespace jnfkd

#endif  // JNFKD_EVALPROTO_H_
