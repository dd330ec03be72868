// src/jnfkd/evalproto.cc

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

#include "jnfkd/evalproto.h"

#include <cmath>
#include <stdexcept>

namespace jnfkd {

const char kNoisyBaselineLabel[] = "noisy";

Waveform apply_enhancement(const Eigen::MatrixXcd &mask, const Spectrogram &y_ref,
                           const StftConfig &cfg) {
  return istft(apply_mask(mask, y_ref), cfg);
}

Waveform enhance(const FTJNF &model, const MixtureExample &ex,
                 const StftConfig &cfg, int reference_mic) {
  if (reference_mic < 0 || reference_mic >= ex.y.num_channels())
    throw std::invalid_argument("enhance: reference_mic out of range");
  const std::vector<Spectrogram> Ys = stft_all_channels(ex.y, cfg);
  const int K = cfg.num_bins();
  const int L = Ys[0].num_frames();
  const IntermediateTaps taps = model.forward(featurize(Ys), K, L);
  Waveform out = apply_enhancement(taps.mask, Ys[reference_mic], cfg);
  out.sample_rate = ex.y.sample_rate;
  return out;
}

ExampleSource synthetic_source(uint64_t seed, double seconds,
                               const ArrayGeometry &geom, bool reverberant) {
  return [seed, seconds, geom, reverberant](double snr_db, int index) {
    const uint64_t key =
        (static_cast<uint64_t>(static_cast<uint32_t>(std::lround(snr_db * 100.0)))
         << 32) |
        static_cast<uint32_t>(index);
    Rng speech_rng = Rng::derive(seed, "eval-speech", key);
    const Waveform speech = synth_speech(seconds, speech_rng);
    Rng noise_rng = Rng::derive(seed, "eval-noise", key);
    const Waveform noise = synth_noise(seconds, noise_rng);
    RoomImpulseResponse rir;
    if (reverberant) {
      Rng rir_rng = Rng::derive(seed, "eval-rir", key);
      rir = synth_rir(static_cast<int>(geom.mic_positions.size()), rir_rng);
    } else {
      rir = RoomImpulseResponse::identity(static_cast<int>(geom.mic_positions.size()));
    }
    Rng scene_rng = Rng::derive(seed, "eval-scene", key);
    return make_example(speech, noise, rir, snr_db, scene_rng, geom);
  };
}

void MetricResult::finalize() {
  if (values.empty()) {
    median_value = 0.0;
    variance_value = 0.0;
    return;
  }
  median_value = median(values);
  variance_value = population_variance(values);
}

namespace {

Waveform reference_channel(const MixtureExample &ex, int reference_mic) {
  if (reference_mic < 0 || reference_mic >= ex.y.num_channels())
    throw std::invalid_argument("evaluation: reference_mic out of range");
  Waveform w;
  w.sample_rate = ex.y.sample_rate;
  w.samples = ex.y.channels[reference_mic];
  return w;
}

/// Rows for one (label, snr) pair over precomputed estimates.
void append_metric_rows(std::vector<MetricResult> *rows, const std::string &label,
                        double snr_db, const std::vector<Waveform> &estimates,
                        const std::vector<const Waveform *> &references,
                        const StftConfig &cfg, const PesqAdapter *pesq) {
  MetricResult sdr;
  sdr.metric = "si_sdr";
  sdr.model_label = label;
  sdr.snr_db = snr_db;
  MetricResult spec = sdr;
  spec.metric = "spectral_l1";
  for (size_t i = 0; i < estimates.size(); ++i) {
    sdr.values.push_back(si_sdr(estimates[i], *references[i]));
    spec.values.push_back(spectral_l1(estimates[i], *references[i], cfg));
  }
  sdr.finalize();
  spec.finalize();
  rows->push_back(std::move(sdr));
  rows->push_back(std::move(spec));

  if (pesq) {
    MetricResult p;
    p.metric = "pesq";
    p.model_label = label;
    p.snr_db = snr_db;
    for (size_t i = 0; i < estimates.size(); ++i) {
      std::string error;
      const std::optional<double> score =
          run_pesq_adapter(*pesq, *references[i], estimates[i], &error);
      if (score)
        p.values.push_back(*score);
      else
        ++p.error_count;
    }
    p.finalize();
    rows->push_back(std::move(p));
  }
}

std::vector<MetricResult> sweep_one_snr(const std::vector<NamedModel> &models,
                                        double snr_db, int num_examples,
                                        int reference_mic, const ExampleSource &source,
                                        const StftConfig &cfg,
                                        const PesqAdapter *pesq) {
  std::vector<MixtureExample> examples;
  examples.reserve(num_examples);
  for (int i = 0; i < num_examples; ++i) examples.push_back(source(snr_db, i));

  std::vector<const Waveform *> references;
  for (const auto &ex : examples) references.push_back(&ex.s);

  std::vector<MetricResult> rows;
  std::vector<Waveform> noisy;
  for (const auto &ex : examples) noisy.push_back(reference_channel(ex, reference_mic));
  append_metric_rows(&rows, kNoisyBaselineLabel, snr_db, noisy, references, cfg, pesq);

  for (const NamedModel &nm : models) {
    if (!nm.model) throw std::invalid_argument("evaluation: null model " + nm.label);
    std::vector<Waveform> estimates;
    for (const auto &ex : examples)
      estimates.push_back(enhance(*nm.model, ex, cfg, reference_mic));
    append_metric_rows(&rows, nm.label, snr_db, estimates, references, cfg, pesq);
  }
  return rows;
}

}  // namespace

SnrReport run_snr_sweep(const std::vector<NamedModel> &models,
                        const EvalProtocol &protocol, const ExampleSource &source,
                        const StftConfig &cfg, const PesqAdapter *pesq) {
  if (models.empty())
    throw std::invalid_argument("snr sweep: the model list is empty");
  if (protocol.snr_grid_db.empty())
    throw std::invalid_argument("snr sweep: the SNR grid is empty");
  if (protocol.examples_per_snr < 1)
    throw std::invalid_argument("snr sweep: need at least one example per bucket");

  SnrReport report;
  for (double snr : protocol.snr_grid_db) {
    std::vector<MetricResult> rows =
        sweep_one_snr(models, snr, protocol.examples_per_snr, protocol.reference_mic,
                      source, cfg, pesq);
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  return report;
}

SizeReport run_size_sweep(const NamedModel &teacher,
                          const std::vector<SizeSweepCell> &cells, double snr_db,
                          int examples_per_snr, int reference_mic,
                          const ExampleSource &source, const StftConfig &cfg,
                          const PesqAdapter *pesq) {
  if (!teacher.model) throw std::invalid_argument("size sweep: teacher is required");
  if (examples_per_snr < 1)
    throw std::invalid_argument("size sweep: need at least one example");

  SizeReport report;
  report.snr_db = snr_db;

  auto eval_one = [&](const std::string &label, const FTJNF &model) {
    std::vector<NamedModel> one{{label, &model}};
    std::vector<MetricResult> rows =
        sweep_one_snr(one, snr_db, examples_per_snr, reference_mic, source, cfg, pesq);
    // keep only the model rows; the baseline repeats across cells
    std::vector<MetricResult> kept;
    for (auto &r : rows)
      if (r.model_label == label) kept.push_back(std::move(r));
    return kept;
  };

  SizeRow trow;
  trow.model_label = teacher.label;
  trow.method_label = "teacher";
  trow.macs_per_frame =
      count_macs_per_frame(teacher.model->config(), cfg.num_bins());
  trow.metrics = eval_one(teacher.label, *teacher.model);
  report.rows.push_back(std::move(trow));

  for (const SizeSweepCell &cell : cells) {
    SizeRow row;
    row.preset = cell.preset;
    row.method_label = to_string(cell.method);
    row.model_label = std::string(1, cell.preset) + "-" + row.method_label;
    row.macs_per_frame = count_macs_per_frame(preset_config(cell.preset), cfg.num_bins());
    if (!cell.model) {
      row.absent = true;
    } else {
      row.metrics = eval_one(row.model_label, *cell.model);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace jnfkd
