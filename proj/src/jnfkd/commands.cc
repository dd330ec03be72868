// src/jnfkd/commands.cc

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

#include "jnfkd/commands.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include <json.hpp>

#include "jnfkd/manifest.h"
#include "jnfkd/model_config.h"
#include "jnfkd/report.h"
#include "jnfkd/synthetic.h"
#include "jnfkd/wav.h"

namespace jnfkd {

namespace fs = std::filesystem;

namespace {

void note_skip(const fs::path &marker) {
  std::cerr << "output already complete (" << marker.string()
            << "); pass --overwrite to redo\n";
}

void store_config(const RunConfig &cfg) {
  fs::create_directories(cfg.out_dir);
  save_run_config(cfg, (fs::path(cfg.out_dir) / "run_config.json").string());
}

std::string example_dir_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "ex_%04d", i);
  return buf;
}

// Per-role, per-split view of a dataset manifest.
struct ManifestIndex {
  std::vector<std::string> speech[3];
  std::vector<std::string> noise[3];
  std::vector<std::string> rirs;
};

ManifestIndex index_manifest(const std::string &path) {
  std::vector<ManifestEntry> entries;
  try {
    entries = read_manifest(path);
  } catch (const std::exception &e) {
    throw ConfigError(e.what());
  }
  ManifestIndex idx;
  for (const ManifestEntry &e : entries) {
    const int s = static_cast<int>(e.split);
    switch (e.role) {
      case SourceRole::kSpeech: idx.speech[s].push_back(e.path); break;
      case SourceRole::kNoise: idx.noise[s].push_back(e.path); break;
      case SourceRole::kRir: idx.rirs.push_back(e.path); break;
    }
  }
  return idx;
}

// Noise entries without the requested split fall back to the full pool.
const std::vector<std::string> &noise_pool(const ManifestIndex &idx, DataSplit split,
                                           std::vector<std::string> &all) {
  const auto &matched = idx.noise[static_cast<int>(split)];
  if (!matched.empty()) return matched;
  for (const auto &pool : idx.noise) all.insert(all.end(), pool.begin(), pool.end());
  return all;
}

Waveform read_mono_checked(const std::string &path) {
  const Waveform w = read_wav_mono(path);
  if (w.sample_rate != kSampleRate)
    throw std::runtime_error(path + ": sample rate " +
                             std::to_string(w.sample_rate) + ", expected " +
                             std::to_string(kSampleRate));
  return w;
}

Waveform tile_to_length(Waveform w, size_t n) {
  if (w.samples.empty()) throw std::runtime_error("empty noise signal");
  const size_t period = w.samples.size();
  w.samples.reserve(n);
  while (w.samples.size() < n)
    w.samples.push_back(w.samples[w.samples.size() % period]);
  return w;
}

RoomImpulseResponse rir_from_wav(const std::string &path, int num_mics) {
  const MultichannelWaveform w = read_wav(path);
  if (w.num_channels() != num_mics)
    throw ConfigError("room response " + path + " has " +
                      std::to_string(w.num_channels()) + " channels, expected " +
                      std::to_string(num_mics));
  RoomImpulseResponse rir;
  rir.taps = w.channels;
  return rir;
}

MixtureExample render_manifest_example(const RunConfig &cfg, const ManifestIndex &idx,
                                       DataSplit split, uint64_t index) {
  const auto &speech_pool = idx.speech[static_cast<int>(split)];
  if (speech_pool.empty())
    throw ConfigError("manifest has no speech entries for split " + to_string(split));
  std::vector<std::string> merged;
  const auto &noises = noise_pool(idx, split, merged);
  if (noises.empty()) throw ConfigError("manifest has no noise entries");
  if (idx.rirs.empty())
    throw ConfigError("manifest has no rir entries; use --synthetic for synthetic rooms");

  Rng rng = Rng::derive(cfg.seed, "sim-scene", index);
  const Waveform speech =
      read_mono_checked(speech_pool[index % speech_pool.size()]);
  Waveform noise = read_mono_checked(noises[rng.uniform_int(noises.size())]);
  noise = tile_to_length(std::move(noise), speech.num_samples());
  const RoomImpulseResponse rir =
      rir_from_wav(idx.rirs[rng.uniform_int(idx.rirs.size())], cfg.geometry.num_mics());

  const double snr = rng.uniform(cfg.snr_min_db, cfg.snr_max_db);
  MixtureExample ex = make_example(speech, noise, rir, snr, rng, cfg.geometry, {});
  ex.seed = index;
  return ex;
}

std::vector<MixtureExample> load_rendered_split(const std::string &root,
                                                const char *split) {
  const fs::path dir = fs::path(root) / split;
  std::vector<std::string> dirs;
  try {
    dirs = list_example_dirs(dir.string());
  } catch (const std::exception &e) {
    throw ConfigError(e.what());
  }
  if (dirs.empty())
    throw ConfigError("no rendered examples under " + dir.string());
  std::vector<MixtureExample> out;
  out.reserve(dirs.size());
  for (const std::string &d : dirs) out.push_back(read_example(d));
  return out;
}

TrainData load_train_data(const RunConfig &cfg) {
  TrainData data;
  if (!cfg.data_dir.empty()) {
    data.train = load_rendered_split(cfg.data_dir, "train");
    data.val = load_rendered_split(cfg.data_dir, "val");
  } else if (cfg.synthetic) {
    for (int i = 0; i < cfg.train_examples; ++i)
      data.train.push_back(render_synthetic_example(cfg, i));
    for (int j = 0; j < cfg.val_examples; ++j)
      data.val.push_back(
          render_synthetic_example(cfg, cfg.train_examples + j));
  } else {
    throw ConfigError("training needs --data DIR or --synthetic");
  }
  return data;
}

ModelConfig preset_for_run(const RunConfig &cfg) {
  ModelConfig mc = preset_config(cfg.preset);
  mc.num_mics = cfg.geometry.num_mics();
  return mc;
}

void summarize_history(const std::vector<EpochRecord> &history) {
  if (history.empty()) return;
  double best = history.front().val_loss;
  for (const EpochRecord &r : history) best = std::min(best, r.val_loss);
  std::cerr << "trained " << history.size() << " epoch(s); best val loss " << best
            << "\n";
}

ExampleSource eval_source(const RunConfig &cfg) {
  if (!cfg.manifest.empty()) {
    // exact-SNR remix of the held-out split
    const ManifestIndex idx = index_manifest(cfg.manifest);
    const RunConfig copy = cfg;
    return [copy, idx](double snr_db, int index) {
      const uint64_t key =
          (static_cast<uint64_t>(static_cast<uint32_t>(std::lround(snr_db * 100.0)))
           << 32) |
          static_cast<uint32_t>(index);
      RunConfig local = copy;
      local.snr_min_db = snr_db;
      local.snr_max_db = snr_db;
      return render_manifest_example(local, idx, DataSplit::kTest, key);
    };
  }
  if (cfg.synthetic)
    return synthetic_source(cfg.seed, cfg.example_seconds, cfg.geometry);
  throw ConfigError("evaluate needs --synthetic or --manifest");
}

// The distill run's stored config names the cell the model fills.
struct StudentEntry {
  std::string label;
  char preset;
  KDMethod method;
  FTJNF model;
};

StudentEntry load_student(const std::string &run_dir) {
  const fs::path config_path = fs::path(run_dir) / "run_config.json";
  if (!fs::exists(config_path))
    throw ConfigError("no run_config.json under " + run_dir);
  const RunConfig their = load_run_config(config_path.string());
  StudentEntry entry{std::string(1, their.preset) + "-" + to_string(their.kd),
                     their.preset, their.kd, load_best_model(run_dir)};
  return entry;
}

}  // namespace

MixtureExample render_synthetic_example(const RunConfig &cfg, uint64_t index) {
  Rng speech_rng = Rng::derive(cfg.seed, "sim-speech", index);
  Rng noise_rng = Rng::derive(cfg.seed, "sim-noise", index);
  Rng rir_rng = Rng::derive(cfg.seed, "sim-rir", index);
  Rng scene_rng = Rng::derive(cfg.seed, "sim-scene", index);

  const Waveform speech = synth_speech(cfg.example_seconds, speech_rng);
  const Waveform noise = synth_noise(cfg.example_seconds, noise_rng);
  const RoomImpulseResponse rir = synth_rir(cfg.geometry.num_mics(), rir_rng);
  const double snr = scene_rng.uniform(cfg.snr_min_db, cfg.snr_max_db);
  MixtureExample ex =
      make_example(speech, noise, rir, snr, scene_rng, cfg.geometry, {});
  ex.seed = index;
  return ex;
}

FTJNF load_best_model(const std::string &run_dir) {
  for (int stage : {2, 1}) {
    const fs::path stage_dir =
        fs::path(run_dir) / "train" / ("stage" + std::to_string(stage));
    const fs::path best = stage_dir / "best.json";
    if (!fs::exists(best)) continue;
    std::ifstream in(best);
    nlohmann::json j;
    in >> j;
    return load_model((stage_dir / j.at("container").get<std::string>()).string());
  }
  throw ConfigError("no trained checkpoint under " + run_dir);
}

void cmd_simulate(const RunConfig &cfg) {
  const fs::path root = fs::path(cfg.out_dir) / "examples";
  const fs::path marker = root / "dataset.json";
  if (fs::exists(marker) && !cfg.overwrite) {
    note_skip(marker);
    return;
  }
  if (!cfg.synthetic && cfg.manifest.empty())
    throw ConfigError("simulate needs --synthetic or --manifest PATH");

  ManifestIndex idx;
  if (!cfg.synthetic) {
    idx = index_manifest(cfg.manifest);
    if (idx.rirs.empty())
      throw ConfigError("manifest has no rir entries; use --synthetic for synthetic rooms");
  }

  store_config(cfg);
  if (fs::exists(root)) fs::remove_all(root);
  fs::create_directories(root / "train");
  fs::create_directories(root / "val");

  auto render = [&](DataSplit split, uint64_t index) {
    return cfg.synthetic ? render_synthetic_example(cfg, index)
                         : render_manifest_example(cfg, idx, split, index);
  };
  for (int i = 0; i < cfg.train_examples; ++i)
    write_example((root / "train" / example_dir_name(i)).string(),
                  render(DataSplit::kTrain, i));
  for (int j = 0; j < cfg.val_examples; ++j)
    write_example((root / "val" / example_dir_name(j)).string(),
                  render(DataSplit::kVal, cfg.train_examples + j));

  const nlohmann::json meta{{"train_examples", cfg.train_examples},
                            {"val_examples", cfg.val_examples},
                            {"example_seconds", cfg.example_seconds},
                            {"seed", cfg.seed}};
  std::ofstream out(marker);
  out << meta.dump(2) << "\n";
  std::cerr << "rendered " << cfg.train_examples << "+" << cfg.val_examples
            << " examples under " << root.string() << "\n";
}

void cmd_train_teacher(const RunConfig &cfg) {
  const fs::path train_dir = fs::path(cfg.out_dir) / "train";
  const fs::path marker = train_dir / "stage1" / "best.json";
  if (fs::exists(marker) && !cfg.overwrite) {
    note_skip(marker);
    return;
  }
  const TrainData data = load_train_data(cfg);
  const ModelConfig mc = preset_for_run(cfg);

  store_config(cfg);
  CheckpointWriter ckpt(train_dir.string());
  const TrainOutcome outcome = train_teacher(mc, data, cfg.train, cfg.stft, &ckpt);
  summarize_history(outcome.history);
}

void cmd_distill(const RunConfig &cfg) {
  const fs::path train_dir = fs::path(cfg.out_dir) / "train";
  const fs::path marker = train_dir / "stage2" / "best.json";
  if (fs::exists(marker) && !cfg.overwrite) {
    note_skip(marker);
    return;
  }
  if (cfg.kd == KDMethod::kNone)
    throw ConfigError("distill needs --kd {mask,linear,flstm,tlstm,multi}");
  if (!cfg.taps_enabled)
    throw ConfigError("distillation reads intermediate activations; taps_enabled is false");
  if (cfg.teacher_dir.empty()) throw ConfigError("distill needs --teacher DIR");

  const FTJNF teacher = load_best_model(cfg.teacher_dir);
  const TrainData data = load_train_data(cfg);
  const ModelConfig student = preset_for_run(cfg);

  store_config(cfg);
  CheckpointWriter ckpt(train_dir.string());
  const TrainOutcome outcome =
      run_two_stage_kd(teacher, student, cfg.kd, data, cfg.train, cfg.stft, &ckpt);
  summarize_history(outcome.history);
}

void cmd_evaluate(const RunConfig &cfg) {
  const fs::path out = cfg.out_dir;
  const fs::path marker = out / "snr_report.jsonl";
  if (fs::exists(marker) && !cfg.overwrite) {
    note_skip(marker);
    return;
  }
  if (cfg.teacher_dir.empty()) throw ConfigError("evaluate needs --teacher DIR");

  const FTJNF teacher = load_best_model(cfg.teacher_dir);
  std::string teacher_label = "teacher";
  if (!teacher.config().size_label.empty())
    teacher_label += "-" + teacher.config().size_label;

  std::vector<StudentEntry> students;
  for (const std::string &dir : cfg.student_dirs)
    students.push_back(load_student(dir));

  std::vector<NamedModel> models = {{teacher_label, &teacher}};
  for (const StudentEntry &s : students) models.push_back({s.label, &s.model});

  const ExampleSource source = eval_source(cfg);
  const PesqAdapter adapter{cfg.pesq_adapter};
  const PesqAdapter *pesq = cfg.pesq_adapter.empty() ? nullptr : &adapter;

  store_config(cfg);
  const SnrReport snr = run_snr_sweep(models, cfg.protocol, source, cfg.stft, pesq);
  write_snr_report_jsonl(snr, marker.string());
  std::cerr << "wrote " << snr.rows.size() << " metric rows to " << marker.string()
            << "\n";

  if (!students.empty()) {
    // quality versus compute at one grid point; prefer 0 dB when present
    double size_snr = cfg.protocol.snr_grid_db[cfg.protocol.snr_grid_db.size() / 2];
    for (double g : cfg.protocol.snr_grid_db)
      if (g == 0.0) size_snr = 0.0;
    std::vector<SizeSweepCell> cells;
    for (const StudentEntry &s : students)
      cells.push_back({s.preset, s.method, &s.model});
    const SizeReport size = run_size_sweep(
        {teacher_label, &teacher}, cells, size_snr, cfg.protocol.examples_per_snr,
        cfg.protocol.reference_mic, source, cfg.stft, pesq);
    write_size_report_jsonl(size, (out / "size_report.jsonl").string());
  }
}

void cmd_report(const RunConfig &cfg) {
  const fs::path out = cfg.out_dir;
  const fs::path snr_path = out / "snr_report.jsonl";
  if (!fs::exists(snr_path))
    throw ConfigError("no snr_report.jsonl under " + cfg.out_dir +
                      "; run evaluate first");
  const fs::path marker = out / "snr_report.txt";
  if (fs::exists(marker) && !cfg.overwrite) {
    note_skip(marker);
    return;
  }

  const SnrReport snr = read_snr_report_jsonl(snr_path.string());
  {
    std::ofstream txt(marker);
    txt << render_snr_report_text(snr);
  }
  std::vector<std::string> metrics;
  for (const MetricResult &m : snr.rows)
    if (std::find(metrics.begin(), metrics.end(), m.metric) == metrics.end())
      metrics.push_back(m.metric);
  for (const std::string &metric : metrics)
    write_snr_svg(snr, metric, (out / ("snr_" + metric + ".svg")).string());

  const fs::path size_path = out / "size_report.jsonl";
  if (fs::exists(size_path)) {
    const SizeReport size = read_size_report_jsonl(size_path.string());
    std::ofstream txt(out / "size_report.txt");
    txt << render_size_report_text(size);
    for (const std::string &metric : metrics)
      write_size_svg(size, metric, (out / ("size_" + metric + ".svg")).string());
  }
  std::cerr << "rendered report under " << out.string() << "\n";
}

void cmd_count(const RunConfig &cfg, std::ostream &os) {
  const int num_bins = cfg.stft.num_bins();
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "preset  f_hidden  t_hidden      params   published     delta"
                "  MACs/frame (K=%d)\n",
                num_bins);
  os << buf;
  std::vector<char> outliers;
  for (const PresetInfo &info : preset_table()) {
    const ModelConfig mc = preset_config(info.label);
    const long long params = count_params(mc);
    const long long macs = count_macs_per_frame(mc, num_bins);
    const double published = info.published_kparams * 1000.0;
    const double delta = (static_cast<double>(params) - published) / published * 100.0;
    std::snprintf(buf, sizeof(buf), "%6c  %8d  %8d  %10lld  %10.0f  %+7.2f%%  %10lld\n",
                  info.label, mc.f_hidden, mc.t_hidden, params, published, delta,
                  macs);
    os << buf;
    if (std::abs(delta) > 3.0) outliers.push_back(info.label);
  }
  for (char label : outliers) {
    const PresetInfo &info = preset_info(label);
    const double published = info.published_kparams * 1000.0;
    const double delta =
        (static_cast<double>(count_params(preset_config(label))) - published) /
        published * 100.0;
    std::snprintf(buf, sizeof(buf),
                  "note: preset %c deviates %+.2f%% from the published count under "
                  "the default convention; reported as measured\n",
                  label, delta);
    os << buf;
  }
}

}  // namespace jnfkd
