// tools/jnfkd_main.cc

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

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jnfkd/commands.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

}  // namespace

int main(int argc, char **argv) {
  using namespace jnfkd;

  CLI::App app{"knowledge-distillation toolkit for multichannel speech enhancement"};
  app.require_subcommand(1);

  std::string config, preset, kd, pesq, out, manifest, data, teacher;
  std::vector<std::string> students;
  uint64_t seed = 0;
  bool synthetic = false, overwrite = false;
  int epochs = 0, train_examples = 0, val_examples = 0, examples_per_snr = 0;
  double seconds = 0.0;

  auto *opt_config =
      app.add_option("--config", config, "JSON run config (JNFKD_CONFIG)");
  auto *opt_seed = app.add_option("--seed", seed, "randomness root (JNFKD_SEED)");
  auto *opt_preset =
      app.add_option("--preset", preset, "model preset A..I (JNFKD_PRESET)");
  auto *opt_kd = app.add_option(
      "--kd", kd, "distillation method: mask|linear|flstm|tlstm|multi|none");
  auto *flag_synthetic = app.add_flag("--synthetic", synthetic,
                                      "synthesize scenes instead of reading a corpus");
  auto *opt_pesq = app.add_option("--pesq-adapter", pesq,
                                  "external scorer: CMD <reference.wav> <estimate.wav>");
  auto *opt_out = app.add_option("--out", out, "run output directory (JNFKD_OUT)");
  auto *opt_manifest =
      app.add_option("--manifest", manifest, "dataset manifest (JSONL)");
  auto *opt_data = app.add_option("--data", data, "rendered example root");
  auto *opt_teacher =
      app.add_option("--teacher", teacher, "finished train-teacher run directory");
  auto *opt_student = app.add_option("--student", students,
                                     "finished distill run directory (repeatable)");
  auto *flag_overwrite =
      app.add_flag("--overwrite", overwrite, "redo completed outputs");
  auto *opt_epochs = app.add_option("--epochs", epochs, "max training epochs");
  auto *opt_train_examples =
      app.add_option("--train-examples", train_examples, "rendered train scenes");
  auto *opt_val_examples =
      app.add_option("--val-examples", val_examples, "rendered validation scenes");
  auto *opt_seconds =
      app.add_option("--seconds", seconds, "rendered scene length in seconds");
  auto *opt_eps =
      app.add_option("--examples-per-snr", examples_per_snr, "evaluation scenes per SNR");

  CLI::App *sub_simulate =
      app.add_subcommand("simulate", "render noisy reverberant scenes to disk");
  CLI::App *sub_train =
      app.add_subcommand("train-teacher", "train a teacher model from scratch");
  CLI::App *sub_distill =
      app.add_subcommand("distill", "two-stage knowledge distillation into a student");
  CLI::App *sub_evaluate =
      app.add_subcommand("evaluate", "score models over the SNR grid");
  CLI::App *sub_report =
      app.add_subcommand("report", "render tables and plots from stored metrics");
  CLI::App *sub_count =
      app.add_subcommand("count-params", "print the preset ladder next to published sizes");
  for (CLI::App *sub :
       {sub_simulate, sub_train, sub_distill, sub_evaluate, sub_report, sub_count})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunOverrides ov;
    if (opt_seed->count()) ov.seed = seed;
    if (opt_preset->count()) ov.preset = parse_preset_label(preset);
    if (opt_kd->count()) {
      try {
        ov.kd = parse_kd_method(kd);
      } catch (const std::exception &e) {
        throw ConfigError(e.what());
      }
    }
    if (flag_synthetic->count()) ov.synthetic = true;
    if (flag_overwrite->count()) ov.overwrite = true;
    if (opt_pesq->count()) ov.pesq_adapter = pesq;
    if (opt_out->count()) ov.out_dir = out;
    if (opt_manifest->count()) ov.manifest = manifest;
    if (opt_data->count()) ov.data_dir = data;
    if (opt_teacher->count()) ov.teacher_dir = teacher;
    if (opt_student->count()) ov.student_dirs = students;
    if (opt_epochs->count()) ov.max_epochs = epochs;
    if (opt_train_examples->count()) ov.train_examples = train_examples;
    if (opt_val_examples->count()) ov.val_examples = val_examples;
    if (opt_seconds->count()) ov.example_seconds = seconds;
    if (opt_eps->count()) ov.examples_per_snr = examples_per_snr;

    const RunConfig cfg = resolve_run_config(opt_config->count() ? config : "", ov);

    if (app.got_subcommand(sub_simulate)) cmd_simulate(cfg);
    else if (app.got_subcommand(sub_train)) cmd_train_teacher(cfg);
    else if (app.got_subcommand(sub_distill)) cmd_distill(cfg);
    else if (app.got_subcommand(sub_evaluate)) cmd_evaluate(cfg);
    else if (app.got_subcommand(sub_report)) cmd_report(cfg);
    else if (app.got_subcommand(sub_count)) cmd_count(cfg, std::cout);
    return kExitOk;
  } catch (const ConfigError &e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
