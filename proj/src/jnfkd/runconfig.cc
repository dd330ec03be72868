// src/jnfkd/runconfig.cc

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

#include "jnfkd/runconfig.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "jnfkd/model_config.h"

namespace jnfkd {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string &msg) { throw ConfigError(msg); }

uint64_t parse_u64(const std::string &s, const std::string &what) {
  try {
    size_t pos = 0;
    const uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) fail(what + ": trailing characters in '" + s + "'");
    return v;
  } catch (const ConfigError &) {
    throw;
  } catch (const std::exception &) {
    fail(what + ": not an unsigned integer: '" + s + "'");
  }
}

int parse_int(const std::string &s, const std::string &what) {
  try {
    size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) fail(what + ": trailing characters in '" + s + "'");
    return v;
  } catch (const ConfigError &) {
    throw;
  } catch (const std::exception &) {
    fail(what + ": not an integer: '" + s + "'");
  }
}

double parse_double(const std::string &s, const std::string &what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) fail(what + ": trailing characters in '" + s + "'");
    return v;
  } catch (const ConfigError &) {
    throw;
  } catch (const std::exception &) {
    fail(what + ": not a number: '" + s + "'");
  }
}

bool parse_bool(const std::string &s, const std::string &what) {
  std::string t;
  for (char c : s) t.push_back(static_cast<char>(std::tolower(c)));
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  fail(what + ": not a boolean: '" + s + "'");
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

KDMethod parse_kd_checked(const std::string &s) {
  try {
    return parse_kd_method(s);
  } catch (const std::exception &e) {
    fail(e.what());
  }
}

json geometry_json(const ArrayGeometry &g) {
  json mics = json::array();
  for (const Point3 &p : g.mic_positions) mics.push_back({p[0], p[1], p[2]});
  return json{{"mics", mics},
              {"front_index", g.front_index},
              {"center_index", g.center_index}};
}

ArrayGeometry geometry_from_json(const json &j) {
  ArrayGeometry g;
  g.mic_positions.clear();
  for (const auto &m : j.at("mics")) {
    if (!m.is_array() || m.size() != 3) fail("geometry: each mic needs 3 coordinates");
    g.mic_positions.push_back({m[0].get<double>(), m[1].get<double>(), m[2].get<double>()});
  }
  g.front_index = j.at("front_index").get<int>();
  g.center_index = j.at("center_index").get<int>();
  return g;
}

// Overlay helpers: assign only the keys present, reject unknown ones.
template <typename T>
void take(const json &j, const char *key, T &dst) {
  if (j.contains(key)) dst = j.at(key).template get<T>();
}

void check_keys(const json &j, std::initializer_list<const char *> allowed,
                const std::string &origin) {
  for (const auto &item : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char *k) {
          return item.key() == k;
        }) == allowed.end())
      fail(origin + ": unknown key '" + item.key() + "'");
  }
}

}  // namespace

void RunConfig::normalize() {
  train.seed = seed;
  protocol.seed = seed;
  train.reference_mic = geometry.center_index;
  protocol.reference_mic = geometry.center_index;
}

void RunConfig::validate() const {
  try {
    preset_config(preset);
    stft.validate();
    geometry.validate();
    train.validate();
  } catch (const std::exception &e) {
    fail(e.what());
  }
  if (train_examples < 0 || val_examples < 0)
    fail("example counts must be non-negative");
  if (example_seconds <= 0) fail("example_seconds must be positive");
  if (snr_min_db > snr_max_db) fail("snr_min_db exceeds snr_max_db");
  if (protocol.snr_grid_db.empty()) fail("protocol snr grid is empty");
  if (protocol.examples_per_snr < 1) fail("examples_per_snr must be at least 1");
}

void save_run_config(const RunConfig &cfg, const std::string &path) {
  json j{
      {"manifest", cfg.manifest},
      {"out_dir", cfg.out_dir},
      {"data_dir", cfg.data_dir},
      {"teacher_dir", cfg.teacher_dir},
      {"student_dirs", cfg.student_dirs},
      {"pesq_adapter", cfg.pesq_adapter},
      {"seed", cfg.seed},
      {"synthetic", cfg.synthetic},
      {"overwrite", cfg.overwrite},
      {"train_examples", cfg.train_examples},
      {"val_examples", cfg.val_examples},
      {"example_seconds", cfg.example_seconds},
      {"snr_min_db", cfg.snr_min_db},
      {"snr_max_db", cfg.snr_max_db},
      {"preset", std::string(1, cfg.preset)},
      {"kd", to_string(cfg.kd)},
      {"taps_enabled", cfg.taps_enabled},
      {"stft", {{"frame_length", cfg.stft.frame_length}, {"frame_shift", cfg.stft.frame_shift}}},
      {"geometry", geometry_json(cfg.geometry)},
      {"train",
       {{"lr_init", cfg.train.lr_init},
        {"batch_size", cfg.train.batch_size},
        {"crop_seconds", cfg.train.crop_seconds},
        {"max_epochs", cfg.train.max_epochs},
        {"plateau_patience", cfg.train.plateau_patience},
        {"early_stop_patience", cfg.train.early_stop_patience}}},
      {"protocol",
       {{"snr_grid_db", cfg.protocol.snr_grid_db},
        {"examples_per_snr", cfg.protocol.examples_per_snr}}},
  };
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

void apply_config_json(RunConfig &cfg, const std::string &json_text,
                       const std::string &origin) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception &e) {
    fail(origin + ": " + e.what());
  }
  if (!j.is_object()) fail(origin + ": top level must be an object");
  try {
    check_keys(j,
               {"manifest", "out_dir", "data_dir", "teacher_dir", "student_dirs",
                "pesq_adapter", "seed", "synthetic", "overwrite", "train_examples",
                "val_examples", "example_seconds", "snr_min_db", "snr_max_db",
                "preset", "kd", "taps_enabled", "stft", "geometry", "train",
                "protocol"},
               origin);
    take(j, "manifest", cfg.manifest);
    take(j, "out_dir", cfg.out_dir);
    take(j, "data_dir", cfg.data_dir);
    take(j, "teacher_dir", cfg.teacher_dir);
    take(j, "student_dirs", cfg.student_dirs);
    take(j, "pesq_adapter", cfg.pesq_adapter);
    take(j, "seed", cfg.seed);
    take(j, "synthetic", cfg.synthetic);
    take(j, "overwrite", cfg.overwrite);
    take(j, "train_examples", cfg.train_examples);
    take(j, "val_examples", cfg.val_examples);
    take(j, "example_seconds", cfg.example_seconds);
    take(j, "snr_min_db", cfg.snr_min_db);
    take(j, "snr_max_db", cfg.snr_max_db);
    if (j.contains("preset")) cfg.preset = parse_preset_label(j.at("preset").get<std::string>());
    if (j.contains("kd")) cfg.kd = parse_kd_checked(j.at("kd").get<std::string>());
    take(j, "taps_enabled", cfg.taps_enabled);
    if (j.contains("stft")) {
      const json &s = j.at("stft");
      check_keys(s, {"frame_length", "frame_shift"}, origin + ".stft");
      int length = cfg.stft.frame_length, shift = cfg.stft.frame_shift;
      take(s, "frame_length", length);
      take(s, "frame_shift", shift);
      cfg.stft = StftConfig(length, shift);
    }
    if (j.contains("geometry")) cfg.geometry = geometry_from_json(j.at("geometry"));
    if (j.contains("train")) {
      const json &t = j.at("train");
      check_keys(t,
                 {"lr_init", "batch_size", "crop_seconds", "max_epochs",
                  "plateau_patience", "early_stop_patience"},
                 origin + ".train");
      take(t, "lr_init", cfg.train.lr_init);
      take(t, "batch_size", cfg.train.batch_size);
      take(t, "crop_seconds", cfg.train.crop_seconds);
      take(t, "max_epochs", cfg.train.max_epochs);
      take(t, "plateau_patience", cfg.train.plateau_patience);
      take(t, "early_stop_patience", cfg.train.early_stop_patience);
    }
    if (j.contains("protocol")) {
      const json &p = j.at("protocol");
      check_keys(p, {"snr_grid_db", "examples_per_snr"}, origin + ".protocol");
      take(p, "snr_grid_db", cfg.protocol.snr_grid_db);
      take(p, "examples_per_snr", cfg.protocol.examples_per_snr);
    }
  } catch (const ConfigError &) {
    throw;
  } catch (const std::exception &e) {
    fail(origin + ": " + e.what());
  }
}

RunConfig load_run_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) fail("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  RunConfig cfg;
  apply_config_json(cfg, ss.str(), path);
  return cfg;
}

void apply_overrides(RunConfig &cfg, const RunOverrides &ov) {
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.preset) cfg.preset = *ov.preset;
  if (ov.kd) cfg.kd = *ov.kd;
  if (ov.synthetic) cfg.synthetic = *ov.synthetic;
  if (ov.overwrite) cfg.overwrite = *ov.overwrite;
  if (ov.pesq_adapter) cfg.pesq_adapter = *ov.pesq_adapter;
  if (ov.out_dir) cfg.out_dir = *ov.out_dir;
  if (ov.manifest) cfg.manifest = *ov.manifest;
  if (ov.data_dir) cfg.data_dir = *ov.data_dir;
  if (ov.teacher_dir) cfg.teacher_dir = *ov.teacher_dir;
  if (ov.student_dirs) cfg.student_dirs = *ov.student_dirs;
  if (ov.max_epochs) cfg.train.max_epochs = *ov.max_epochs;
  if (ov.train_examples) cfg.train_examples = *ov.train_examples;
  if (ov.val_examples) cfg.val_examples = *ov.val_examples;
  if (ov.example_seconds) cfg.example_seconds = *ov.example_seconds;
  if (ov.examples_per_snr) cfg.protocol.examples_per_snr = *ov.examples_per_snr;
}

RunOverrides overrides_from_env() {
  RunOverrides ov;
  auto get = [](const char *name) -> std::optional<std::string> {
    const char *v = std::getenv(name);
    if (!v) return std::nullopt;
    return std::string(v);
  };
  if (auto v = get("JNFKD_SEED")) ov.seed = parse_u64(*v, "JNFKD_SEED");
  if (auto v = get("JNFKD_PRESET")) ov.preset = parse_preset_label(*v);
  if (auto v = get("JNFKD_KD")) ov.kd = parse_kd_checked(*v);
  if (auto v = get("JNFKD_SYNTHETIC")) ov.synthetic = parse_bool(*v, "JNFKD_SYNTHETIC");
  if (auto v = get("JNFKD_OVERWRITE")) ov.overwrite = parse_bool(*v, "JNFKD_OVERWRITE");
  if (auto v = get("JNFKD_PESQ_ADAPTER")) ov.pesq_adapter = *v;
  if (auto v = get("JNFKD_OUT")) ov.out_dir = *v;
  if (auto v = get("JNFKD_MANIFEST")) ov.manifest = *v;
  if (auto v = get("JNFKD_DATA")) ov.data_dir = *v;
  if (auto v = get("JNFKD_TEACHER")) ov.teacher_dir = *v;
  if (auto v = get("JNFKD_STUDENT")) ov.student_dirs = split_list(*v);
  if (auto v = get("JNFKD_EPOCHS")) ov.max_epochs = parse_int(*v, "JNFKD_EPOCHS");
  if (auto v = get("JNFKD_TRAIN_EXAMPLES"))
    ov.train_examples = parse_int(*v, "JNFKD_TRAIN_EXAMPLES");
  if (auto v = get("JNFKD_VAL_EXAMPLES"))
    ov.val_examples = parse_int(*v, "JNFKD_VAL_EXAMPLES");
  if (auto v = get("JNFKD_SECONDS"))
    ov.example_seconds = parse_double(*v, "JNFKD_SECONDS");
  if (auto v = get("JNFKD_EXAMPLES_PER_SNR"))
    ov.examples_per_snr = parse_int(*v, "JNFKD_EXAMPLES_PER_SNR");
  return ov;
}

std::string resolve_config_path(const std::string &flag_value) {
  if (!flag_value.empty()) return flag_value;
  const char *env = std::getenv("JNFKD_CONFIG");
  return env ? std::string(env) : std::string();
}

RunConfig resolve_run_config(const std::string &config_flag, const RunOverrides &cli) {
  RunConfig cfg;
  const std::string path = resolve_config_path(config_flag);
  if (!path.empty()) cfg = load_run_config(path);
  apply_overrides(cfg, cli);
  apply_overrides(cfg, overrides_from_env());
  cfg.normalize();
  cfg.validate();
  return cfg;
}

char parse_preset_label(const std::string &s) {
  if (s.size() != 1) fail("preset must be a single letter, got '" + s + "'");
  const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  for (const PresetInfo &p : preset_table())
    if (p.label == c) return c;
  fail("unknown preset '" + s + "'");
}

}  // namespace jnfkd
